#pragma once

// Reciprocal-lattice geometry: exceptional Bloch vectors (points on the Ewald
// planes 2k·m = |m|²) and the local-gap admissibility test.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "localgap/types.hpp"

namespace localgap::lattice {

inline constexpr double kDefaultEwaldTolerance = 1e-9;
inline constexpr double kDefaultExclusionBand = 1e-6;
inline const double kCriticalRatio = std::sqrt(2.0) / 2.0;

/// Bloch vector with exact rational components num[i] / den[i], den[i] > 0.
struct RationalWaveVector {
  std::array<std::int64_t, 3> num{0, 0, 0};
  std::array<std::int64_t, 3> den{1, 1, 1};

  RationalWaveVector() = default;
  RationalWaveVector(std::array<std::int64_t, 3> numerators, std::array<std::int64_t, 3> denominators);

  WaveVector to_double() const;
  bool is_zero() const { return num[0] == 0 && num[1] == 0 && num[2] == 0; }
};

/// Radius of the exhaustive shift search: any solution of 2k·m = |m|² has
/// |m| ≤ 2|k|, and the extra shell absorbs the tolerance.
std::int64_t search_radius(double k_norm);

/// |2k·m − |m|²| ≤ tol · max(1, |m|²).
bool satisfies_ewald(const WaveVector& k, const LatticeShift& m, double tol = kDefaultEwaldTolerance);
bool satisfies_ewald(const RationalWaveVector& k, const LatticeShift& m);

/// All nonzero m on the Ewald sphere through the origin centred at k,
/// sorted lexicographically.
std::vector<LatticeShift> enumerate_candidate_shifts(const WaveVector& k,
                                                     double tol = kDefaultEwaldTolerance);
std::vector<LatticeShift> enumerate_candidate_shifts(const RationalWaveVector& k);

struct ExceptionalClass {
  int order = 1;
  std::vector<LatticeShift> shifts;
  double tolerance_used = kDefaultEwaldTolerance;  // 0 in exact mode
  bool is_exceptional() const { return order > 1; }
};

ExceptionalClass classify_wavevector(const WaveVector& k, double tol = kDefaultEwaldTolerance);
ExceptionalClass classify_wavevector(const RationalWaveVector& k);

/// ν = 4|k₀|²/|m₀|² − 1. Throws DomainError when (k₀, m₀) is off the Ewald plane.
double nu(const WaveVector& k0, const LatticeShift& m0, double tol = kDefaultEwaldTolerance);

enum class Verdict { GapPredicted, NoGap, BoundaryExcluded, HigherOrderExcluded };
std::string_view to_string(Verdict v);

struct GapAdmissibility {
  Verdict verdict = Verdict::NoGap;
  double ratio = 0.0;  // |k₀| / |m₀|
  double nu = 0.0;
  int order = 2;
};

GapAdmissibility gap_admissible(const WaveVector& k0, const LatticeShift& m0,
                                double exclusion_band = kDefaultExclusionBand,
                                double tol = kDefaultEwaldTolerance);

/// Rasterized gap map over the Brillouin-zone face {k·m₀ = |m₀|²/2}.
///
/// Raster nodes are k = m₀/2 + s·u + t·v with s, t on a uniform grid over
/// [−half_extent, half_extent]. For axis-aligned normals u and v are the two
/// remaining coordinate axes in increasing order, so (s, t) are plain
/// Cartesian coordinates of the face point.
struct FaceRaster {
  Eigen::Vector3d center;
  Eigen::Vector3d u_axis;
  Eigen::Vector3d v_axis;
  std::vector<double> coords;       // shared by both in-plane axes
  std::vector<std::uint8_t> flags;  // flags[i * coords.size() + j] for (coords[i], coords[j])

  std::size_t samples() const { return coords.size(); }
  double spacing() const;
  bool flagged(std::size_t i, std::size_t j) const { return flags[i * samples() + j] != 0; }
  WaveVector point(std::size_t i, std::size_t j) const;
  /// Trapezoid-weighted flagged area over the whole face.
  double flagged_area() const;
  /// Trapezoid-weighted flagged area over the quadrant s ≥ 0, t ≥ 0.
  double flagged_area_first_quadrant() const;
};

FaceRaster face_gap_region(const LatticeShift& m0, int samples, double half_extent = 0.5,
                           double exclusion_band = kDefaultExclusionBand,
                           double tol = kDefaultEwaldTolerance);

/// The 48 signed permutation matrices of the cube group.
const std::array<Eigen::Matrix3i, 48>& cubic_symmetries();

}  // namespace localgap::lattice
