#pragma once

// Leading-order dispersion of the transmission problem for a lattice of
// small penetrable spheres. Frequencies are in units of the host speed c₊.

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "localgap/gap.hpp"
#include "localgap/types.hpp"

namespace localgap::transmission {

struct MaterialCoefficients {
  double alpha = 0.0;  ///< 1 − γ₋/γ₊
  double beta = 0.0;   ///< 3(σ − 1)/(σ + 2)
  double sigma = 1.0;  ///< ρ₊/ρ₋
};

/// Compressibility γ and density ρ of host (+) and inclusion (−).
struct MaterialSpec {
  double gamma_plus = 1.0;
  double gamma_minus = 1.0;
  double rho_plus = 1.0;
  double rho_minus = 1.0;

  void validate() const;
  MaterialCoefficients coefficients() const;
  double c_plus() const;
  double c_minus() const;
};

MaterialCoefficients material_coefficients(double gamma_plus, double gamma_minus, double rho_plus,
                                           double rho_minus);

/// Sphere volume fraction (4/3)πa³/(2π)³.
double volume_fraction(double a);

class TransmissionParams {
 public:
  TransmissionParams(MaterialSpec materials, double a, double delta0 = 0.1);
  static TransmissionParams from_volume_fraction(MaterialSpec materials, double f, double delta0 = 0.1);

  const MaterialSpec& materials() const noexcept { return materials_; }
  double a() const noexcept { return a_; }
  double f() const noexcept { return f_; }
  double delta0() const noexcept { return delta0_; }

 private:
  MaterialSpec materials_;
  double a_;
  double f_;
  double delta0_;
};

/// k̂₀·k̂₁ with k₁ = k₀ − m₀.
double cos_k0_k1(const WaveVector& k0, const LatticeShift& m0);

/// μ = |α + β k̂₀·k̂₁| |k₀|² f.
double splitting_mu(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p);

/// |k̃₀| = |k₀|(1 + ½(α + β)f).
double shifted_center(const WaveVector& k0, const TransmissionParams& p);

/// Leading-order 2×2 matrix whose singularity gives the dispersion near k₀.
/// Real symmetric for spherical inclusions.
Eigen::Matrix2d matrix_M_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p,
                                      double epsilon, double delta);

BranchValues branch_pair_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p,
                                      double delta_tilde);

BranchCurve dispersion_scan_transmission(const WaveVector& k0, const LatticeShift& m0,
                                         const TransmissionParams& p, double delta_tilde_lo,
                                         double delta_tilde_hi, int n_samples);

enum class GapStatus { Gap, NoGapNu, ZeroSplitting };
std::string_view to_string(GapStatus s);

struct TransmissionGap {
  GapStatus status = GapStatus::NoGapNu;
  std::optional<GapInterval> interval;
  double nu = 0.0;
  double mu = 0.0;
  double center_over_c = 0.0;
};

TransmissionGap local_gap_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p);

double epsilon_nonexceptional_transmission(const WaveVector& k, const TransmissionParams& p);

}  // namespace localgap::transmission
