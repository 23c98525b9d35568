#include "localgap/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "localgap/errors.hpp"

namespace localgap::lattice {

namespace {

void require_nonzero(const WaveVector& k) {
  if (k.is_zero()) throw DomainError("classification requires a nonzero wave vector");
}

template <typename Pred>
std::vector<LatticeShift> search_shell(std::int64_t r, Pred&& on_plane) {
  std::vector<LatticeShift> out;
  const std::int64_t r2 = r * r;
  for (std::int64_t i = -r; i <= r; ++i) {
    for (std::int64_t j = -r; j <= r; ++j) {
      for (std::int64_t l = -r; l <= r; ++l) {
        if (i == 0 && j == 0 && l == 0) continue;
        if (i * i + j * j + l * l > r2) continue;
        LatticeShift m(i, j, l);
        if (on_plane(m)) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RationalWaveVector::RationalWaveVector(std::array<std::int64_t, 3> numerators,
                                       std::array<std::int64_t, 3> denominators)
    : num(numerators), den(denominators) {
  for (int i = 0; i < 3; ++i) {
    if (den[i] == 0) throw DomainError("rational wave vector has a zero denominator");
    if (den[i] < 0) {
      den[i] = -den[i];
      num[i] = -num[i];
    }
    const std::int64_t g = std::gcd(num[i], den[i]);
    if (g > 1) {
      num[i] /= g;
      den[i] /= g;
    }
  }
}

WaveVector RationalWaveVector::to_double() const {
  return WaveVector(static_cast<double>(num[0]) / static_cast<double>(den[0]),
                    static_cast<double>(num[1]) / static_cast<double>(den[1]),
                    static_cast<double>(num[2]) / static_cast<double>(den[2]));
}

std::int64_t search_radius(double k_norm) {
  return static_cast<std::int64_t>(std::ceil(2.0 * k_norm)) + 1;
}

bool satisfies_ewald(const WaveVector& k, const LatticeShift& m, double tol) {
  const double m2 = static_cast<double>(m.squared_norm());
  const double lhs = 2.0 * k.vec().dot(m.vec());
  return std::abs(lhs - m2) <= tol * std::max(1.0, m2);
}

bool satisfies_ewald(const RationalWaveVector& k, const LatticeShift& m) {
  // 2 Σ (p_i/q_i) m_i = |m|², cleared of denominators.
  __int128 lcm = 1;
  for (int i = 0; i < 3; ++i) lcm = std::lcm(static_cast<std::int64_t>(lcm), k.den[i]);
  __int128 lhs = 0;
  for (int i = 0; i < 3; ++i) lhs += 2 * static_cast<__int128>(k.num[i]) * (lcm / k.den[i]) * m[i];
  return lhs == lcm * static_cast<__int128>(m.squared_norm());
}

std::vector<LatticeShift> enumerate_candidate_shifts(const WaveVector& k, double tol) {
  require_nonzero(k);
  if (!(tol >= 0.0)) throw DomainError("Ewald tolerance must be non-negative");
  return search_shell(search_radius(k.norm()),
                      [&](const LatticeShift& m) { return satisfies_ewald(k, m, tol); });
}

std::vector<LatticeShift> enumerate_candidate_shifts(const RationalWaveVector& k) {
  if (k.is_zero()) throw DomainError("classification requires a nonzero wave vector");
  return search_shell(search_radius(k.to_double().norm()),
                      [&](const LatticeShift& m) { return satisfies_ewald(k, m); });
}

ExceptionalClass classify_wavevector(const WaveVector& k, double tol) {
  ExceptionalClass c;
  c.shifts = enumerate_candidate_shifts(k, tol);
  c.order = 1 + static_cast<int>(c.shifts.size());
  c.tolerance_used = tol;
  return c;
}

ExceptionalClass classify_wavevector(const RationalWaveVector& k) {
  ExceptionalClass c;
  c.shifts = enumerate_candidate_shifts(k);
  c.order = 1 + static_cast<int>(c.shifts.size());
  c.tolerance_used = 0.0;
  return c;
}

double nu(const WaveVector& k0, const LatticeShift& m0, double tol) {
  require_nonzero(k0);
  if (!satisfies_ewald(k0, m0, tol)) throw DomainError("pair (k0, m0) is off the Ewald plane 2k·m = |m|^2");
  return 4.0 * k0.squared_norm() / static_cast<double>(m0.squared_norm()) - 1.0;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::GapPredicted: return "GapPredicted";
    case Verdict::NoGap: return "NoGap";
    case Verdict::BoundaryExcluded: return "BoundaryExcluded";
    case Verdict::HigherOrderExcluded: return "HigherOrderExcluded";
  }
  return "unknown";
}

GapAdmissibility gap_admissible(const WaveVector& k0, const LatticeShift& m0, double exclusion_band,
                                double tol) {
  GapAdmissibility g;
  g.nu = nu(k0, m0, tol);
  g.ratio = k0.norm() / m0.norm();
  g.order = classify_wavevector(k0, tol).order;
  if (g.order > 2) {
    g.verdict = Verdict::HigherOrderExcluded;
  } else if (std::abs(g.ratio - kCriticalRatio) <= exclusion_band) {
    g.verdict = Verdict::BoundaryExcluded;
  } else {
    g.verdict = g.ratio < kCriticalRatio ? Verdict::GapPredicted : Verdict::NoGap;
  }
  return g;
}

double FaceRaster::spacing() const {
  return coords.size() > 1 ? coords[1] - coords[0] : 0.0;
}

WaveVector FaceRaster::point(std::size_t i, std::size_t j) const {
  return WaveVector(center + coords[i] * u_axis + coords[j] * v_axis);
}

namespace {

double trapezoid_area(const FaceRaster& r, std::size_t first) {
  const std::size_t n = r.samples();
  if (n < 2) return 0.0;
  auto weight = [&](std::size_t i) { return (i == first || i == n - 1) ? 0.5 : 1.0; };
  double sum = 0.0;
  for (std::size_t i = first; i < n; ++i)
    for (std::size_t j = first; j < n; ++j)
      if (r.flagged(i, j)) sum += weight(i) * weight(j);
  return sum * r.spacing() * r.spacing();
}

}  // namespace

double FaceRaster::flagged_area() const { return trapezoid_area(*this, 0); }

double FaceRaster::flagged_area_first_quadrant() const {
  const auto it = std::lower_bound(coords.begin(), coords.end(), -1e-12);
  return trapezoid_area(*this, static_cast<std::size_t>(it - coords.begin()));
}

FaceRaster face_gap_region(const LatticeShift& m0, int samples, double half_extent, double exclusion_band,
                           double tol) {
  if (samples < 2) throw DomainError("face raster needs at least two samples per axis");
  if (!(half_extent > 0.0)) throw DomainError("face half extent must be positive");

  FaceRaster r;
  const Eigen::Vector3d n = m0.vec();
  r.center = 0.5 * n;

  int nonzero = 0, axis = 0;
  for (int i = 0; i < 3; ++i)
    if (m0[i] != 0) {
      ++nonzero;
      axis = i;
    }
  if (nonzero == 1) {
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    r.u_axis = Eigen::Vector3d::Unit(std::min(a, b));
    r.v_axis = Eigen::Vector3d::Unit(std::max(a, b));
  } else {
    Eigen::Index least;
    n.cwiseAbs().minCoeff(&least);
    r.u_axis = n.cross(Eigen::Vector3d::Unit(least)).normalized();
    r.v_axis = n.normalized().cross(r.u_axis);
  }

  const auto ns = static_cast<std::size_t>(samples);
  r.coords.resize(ns);
  for (std::size_t i = 0; i < ns; ++i)
    r.coords[i] = -half_extent + 2.0 * half_extent * static_cast<double>(i) / static_cast<double>(ns - 1);

  r.flags.assign(ns * ns, 0);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      const WaveVector k = r.point(i, j);
      if (k.is_zero()) continue;
      // Raster nodes lie on the plane up to rounding; widen the check accordingly.
      const auto adm = gap_admissible(k, m0, exclusion_band, std::max(tol, 1e-12));
      r.flags[i * ns + j] = adm.verdict == Verdict::GapPredicted ? 1 : 0;
    }
  }
  return r;
}

const std::array<Eigen::Matrix3i, 48>& cubic_symmetries() {
  static const std::array<Eigen::Matrix3i, 48> group = [] {
    std::array<Eigen::Matrix3i, 48> g;
    std::array<int, 3> perm{0, 1, 2};
    std::size_t idx = 0;
    do {
      for (int signs = 0; signs < 8; ++signs) {
        Eigen::Matrix3i p = Eigen::Matrix3i::Zero();
        for (int r = 0; r < 3; ++r) p(r, perm[static_cast<std::size_t>(r)]) = (signs >> r) & 1 ? -1 : 1;
        g[idx++] = p;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g;
  }();
  return group;
}

}  // namespace localgap::lattice
