#include "localgap/dirichlet.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"

namespace localgap::dirichlet {

using std::numbers::pi;

std::vector<std::string> DirichletParams::validate() const {
  if (!std::isfinite(a) || a < 0.0) throw DomainError("a must be finite and non-negative");
  if (a >= 0.5 * pi) throw DomainError("a must be below pi/2 for the small-inclusion asymptotics");
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("q must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be positive");
  if (!(delta0 > 0.0)) throw DomainError("delta0 must be positive");
  if (cell_volume != kCellVolume) throw DomainError("cell_volume is fixed to (2 pi)^3");
  std::vector<std::string> w;
  if (a > 0.2 * pi) w.push_back("a exceeds 0.2*pi; leading-order asymptotics may be inaccurate");
  return w;
}

double a_tilde(const DirichletParams& p) { return 4.0 * pi * p.a * p.q / p.cell_volume; }

ScaledVars scaled_vars(const LatticeShift& m0, const DirichletParams& p, double delta) {
  return {a_tilde(p), 0.5 * delta * static_cast<double>(m0.squared_norm())};
}

std::pair<double, double> nu_pm(double nu) {
  if (nu < 0.0 || nu > 1.0) throw DomainError("nu_pm requires 0 <= nu <= 1");
  const double s = std::sqrt(1.0 - nu * nu);
  return {1.0 - s, 1.0 + s};
}

double epsilon_nonexceptional(const WaveVector& k, const DirichletParams& p) {
  p.validate();
  if (lattice::classify_wavevector(k).order != 1)
    throw DomainError("k is exceptional; use branch_pair for the split dispersion");
  return 2.0 * pi * p.q * p.a / (k.squared_norm() * p.cell_volume);
}

BranchValues branch_pair(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p,
                         double delta_tilde) {
  p.validate();
  require_order_two(k0, m0);
  if (std::abs(delta_tilde) > p.delta0) throw DomainError("|delta_tilde| exceeds delta0");
  const double nu = lattice::nu(k0, m0);
  const double at = a_tilde(p);
  const double k = k0.norm();
  const double root = std::hypot(at, delta_tilde);
  const double base = at + nu * delta_tilde;
  return {k + (base - root) / (2.0 * k), k + (base + root) / (2.0 * k)};
}

std::pair<double, double> gap_edge_locations(const WaveVector& k0, const LatticeShift& m0,
                                             const DirichletParams& p) {
  const double nu = lattice::nu(k0, m0);
  if (nu >= 1.0) throw DomainError("branch extrema exist only for nu < 1");
  const double shift = a_tilde(p) * nu / std::sqrt(1.0 - nu * nu);
  return {shift, -shift};
}

std::optional<GapInterval> local_gap(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p) {
  p.validate();
  require_gap_admissible_pair(k0, m0);
  const double nu = lattice::nu(k0, m0);
  if (nu >= 1.0) return std::nullopt;
  const auto [nm, np] = nu_pm(nu);
  const double k = k0.norm();
  const double at = a_tilde(p);
  GapInterval g;
  g.lo_over_c = k + at * nm / (2.0 * k);
  g.hi_over_c = k + at * np / (2.0 * k);
  g.k0 = k0;
  g.m0 = m0;
  g.problem = ProblemKind::Dirichlet;
  g.a = p.a;
  if (!(g.hi_over_c > g.lo_over_c)) return std::nullopt;
  return g;
}

BranchCurve dispersion_scan(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p,
                            double delta_tilde_lo, double delta_tilde_hi, int n_samples) {
  BranchCurve curve{k0, m0, {}};
  for (double dt : uniform_grid(delta_tilde_lo, delta_tilde_hi, n_samples)) {
    const auto b = branch_pair(k0, m0, p, dt);
    curve.samples.push_back({dt, b.omega_minus_over_c, b.omega_plus_over_c});
  }
  return curve;
}

SplittingRoots exceptional_splitting_check(const WaveVector& k0, const LatticeShift& m0,
                                           const DirichletParams& p) {
  p.validate();
  require_order_two(k0, m0);
  // det(2ε|k₀|²|Π|·I − 4πqa·J) = 0 ⇔ 2ε|k₀|²|Π| is an eigenvalue of 4πqa·J.
  const Eigen::Matrix2d coupling = 4.0 * pi * p.q * p.a * Eigen::Matrix2d::Ones();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(coupling, Eigen::EigenvaluesOnly);
  const double scale = 2.0 * k0.squared_norm() * p.cell_volume;
  const double lo = es.eigenvalues()[0] / scale, hi = es.eigenvalues()[1] / scale;
  // The zero root is exact; rounding in the 2×2 solve would leave ~1e-18.
  return {hi, std::abs(lo) <= 1e-14 * std::abs(hi) ? 0.0 : lo};
}

}  // namespace localgap::dirichlet
