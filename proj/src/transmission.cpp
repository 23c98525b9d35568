#include "localgap/transmission.hpp"

#include <cmath>
#include <numbers>

#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"

namespace localgap::transmission {

using std::numbers::pi;

namespace {

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void MaterialSpec::validate() const {
  if (!positive(gamma_plus) || !positive(gamma_minus)) throw DomainError("compressibilities must be positive");
  if (!positive(rho_plus) || !positive(rho_minus)) throw DomainError("densities must be positive");
}

MaterialCoefficients material_coefficients(double gamma_plus, double gamma_minus, double rho_plus,
                                           double rho_minus) {
  MaterialSpec{gamma_plus, gamma_minus, rho_plus, rho_minus}.validate();
  MaterialCoefficients m;
  m.alpha = 1.0 - gamma_minus / gamma_plus;
  m.sigma = rho_plus / rho_minus;
  m.beta = 3.0 * (m.sigma - 1.0) / (m.sigma + 2.0);
  return m;
}

MaterialCoefficients MaterialSpec::coefficients() const {
  return material_coefficients(gamma_plus, gamma_minus, rho_plus, rho_minus);
}

double MaterialSpec::c_plus() const {
  validate();
  return 1.0 / std::sqrt(gamma_plus * rho_plus);
}

double MaterialSpec::c_minus() const {
  validate();
  return 1.0 / std::sqrt(gamma_minus * rho_minus);
}

double volume_fraction(double a) { return (4.0 / 3.0) * pi * a * a * a / kCellVolume; }

TransmissionParams::TransmissionParams(MaterialSpec materials, double a, double delta0)
    : materials_(materials), a_(a), f_(volume_fraction(a)), delta0_(delta0) {
  materials_.validate();
  if (!positive(a_)) throw DomainError("sphere radius a must be positive");
  if (a_ >= pi) throw DomainError("sphere radius a must be below pi to fit in the cell");
  if (!(delta0_ > 0.0)) throw DomainError("delta0 must be positive");
}

TransmissionParams TransmissionParams::from_volume_fraction(MaterialSpec materials, double f, double delta0) {
  if (!(f > 0.0 && f < 1.0)) throw DomainError("volume fraction must lie in (0, 1)");
  return TransmissionParams(materials, std::cbrt(3.0 * f * kCellVolume / (4.0 * pi)), delta0);
}

double cos_k0_k1(const WaveVector& k0, const LatticeShift& m0) {
  const Eigen::Vector3d k1 = k0.vec() - m0.vec();
  return k0.vec().dot(k1) / (k0.norm() * k1.norm());
}

double splitting_mu(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p) {
  const auto mc = p.materials().coefficients();
  return std::abs(mc.alpha + mc.beta * cos_k0_k1(k0, m0)) * k0.squared_norm() * p.f();
}

double shifted_center(const WaveVector& k0, const TransmissionParams& p) {
  const auto mc = p.materials().coefficients();
  return k0.norm() * (1.0 + 0.5 * (mc.alpha + mc.beta) * p.f());
}

Eigen::Matrix2d matrix_M_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p,
                                      double epsilon, double delta) {
  require_order_two(k0, m0);
  const auto mc = p.materials().coefficients();
  const double k2 = k0.squared_norm();
  const double off = mc.alpha + mc.beta * cos_k0_k1(k0, m0);
  Eigen::Matrix2d M = 2.0 * epsilon * k2 * kCellVolume * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d coupling;
  coupling << mc.alpha + mc.beta, off, off, mc.alpha + mc.beta;
  M -= p.f() * k2 * kCellVolume * coupling;
  M(1, 1) += delta * kCellVolume * static_cast<double>(m0.squared_norm());
  return M;
}

BranchValues branch_pair_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p,
                                      double delta_tilde) {
  require_order_two(k0, m0);
  if (std::abs(delta_tilde) > p.delta0()) throw DomainError("|delta_tilde| exceeds delta0");
  const double nu = lattice::nu(k0, m0);
  const double k = k0.norm();
  const double root = std::hypot(splitting_mu(k0, m0, p), delta_tilde);
  const double center = shifted_center(k0, p);
  return {center + (nu * delta_tilde - root) / (2.0 * k), center + (nu * delta_tilde + root) / (2.0 * k)};
}

BranchCurve dispersion_scan_transmission(const WaveVector& k0, const LatticeShift& m0,
                                         const TransmissionParams& p, double delta_tilde_lo,
                                         double delta_tilde_hi, int n_samples) {
  BranchCurve curve{k0, m0, {}};
  for (double dt : uniform_grid(delta_tilde_lo, delta_tilde_hi, n_samples)) {
    const auto b = branch_pair_transmission(k0, m0, p, dt);
    curve.samples.push_back({dt, b.omega_minus_over_c, b.omega_plus_over_c});
  }
  return curve;
}

std::string_view to_string(GapStatus s) {
  switch (s) {
    case GapStatus::Gap: return "gap";
    case GapStatus::NoGapNu: return "no-gap-nu";
    case GapStatus::ZeroSplitting: return "zero-splitting";
  }
  return "unknown";
}

TransmissionGap local_gap_transmission(const WaveVector& k0, const LatticeShift& m0, const TransmissionParams& p) {
  require_gap_admissible_pair(k0, m0);
  TransmissionGap out;
  out.nu = lattice::nu(k0, m0);
  out.mu = splitting_mu(k0, m0, p);
  out.center_over_c = shifted_center(k0, p);
  if (out.nu >= 1.0) {
    out.status = GapStatus::NoGapNu;
    return out;
  }
  const auto mc = p.materials().coefficients();
  const double scale = k0.squared_norm() * p.f() * (std::abs(mc.alpha) + std::abs(mc.beta));
  if (out.mu <= 1e-14 * scale || out.mu == 0.0) {
    out.status = GapStatus::ZeroSplitting;
    return out;
  }
  const double half = out.mu / (2.0 * k0.norm()) * std::sqrt(1.0 - out.nu * out.nu);
  GapInterval g;
  g.lo_over_c = out.center_over_c - half;
  g.hi_over_c = out.center_over_c + half;
  g.k0 = k0;
  g.m0 = m0;
  g.problem = ProblemKind::Transmission;
  g.a = p.a();
  out.status = GapStatus::Gap;
  out.interval = g;
  return out;
}

double epsilon_nonexceptional_transmission(const WaveVector& k, const TransmissionParams& p) {
  if (lattice::classify_wavevector(k).order != 1)
    throw DomainError("k is exceptional; use branch_pair_transmission for the split dispersion");
  const auto mc = p.materials().coefficients();
  return 0.5 * (mc.alpha + mc.beta) * p.f();
}

}  // namespace localgap::transmission
