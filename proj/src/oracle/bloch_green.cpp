#include "localgap/oracle/bloch_green.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <vector>

#include "localgap/errors.hpp"
#include "localgap/oracle/fd.hpp"
#include "secular.hpp"

namespace localgap::oracle {

using std::numbers::pi;

double bloch_green_regular_part(const WaveVector& k, double lambda, const EwaldOptions& opts) {
  const double T = opts.split;
  if (!(T > 0.0) || opts.m_max < 2 || opts.series_terms < 2) throw DomainError("bad Ewald options");
  const int M = opts.m_max;
  // Reciprocal part over m ≠ 0; the m = 0 term is handled exactly below.
  double rec = 0.0;
  for (int x = -M; x <= M; ++x)
    for (int y = -M; y <= M; ++y)
      for (int z = -M; z <= M; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        const double d = (k.vec() - Eigen::Vector3d(x, y, z)).squaredNorm() - lambda;
        rec += std::exp(-T * d) / d;
      }
  rec /= kCellVolume;
  const double d0 = k.squared_norm() - lambda;
  const double pole = 1.0 / (kCellVolume * d0);
  // Origin image of the short-time heat-kernel integral, minus its 1/(4πr) singularity.
  double origin = -1.0 / (4.0 * pi * std::sqrt(pi * T));
  double term = 1.0;  // λⁿTⁿ/n!
  for (int n = 1; n < opts.series_terms; ++n) {
    term *= lambda * T / n;
    origin += std::pow(4.0 * pi, -1.5) * term / std::sqrt(T) / (n - 0.5);
  }
  // The m = 0 contribution of that integral is already inside `pole`.
  const double zero_mode = std::abs(T * d0) < 1e-8 ? T * (1.0 - 0.5 * T * d0) / kCellVolume
                                                   : -std::expm1(-T * d0) / (kCellVolume * d0);
  return rec + pole + origin - zero_mode;
}

EigResult ewald_monopole_dirichlet_eigenvalues(const WaveVector& k, double a, int count, const EwaldOptions& opts) {
  if (!(a > 0.0) || a >= 0.5 * pi) throw DomainError("inclusion radius must lie in (0, pi/2)");
  if (count < 1) throw DomainError("count must be >= 1");
  // Cone levels |k − m|², trusted only well inside the reciprocal box.
  std::vector<double> poles;
  const int M = opts.m_max;
  for (int x = -M; x <= M; ++x)
    for (int y = -M; y <= M; ++y)
      for (int z = -M; z <= M; ++z) poles.push_back((k.vec() - Eigen::Vector3d(x, y, z)).squaredNorm());
  std::sort(poles.begin(), poles.end());
  const std::function<double(double)> F = [&](double lam) {
    return bloch_green_regular_part(k, lam, opts) + swave_log_derivative(lam, a) / (4.0 * pi);
  };
  EigResult res;
  res.k = k;
  res.eigenvalues = detail::secular_spectrum(poles, F, count);
  const double trusted = 0.25 * (M - k.norm()) * (M - k.norm());
  if (res.eigenvalues.back() > trusted) throw DomainError("requested levels exceed the Ewald box");
  std::ostringstream os;
  os << "ewald-monopole T=" << opts.split << " m_max=" << M << " a=" << std::setprecision(6) << a;
  res.resolution = os.str();
  return res;
}

}  // namespace localgap::oracle
