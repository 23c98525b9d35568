#include "localgap/oracle/pwe.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "localgap/errors.hpp"
#include "localgap/oracle/eigensolve.hpp"
#include "localgap/parallel.hpp"

namespace localgap::oracle {

using std::numbers::pi;

PWEBasis::PWEBasis(int g_max) : g_max_(g_max) {
  if (g_max < 0) throw DomainError("g_max must be non-negative");
  for (int x = -g_max; x <= g_max; ++x)
    for (int y = -g_max; y <= g_max; ++y)
      for (int z = -g_max; z <= g_max; ++z) basis_.push_back({x, y, z});
}

long PWEBasis::index_of(const std::array<int, 3>& g) const noexcept {
  const int w = 2 * g_max_ + 1;
  for (int d = 0; d < 3; ++d)
    if (std::abs(g[static_cast<std::size_t>(d)]) > g_max_) return -1;
  return (static_cast<long>(g[0] + g_max_) * w + (g[1] + g_max_)) * w + (g[2] + g_max_);
}

double sphere_indicator_fourier(const std::array<int, 3>& g, double a) {
  if (!(a > 0.0)) throw DomainError("sphere radius must be positive");
  const double f = 4.0 / 3.0 * pi * a * a * a / kCellVolume;
  const double gn = std::sqrt(static_cast<double>(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]));
  const double x = gn * a;
  if (x == 0.0) return f;
  // 3(sin x − x cos x)/x³ = 1 − x²/10 + x⁴/280 − ...; the closed form cancels badly for small x.
  if (x < 1e-3) return f * (1.0 - x * x / 10.0 + x * x * x * x / 280.0);
  return f * 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

PweSystem assemble_pwe(const WaveVector& k, const transmission::TransmissionParams& p, int g_max) {
  if (g_max < 2) throw DomainError("g_max must be at least 2");
  const long w = 2L * g_max + 1;
  if (w * w * w > 12000) throw DomainError("(2 g_max + 1)^3 exceeds 12000");
  const PWEBasis basis(g_max);
  const auto& mat = p.materials();
  const double a = p.a();
  const auto n = static_cast<Eigen::Index>(basis.size());
  PweSystem sys;
  sys.stiffness.resize(n, n);
  sys.mass.resize(n, n);
  const double eta_p = 1.0 / mat.rho_plus, eta_m = 1.0 / mat.rho_minus;
  const auto& g = basis.vectors();
  // χ̂ depends only on g − g'; tabulate it once on the doubled box.
  const int w2 = 4 * g_max + 1;
  std::vector<double> chi(static_cast<std::size_t>(w2) * w2 * w2);
  for (int x = -2 * g_max; x <= 2 * g_max; ++x)
    for (int y = -2 * g_max; y <= 2 * g_max; ++y)
      for (int z = -2 * g_max; z <= 2 * g_max; ++z)
        chi[(static_cast<std::size_t>(x + 2 * g_max) * w2 + (y + 2 * g_max)) * w2 + (z + 2 * g_max)] =
            sphere_indicator_fourier({x, y, z}, a);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t r) {
    const Eigen::Vector3d qr = k.vec() + Eigen::Vector3d(g[r][0], g[r][1], g[r][2]);
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& gc = g[static_cast<std::size_t>(c)];
      const std::size_t di = (static_cast<std::size_t>(g[r][0] - gc[0] + 2 * g_max) * w2 + (g[r][1] - gc[1] + 2 * g_max)) * w2 +
                             (g[r][2] - gc[2] + 2 * g_max);
      const double delta = (static_cast<Eigen::Index>(r) == c) ? 1.0 : 0.0;
      const double eta = eta_p * delta + (eta_m - eta_p) * chi[di];
      const double gam = mat.gamma_plus * delta + (mat.gamma_minus - mat.gamma_plus) * chi[di];
      const Eigen::Vector3d qc = k.vec() + Eigen::Vector3d(gc[0], gc[1], gc[2]);
      sys.stiffness(static_cast<Eigen::Index>(r), c) = qr.dot(qc) * eta;
      sys.mass(static_cast<Eigen::Index>(r), c) = gam;
    }
  });
  const double defect = std::max((sys.stiffness - sys.stiffness.transpose()).norm() / std::max(sys.stiffness.norm(), 1e-300),
                                 (sys.mass - sys.mass.transpose()).norm() / sys.mass.norm());
  if (defect > 1e-12) throw NumericalError("PWE assembly is not Hermitian (internal error)");
  if (g_max * a < 1.0) {
    std::ostringstream os;
    os << "g_max*a = " << g_max * a << " < 1: truncation does not resolve the sphere";
    sys.warnings.push_back(os.str());
  }
  return sys;
}

EigResult pwe_transmission_eigenvalues(const WaveVector& k, const transmission::TransmissionParams& p, int g_max,
                                       int count) {
  if (count < 1) throw DomainError("count must be >= 1");
  const PweSystem sys = assemble_pwe(k, p, g_max);
  if (count > sys.mass.rows()) throw DomainError("count exceeds the basis size");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.stiffness, sys.mass,
                                                                     Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("PWE generalized eigensolve failed");
  EigResult res;
  res.k = k;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double lam = es.eigenvalues()[i];
    const Eigen::VectorXd x = es.eigenvectors().col(i);
    const double r = (sys.stiffness * x - lam * sys.mass * x).norm() /
                     std::max(1e-300, std::max(std::abs(lam), 1.0) * (sys.mass * x).norm());
    worst = std::max(worst, r);
    res.eigenvalues.push_back(lam);
  }
  if (worst > 1e-8) throw NumericalError("PWE eigen-residual above 1e-8");
  res.residual_norm = worst;
  std::ostringstream os;
  os << "pwe g_max=" << g_max << " basis=" << sys.mass.rows() << " a=" << std::setprecision(6) << p.a();
  for (const auto& w : sys.warnings) os << "; warning: " << w;
  res.resolution = os.str();
  return res;
}

}  // namespace localgap::oracle
