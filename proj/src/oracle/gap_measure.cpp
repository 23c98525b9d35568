#include "localgap/oracle/gap_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"
#include "localgap/oracle/fd.hpp"
#include "localgap/oracle/pwe.hpp"

namespace localgap::oracle {

namespace {

struct Prediction {
  double mid = 0.0;      // ω
  double half_sep = 0.0; // ω
};

std::string dump(const std::vector<double>& omegas, double lo, double hi) {
  std::ostringstream os;
  os.precision(12);
  os << "window [" << lo << ", " << hi << "], candidates:";
  for (double w : omegas) os << ' ' << w;
  return os.str();
}

}  // namespace

GapMeasurement measure_gap_numeric(const WaveVector& k0, const LatticeShift& m0, const PhysicalParams& params,
                                   const OracleResolution& res, const std::vector<double>& deltas) {
  require_order_two(k0, m0);
  if (deltas.empty()) throw DomainError("delta grid is empty");
  GapMeasurement out;
  const bool dir = std::holds_alternative<dirichlet::DirichletParams>(params);
  out.problem = dir ? ProblemKind::Dirichlet : ProblemKind::Transmission;
  double max_dt = 0.0;
  for (double d : deltas) max_dt = std::max(max_dt, std::abs(0.5 * d * static_cast<double>(m0.squared_norm())));
  const double wide = std::max(1.0, 2.0 * max_dt);

  // Predicted branches at δ, and the predicted δ = 0 splitting, in ω units.
  std::function<Prediction(double)> predict;
  double split0 = 0.0;
  if (dir) {
    auto p = std::get<dirichlet::DirichletParams>(params);
    p.validate();
    p.delta0 = wide;
    out.c = p.c;
    predict = [p, k0, m0](double delta) {
      const auto b = dirichlet::branch_pair(k0, m0, p, 0.5 * delta * static_cast<double>(m0.squared_norm()));
      return Prediction{0.5 * p.c * (b.omega_minus_over_c + b.omega_plus_over_c), 0.5 * p.c * b.splitting()};
    };
  } else {
    const auto& tp = std::get<transmission::TransmissionParams>(params);
    const transmission::TransmissionParams p(tp.materials(), tp.a(), wide);
    out.c = p.materials().c_plus();
    const double c = out.c;
    predict = [p, k0, m0, c](double delta) {
      const auto b =
          transmission::branch_pair_transmission(k0, m0, p, 0.5 * delta * static_cast<double>(m0.squared_norm()));
      return Prediction{0.5 * c * (b.omega_minus_over_c + b.omega_plus_over_c), 0.5 * c * b.splitting()};
    };
  }
  split0 = 2.0 * predict(0.0).half_sep;
  const double floor = 1e-3 * out.c * k0.norm();

  for (double delta : deltas) {
    const WaveVector k = k0.scaled(1.0 + delta);
    const Prediction pr = predict(delta);
    const double hw = pr.half_sep + std::max(5.0 * split0, floor);
    const double lo = pr.mid - hw, hi = pr.mid + hw;
    std::vector<double> omegas;
    if (dir) {
      const auto& p = std::get<dirichlet::DirichletParams>(params);
      FdOptions fo;
      fo.eig = res.eig;
      fo.target = (pr.mid / p.c) * (pr.mid / p.c);
      const auto r = fd_dirichlet_eigenvalues(k, p.a, res.fd_n, res.count, fo);
      for (double lam : r.eigenvalues) omegas.push_back(p.c * std::sqrt(std::max(lam, 0.0)));
    } else {
      const auto r = pwe_transmission_eigenvalues(k, std::get<transmission::TransmissionParams>(params),
                                                  res.pwe_g_max, res.count);
      for (double w2 : r.eigenvalues) omegas.push_back(std::sqrt(std::max(w2, 0.0)));
      // Only the lowest values are returned, so the window must end below the last one.
      if (omegas.back() <= hi)
        throw TrackingError("tracking window not covered by the requested eigenvalue count", dump(omegas, lo, hi));
    }
    std::vector<double> inside;
    for (double w : omegas)
      if (w >= lo && w <= hi) inside.push_back(w);
    if (dir && inside.size() == omegas.size())
      throw TrackingError("every computed eigenvalue lies in the tracking window; raise count", dump(omegas, lo, hi));
    if (inside.size() != 2) {
      std::ostringstream msg;
      msg << inside.size() << " eigenvalues in the tracking window at delta=" << delta;
      throw TrackingError(msg.str(), dump(omegas, lo, hi));
    }
    std::sort(inside.begin(), inside.end());
    out.samples.push_back({delta, inside[0], inside[1], lo, hi});
  }
  double max_lower = -INFINITY, min_upper = INFINITY;
  for (const auto& s : out.samples) {
    max_lower = std::max(max_lower, s.lower);
    min_upper = std::min(min_upper, s.upper);
  }
  if (max_lower < min_upper) out.gap = std::make_pair(max_lower, min_upper);
  return out;
}

}  // namespace localgap::oracle
