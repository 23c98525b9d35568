#include "secular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "localgap/errors.hpp"

namespace localgap::oracle::detail {

namespace {

double root_between(double lo_pole, double hi_pole, const std::function<double(double)>& F) {
  const double gap = hi_pole - lo_pole;
  double off = 1e-9 * gap;
  for (int attempt = 0; attempt < 6; ++attempt, off *= 1e-2) {
    const double lo = lo_pole + off, hi = hi_pole - off;
    const double flo = F(lo), fhi = F(hi);
    if (flo < 0.0 && fhi > 0.0) {
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      return 0.5 * (r.first + r.second);
    }
  }
  throw NumericalError("secular equation: no sign change between consecutive poles");
}

}  // namespace

std::vector<double> secular_spectrum(const std::vector<double>& poles, const std::function<double(double)>& F,
                                     int count) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < poles.size() && static_cast<int>(out.size()) < count) {
    const double p = poles[i];
    std::size_t j = i + 1;
    while (j < poles.size() && poles[j] - p <= 1e-10 * std::max(1.0, std::abs(p))) ++j;
    for (std::size_t r = i + 1; r < j && static_cast<int>(out.size()) < count; ++r) out.push_back(p);
    if (j >= poles.size()) break;
    if (static_cast<int>(out.size()) < count) out.push_back(root_between(p, poles[j], F));
    i = j;
  }
  if (static_cast<int>(out.size()) < count) throw DomainError("secular spectrum: not enough poles for count");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace localgap::oracle::detail
