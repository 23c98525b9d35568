#include "localgap/gap.hpp"

#include <algorithm>
#include <sstream>

#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"

namespace localgap {

std::string_view to_string(ProblemKind p) {
  return p == ProblemKind::Dirichlet ? "dirichlet" : "transmission";
}

void require_order_two(const WaveVector& k0, const LatticeShift& m0) {
  const auto cls = lattice::classify_wavevector(k0);
  if (cls.order != 2 || cls.shifts.front() != m0) {
    std::ostringstream os;
    os << "pair k0=" << k0 << ", m0=" << m0 << " is not an order-two exceptional pair (order " << cls.order << ")";
    throw DomainError(os.str());
  }
}

void require_gap_admissible_pair(const WaveVector& k0, const LatticeShift& m0) {
  require_order_two(k0, m0);
  const auto adm = lattice::gap_admissible(k0, m0);
  if (adm.verdict == lattice::Verdict::BoundaryExcluded)
    throw DomainError("|k0|/|m0| lies in the excluded band around sqrt(2)/2");
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) throw DomainError("sample count must be at least 1");
  if (!(lo <= hi)) throw DomainError("grid range must satisfy lo <= hi");
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace localgap
