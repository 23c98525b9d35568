#pragma once

#include <random>
#include <utility>
#include <vector>

#include "localgap/lattice.hpp"

namespace testsupport {

struct Pair {
  localgap::WaveVector k0;
  localgap::LatticeShift m0;
};

/// Random order-two pair: k0 = m0/2 + v with v ⟂ m0, rejecting higher-order
/// points. |v| is drawn so that |k0|/|m0| covers (1/2, 1.1).
inline Pair random_order_two_pair(std::mt19937_64& rng, int max_component = 2) {
  std::uniform_int_distribution<int> comp(-max_component, max_component);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> ratio(0.5, 1.1);
  for (;;) {
    const int a = comp(rng), b = comp(rng), c = comp(rng);
    if (a == 0 && b == 0 && c == 0) continue;
    const localgap::LatticeShift m0(a, b, c);
    const Eigen::Vector3d n = m0.vec().normalized();
    Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
    v -= v.dot(n) * n;
    if (v.norm() < 1e-6) continue;
    const double r = ratio(rng) * m0.norm();
    const double len = std::sqrt(std::max(0.0, r * r - 0.25 * static_cast<double>(m0.squared_norm())));
    const localgap::WaveVector k0(0.5 * m0.vec() + len * v.normalized());
    if (k0.is_zero()) continue;
    const auto cls = localgap::lattice::classify_wavevector(k0);
    if (cls.order == 2 && cls.shifts.front() == m0) return {k0, m0};
  }
}

}  // namespace testsupport
