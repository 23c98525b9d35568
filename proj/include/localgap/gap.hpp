#pragma once

#include <string_view>
#include <vector>

#include "localgap/types.hpp"

namespace localgap {

enum class ProblemKind { Dirichlet, Transmission };
std::string_view to_string(ProblemKind p);

/// Frequency interval (lo, hi) in units of c with no Bloch wave along the
/// ray through k0.
struct GapInterval {
  double lo_over_c = 0.0;
  double hi_over_c = 0.0;
  WaveVector k0;
  LatticeShift m0{0, 0, 1};
  ProblemKind problem = ProblemKind::Dirichlet;
  double a = 0.0;

  double width() const { return hi_over_c - lo_over_c; }
  double center() const { return 0.5 * (lo_over_c + hi_over_c); }
};

struct BranchValues {
  double omega_minus_over_c = 0.0;
  double omega_plus_over_c = 0.0;
  double splitting() const { return omega_plus_over_c - omega_minus_over_c; }
};

struct BranchSample {
  double delta_tilde = 0.0;
  double omega_minus_over_c = 0.0;
  double omega_plus_over_c = 0.0;
};

struct BranchCurve {
  WaveVector k0;
  LatticeShift m0{0, 0, 1};
  std::vector<BranchSample> samples;
};

/// Throws DomainError unless k0 is exceptional of order exactly two with
/// shift m0.
void require_order_two(const WaveVector& k0, const LatticeShift& m0);

/// Order-two check plus rejection of the excluded √2/2 boundary band.
void require_gap_admissible_pair(const WaveVector& k0, const LatticeShift& m0);

/// Uniform grid of n values over [lo, hi]; n = 1 gives the midpoint.
std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace localgap
