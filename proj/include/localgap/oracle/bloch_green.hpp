#pragma once

// Continuum Bloch Green's function of −Δ − λ on the (2π)³ cell, Ewald-split,
// and the s-wave sphere model built on it.

#include "localgap/oracle/result.hpp"
#include "localgap/types.hpp"

namespace localgap::oracle {

struct EwaldOptions {
  double split = 0.25;  ///< Ewald parameter T
  int m_max = 14;       ///< reciprocal box half-width
  int series_terms = 40;
};

/// D(k, λ) = lim_{x→0} [G(x) − 1/(4π|x|)] for the Bloch Green's function with
/// quasi-momentum k. Real-space images are dropped; at T = 0.25 they are
/// below e^{−π²/T} ≈ 7e−18.
double bloch_green_regular_part(const WaveVector& k, double lambda, const EwaldOptions& opts = {});

/// Lowest `count` roots of D(k, λ) + κcot(κa)/(4π) = 0 above |k|² (plus
/// leftover degenerate cone levels). Continuum counterpart of the FD monopole.
EigResult ewald_monopole_dirichlet_eigenvalues(const WaveVector& k, double a, int count,
                                               const EwaldOptions& opts = {});

}  // namespace localgap::oracle
