#pragma once

// Numerical local-gap measurement along the ray k = (1 + δ)k₀.

#include <optional>
#include <variant>
#include <vector>

#include "localgap/dirichlet.hpp"
#include "localgap/gap.hpp"
#include "localgap/oracle/eigensolve.hpp"
#include "localgap/transmission.hpp"

namespace localgap::oracle {

struct OracleResolution {
  int fd_n = 48;
  int pwe_g_max = 3;
  int count = 8;  ///< eigenvalues requested per solve
  EigOptions eig;
};

using PhysicalParams = std::variant<dirichlet::DirichletParams, transmission::TransmissionParams>;

struct BandSample {
  double delta = 0.0;
  double lower = 0.0;  ///< ω of the lower tracked band
  double upper = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct GapMeasurement {
  ProblemKind problem = ProblemKind::Dirichlet;
  double c = 1.0;  ///< reference speed: c (Dirichlet) or c₊ (transmission)
  /// (max lower, min upper) in ω units when the bands do not overlap.
  std::optional<std::pair<double, double>> gap;
  std::vector<BandSample> samples;
};

/// Solves at each δ, keeps the two eigenfrequencies inside a window centred on
/// the predicted branch midpoint (half-width: half the predicted separation
/// plus 5× the predicted δ = 0 splitting, floored at 1e−3·c|k₀|). More than two
/// values in the window, or fewer than two, raises TrackingError.
GapMeasurement measure_gap_numeric(const WaveVector& k0, const LatticeShift& m0, const PhysicalParams& params,
                                   const OracleResolution& res, const std::vector<double>& deltas);

}  // namespace localgap::oracle
