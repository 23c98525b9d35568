#pragma once

// Leading-order dispersion of the Dirichlet (sound-soft) problem for a
// lattice of small inclusions of scale a and shape factor q.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "localgap/gap.hpp"
#include "localgap/types.hpp"

namespace localgap::dirichlet {

struct DirichletParams {
  double a = 0.1;   ///< inclusion scale; 0 means no inclusion
  double q = 1.0;   ///< shape factor (capacitance of the unit-scaled inclusion)
  double c = 1.0;   ///< host wave speed
  double delta0 = 0.1;  ///< admissible half-width of the δ̃ window
  double cell_volume = kCellVolume;

  /// Throws DomainError on invalid fields; returns advisory warnings.
  std::vector<std::string> validate() const;
};

struct ScaledVars {
  double a_tilde = 0.0;      ///< 4πaq/|Π|
  double delta_tilde = 0.0;  ///< δ|m₀|²/2
};

double a_tilde(const DirichletParams& p);
ScaledVars scaled_vars(const LatticeShift& m0, const DirichletParams& p, double delta);

/// ν± = 1 ± √(1 − ν²), defined for 0 ≤ ν ≤ 1.
std::pair<double, double> nu_pm(double nu);

/// ε with ω = (1 + ε)c|k| at a non-exceptional k.
double epsilon_nonexceptional(const WaveVector& k, const DirichletParams& p);

/// The two branches at δ̃ on the ray k = (1 + δ)k₀, in units of c.
BranchValues branch_pair(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p,
                         double delta_tilde);

/// δ̃ values where the lower branch peaks and the upper branch bottoms out,
/// in that order: ±ãν/√(1 − ν²).
std::pair<double, double> gap_edge_locations(const WaveVector& k0, const LatticeShift& m0,
                                             const DirichletParams& p);

std::optional<GapInterval> local_gap(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p);

BranchCurve dispersion_scan(const WaveVector& k0, const LatticeShift& m0, const DirichletParams& p,
                            double delta_tilde_lo, double delta_tilde_hi, int n_samples);

struct SplittingRoots {
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// ε roots of det M(ε) = 0 at δ = 0 for M = 2ε|k₀|²|Π|·I − 4πqa·J.
SplittingRoots exceptional_splitting_check(const WaveVector& k0, const LatticeShift& m0,
                                           const DirichletParams& p);

}  // namespace localgap::dirichlet
