#pragma once

#include <string>
#include <vector>

#include "localgap/types.hpp"

namespace localgap::oracle {

/// Eigenvalues from one oracle solve: λ = (ω/c)² for the finite-difference
/// solvers, ω² for plane waves.
struct EigResult {
  std::vector<double> eigenvalues;  ///< ascending
  WaveVector k;
  std::string resolution;           ///< e.g. "fd n=48 a=0.3 masked=123"
  double residual_norm = 0.0;       ///< max relative eigen-residual
};

}  // namespace localgap::oracle
