#pragma once

// Eigenvalues of a rank-one (s-wave) perturbation of a diagonal spectrum:
// each gap between distinct poles holds one root of F, and a pole of
// multiplicity m keeps m − 1 unperturbed levels.

#include <functional>
#include <vector>

namespace localgap::oracle::detail {

/// poles: ascending. F must tend to −∞ just above each pole and +∞ just below.
std::vector<double> secular_spectrum(const std::vector<double>& poles, const std::function<double(double)>& F,
                                     int count);

}  // namespace localgap::oracle::detail
