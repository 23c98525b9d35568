#pragma once

// Plane-wave expansion for ∇·(ρ⁻¹∇u) + ω²γu = 0 with a spherical inclusion
// centred in the (2π)³ cell.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "localgap/oracle/result.hpp"
#include "localgap/transmission.hpp"

namespace localgap::oracle {

/// Integer vectors with |g|_∞ ≤ g_max, lexicographic (x slowest).
class PWEBasis {
 public:
  explicit PWEBasis(int g_max);
  int g_max() const noexcept { return g_max_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<std::array<int, 3>>& vectors() const noexcept { return basis_; }
  /// Position of g in the basis, or −1.
  long index_of(const std::array<int, 3>& g) const noexcept;

 private:
  int g_max_;
  std::vector<std::array<int, 3>> basis_;
};

/// Fourier coefficient of the ball indicator |x| < a on the (2π)³ cell.
double sphere_indicator_fourier(const std::array<int, 3>& g, double a);

struct PweSystem {
  Eigen::MatrixXd stiffness;  ///< (k+g)·(k+g') η̂(g−g')
  Eigen::MatrixXd mass;       ///< γ̂(g−g')
  std::vector<std::string> warnings;
};

/// Assembles the pencil. Throws DomainError unless g_max ≥ 2 and (2g_max+1)³ ≤ 12000.
PweSystem assemble_pwe(const WaveVector& k, const transmission::TransmissionParams& p, int g_max);

/// Lowest `count` values of ω² (in the material's own units, not divided by c₊²).
/// Resolution warnings (g_max·a < 1) are appended to the resolution string.
EigResult pwe_transmission_eigenvalues(const WaveVector& k, const transmission::TransmissionParams& p, int g_max,
                                       int count);

}  // namespace localgap::oracle
