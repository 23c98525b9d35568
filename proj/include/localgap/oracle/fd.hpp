#pragma once

// Finite-difference Bloch eigensolver for the Dirichlet cell problem, plus a
// point-scatterer (s-wave) variant on the same lattice.
//
// With u = Φe^{−ik·x} and Φ periodic on [−π, π)³ the operator is
// −Δ_h + 2i k·∇_h + |k|², using the 7-point Laplacian and centred first
// differences. Nodes are x_i = −π + ih, h = 2π/n, flattened as (i·n + j)·n + l.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "localgap/oracle/eigensolve.hpp"
#include "localgap/oracle/result.hpp"
#include "localgap/types.hpp"

namespace localgap::oracle {

/// Grid with a staircase sphere mask (nodes with |x| < a).
class FDGrid {
 public:
  FDGrid(int n, double a);

  int n() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double h() const noexcept;
  double coord(int i) const noexcept;
  std::size_t size() const noexcept { return mask_.size(); }
  std::size_t index(int i, int j, int l) const noexcept {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  const std::vector<std::uint8_t>& inclusion_mask() const noexcept { return mask_; }
  const std::vector<std::size_t>& masked_nodes() const noexcept { return masked_; }
  /// Grid coordinates with |x_i| < a along one axis.
  int nodes_across() const noexcept;

 private:
  int n_;
  double a_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> masked_;
};

/// Discrete symbol Σ_d (2 − 2cos(p_d h))/h² − 2k_d sin(p_d h)/h + k_d² at integer frequency p.
double fd_symbol(const WaveVector& k, int n, int px, int py, int pz);
/// All symbol values in FFT output order (index q ↦ p = q or q − n).
std::vector<double> fd_symbol_table(const WaveVector& k, int n);

/// Sparse operator with masked rows/columns replaced by mask_diagonal·I.
SparseMatrixC assemble_fd_operator(const WaveVector& k, const FDGrid& grid, double mask_diagonal = 1e6);

/// "row col re im" lines, 0-based, one per stored entry, after a "n nnz" header.
void write_triplets(std::ostream& os, const SparseMatrixC& A);

struct FdOptions {
  /// Return the eigenvalues nearest this λ instead of the lowest ones.
  std::optional<double> target;
  EigOptions eig;
};

/// Lowest (or nearest-target) `count` eigenvalues λ = (ω/c)² of the masked
/// FD operator. a = 0 means no inclusion. Throws ResolutionError when a > 0
/// leaves fewer than 4 nodes across the diameter.
EigResult fd_dirichlet_eigenvalues(const WaveVector& k, double a, int n, int count, const FdOptions& opts = {});

/// Regular part of the lattice Bloch Green's function at the origin,
/// (1/|Π|)Σ_p 1/(σ_p − λ) − c₀/h, with c₀ the simple-cubic Watson constant / 6.
double fd_green_regular_part(const WaveVector& k, int n, double lambda);

/// κ·cot(κa) for κ² = λ (analytically continued to λ ≤ 0).
double swave_log_derivative(double lambda, double a);

/// Sphere of radius a treated as an s-wave scatterer on the FD lattice: roots
/// of D_h(λ) + κcot(κa)/(4π) = 0 above the lowest pole, merged with the
/// unperturbed levels left over by degenerate poles.
EigResult fd_monopole_dirichlet_eigenvalues(const WaveVector& k, double a, int n, int count);

}  // namespace localgap::oracle
