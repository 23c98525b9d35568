#pragma once

// Hermitian eigensolvers shared by the numerical oracles.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace localgap::oracle {

using cplx = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;
/// out = Op(in); Op must be Hermitian on the working subspace.
using LinearOperator = std::function<void(const Eigen::VectorXcd& in, Eigen::VectorXcd& out)>;
/// In-place projection onto the working subspace (e.g. zeroing masked nodes).
using Projector = std::function<void(Eigen::VectorXcd&)>;

struct EigOptions {
  std::uint64_t seed = 0x5eed;
  /// Ritz residual bound relative to the Ritz value of the shift-inverted operator.
  double tol = 1e-11;
  int max_restarts = 300;
  /// Krylov basis size; 0 picks max(2·nev + 20, 40).
  int basis_size = 0;
  /// Extra deflated passes to pick up missed copies of repeated eigenvalues.
  int multiplicity_passes = 1;
};

struct KrylovResult {
  std::vector<double> theta;   ///< Ritz values, largest magnitude first
  Eigen::MatrixXcd vectors;    ///< matching Ritz vectors
  double max_residual = 0.0;   ///< max ‖Op x − θx‖ / |θ|
  int restarts = 0;
};

/// Krylov–Schur (thick-restart Lanczos with full reorthogonalization) for the
/// nev largest-magnitude eigenvalues of a Hermitian operator. Vectors in
/// `locked` are deflated out. Throws NumericalError on non-convergence.
KrylovResult krylov_schur(const LinearOperator& op, Eigen::Index dim, int nev, const EigOptions& opts,
                          const Projector& project = {}, const Eigen::MatrixXcd* locked = nullptr);

struct ShiftInvertResult {
  std::vector<double> eigenvalues;  ///< ascending
  Eigen::MatrixXcd vectors;
  double max_residual = 0.0;        ///< as reported by the Krylov iteration
};

/// The `count` eigenvalues of A nearest sigma, given inverse = (A − σ)⁻¹.
ShiftInvertResult shift_invert_eigensolve(const LinearOperator& inverse, Eigen::Index dim, double sigma, int count,
                                          const EigOptions& opts = {}, const Projector& project = {});

/// Lowest `count` eigenvalues of a dense Hermitian matrix.
std::vector<double> hermitian_eigensolve(const Eigen::MatrixXcd& A, int count);
/// Lowest `count` eigenvalues of the real symmetric-definite pencil (A, B).
std::vector<double> hermitian_eigensolve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int count);
/// The `count` eigenvalues of a sparse Hermitian matrix nearest sigma (sparse LU shift-invert).
std::vector<double> hermitian_eigensolve(const SparseMatrixC& A, int count, double sigma, const EigOptions& opts = {});

/// ‖A − Aᴴ‖_F / ‖A‖_F.
double hermiticity_defect(const Eigen::MatrixXcd& A);
double hermiticity_defect(const SparseMatrixC& A);

}  // namespace localgap::oracle
