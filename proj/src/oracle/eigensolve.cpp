#include "localgap/oracle/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "localgap/errors.hpp"

namespace localgap::oracle {

namespace {

Eigen::VectorXcd random_start(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx(nd(rng), nd(rng));
  return v;
}

// Removes components along the first `cols` columns of V, twice (CGS2).
void orthogonalize(const Eigen::MatrixXcd& V, Eigen::Index cols, Eigen::VectorXcd& w, Eigen::VectorXcd* coeffs) {
  if (cols == 0) return;
  Eigen::VectorXcd h = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * h;
  const Eigen::VectorXcd h2 = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * h2;
  if (coeffs) *coeffs = h + h2;
}

std::vector<double> lowest(const Eigen::VectorXd& ev, int count) {
  const int n = std::min<int>(count, static_cast<int>(ev.size()));
  return {ev.data(), ev.data() + n};
}

}  // namespace

KrylovResult krylov_schur(const LinearOperator& op, Eigen::Index dim, int nev, const EigOptions& opts,
                          const Projector& project, const Eigen::MatrixXcd* locked) {
  if (nev < 1) throw DomainError("krylov_schur needs nev >= 1");
  const Eigen::Index nlocked = locked ? locked->cols() : 0;
  if (nev + nlocked > dim) throw DomainError("requested more eigenpairs than the dimension");
  const Eigen::Index m =
      std::min<Eigen::Index>(dim - nlocked, opts.basis_size > 0 ? opts.basis_size : std::max(2 * nev + 20, 40));
  if (m < nev) throw DomainError("Krylov basis smaller than nev");

  auto deflate = [&](Eigen::VectorXcd& v) {
    if (project) project(v);
    if (nlocked) orthogonalize(*locked, nlocked, v, nullptr);
  };
  Eigen::MatrixXcd V(dim, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  std::uint64_t seed = opts.seed;
  auto fresh = [&](Eigen::Index cols) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXcd v = random_start(dim, seed++);
      deflate(v);
      orthogonalize(V, cols, v, nullptr);
      const double nv = v.norm();
      if (nv > 1e-8) return Eigen::VectorXcd(v / nv);
    }
    // Working space exhausted; a zero column contributes only zero Ritz values.
    return Eigen::VectorXcd(Eigen::VectorXcd::Zero(dim));
  };
  V.col(0) = fresh(0);
  if (V.col(0).norm() == 0.0) throw NumericalError("projected start space is empty");

  Eigen::VectorXcd w(dim), h;
  Eigen::Index k = 0;
  double last_residual = 0.0;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    for (Eigen::Index j = k; j < m; ++j) {
      op(V.col(j), w);
      deflate(w);
      orthogonalize(V, j + 1, w, &h);
      H.col(j).head(j + 1) = h;
      const double beta = w.norm();
      const double scale = std::max(h.norm(), 1e-300);
      if (beta <= 1e-13 * scale) {
        // Invariant subspace: continue with a fresh orthogonal direction.
        H(j + 1, j) = 0.0;
        V.col(j + 1) = fresh(j + 1);
      } else {
        H(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
      }
    }
    const Eigen::MatrixXcd Hm = 0.5 * (H.topLeftCorner(m, m) + H.topLeftCorner(m, m).adjoint());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXcd& Y = es.eigenvectors();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(theta[a]) > std::abs(theta[b]); });
    const cplx beta_m = H(m, m - 1);
    bool converged = true;
    last_residual = 0.0;
    for (int i = 0; i < nev; ++i) {
      const Eigen::Index c = order[static_cast<std::size_t>(i)];
      const double res = std::abs(beta_m * Y(m - 1, c)) / std::max(std::abs(theta[c]), 1e-300);
      last_residual = std::max(last_residual, res);
      if (res > opts.tol) converged = false;
    }
    if (converged || m == dim - nlocked) {
      KrylovResult out;
      out.restarts = restart;
      out.max_residual = last_residual;
      out.vectors.resize(dim, nev);
      for (int i = 0; i < nev; ++i) {
        const Eigen::Index c = order[static_cast<std::size_t>(i)];
        out.theta.push_back(theta[c]);
        out.vectors.col(i) = V.leftCols(m) * Y.col(c);
      }
      return out;
    }
    // Thick restart: keep the best p Ritz pairs plus the residual direction.
    const Eigen::Index p = std::min<Eigen::Index>(m - 1, nev + (m - nev) / 2);
    Eigen::MatrixXcd Ykeep(m, p);
    for (Eigen::Index i = 0; i < p; ++i) Ykeep.col(i) = Y.col(order[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXcd U = V.leftCols(m) * Ykeep;
    const Eigen::VectorXcd residual_dir = V.col(m);
    V.leftCols(p) = U;
    V.col(p) = residual_dir;
    H.setZero();
    for (Eigen::Index i = 0; i < p; ++i) {
      H(i, i) = theta[order[static_cast<std::size_t>(i)]];
      H(p, i) = beta_m * Ykeep(m - 1, i);
    }
    k = p;
  }
  std::ostringstream msg;
  msg << "Krylov-Schur did not converge after " << opts.max_restarts << " restarts; max relative Ritz residual "
      << last_residual << " > tol " << opts.tol;
  throw NumericalError(msg.str());
}

ShiftInvertResult shift_invert_eigensolve(const LinearOperator& inverse, Eigen::Index dim, double sigma, int count,
                                          const EigOptions& opts, const Projector& project) {
  KrylovResult best = krylov_schur(inverse, dim, count, opts, project);
  // Krylov methods see one copy of a repeated eigenvalue per start vector;
  // rerun with the found vectors deflated and merge anything closer to sigma.
  for (int pass = 0; pass < opts.multiplicity_passes; ++pass) {
    if (best.vectors.cols() + count > dim) break;
    EigOptions o = opts;
    o.seed = opts.seed + 7919u * static_cast<std::uint64_t>(pass + 1);
    const KrylovResult extra = krylov_schur(inverse, dim, count, o, project, &best.vectors);
    const double floor_mag = std::abs(best.theta.back());
    std::vector<int> take;
    for (int i = 0; i < count; ++i)
      if (std::abs(extra.theta[static_cast<std::size_t>(i)]) > floor_mag * (1.0 + 1e-12)) take.push_back(i);
    if (take.empty()) break;
    // Merge and keep the count largest magnitudes.
    std::vector<std::pair<double, Eigen::VectorXcd>> all;
    for (Eigen::Index i = 0; i < best.vectors.cols(); ++i)
      all.emplace_back(best.theta[static_cast<std::size_t>(i)], best.vectors.col(i));
    for (int i : take) all.emplace_back(extra.theta[static_cast<std::size_t>(i)], extra.vectors.col(i));
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return std::abs(a.first) > std::abs(b.first); });
    all.resize(static_cast<std::size_t>(count));
    best.theta.clear();
    for (int i = 0; i < count; ++i) {
      best.theta.push_back(all[static_cast<std::size_t>(i)].first);
      best.vectors.col(i) = all[static_cast<std::size_t>(i)].second;
    }
    best.max_residual = std::max(best.max_residual, extra.max_residual);
  }
  ShiftInvertResult out;
  out.max_residual = best.max_residual;
  std::vector<int> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> lam(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) lam[static_cast<std::size_t>(i)] = sigma + 1.0 / best.theta[static_cast<std::size_t>(i)];
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return lam[static_cast<std::size_t>(a)] < lam[static_cast<std::size_t>(b)]; });
  out.vectors.resize(dim, count);
  for (int i = 0; i < count; ++i) {
    out.eigenvalues.push_back(lam[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
    out.vectors.col(i) = best.vectors.col(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

double hermiticity_defect(const Eigen::MatrixXcd& A) {
  const double n = A.norm();
  return n == 0.0 ? 0.0 : (A - A.adjoint()).norm() / n;
}

double hermiticity_defect(const SparseMatrixC& A) {
  const double n = A.norm();
  if (n == 0.0) return 0.0;
  const SparseMatrixC D = A - SparseMatrixC(A.adjoint());
  return D.norm() / n;
}

std::vector<double> hermitian_eigensolve(const Eigen::MatrixXcd& A, int count) {
  if (A.rows() != A.cols()) throw DomainError("matrix must be square");
  if (count < 1) throw DomainError("count must be >= 1");
  if (A.rows() > 12000) throw DomainError("dense eigensolve limited to dimension 12000");
  if (hermiticity_defect(A) > 1e-12) throw DomainError("matrix is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("dense Hermitian eigensolver failed");
  return lowest(es.eigenvalues(), count);
}

std::vector<double> hermitian_eigensolve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int count) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw DomainError("pencil matrices must be square and of equal size");
  if (count < 1) throw DomainError("count must be >= 1");
  if (A.rows() > 12000) throw DomainError("dense eigensolve limited to dimension 12000");
  if ((A - A.transpose()).norm() > 1e-12 * A.norm() || (B - B.transpose()).norm() > 1e-12 * B.norm())
    throw DomainError("pencil is not symmetric");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed (B not positive definite?)");
  return lowest(es.eigenvalues(), count);
}

std::vector<double> hermitian_eigensolve(const SparseMatrixC& A, int count, double sigma, const EigOptions& opts) {
  if (A.rows() != A.cols()) throw DomainError("matrix must be square");
  if (count < 1 || count > A.rows()) throw DomainError("count out of range");
  if (A.rows() > 120000) throw DomainError("sparse eigensolve limited to dimension 1.2e5");
  if (hermiticity_defect(A) > 1e-12) throw DomainError("matrix is not Hermitian");
  SparseMatrixC shifted = A;
  for (Eigen::Index i = 0; i < A.rows(); ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrixC> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU of A - sigma*I failed; sigma may be an eigenvalue");
  const LinearOperator inv = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out = lu.solve(in); };
  auto r = shift_invert_eigensolve(inv, A.rows(), sigma, count, opts);
  return r.eigenvalues;
}

}  // namespace localgap::oracle
