#include "localgap/oracle/fd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "fft3.hpp"
#include "localgap/errors.hpp"
#include "localgap/parallel.hpp"
#include "secular.hpp"

namespace localgap::oracle {

using std::numbers::pi;

namespace {

// Watson's simple-cubic integral; G_lattice(0) = kWatson / 6 for −Δ with unit spacing.
constexpr double kWatson = 1.516386059151978;

int freq(int q, int n) { return q < (n + 1) / 2 ? q : q - n; }

void check_k(const WaveVector& k) {
  for (int d = 0; d < 3; ++d)
    if (!std::isfinite(k[d])) throw DomainError("k must be finite");
}

// (P A P − σ)⁻¹ on the free nodes, via FFT for the periodic part and a
// capacitance matrix for the masked nodes (Woodbury).
class MaskedShiftInvert {
 public:
  MaskedShiftInvert(const FDGrid& grid, const std::vector<double>& symbol, double sigma)
      : grid_(grid), fft_(grid.n()), scale_(symbol.size()) {
    const double N = static_cast<double>(symbol.size());
    for (std::size_t p = 0; p < symbol.size(); ++p) scale_[p] = 1.0 / ((symbol[p] - sigma) * N);
    const auto& masked = grid.masked_nodes();
    const auto nm = static_cast<Eigen::Index>(masked.size());
    if (nm == 0) return;
    // g(d) = (1/N) Σ_p e^{ip·dh}/(σ_p − σ); C_ij = g(x_i − x_j).
    Eigen::VectorXcd g(static_cast<Eigen::Index>(symbol.size()));
    for (std::size_t p = 0; p < symbol.size(); ++p) g[static_cast<Eigen::Index>(p)] = scale_[p];
    fft_.backward(g.data());
    const int n = grid.n();
    auto split = [n](std::size_t idx, int& i, int& j, int& l) {
      l = static_cast<int>(idx % n);
      j = static_cast<int>((idx / n) % n);
      i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    };
    Eigen::MatrixXcd C(nm, nm);
    for (Eigen::Index r = 0; r < nm; ++r) {
      int ir, jr, lr;
      split(masked[static_cast<std::size_t>(r)], ir, jr, lr);
      for (Eigen::Index c = 0; c < nm; ++c) {
        int ic, jc, lc;
        split(masked[static_cast<std::size_t>(c)], ic, jc, lc);
        C(r, c) = g[static_cast<Eigen::Index>(grid.index((ir - ic + n) % n, (jr - jc + n) % n, (lr - lc + n) % n))];
      }
    }
    lu_.compute(C);
    if (!(lu_.rcond() > 1e-14)) throw NumericalError("capacitance matrix is singular at the chosen shift");
  }

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out = in;
    green(out);
    const auto& masked = grid_.masked_nodes();
    if (masked.empty()) return;
    Eigen::VectorXcd y(static_cast<Eigen::Index>(masked.size()));
    for (std::size_t i = 0; i < masked.size(); ++i) y[static_cast<Eigen::Index>(i)] = out[static_cast<Eigen::Index>(masked[i])];
    const Eigen::VectorXcd c = lu_.solve(y);
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(in.size());
    for (std::size_t i = 0; i < masked.size(); ++i) z[static_cast<Eigen::Index>(masked[i])] = c[static_cast<Eigen::Index>(i)];
    green(z);
    out -= z;
    for (auto idx : masked) out[static_cast<Eigen::Index>(idx)] = 0.0;
  }

 private:
  void green(Eigen::VectorXcd& v) const {
    fft_.forward(v.data());
    for (Eigen::Index p = 0; p < v.size(); ++p) v[p] *= scale_[static_cast<std::size_t>(p)];
    fft_.backward(v.data());
  }

  const FDGrid& grid_;
  detail::Fft3 fft_;
  std::vector<double> scale_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// Shift that keeps a safe distance from every symbol value.
double safe_shift(double sigma, const std::vector<double>& symbol) {
  const double tol = 1e-4 * std::max(1.0, std::abs(sigma));
  for (int attempt = 0; attempt < 50; ++attempt) {
    double closest = INFINITY;
    for (double s : symbol) closest = std::min(closest, std::abs(s - sigma));
    if (closest >= tol) return sigma;
    sigma -= 2.0 * tol;
  }
  return sigma;
}

std::string describe(const FDGrid& g) {
  std::ostringstream os;
  os << "fd n=" << g.n() << " h=" << std::setprecision(6) << g.h() << " a=" << g.a()
     << " masked=" << g.masked_nodes().size();
  return os.str();
}

}  // namespace

FDGrid::FDGrid(int n, double a) : n_(n), a_(a) {
  if (n < 8) throw DomainError("FD grid needs n >= 8");
  if (!std::isfinite(a) || a < 0.0) throw DomainError("inclusion radius must be non-negative");
  mask_.assign(static_cast<std::size_t>(n) * n * n, 0);
  if (a == 0.0) return;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double r2 = coord(i) * coord(i) + coord(j) * coord(j) + coord(l) * coord(l);
        if (r2 < a * a) {
          mask_[index(i, j, l)] = 1;
          masked_.push_back(index(i, j, l));
        }
      }
}

double FDGrid::h() const noexcept { return 2.0 * pi / n_; }
double FDGrid::coord(int i) const noexcept { return -pi + i * h(); }

int FDGrid::nodes_across() const noexcept {
  int c = 0;
  for (int i = 0; i < n_; ++i)
    if (std::abs(coord(i)) < a_) ++c;
  return c;
}

double fd_symbol(const WaveVector& k, int n, int px, int py, int pz) {
  const double h = 2.0 * pi / n;
  const int p[3] = {px, py, pz};
  double s = 0.0;
  for (int d = 0; d < 3; ++d) {
    const double t = p[d] * h;
    s += (2.0 - 2.0 * std::cos(t)) / (h * h) - 2.0 * k[d] * std::sin(t) / h + k[d] * k[d];
  }
  return s;
}

std::vector<double> fd_symbol_table(const WaveVector& k, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        out[(static_cast<std::size_t>(i) * n + j) * n + l] = fd_symbol(k, n, freq(i, n), freq(j, n), freq(l, n));
  return out;
}

SparseMatrixC assemble_fd_operator(const WaveVector& k, const FDGrid& grid, double mask_diagonal) {
  check_k(k);
  const int n = grid.n();
  const double h = grid.h(), ih2 = 1.0 / (h * h);
  const auto& mask = grid.inclusion_mask();
  const std::size_t N = grid.size();
  // Rows are filled independently, then concatenated in index order.
  std::vector<std::vector<Eigen::Triplet<cplx>>> rows(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0) {
    const int i = static_cast<int>(i0);
    auto& t = rows[i0];
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const auto row = static_cast<Eigen::Index>(grid.index(i, j, l));
        if (mask[static_cast<std::size_t>(row)]) {
          t.emplace_back(row, row, mask_diagonal);
          continue;
        }
        t.emplace_back(row, row, 6.0 * ih2 + k.squared_norm());
        const int base[3] = {i, j, l};
        for (int d = 0; d < 3; ++d)
          for (int s : {+1, -1}) {
            int c[3] = {base[0], base[1], base[2]};
            c[d] = (c[d] + s + n) % n;
            const auto col = static_cast<Eigen::Index>(grid.index(c[0], c[1], c[2]));
            if (mask[static_cast<std::size_t>(col)]) continue;
            // 2i k_d (Φ(x+he) − Φ(x−he)) / (2h)
            t.emplace_back(row, col, cplx(-ih2, s * k[d] / h));
          }
      }
  });
  std::vector<Eigen::Triplet<cplx>> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  SparseMatrixC A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  A.setFromTriplets(all.begin(), all.end());
  A.makeCompressed();
  return A;
}

void write_triplets(std::ostream& os, const SparseMatrixC& A) {
  os << A.rows() << ' ' << A.nonZeros() << '\n' << std::setprecision(17);
  for (Eigen::Index c = 0; c < A.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(A, c); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

EigResult fd_dirichlet_eigenvalues(const WaveVector& k, double a, int n, int count, const FdOptions& opts) {
  check_k(k);
  if (n < 16) throw DomainError("fd_dirichlet_eigenvalues needs n >= 16");
  if (count < 1) throw DomainError("count must be >= 1");
  if (!(a >= 0.0) || a >= 0.5 * pi) throw DomainError("inclusion radius must lie in [0, pi/2)");
  if (static_cast<double>(n) * n * n > 1.2e5) throw DomainError("FD dimension limited to 1.2e5 (n <= 49)");
  const FDGrid grid(n, a);
  if (a > 0.0 && grid.nodes_across() < 4) {
    std::ostringstream msg;
    msg << "a=" << a << " spans " << grid.nodes_across() << " nodes at n=" << n << "; need at least 4";
    throw ResolutionError(msg.str());
  }
  const std::size_t N = grid.size();
  const std::size_t free_nodes = N - grid.masked_nodes().size();
  if (static_cast<std::size_t>(count) > free_nodes) throw DomainError("count exceeds the number of free nodes");
  const auto symbol = fd_symbol_table(k, n);
  const SparseMatrixC A = assemble_fd_operator(k, grid, 0.0);

  EigResult res;
  res.k = k;
  res.resolution = describe(grid);
  // Below the lowest symbol value every masked eigenvalue is above σ (interlacing).
  double sigma = opts.target ? *opts.target : *std::min_element(symbol.begin(), symbol.end()) - 0.05;
  sigma = safe_shift(sigma, symbol);
  const MaskedShiftInvert inv(grid, symbol, sigma);
  const LinearOperator op = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { inv.apply(in, out); };
  const Projector project = [&](Eigen::VectorXcd& v) {
    for (auto idx : grid.masked_nodes()) v[static_cast<Eigen::Index>(idx)] = 0.0;
  };
  const auto r = shift_invert_eigensolve(op, static_cast<Eigen::Index>(N), sigma, count, opts.eig, project);
  std::vector<double> vals = r.eigenvalues;
  const Eigen::MatrixXcd& vecs = r.vectors;
  // True residual of the masked operator, relative to max(|λ|, 1).
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const Eigen::VectorXcd x = vecs.col(c) / vecs.col(c).norm();
    Eigen::VectorXcd r = A * x - vals[static_cast<std::size_t>(c)] * x;
    for (auto idx : grid.masked_nodes()) r[static_cast<Eigen::Index>(idx)] = 0.0;
    worst = std::max(worst, r.norm() / std::max(1.0, std::abs(vals[static_cast<std::size_t>(c)])));
  }
  if (worst > 1e-8) {
    std::ostringstream msg;
    msg << "FD eigen-residual " << worst << " exceeds 1e-8 (" << res.resolution << ")";
    throw NumericalError(msg.str());
  }
  res.eigenvalues = std::move(vals);
  res.residual_norm = worst;
  return res;
}

double fd_green_regular_part(const WaveVector& k, int n, double lambda) {
  const auto symbol = fd_symbol_table(k, n);
  const double h = 2.0 * pi / n;
  double s = 0.0;
  for (double v : symbol) s += 1.0 / (v - lambda);
  return s / kCellVolume - kWatson / 6.0 / h;
}

double swave_log_derivative(double lambda, double a) {
  const double x2 = lambda * a * a;
  if (std::abs(x2) < 1e-6) return (1.0 - x2 / 3.0 - x2 * x2 / 45.0) / a;
  if (x2 > 0.0) {
    const double kap = std::sqrt(lambda);
    if (kap * a >= pi) throw DomainError("s-wave model needs kappa*a < pi");
    return kap / std::tan(kap * a);
  }
  const double kap = std::sqrt(-lambda);
  return kap / std::tanh(kap * a);
}

EigResult fd_monopole_dirichlet_eigenvalues(const WaveVector& k, double a, int n, int count) {
  check_k(k);
  if (n < 8) throw DomainError("FD grid needs n >= 8");
  if (count < 1) throw DomainError("count must be >= 1");
  if (!(a > 0.0) || a >= 0.5 * pi) throw DomainError("inclusion radius must lie in (0, pi/2)");
  std::vector<double> poles = fd_symbol_table(k, n);
  const double h = 2.0 * pi / n;
  const double c0 = kWatson / 6.0 / h;
  const std::function<double(double)> F = [&](double lam) {
    double s = 0.0;
    for (double v : poles) s += 1.0 / (v - lam);
    return s / kCellVolume - c0 + swave_log_derivative(lam, a) / (4.0 * pi);
  };
  // F needs the unsorted table; a sorted copy locates the poles.
  std::vector<double> sorted = poles;
  std::sort(sorted.begin(), sorted.end());
  EigResult res;
  res.k = k;
  res.eigenvalues = detail::secular_spectrum(sorted, F, count);
  std::ostringstream os;
  os << "fd-monopole n=" << n << " h=" << std::setprecision(6) << h << " a=" << a;
  res.resolution = os.str();
  // Root residual as a relative λ error: |F| / (|F'| max(1, |λ|)).
  double worst = 0.0;
  for (double lam : res.eigenvalues) {
    if (std::binary_search(sorted.begin(), sorted.end(), lam)) continue;
    double slope = 0.0;
    for (double v : poles) slope += 1.0 / ((v - lam) * (v - lam));
    worst = std::max(worst, std::abs(F(lam)) / (slope / kCellVolume * std::max(1.0, std::abs(lam))));
  }
  res.residual_norm = worst;
  return res;
}

}  // namespace localgap::oracle
