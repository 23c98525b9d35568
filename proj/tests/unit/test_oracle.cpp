#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "localgap/dirichlet.hpp"
#include "localgap/errors.hpp"
#include "localgap/oracle/bloch_green.hpp"
#include "localgap/oracle/eigensolve.hpp"
#include "localgap/oracle/fd.hpp"
#include "localgap/oracle/gap_measure.hpp"
#include "localgap/oracle/pwe.hpp"
#include "localgap/transmission.hpp"

using namespace localgap;
using namespace localgap::oracle;
using std::numbers::pi;

namespace {

const WaveVector kGeneric(0.2, 0.1, 0.15);

transmission::TransmissionParams weak_contrast() {
  // α = 1 − 1.2 = −0.2, σ = 1.2 → β = 0.1875.
  return transmission::TransmissionParams::from_volume_fraction({1.0, 1.2, 1.0, 1.0 / 1.2}, 0.01);
}

}  // namespace

TEST_CASE("dense eigensolve basics") {
  const Eigen::MatrixXcd J = Eigen::MatrixXcd::Ones(2, 2);
  const auto ev = hermitian_eigensolve(J, 2);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(4, 4);
  D.diagonal() << 3.0, -1.0, 7.0, 0.5;
  CHECK(hermitian_eigensolve(D, 4) == std::vector<double>{-1.0, 0.5, 3.0, 7.0});
  CHECK(hermitian_eigensolve(D, 2) == std::vector<double>{-1.0, 0.5});

  Eigen::MatrixXcd N = D;
  N(0, 1) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(hermitian_eigensolve(N, 1), DomainError);

  // A x = λ B x with B = diag(2, 4), A = diag(2, 12) → {1, 3}.
  Eigen::MatrixXd A = Eigen::Vector2d(2.0, 12.0).asDiagonal();
  Eigen::MatrixXd B = Eigen::Vector2d(2.0, 4.0).asDiagonal();
  const auto g = hermitian_eigensolve(A, B, 2);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(3.0));
}

TEST_CASE("Krylov-Schur finds repeated eigenvalues") {
  // diag(1,1,1,2,3,...) through a unitary-free sparse path.
  const int n = 200;
  SparseMatrixC A(n, n);
  for (int i = 0; i < n; ++i) A.insert(i, i) = i < 3 ? 1.0 : 1.0 + i;
  A.makeCompressed();
  const auto ev = hermitian_eigensolve(A, 4, 0.0);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(1.0));
  CHECK(ev[2] == doctest::Approx(1.0));
  CHECK(ev[3] == doctest::Approx(4.0));
}

TEST_CASE("FD grid and mask") {
  const FDGrid g(16, 0.8);
  CHECK(g.h() == doctest::Approx(2 * pi / 16));
  CHECK(g.coord(8) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.nodes_across() == 5);
  CHECK(g.masked_nodes().size() == 33);
  for (auto idx : g.masked_nodes()) CHECK(g.inclusion_mask()[idx] == 1);
  CHECK(FDGrid(16, 0.0).masked_nodes().empty());
  CHECK_THROWS_AS(FDGrid(4, 0.1), DomainError);
  CHECK_THROWS_AS(FDGrid(16, -0.1), DomainError);
}

TEST_CASE("FD symbol and assembly") {
  CHECK(fd_symbol(kGeneric, 32, 0, 0, 0) == doctest::Approx(kGeneric.squared_norm()).epsilon(1e-15));
  // Symbol → |k − m|² as h → 0.
  CHECK(fd_symbol(kGeneric, 400, 1, 0, 0) ==
        doctest::Approx((kGeneric.vec() - Eigen::Vector3d(1, 0, 0)).squaredNorm()).epsilon(1e-4));
  const auto A = assemble_fd_operator(kGeneric, FDGrid(16, 0.8));
  CHECK(hermiticity_defect(A) <= 1e-12);
  CHECK(A.rows() == 4096);
  std::ostringstream os;
  write_triplets(os, assemble_fd_operator(kGeneric, FDGrid(8, 0.0)));
  std::istringstream is(os.str());
  long n = 0, nnz = 0;
  is >> n >> nnz;
  CHECK(n == 512);
  CHECK(nnz == 512 * 7);
}

TEST_CASE("FD unperturbed spectrum") {
  const auto r = fd_dirichlet_eigenvalues(kGeneric, 0.0, 32, 6);
  CHECK(r.eigenvalues[0] == doctest::Approx(0.0725).epsilon(1e-12));
  CHECK(r.residual_norm <= 1e-8);
  CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
  // |k − m|² for m = ±e_x, ±e_y, ±e_z within O(h²).
  for (const Eigen::Vector3d m : {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)}) {
    const double cone = (kGeneric.vec() - m).squaredNorm();
    double best = INFINITY;
    for (double v : r.eigenvalues) best = std::min(best, std::abs(v - cone));
    CHECK(best <= 1e-2);
  }
  const auto zero = fd_dirichlet_eigenvalues(WaveVector(0, 0, 0), 0.0, 16, 1);
  CHECK(std::abs(zero.eigenvalues[0]) <= 1e-10);
}

TEST_CASE("FD shift-invert paths agree") {
  const auto fast = fd_dirichlet_eigenvalues(kGeneric, 1.0, 16, 5);
  const auto sparse = hermitian_eigensolve(assemble_fd_operator(kGeneric, FDGrid(16, 1.0), 1e6), 5, -0.1);
  for (int i = 0; i < 5; ++i) CHECK(fast.eigenvalues[i] == doctest::Approx(sparse[i]).epsilon(1e-10));
  CHECK(fast.eigenvalues[0] == doctest::Approx(0.143939526886).epsilon(1e-9));

  FdOptions near;
  near.target = 0.8;
  const auto t = fd_dirichlet_eigenvalues(kGeneric, 1.0, 16, 2, near);
  CHECK(t.eigenvalues[0] == doctest::Approx(0.726983140973).epsilon(1e-9));
  CHECK(t.eigenvalues[1] == doctest::Approx(0.831344251905).epsilon(1e-9));
}

TEST_CASE("FD errors and determinism") {
  CHECK_THROWS_AS(fd_dirichlet_eigenvalues(kGeneric, 0.2, 48, 1), ResolutionError);
  CHECK_THROWS_AS(fd_dirichlet_eigenvalues(kGeneric, 0.3, 8, 1), DomainError);
  CHECK_THROWS_AS(fd_dirichlet_eigenvalues(kGeneric, 1.6, 32, 1), DomainError);
  CHECK_THROWS_AS(fd_dirichlet_eigenvalues(kGeneric, 0.3, 64, 1), DomainError);
  CHECK_THROWS_AS(fd_dirichlet_eigenvalues(kGeneric, 0.8, 16, 0), DomainError);
  const auto a = fd_dirichlet_eigenvalues(kGeneric, 0.8, 24, 3);
  const auto b = fd_dirichlet_eigenvalues(kGeneric, 0.8, 24, 3);
  CHECK(a.eigenvalues == b.eigenvalues);
}

TEST_CASE("FD grid convergence") {
  // |λ(n) − λ(2n)| for n = 16, 24.
  double lam[4];
  const int ns[4] = {16, 24, 32, 48};
  for (int i = 0; i < 4; ++i) lam[i] = fd_dirichlet_eigenvalues(kGeneric, 0.8, ns[i], 1).eigenvalues[0];
  CHECK(std::abs(lam[0] - lam[2]) > std::abs(lam[1] - lam[3]));
}

TEST_CASE("FD staircase shift at a = 0.3") {
  dirichlet::DirichletParams p;
  p.a = 0.3;
  const double asym = dirichlet::epsilon_nonexceptional(kGeneric, p) * kGeneric.norm();
  const auto r = fd_dirichlet_eigenvalues(kGeneric, 0.3, 48, 1);
  const double shift = std::sqrt(r.eigenvalues[0]) - kGeneric.norm();
  CHECK(std::abs(shift / asym - 1.0) <= 0.25);
  CHECK(shift == doctest::Approx(0.027740786033).epsilon(1e-8));
}

TEST_CASE("Ewald Green's function") {
  CHECK(bloch_green_regular_part(kGeneric, 0.08) == doctest::Approx(-0.5659051530319767).epsilon(1e-10));
  // Independent of the splitting parameter.
  EwaldOptions o;
  o.split = 0.15;
  o.m_max = 18;
  CHECK(bloch_green_regular_part(kGeneric, 0.08, o) ==
        doctest::Approx(bloch_green_regular_part(kGeneric, 0.08)).epsilon(1e-10));
  // Lattice version converges at O(h).
  double prev = INFINITY;
  for (int n : {24, 48, 96}) {
    const double err = std::abs(fd_green_regular_part(kGeneric, n, 0.08) - bloch_green_regular_part(kGeneric, 0.08));
    CHECK(err < prev);
    CHECK(err * n == doctest::Approx(0.01300).epsilon(0.02));
    prev = err;
  }
}

TEST_CASE("s-wave log derivative") {
  CHECK(swave_log_derivative(0.0, 0.3) == doctest::Approx(1.0 / 0.3));
  CHECK(swave_log_derivative(1e-9, 0.3) == doctest::Approx(1.0 / 0.3));
  CHECK(swave_log_derivative(0.5, 0.3) ==
        doctest::Approx(std::sqrt(0.5) / std::tan(std::sqrt(0.5) * 0.3)).epsilon(1e-14));
  CHECK(swave_log_derivative(-0.5, 0.3) ==
        doctest::Approx(std::sqrt(0.5) / std::tanh(std::sqrt(0.5) * 0.3)).epsilon(1e-14));
  CHECK_THROWS_AS(swave_log_derivative(200.0, 0.3), DomainError);
}

TEST_CASE("monopole sphere model") {
  const double e1 = ewald_monopole_dirichlet_eigenvalues(kGeneric, 0.1, 1).eigenvalues[0];
  const double e2 = ewald_monopole_dirichlet_eigenvalues(kGeneric, 0.2, 1).eigenvalues[0];
  CHECK(e1 == doctest::Approx(0.0777560431401).epsilon(1e-9));
  CHECK(e2 == doctest::Approx(0.0834153385699).epsilon(1e-9));
  const auto f2 = fd_monopole_dirichlet_eigenvalues(kGeneric, 0.2, 48, 3);
  CHECK(f2.eigenvalues[0] == doctest::Approx(e2).epsilon(2e-4));
  CHECK(f2.residual_norm <= 1e-8);
  CHECK(std::is_sorted(f2.eigenvalues.begin(), f2.eigenvalues.end()));
  // Degenerate poles keep all but one level unperturbed: k = 0 has sixfold |m| = 1.
  const auto z = fd_monopole_dirichlet_eigenvalues(WaveVector(0, 0, 0), 0.2, 32, 6);
  const double first_shell = fd_symbol(WaveVector(0, 0, 0), 32, 1, 0, 0);
  int at_shell = 0;
  for (double v : z.eigenvalues)
    if (v == first_shell) ++at_shell;
  CHECK(at_shell == 5);
  CHECK(z.eigenvalues[0] > 0.0);
}

TEST_CASE("sphere indicator Fourier coefficients") {
  CHECK(sphere_indicator_fourier({0, 0, 0}, 0.5) == doctest::Approx(0.0021121).epsilon(1e-4));
  CHECK(sphere_indicator_fourier({0, 0, 0}, 0.5) == transmission::volume_fraction(0.5));
  // Continuity through the small-argument branch.
  const double a = 1e-4;
  CHECK(sphere_indicator_fourier({1, 0, 0}, a) == doctest::Approx(transmission::volume_fraction(a)).epsilon(1e-8));
  CHECK(sphere_indicator_fourier({1, 0, 0}, 0.0099999) ==
        doctest::Approx(sphere_indicator_fourier({1, 0, 0}, 0.0100001)).epsilon(1e-5));
  // Parseval: Σ χ̂² rises monotonically toward f.
  const double r = 0.9, f = transmission::volume_fraction(r);
  double prev = 0.0, first = 0.0;
  for (int G = 2; G <= 8; ++G) {
    double s = 0.0;
    const PWEBasis basis(G);
    for (const auto& g : basis.vectors()) s += std::pow(sphere_indicator_fourier(g, r), 2);
    CHECK(s > prev);
    CHECK(s < f);
    if (G == 2) first = s;
    prev = s;
  }
  CHECK(f - prev < 0.5 * (f - first));
  CHECK_THROWS_AS(sphere_indicator_fourier({0, 0, 0}, 0.0), DomainError);
}

TEST_CASE("PWE basis") {
  const PWEBasis b(2);
  CHECK(b.size() == 125);
  CHECK(b.vectors().front() == std::array<int, 3>{-2, -2, -2});
  CHECK(std::is_sorted(b.vectors().begin(), b.vectors().end()));
  for (const auto& g : b.vectors()) {
    CHECK(b.index_of({-g[0], -g[1], -g[2]}) >= 0);
    CHECK(b.vectors()[static_cast<std::size_t>(b.index_of(g))] == g);
  }
  CHECK(b.index_of({3, 0, 0}) == -1);
}

TEST_CASE("PWE zero contrast is exact") {
  const transmission::TransmissionParams p({1.0, 1.0, 1.0, 1.0}, 0.7);
  const WaveVector k(0.3, -0.1, 0.45);
  const auto r = pwe_transmission_eigenvalues(k, p, 2, 125);
  std::vector<double> cones;
  const PWEBasis basis(2);
  for (const auto& g : basis.vectors()) cones.push_back((k.vec() + Eigen::Vector3d(g[0], g[1], g[2])).squaredNorm());
  std::sort(cones.begin(), cones.end());
  for (std::size_t i = 0; i < cones.size(); ++i) CHECK(r.eigenvalues[i] == doctest::Approx(cones[i]).epsilon(1e-12));
}

TEST_CASE("PWE assembly checks") {
  const auto p = weak_contrast();
  const auto sys = assemble_pwe(WaveVector(0, 0, 0.5), p, 3);
  CHECK((sys.stiffness - sys.stiffness.transpose()).norm() <= 1e-12 * sys.stiffness.norm());
  CHECK(sys.warnings.empty());
  CHECK_THROWS_AS(assemble_pwe(WaveVector(0, 0, 0.5), p, 1), DomainError);
  CHECK_THROWS_AS(assemble_pwe(WaveVector(0, 0, 0.5), p, 11), DomainError);
  const transmission::TransmissionParams small({1.0, 1.2, 1.0, 1.0}, 0.2);
  CHECK(assemble_pwe(WaveVector(0, 0, 0.5), small, 3).warnings.size() == 1);
  CHECK(pwe_transmission_eigenvalues(WaveVector(0, 0, 0.5), small, 3, 2).resolution.find("warning") !=
        std::string::npos);
}

TEST_CASE("PWE weak-contrast splitting") {
  const auto p = weak_contrast();
  const WaveVector k0(0, 0, 0.5);
  const double mu = transmission::splitting_mu(k0, LatticeShift(0, 0, 1), p);
  CHECK(mu / 0.5 == doctest::Approx(1.9375e-3).epsilon(1e-12));
  const auto r = pwe_transmission_eigenvalues(k0, p, 3, 4);
  const double split = std::sqrt(r.eigenvalues[1]) - std::sqrt(r.eigenvalues[0]);
  CHECK(split / 1.9375e-3 == doctest::Approx(0.9413843396).epsilon(1e-8));
  CHECK(r.residual_norm <= 1e-8);
}

TEST_CASE("gap measurement: zero contrast has no gap") {
  const transmission::TransmissionParams p({1.0, 1.0, 1.0, 1.0}, 0.8);
  OracleResolution res;
  const auto m = measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p, res, {-0.02, 0.0, 0.02});
  CHECK_FALSE(m.gap.has_value());
  CHECK(m.samples.size() == 3);
  CHECK(m.samples[1].lower == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.samples[1].upper == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gap measurement: weak-contrast transmission gap") {
  const auto p = weak_contrast();
  OracleResolution res;
  std::vector<double> deltas;
  for (int i = -5; i <= 5; ++i) deltas.push_back(0.01 * i);
  const auto m = measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p, res, deltas);
  REQUIRE(m.gap.has_value());
  const auto pred = transmission::local_gap_transmission(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p);
  const double ratio = (m.gap->second - m.gap->first) / pred.interval->width();
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("gap measurement: transmission pair with nu > 1") {
  const auto p = weak_contrast();
  OracleResolution res;
  res.count = 16;
  const WaveVector k0(0.5, 0.6, 0.3);
  const LatticeShift m0(1, 0, 0);
  const auto m = measure_gap_numeric(k0, m0, p, res, {-0.02, -0.01, 0.0, 0.01, 0.02});
  const double scale = transmission::splitting_mu(k0, m0, p) / k0.norm();
  if (m.gap) CHECK(m.gap->second - m.gap->first < 0.1 * scale);
}

TEST_CASE("gap measurement: Dirichlet sphere a = 0.4") {
  dirichlet::DirichletParams p;
  p.a = 0.4;
  OracleResolution res;
  const WaveVector k0(0, 0, 0.5);
  const LatticeShift m0(0, 0, 1);
  const auto m = measure_gap_numeric(k0, m0, p, res, {-0.01, 0.0, 0.01});
  REQUIRE(m.gap.has_value());
  CHECK(m.gap->first >= 0.5);
  const double ratio = (m.gap->second - m.gap->first) / dirichlet::local_gap(k0, m0, p)->width();
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);
}

TEST_CASE("gap measurement: tracking errors") {
  dirichlet::DirichletParams p;
  p.a = 0.8;
  OracleResolution res;
  res.fd_n = 16;
  res.count = 2;
  CHECK_THROWS_AS(measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p, res, {0.0}), TrackingError);
  res.count = 8;
  CHECK_THROWS_AS(measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(1, 0, 0), p, res, {0.0}), DomainError);
  CHECK_THROWS_AS(measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p, res, {}), DomainError);
  try {
    res.count = 2;
    measure_gap_numeric(WaveVector(0, 0, 0.5), LatticeShift(0, 0, 1), p, res, {0.0});
  } catch (const TrackingError& e) {
    CHECK(e.diagnostics().find("window") != std::string::npos);
  }
}
