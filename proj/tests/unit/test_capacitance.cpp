#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>
#include <boost/math/special_functions/ellint_rf.hpp>

#include "localgap/capacitance.hpp"
#include "localgap/errors.hpp"

using namespace localgap;

namespace {

double prolate_closed_form(double a1, double a3) { return std::sqrt(a1 * a1 - a3 * a3) / std::acosh(a1 / a3); }
double oblate_closed_form(double a1, double a3) { return std::sqrt(a1 * a1 - a3 * a3) / std::acos(a3 / a1); }

// Plain midpoint-rule integral of 1/|x − y| over a triangle, refined enough
// to check the closed-form self term.
double brute_triangle_integral(const Eigen::Vector3d& x, const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                               const Eigen::Vector3d& p2, int n) {
  double sum = 0.0;
  const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm() / (n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) {
      const Eigen::Vector3d up = p0 + ((i + 1.0 / 3) * (p1 - p0) + (j + 1.0 / 3) * (p2 - p0)) / n;
      sum += area / (up - x).norm();
      if (i + j + 1 < n) {
        const Eigen::Vector3d dn = p0 + ((i + 2.0 / 3) * (p1 - p0) + (j + 2.0 / 3) * (p2 - p0)) / n;
        sum += area / (dn - x).norm();
      }
    }
  return sum;
}

}  // namespace

TEST_CASE("sphere capacitance is exactly one") {
  const auto r = capacitance_sphere();
  CHECK(r.q == 1.0);
  CHECK(r.method == CapacitanceMethod::Analytic);
  CHECK(*r.estimated_error == 0.0);
  CHECK(capacitance(SphereShape{}).q == 1.0);
}

TEST_CASE("ellipsoid quadrature against spheroid closed forms") {
  CHECK(capacitance_ellipsoid(1, 1, 1).q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(capacitance_ellipsoid(2, 1, 1).q == doctest::Approx(prolate_closed_form(2, 1)).epsilon(1e-8));
  CHECK(capacitance_ellipsoid(2, 1, 1).q == doctest::Approx(1.3151907222040506).epsilon(1e-10));
  CHECK(capacitance_ellipsoid(1, 1, 0.5).q == doctest::Approx(oblate_closed_form(1, 0.5)).epsilon(1e-8));
  CHECK(capacitance_ellipsoid(1, 1, 0.5).q == doctest::Approx(0.8269933431326879).epsilon(1e-10));
  CHECK(capacitance_ellipsoid(5, 5, 0.1).q == doctest::Approx(oblate_closed_form(5, 0.1)).epsilon(1e-8));
  CHECK(capacitance_ellipsoid(10, 1, 1).q == doctest::Approx(prolate_closed_form(10, 1)).epsilon(1e-8));
  // Flat disk limit 2r/π.
  CHECK(capacitance_ellipsoid(1, 1, 1e-8).q == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-6));
  // Carlson form: the defining integral equals 2·R_F(a1², a2², a3²).
  CHECK(capacitance_ellipsoid(3, 2, 1).q == doctest::Approx(1.0 / boost::math::ellint_rf(9.0, 4.0, 1.0)).epsilon(1e-12));
  // Scaling.
  CHECK(capacitance_ellipsoid(6, 4, 2).q == doctest::Approx(2.0 * capacitance_ellipsoid(3, 2, 1).q).epsilon(1e-12));
  CHECK_THROWS_AS(capacitance_ellipsoid(1, 1, 0), DomainError);
  CHECK_THROWS_AS(capacitance_ellipsoid(1, 2, 0.5), DomainError);
  CHECK(capacitance(EllipsoidShape{2, 1, 1}).q == capacitance_ellipsoid(2, 1, 1).q);
}

TEST_CASE("closed-form self term matches brute-force quadrature") {
  const Eigen::Vector3d p0(0, 0, 0), p1(1.0, 0.1, 0.2), p2(0.3, 0.9, -0.1);
  const Eigen::Vector3d c = (p0 + p1 + p2) / 3.0;
  const double exact = coplanar_single_layer(c, p0, p1, p2);
  CHECK(exact == doctest::Approx(brute_triangle_integral(c, p0, p1, p2, 801)).epsilon(2e-3));
  // Point outside the triangle but in its plane.
  const Eigen::Vector3d out = p0 + 1.5 * (p1 - p0) + 0.2 * (p2 - p0);
  CHECK(coplanar_single_layer(out, p0, p1, p2) ==
        doctest::Approx(brute_triangle_integral(out, p0, p1, p2, 400)).epsilon(1e-4));
}

TEST_CASE("mesh generators produce valid closed meshes") {
  CHECK(make_icosphere(3).face_count() == 1280);
  CHECK(make_octasphere(16).face_count() == 2048);
  CHECK(make_cube_mesh(4).face_count() == 192);
  CHECK_NOTHROW(make_icosphere(2).validate());
  CHECK_NOTHROW(make_octasphere(5).validate());
  CHECK_NOTHROW(make_cube_mesh(3).validate());
  CHECK_NOTHROW(make_ellipsoid_mesh(2, 1, 1, 4).validate());
  CHECK(make_cube_mesh(3).enclosed_volume() == doctest::Approx(1.0));
  CHECK_NOTHROW(make_cube_mesh(2).subdivided().validate());
  // Reflection keeps the mesh outward-oriented.
  CHECK_NOTHROW(make_icosphere(1).transformed(Eigen::Vector3d(-1, 1, 1).asDiagonal()).validate());
}

TEST_CASE("mesh validation rejects open and inverted meshes") {
  auto m = make_icosphere(1);
  auto faces = m.faces();
  faces.pop_back();
  CHECK_THROWS_AS(TriangleMesh(m.vertices(), faces).validate(), ValidationError);
  auto flipped = m.faces();
  for (auto& t : flipped) std::swap(t[1], t[2]);
  CHECK_THROWS_AS(TriangleMesh(m.vertices(), flipped).validate(), ValidationError);
  auto degenerate = m.faces();
  degenerate[0][1] = degenerate[0][0];
  CHECK_THROWS_AS(TriangleMesh(m.vertices(), degenerate).validate(), ValidationError);
  CHECK_THROWS_AS(TriangleMesh(m.vertices(), {{0, 1, 999}}), ValidationError);
  CHECK_THROWS_AS(capacitance_bem(TriangleMesh(m.vertices(), faces)), ValidationError);
}

TEST_CASE("OFF round trip and grammar") {
  const auto m = make_icosphere(1);
  std::stringstream ss;
  write_off(ss, m);
  const auto back = read_off(ss);
  CHECK(back.faces() == m.faces());
  CHECK(back.vertices().size() == m.vertices().size());
  for (std::size_t i = 0; i < m.vertices().size(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);

  std::istringstream tetra(
      "# tetrahedron\n4 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1  # apex\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  const auto t = read_off(tetra);
  CHECK_NOTHROW(t.validate());
  CHECK(t.enclosed_volume() == doctest::Approx(1.0 / 6.0));

  std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_AS(read_off(quad), ValidationError);
  std::istringstream truncated("OFF\n4 4\n0 0 0\n");
  CHECK_THROWS_AS(read_off(truncated), ValidationError);
  CHECK_THROWS_AS(read_off_file("/nonexistent/mesh.off"), ValidationError);
}

TEST_CASE("BEM unit sphere and prolate spheroid") {
  const auto sphere = capacitance_bem(make_icosphere(3));
  CHECK(sphere.method == CapacitanceMethod::BEM);
  CHECK(*sphere.mesh_size == 1280);
  CHECK(sphere.q == doctest::Approx(1.0).epsilon(0.02));
  CHECK_FALSE(sphere.estimated_error.has_value());

  const auto prolate = capacitance_bem(make_ellipsoid_mesh(2, 1, 1, 16));
  CHECK(*prolate.mesh_size >= 2000);
  CHECK(prolate.q == doctest::Approx(capacitance_ellipsoid(2, 1, 1).q).epsilon(0.02));
}

TEST_CASE("BEM invariances: scaling, rotation, refinement") {
  const auto base = make_icosphere(2);
  const double q = capacitance_bem(base).q;
  CHECK(q > 0.0);
  CHECK(capacitance_bem(base.scaled(2.5)).q == doctest::Approx(2.5 * q).epsilon(1e-10));
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  CHECK(capacitance_bem(base.transformed(R)).q == doctest::Approx(q).epsilon(1e-9));

  double prev_gap = 1e9;
  double prev = capacitance_bem(make_icosphere(0)).q;
  for (int level = 1; level <= 3; ++level) {
    const double cur = capacitance_bem(make_icosphere(level)).q;
    const double gap = std::abs(cur - prev);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    prev = cur;
  }
}

TEST_CASE("BEM cube with Richardson extrapolation") {
  const auto r = capacitance_bem(make_cube_mesh(8), BemOptions{.richardson = true});
  REQUIRE(r.extrapolated_q.has_value());
  // Self-convergence fixture for the unit cube; 0.6607 is the accepted reference.
  CHECK(*r.extrapolated_q == doctest::Approx(0.6607).epsilon(0.02));
  CHECK(*r.estimated_error > 0.0);
  CHECK(r.q == doctest::Approx(0.6607).epsilon(0.05));
}

TEST_CASE("BEM rejects oversize systems") {
  CHECK_THROWS_AS(capacitance_bem(make_icosphere(2), BemOptions{.max_unknowns = 10}), DomainError);
}
