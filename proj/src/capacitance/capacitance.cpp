#include "localgap/capacitance.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "localgap/errors.hpp"
#include "localgap/parallel.hpp"

namespace localgap {

std::string_view to_string(CapacitanceMethod m) {
  return m == CapacitanceMethod::Analytic ? "Analytic" : "BEM";
}

CapacitanceResult capacitance_sphere() {
  CapacitanceResult r;
  r.q = 1.0;
  r.method = CapacitanceMethod::Analytic;
  r.estimated_error = 0.0;
  return r;
}

CapacitanceResult capacitance_ellipsoid(double a1, double a2, double a3) {
  if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(a3))
    throw DomainError("ellipsoid semiaxes must be positive and finite");
  if (!(a1 >= a2 && a2 >= a3)) throw DomainError("ellipsoid semiaxes must be ordered a1 >= a2 >= a3");

  // s = a1²(1/w² − 1) maps [0, ∞) onto (0, 1]. For a thin ellipsoid the
  // integrand peaks sharply at w = 1, so 1 − w comes from the quadrature's
  // endpoint complement instead of a cancelling subtraction.
  const double b2 = a2 * a2 / (a1 * a1), b3 = a3 * a3 / (a1 * a1);
  auto integrand = [&](double w, double wc) {
    const double d = w > 0.5 ? wc : 1.0 - w;
    const double base = d * (2.0 - d);
    return 1.0 / std::sqrt((base + b2 * w * w) * (base + b3 * w * w));
  };
  boost::math::quadrature::tanh_sinh<double> quad;
  double err = 0.0;
  const double integral = quad.integrate(integrand, 0.0, 1.0, 1e-13, &err);
  CapacitanceResult r;
  r.q = a1 / integral;
  r.method = CapacitanceMethod::Analytic;
  r.estimated_error = r.q * err / integral;
  return r;
}

double coplanar_single_layer(const Eigen::Vector3d& x, const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                             const Eigen::Vector3d& p2) {
  const Eigen::Vector3d n = (p1 - p0).cross(p2 - p0).normalized();
  const Eigen::Vector3d* v[3] = {&p0, &p1, &p2};
  double sum = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector3d& a = *v[e];
    const Eigen::Vector3d& b = *v[(e + 1) % 3];
    const Eigen::Vector3d t = (b - a).normalized();
    const Eigen::Vector3d outward = t.cross(n);
    const double d = (a - x).dot(outward);
    if (std::abs(d) < 1e-15 * (b - a).norm()) continue;
    const double sa = (a - x).dot(t), sb = (b - x).dot(t);
    sum += d * (std::asinh(sb / std::abs(d)) - std::asinh(sa / std::abs(d)));
  }
  return sum;
}

namespace {

double solve_bem(const TriangleMesh& mesh, const BemOptions& opts) {
  const std::size_t n = mesh.face_count();
  if (n > opts.max_unknowns)
    throw DomainError("BEM system with " + std::to_string(n) + " unknowns exceeds the dense limit");

  std::vector<Eigen::Vector3d> centroid(n);
  std::vector<double> area(n);
  for (std::size_t j = 0; j < n; ++j) {
    centroid[j] = mesh.centroid(j);
    area[j] = mesh.area(j);
  }

  // Kernel 1/(4π|x−y|): unit potential on the unit sphere needs charge 4π.
  const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  Eigen::MatrixXd A(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        const auto& t = mesh.faces()[i];
        const auto& v = mesh.vertices();
        A(i, j) = inv4pi * coplanar_single_layer(centroid[i], v[t[0]], v[t[1]], v[t[2]]);
      } else {
        A(i, j) = inv4pi * area[j] / (centroid[i] - centroid[j]).norm();
      }
    }
  });

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond >= opts.min_rcond))
    throw NumericalError("BEM system is ill-conditioned (rcond estimate " + std::to_string(rcond) + ")");
  const Eigen::VectorXd sigma = lu.solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));

  double charge = 0.0;
  for (std::size_t j = 0; j < n; ++j) charge += sigma[static_cast<Eigen::Index>(j)] * area[j];
  return charge * inv4pi;
}

}  // namespace

CapacitanceResult capacitance_bem(const TriangleMesh& mesh, const BemOptions& opts) {
  mesh.validate();
  CapacitanceResult r;
  r.method = CapacitanceMethod::BEM;
  r.mesh_size = static_cast<int>(mesh.face_count());
  r.q = solve_bem(mesh, opts);
  if (!(r.q > 0.0)) throw NumericalError("BEM produced a non-positive capacitance");
  if (opts.richardson) {
    const double fine = solve_bem(mesh.subdivided(), opts);
    r.extrapolated_q = 2.0 * fine - r.q;
    r.estimated_error = std::abs(*r.extrapolated_q - r.q);
  }
  return r;
}

CapacitanceResult capacitance(const InclusionShape& shape, const BemOptions& opts) {
  struct Visitor {
    const BemOptions& opts;
    CapacitanceResult operator()(const SphereShape&) const { return capacitance_sphere(); }
    CapacitanceResult operator()(const EllipsoidShape& e) const { return capacitance_ellipsoid(e.a1, e.a2, e.a3); }
    CapacitanceResult operator()(const MeshShape& m) const { return capacitance_bem(m.mesh, opts); }
  };
  return std::visit(Visitor{opts}, shape);
}

}  // namespace localgap
