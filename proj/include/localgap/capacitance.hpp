#pragma once

// Shape factor q of a unit-scaled inclusion: its electrostatic capacitance in
// the normalization where the unit sphere has q = 1. An inclusion scaled by
// a has capacitance q·a.

#include <optional>
#include <string_view>
#include <variant>

#include "localgap/mesh.hpp"

namespace localgap {

struct SphereShape {};

struct EllipsoidShape {
  double a1 = 1.0, a2 = 1.0, a3 = 1.0;  // a1 ≥ a2 ≥ a3 > 0
};

struct MeshShape {
  TriangleMesh mesh;
};

using InclusionShape = std::variant<SphereShape, EllipsoidShape, MeshShape>;

enum class CapacitanceMethod { Analytic, BEM };
std::string_view to_string(CapacitanceMethod m);

struct CapacitanceResult {
  double q = 0.0;
  CapacitanceMethod method = CapacitanceMethod::Analytic;
  std::optional<int> mesh_size;
  /// Absent when no refinement comparison was run.
  std::optional<double> estimated_error;
  /// Richardson-extrapolated value, present together with estimated_error for BEM.
  std::optional<double> extrapolated_q;
};

struct BemOptions {
  /// Re-solve on the 4:1 subdivided mesh and extrapolate assuming O(h) error.
  bool richardson = false;
  /// Reciprocal condition estimate below which the system is rejected.
  double min_rcond = 1e-13;
  std::size_t max_unknowns = 10000;
};

CapacitanceResult capacitance_sphere();
CapacitanceResult capacitance_ellipsoid(double a1, double a2, double a3);
CapacitanceResult capacitance_bem(const TriangleMesh& mesh, const BemOptions& opts = {});
CapacitanceResult capacitance(const InclusionShape& shape, const BemOptions& opts = {});

/// ∫_T dA / |x − y| for x in the plane of triangle T (closed form).
double coplanar_single_layer(const Eigen::Vector3d& x, const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                             const Eigen::Vector3d& p2);

}  // namespace localgap
