#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace localgap {

/// Closed triangulated surface. Faces are counter-clockwise seen from outside.
class TriangleMesh {
 public:
  using Face = std::array<int, 3>;

  TriangleMesh() = default;
  TriangleMesh(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces);

  const std::vector<Eigen::Vector3d>& vertices() const noexcept { return vertices_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  std::size_t face_count() const noexcept { return faces_.size(); }

  Eigen::Vector3d centroid(std::size_t f) const;
  double area(std::size_t f) const;
  /// Unnormalized normal (twice the area).
  Eigen::Vector3d normal(std::size_t f) const;
  double enclosed_volume() const;

  /// Throws ValidationError unless every edge is shared by exactly two faces
  /// with opposite orientation, no face is degenerate, and the enclosed
  /// volume is positive.
  void validate() const;

  TriangleMesh scaled(double s) const;
  TriangleMesh transformed(const Eigen::Matrix3d& linear) const;
  /// Each triangle split into four through its edge midpoints (no projection).
  TriangleMesh subdivided() const;

 private:
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<Face> faces_;
};

/// OFF-style reader; see docs/formats.md for the grammar.
TriangleMesh read_off(std::istream& in);
TriangleMesh read_off_file(const std::string& path);
void write_off(std::ostream& out, const TriangleMesh& mesh);

/// Unit icosphere, 20·4^level triangles.
TriangleMesh make_icosphere(int level);
/// Unit sphere from the subdivided octahedron, 8·n² triangles.
TriangleMesh make_octasphere(int n);
/// Ellipsoid with the given semiaxes, built by stretching the octasphere.
TriangleMesh make_ellipsoid_mesh(double a1, double a2, double a3, int n);
/// Unit cube [0,1]³ with n×n squares per face, 12·n² triangles.
TriangleMesh make_cube_mesh(int n);

}  // namespace localgap
