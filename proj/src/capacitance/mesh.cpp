#include "localgap/mesh.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "localgap/errors.hpp"

namespace localgap {

TriangleMesh::TriangleMesh(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& f : faces_)
    for (int v : f)
      if (v < 0 || v >= nv) throw ValidationError("mesh face references vertex " + std::to_string(v) + " out of range");
}

Eigen::Vector3d TriangleMesh::centroid(std::size_t f) const {
  const auto& t = faces_[f];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Eigen::Vector3d TriangleMesh::normal(std::size_t f) const {
  const auto& t = faces_[f];
  return (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]);
}

double TriangleMesh::area(std::size_t f) const { return 0.5 * normal(f).norm(); }

double TriangleMesh::enclosed_volume() const {
  double v = 0.0;
  for (const auto& t : faces_) v += vertices_[t[0]].dot(vertices_[t[1]].cross(vertices_[t[2]]));
  return v / 6.0;
}

void TriangleMesh::validate() const {
  if (faces_.size() < 4) throw ValidationError("mesh has fewer than four faces");
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& t = faces_[f];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || !(area(f) > 0.0))
      throw ValidationError("degenerate triangle " + std::to_string(f));
    for (int e = 0; e < 3; ++e) {
      if (++directed[{t[e], t[(e + 1) % 3]}] > 1)
        throw ValidationError("edge used twice with the same orientation (non-manifold or inconsistent winding)");
    }
  }
  for (const auto& [edge, count] : directed) {
    if (!directed.contains({edge.second, edge.first}))
      throw ValidationError("open mesh: edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second) +
                            " has no opposite half-edge");
  }
  if (!(enclosed_volume() > 0.0)) throw ValidationError("mesh encloses non-positive volume (inward orientation?)");
}

TriangleMesh TriangleMesh::scaled(double s) const { return transformed(s * Eigen::Matrix3d::Identity()); }

TriangleMesh TriangleMesh::transformed(const Eigen::Matrix3d& linear) const {
  std::vector<Eigen::Vector3d> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(linear * p);
  auto f = faces_;
  if (linear.determinant() < 0.0)
    for (auto& t : f) std::swap(t[1], t[2]);
  return TriangleMesh(std::move(v), std::move(f));
}

namespace {

class MidpointCache {
 public:
  explicit MidpointCache(std::vector<Eigen::Vector3d>& verts, bool project) : verts_(verts), project_(project) {}

  int operator()(int a, int b) {
    const auto key = std::minmax(a, b);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Eigen::Vector3d p = 0.5 * (verts_[a] + verts_[b]);
    if (project_) p.normalize();
    verts_.push_back(p);
    const int id = static_cast<int>(verts_.size()) - 1;
    cache_.emplace(key, id);
    return id;
  }

 private:
  std::vector<Eigen::Vector3d>& verts_;
  bool project_;
  std::map<std::pair<int, int>, int> cache_;
};

std::vector<TriangleMesh::Face> split4(std::vector<Eigen::Vector3d>& verts,
                                       const std::vector<TriangleMesh::Face>& faces, bool project) {
  MidpointCache mid(verts, project);
  std::vector<TriangleMesh::Face> out;
  out.reserve(faces.size() * 4);
  for (const auto& t : faces) {
    const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    out.push_back({t[0], ab, ca});
    out.push_back({t[1], bc, ab});
    out.push_back({t[2], ca, bc});
    out.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace

TriangleMesh TriangleMesh::subdivided() const {
  auto v = vertices_;
  auto f = split4(v, faces_, false);
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh read_off(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  std::size_t cur = 0;
  auto next = [&]() -> std::istringstream {
    if (cur >= lines.size()) throw ValidationError("OFF: unexpected end of input");
    return std::istringstream(lines[cur++]);
  };
  if (!lines.empty()) {
    std::istringstream head(lines[0]);
    std::string tok;
    head >> tok;
    if (tok == "OFF") ++cur;
  }
  long nv = -1, nf = -1;
  {
    auto s = next();
    if (!(s >> nv >> nf) || nv < 3 || nf < 1) throw ValidationError("OFF: bad count line");
  }
  std::vector<Eigen::Vector3d> verts(static_cast<std::size_t>(nv));
  for (auto& p : verts) {
    auto s = next();
    if (!(s >> p[0] >> p[1] >> p[2]) || !p.allFinite()) throw ValidationError("OFF: bad vertex line");
  }
  std::vector<TriangleMesh::Face> faces(static_cast<std::size_t>(nf));
  for (auto& t : faces) {
    auto s = next();
    int k = 0;
    if (!(s >> k >> t[0] >> t[1] >> t[2])) throw ValidationError("OFF: bad face line");
    if (k != 3) throw ValidationError("OFF: only triangular faces are supported");
  }
  if (cur != lines.size()) throw ValidationError("OFF: trailing content after face list");
  return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh read_off_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open mesh file '" + path + "'");
  return read_off(f);
}

void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertices().size() << ' ' << mesh.face_count() << " 0\n";
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices()) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const auto& t : mesh.faces()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriangleMesh make_icosphere(int level) {
  if (level < 0) throw DomainError("icosphere level must be non-negative");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                                    {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<TriangleMesh::Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) f = split4(v, f, true);
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh make_octasphere(int n) {
  if (n < 1) throw DomainError("octasphere resolution must be positive");
  std::vector<Eigen::Vector3d> verts;
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](int i, int j, int k) {
    const std::array<int, 3> key{i, j, k};
    if (auto it = index.find(key); it != index.end()) return it->second;
    verts.push_back(Eigen::Vector3d(i, j, k).normalized());
    return index[key] = static_cast<int>(verts.size()) - 1;
  };
  std::vector<TriangleMesh::Face> faces;
  // Lattice points (i,j,k) with |i|+|j|+|k| = n on each octant face.
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) {
        const bool flip = sx * sy * sz < 0;
        auto add = [&](int a, int b, int c) {
          if (flip) std::swap(b, c);
          faces.push_back({a, b, c});
        };
        for (int i = 0; i < n; ++i)
          for (int j = 0; i + j < n; ++j) {
            const int k = n - i - j;
            const int p0 = vertex(sx * i, sy * j, sz * k);
            const int p1 = vertex(sx * (i + 1), sy * j, sz * (k - 1));
            const int p2 = vertex(sx * i, sy * (j + 1), sz * (k - 1));
            add(p0, p1, p2);
            if (i + j + 1 < n) {
              const int p3 = vertex(sx * (i + 1), sy * (j + 1), sz * (k - 2));
              add(p1, p3, p2);
            }
          }
      }
  return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh make_ellipsoid_mesh(double a1, double a2, double a3, int n) {
  if (!(a1 > 0 && a2 > 0 && a3 > 0)) throw DomainError("ellipsoid semiaxes must be positive");
  return make_octasphere(n).transformed(Eigen::Vector3d(a1, a2, a3).asDiagonal());
}

TriangleMesh make_cube_mesh(int n) {
  if (n < 1) throw DomainError("cube resolution must be positive");
  std::vector<Eigen::Vector3d> verts;
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](const Eigen::Vector3i& g) {
    const std::array<int, 3> key{g[0], g[1], g[2]};
    if (auto it = index.find(key); it != index.end()) return it->second;
    verts.push_back(g.cast<double>() / n);
    return index[key] = static_cast<int>(verts.size()) - 1;
  };
  std::vector<TriangleMesh::Face> faces;
  for (int axis = 0; axis < 3; ++axis)
    for (int side : {0, 1}) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto at = [&](int di, int dj) {
            Eigen::Vector3i g;
            g[axis] = side * n;
            g[u] = i + di;
            g[w] = j + dj;
            return vertex(g);
          };
          const int a = at(0, 0), b = at(1, 0), c = at(1, 1), d = at(0, 1);
          // (u, w, axis) is right-handed, so a→b→c faces +axis.
          if (side == 1) {
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
          } else {
            faces.push_back({a, c, b});
            faces.push_back({a, d, c});
          }
        }
    }
  return TriangleMesh(std::move(verts), std::move(faces));
}

}  // namespace localgap
