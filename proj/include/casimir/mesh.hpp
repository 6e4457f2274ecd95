#pragma once

#include <array>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace casimir {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Flat triangle with its cached geometric data. Vertex order is
/// counterclockwise seen from outside, so `normal` points outward.
struct Panel {
  std::array<int, 3> v{};
  double area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  double diameter = 0.0;  // longest edge
  double radius = 0.0;    // largest centroid-to-vertex distance
};

/// Watertight, consistently oriented triangle surface.
///
/// Construction validates the surface: every edge is shared by exactly two
/// panels traversing it in opposite directions, no panel is degenerate and
/// no two vertices coincide. Instances are immutable afterwards.
class TriangleMesh {
 public:
  /// Throws ValidationError. `vertex_ids`, when given, are used in messages
  /// instead of zero-based indices (e.g. node ids from a mesh file).
  TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> panels,
               std::span<const long> vertex_ids = {});

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Panel>& panels() const { return panels_; }
  const Vec3& vertex(int i) const { return vertices_[static_cast<size_t>(i)]; }
  const Panel& panel(int i) const { return panels_[static_cast<size_t>(i)]; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int panel_count() const { return static_cast<int>(panels_.size()); }
  int edge_count() const { return 3 * panel_count() / 2; }
  int euler_characteristic() const { return vertex_count() - edge_count() + panel_count(); }

  double total_area() const;
  double max_panel_diameter() const;
  Vec3 bbox_min() const;
  Vec3 bbox_max() const;

  /// Same topology, vertices mapped by x -> rotation * x + translation.
  /// Rigid motions preserve every invariant, so no revalidation happens.
  TriangleMesh transformed(const Mat3& rotation, const Vec3& translation) const;

 private:
  struct Unchecked {};
  TriangleMesh(Unchecked, std::vector<Vec3> vertices, std::vector<std::array<int, 3>> panels);
  void compute_panel_data();

  std::vector<Vec3> vertices_;
  std::vector<Panel> panels_;
};

/// One RWG function, attached to an interior edge (v1 < v2).
///
/// On the plus panel f(x) = l/(2A+) (x - p+), on the minus panel
/// f(x) = -l/(2A-) (x - p-), where p is the vertex opposite the edge.
/// The plus panel is the one whose counterclockwise order runs v1 -> v2.
struct RwgEdge {
  int v1 = 0;
  int v2 = 0;
  int plus_panel = 0;
  int plus_free = 0;
  int minus_panel = 0;
  int minus_free = 0;
  double length = 0.0;
};

/// Which basis function lives on a given side of a panel, and with which sign.
/// Local edge k of a panel is the one opposite its vertex v[k].
struct PanelEdgeRef {
  int basis = -1;
  double sign = 0.0;  // +1 plus panel, -1 minus panel
};

class RwgBasis {
 public:
  explicit RwgBasis(std::shared_ptr<const TriangleMesh> mesh);

  const TriangleMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriangleMesh> mesh_ptr() const { return mesh_; }
  const std::vector<RwgEdge>& edges() const { return edges_; }
  const RwgEdge& edge(int i) const { return edges_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(edges_.size()); }

  /// Local edge table for panel p: entry k covers the side opposite v[k].
  const std::array<PanelEdgeRef, 3>& panel_edges(int p) const {
    return panel_edges_[static_cast<size_t>(p)];
  }

  /// Surface divergence of basis i on panel p (zero off its support).
  double divergence(int i, int p) const;
  /// Basis i evaluated at a point of panel p (zero off its support).
  Vec3 value(int i, int p, const Vec3& x) const;

 private:
  std::shared_ptr<const TriangleMesh> mesh_;
  std::vector<RwgEdge> edges_;
  std::vector<std::array<PanelEdgeRef, 3>> panel_edges_;
};

/// Reads the ASCII MSH 2.2 subset: $MeshFormat, $Nodes, $Elements. Only
/// three-node triangles (type 2) are kept; unreferenced nodes are dropped.
/// Throws ParseError (with line) or ValidationError.
TriangleMesh parse_msh(std::istream& in);
TriangleMesh read_msh_file(const std::string& path);
void write_msh(std::ostream& out, const TriangleMesh& mesh);

/// Icosahedron refined 4-way `subdivisions` times, vertices on the sphere.
TriangleMesh generate_sphere(double radius, int subdivisions);

/// Cylinder of radius R with hemispherical caps, axis along z, centered at
/// the origin, total length L including the caps. `resolution` is the number
/// of panels around the circumference; ring height is about 2*pi*R/resolution.
TriangleMesh generate_capsule(double radius, double total_length, int resolution);

/// Regular tetrahedron with edge L: centroid at the origin, apex on +z, base
/// parallel to the xy-plane with one base vertex on +x. Faces are refined
/// 4-way `subdivisions` times and stay planar.
TriangleMesh generate_tetrahedron(double edge, int subdivisions);

/// Apex position of generate_tetrahedron(edge, s).
Vec3 tetrahedron_apex(double edge);

}  // namespace casimir
