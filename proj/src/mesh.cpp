#include "casimir/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

struct HalfEdge {
  int lo;
  int hi;
  int panel;
  int local;     // side opposite panel vertex `local`
  bool forward;  // panel runs lo -> hi
};

std::vector<HalfEdge> collect_half_edges(const std::vector<std::array<int, 3>>& panels) {
  std::vector<HalfEdge> half;
  half.reserve(3 * panels.size());
  for (size_t p = 0; p < panels.size(); ++p) {
    for (int k = 0; k < 3; ++k) {
      const int a = panels[p][static_cast<size_t>((k + 1) % 3)];
      const int b = panels[p][static_cast<size_t>((k + 2) % 3)];
      half.push_back({std::min(a, b), std::max(a, b), static_cast<int>(p), k, a < b});
    }
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& x, const HalfEdge& y) {
    return std::tie(x.lo, x.hi, x.panel) < std::tie(y.lo, y.hi, y.panel);
  });
  return half;
}

std::string vertex_name(int i, std::span<const long> ids) {
  if (!ids.empty()) return std::to_string(ids[static_cast<size_t>(i)]);
  return std::to_string(i);
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> panels,
                           std::span<const long> vertex_ids)
    : vertices_(std::move(vertices)) {
  if (panels.empty()) throw ValidationError("mesh has no panels");
  const int nv = static_cast<int>(vertices_.size());
  for (size_t p = 0; p < panels.size(); ++p) {
    for (int v : panels[p]) {
      if (v < 0 || v >= nv) {
        throw ValidationError("panel " + std::to_string(p) + " references missing vertex " +
                              std::to_string(v));
      }
    }
  }

  // Coincident vertices, within 1e-12 of the bounding-box diagonal.
  Vec3 lo = vertices_.front(), hi = vertices_.front();
  for (const auto& x : vertices_) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  const double tol = 1e-12 * (hi - lo).norm();
  std::vector<int> order(vertices_.size());
  for (int i = 0; i < nv; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vertex(a).x() < vertex(b).x(); });
  for (size_t a = 0; a < order.size(); ++a) {
    for (size_t b = a + 1; b < order.size(); ++b) {
      const Vec3& xa = vertex(order[a]);
      const Vec3& xb = vertex(order[b]);
      if (xb.x() - xa.x() > tol) break;
      if ((xa - xb).norm() <= tol) {
        throw ValidationError("vertices " + vertex_name(order[a], vertex_ids) + " and " +
                              vertex_name(order[b], vertex_ids) + " coincide");
      }
    }
  }

  // Every edge shared by exactly two panels with opposite traversal.
  const auto half = collect_half_edges(panels);
  for (size_t i = 0; i < half.size();) {
    size_t j = i;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
    const std::string edge_name =
        "(" + vertex_name(half[i].lo, vertex_ids) + ", " + vertex_name(half[i].hi, vertex_ids) + ")";
    if (j - i != 2) {
      throw ValidationError("open or non-manifold surface: edge " + edge_name + " is shared by " +
                            std::to_string(j - i) + " panel(s)");
    }
    if (half[i].forward == half[i + 1].forward) {
      throw ValidationError("inconsistent orientation: panels " + std::to_string(half[i].panel) +
                            " and " + std::to_string(half[i + 1].panel) + " traverse edge " +
                            edge_name + " in the same direction");
    }
    i = j;
  }

  panels_.resize(panels.size());
  for (size_t p = 0; p < panels.size(); ++p) panels_[p].v = panels[p];
  compute_panel_data();
  for (size_t p = 0; p < panels_.size(); ++p) {
    const Panel& pp = panels_[p];
    if (!(pp.area > 1e-12 * pp.diameter * pp.diameter)) {
      throw ValidationError("degenerate panel " + std::to_string(p));
    }
  }
}

TriangleMesh::TriangleMesh(Unchecked, std::vector<Vec3> vertices,
                           std::vector<std::array<int, 3>> panels)
    : vertices_(std::move(vertices)) {
  panels_.resize(panels.size());
  for (size_t p = 0; p < panels.size(); ++p) panels_[p].v = panels[p];
  compute_panel_data();
}

void TriangleMesh::compute_panel_data() {
  for (auto& p : panels_) {
    const Vec3& a = vertex(p.v[0]);
    const Vec3& b = vertex(p.v[1]);
    const Vec3& c = vertex(p.v[2]);
    const Vec3 n = (b - a).cross(c - a);
    const double nn = n.norm();
    p.area = 0.5 * nn;
    p.normal = nn > 0.0 ? Vec3(n / nn) : Vec3::Zero();
    p.centroid = (a + b + c) / 3.0;
    p.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    p.radius = std::max({(a - p.centroid).norm(), (b - p.centroid).norm(),
                         (c - p.centroid).norm()});
  }
}

double TriangleMesh::total_area() const {
  double s = 0.0;
  for (const auto& p : panels_) s += p.area;
  return s;
}

double TriangleMesh::max_panel_diameter() const {
  double d = 0.0;
  for (const auto& p : panels_) d = std::max(d, p.diameter);
  return d;
}

Vec3 TriangleMesh::bbox_min() const {
  Vec3 lo = vertices_.front();
  for (const auto& x : vertices_) lo = lo.cwiseMin(x);
  return lo;
}

Vec3 TriangleMesh::bbox_max() const {
  Vec3 hi = vertices_.front();
  for (const auto& x : vertices_) hi = hi.cwiseMax(x);
  return hi;
}

TriangleMesh TriangleMesh::transformed(const Mat3& rotation, const Vec3& translation) const {
  std::vector<Vec3> moved;
  moved.reserve(vertices_.size());
  for (const auto& x : vertices_) moved.emplace_back(rotation * x + translation);
  std::vector<std::array<int, 3>> topo;
  topo.reserve(panels_.size());
  for (const auto& p : panels_) topo.push_back(p.v);
  return TriangleMesh(Unchecked{}, std::move(moved), std::move(topo));
}

RwgBasis::RwgBasis(std::shared_ptr<const TriangleMesh> mesh) : mesh_(std::move(mesh)) {
  std::vector<std::array<int, 3>> topo;
  topo.reserve(mesh_->panels().size());
  for (const auto& p : mesh_->panels()) topo.push_back(p.v);
  const auto half = collect_half_edges(topo);

  panel_edges_.assign(topo.size(), {});
  edges_.reserve(half.size() / 2);
  for (size_t i = 0; i + 1 < half.size(); i += 2) {
    const HalfEdge& a = half[i];
    const HalfEdge& b = half[i + 1];
    const HalfEdge& plus = a.forward ? a : b;
    const HalfEdge& minus = a.forward ? b : a;
    RwgEdge e;
    e.v1 = a.lo;
    e.v2 = a.hi;
    e.plus_panel = plus.panel;
    e.plus_free = topo[static_cast<size_t>(plus.panel)][static_cast<size_t>(plus.local)];
    e.minus_panel = minus.panel;
    e.minus_free = topo[static_cast<size_t>(minus.panel)][static_cast<size_t>(minus.local)];
    e.length = (mesh_->vertex(e.v2) - mesh_->vertex(e.v1)).norm();
    const int index = static_cast<int>(edges_.size());
    panel_edges_[static_cast<size_t>(plus.panel)][static_cast<size_t>(plus.local)] = {index, 1.0};
    panel_edges_[static_cast<size_t>(minus.panel)][static_cast<size_t>(minus.local)] = {index, -1.0};
    edges_.push_back(e);
  }
}

double RwgBasis::divergence(int i, int p) const {
  const RwgEdge& e = edge(i);
  if (p == e.plus_panel) return e.length / mesh_->panel(p).area;
  if (p == e.minus_panel) return -e.length / mesh_->panel(p).area;
  return 0.0;
}

Vec3 RwgBasis::value(int i, int p, const Vec3& x) const {
  const RwgEdge& e = edge(i);
  if (p == e.plus_panel) {
    return e.length / (2.0 * mesh_->panel(p).area) * (x - mesh_->vertex(e.plus_free));
  }
  if (p == e.minus_panel) {
    return -e.length / (2.0 * mesh_->panel(p).area) * (x - mesh_->vertex(e.minus_free));
  }
  return Vec3::Zero();
}

}  // namespace casimir
