#include <cmath>
#include <map>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/mesh.hpp"

namespace casimir {

namespace {

using Faces = std::vector<std::array<int, 3>>;

// Convex shapes containing the origin: outward faces satisfy n . c > 0.
void orient_outward(const std::vector<Vec3>& v, Faces& faces) {
  for (auto& f : faces) {
    const Vec3& a = v[static_cast<size_t>(f[0])];
    const Vec3& b = v[static_cast<size_t>(f[1])];
    const Vec3& c = v[static_cast<size_t>(f[2])];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(f[1], f[2]);
  }
}

// One 4-way refinement; new vertices at edge midpoints, optionally pushed
// out to radius `project`.
void refine(std::vector<Vec3>& v, Faces& faces, double project) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = 0.5 * (v[static_cast<size_t>(a)] + v[static_cast<size_t>(b)]);
    if (project > 0.0) m *= project / m.norm();
    v.push_back(m);
    const int id = static_cast<int>(v.size()) - 1;
    midpoint.emplace(key, id);
    return id;
  };
  Faces next;
  next.reserve(4 * faces.size());
  for (const auto& f : faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    next.push_back({f[0], ab, ca});
    next.push_back({ab, f[1], bc});
    next.push_back({ca, bc, f[2]});
    next.push_back({ab, bc, ca});
  }
  faces = std::move(next);
}

}  // namespace

TriangleMesh generate_sphere(double radius, int subdivisions) {
  if (!(radius > 0.0)) throw GeometryError("sphere radius must be positive");
  if (subdivisions < 0) throw GeometryError("sphere subdivisions must be >= 0");
  const double t = std::numbers::phi;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& x : v) x *= radius / x.norm();
  Faces faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) refine(v, faces, radius);
  orient_outward(v, faces);
  return TriangleMesh(std::move(v), std::move(faces));
}

TriangleMesh generate_capsule(double radius, double total_length, int resolution) {
  if (!(radius > 0.0)) throw GeometryError("capsule radius must be positive");
  if (!(total_length >= 2.0 * radius)) throw GeometryError("capsule length must be at least 2R");
  if (resolution < 3) throw GeometryError("capsule resolution must be >= 3");

  const double pi = std::numbers::pi;
  double cyl = total_length - 2.0 * radius;
  if (cyl < 1e-12 * radius) cyl = 0.0;
  const double ring_height = 2.0 * pi * radius / resolution;
  const int n_lat = std::max(1, static_cast<int>(std::lround(resolution / 4.0)));
  const int n_cyl = cyl > 0.0 ? std::max(1, static_cast<int>(std::lround(cyl / ring_height))) : 0;

  // Rings from top to bottom as (z, rho).
  std::vector<std::pair<double, double>> rings;
  for (int k = 1; k <= n_lat; ++k) {
    const double th = 0.5 * pi * k / n_lat;
    rings.emplace_back(0.5 * cyl + radius * std::cos(th), radius * std::sin(th));
  }
  for (int j = 1; j <= n_cyl; ++j) rings.emplace_back(0.5 * cyl - cyl * j / n_cyl, radius);
  for (int k = n_lat - 1; k >= 1; --k) {
    const double th = 0.5 * pi * k / n_lat;
    rings.emplace_back(-0.5 * cyl - radius * std::cos(th), radius * std::sin(th));
  }

  std::vector<Vec3> v;
  v.emplace_back(0.0, 0.0, 0.5 * cyl + radius);
  for (const auto& [z, rho] : rings) {
    for (int j = 0; j < resolution; ++j) {
      const double ph = 2.0 * pi * j / resolution;
      v.emplace_back(rho * std::cos(ph), rho * std::sin(ph), z);
    }
  }
  v.emplace_back(0.0, 0.0, -0.5 * cyl - radius);
  const int top = 0;
  const int bottom = static_cast<int>(v.size()) - 1;
  auto ring_vertex = [&](size_t ring, int j) {
    return 1 + static_cast<int>(ring) * resolution + (j % resolution);
  };

  Faces faces;
  for (int j = 0; j < resolution; ++j) faces.push_back({top, ring_vertex(0, j), ring_vertex(0, j + 1)});
  for (size_t r = 0; r + 1 < rings.size(); ++r) {
    for (int j = 0; j < resolution; ++j) {
      const int a0 = ring_vertex(r, j), a1 = ring_vertex(r, j + 1);
      const int b0 = ring_vertex(r + 1, j), b1 = ring_vertex(r + 1, j + 1);
      faces.push_back({a0, b0, b1});
      faces.push_back({a0, b1, a1});
    }
  }
  const size_t last = rings.size() - 1;
  for (int j = 0; j < resolution; ++j) {
    faces.push_back({bottom, ring_vertex(last, j + 1), ring_vertex(last, j)});
  }
  orient_outward(v, faces);
  return TriangleMesh(std::move(v), std::move(faces));
}

Vec3 tetrahedron_apex(double edge) {
  return {0.0, 0.0, 0.75 * edge * std::sqrt(2.0 / 3.0)};
}

TriangleMesh generate_tetrahedron(double edge, int subdivisions) {
  if (!(edge > 0.0)) throw GeometryError("tetrahedron edge must be positive");
  if (subdivisions < 0) throw GeometryError("tetrahedron subdivisions must be >= 0");
  const double height = edge * std::sqrt(2.0 / 3.0);
  const double rb = edge / std::sqrt(3.0);
  const double zb = -0.25 * height;
  const double pi = std::numbers::pi;
  std::vector<Vec3> v = {tetrahedron_apex(edge),
                         {rb, 0.0, zb},
                         {rb * std::cos(2.0 * pi / 3.0), rb * std::sin(2.0 * pi / 3.0), zb},
                         {rb * std::cos(4.0 * pi / 3.0), rb * std::sin(4.0 * pi / 3.0), zb}};
  Faces faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  for (int s = 0; s < subdivisions; ++s) refine(v, faces, 0.0);
  orient_outward(v, faces);
  return TriangleMesh(std::move(v), std::move(faces));
}

}  // namespace casimir
