#include "casimir/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "casimir/errors.hpp"

namespace casimir {

Axis parse_axis(const std::string& name) {
  if (name == "x" || name == "X") return Axis::X;
  if (name == "y" || name == "Y") return Axis::Y;
  if (name == "z" || name == "Z") return Axis::Z;
  throw GeometryError("unknown axis '" + name + "' (expected x, y or z)");
}

Vec3 axis_vector(Axis a) {
  switch (a) {
    case Axis::X: return Vec3::UnitX();
    case Axis::Y: return Vec3::UnitY();
    case Axis::Z: return Vec3::UnitZ();
  }
  return Vec3::UnitZ();
}

RigidTransform RigidTransform::translate(const Vec3& d) {
  RigidTransform t;
  t.translation = d;
  return t;
}

RigidTransform RigidTransform::rotate(Axis axis, double radians, const Vec3& origin) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(radians, axis_vector(axis)).toRotationMatrix();
  t.translation = origin - t.rotation * origin;
  return t;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform t;
  t.rotation = rotation.transpose();
  t.translation = -(t.rotation * translation);
  return t;
}

bool RigidTransform::is_valid(double tol) const {
  return (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol && translation.allFinite();
}

RigidTransform compose(const RigidTransform& outer, const RigidTransform& inner) {
  RigidTransform t;
  t.rotation = outer.rotation * inner.rotation;
  t.translation = outer.rotation * inner.translation + outer.translation;
  return t;
}

RigidTransform orientation_rotation(double theta_deg, double phi_deg, const Vec3& pivot) {
  return compose(RigidTransform::rotate_deg(Axis::Y, theta_deg, pivot),
                 RigidTransform::rotate_deg(Axis::Z, phi_deg, pivot));
}

Vec3 tetrahedron_pivot(double edge) {
  return tetrahedron_apex(edge) - Vec3(0.0, 0.0, 0.25 * std::sqrt(3.0) * edge);
}

ObjectInstance::ObjectInstance(std::string label, std::shared_ptr<const TriangleMesh> mesh,
                               RigidTransform transform)
    : ObjectInstance(std::move(label), mesh, std::make_shared<const RwgBasis>(mesh), transform) {}

ObjectInstance::ObjectInstance(std::string label, std::shared_ptr<const TriangleMesh> mesh,
                               std::shared_ptr<const RwgBasis> basis, RigidTransform transform)
    : label_(std::move(label)),
      mesh_(std::move(mesh)),
      basis_(std::move(basis)),
      transform_(transform),
      placed_(mesh_->transformed(transform_.rotation, transform_.translation)) {
  if (!transform_.is_valid(1e-10)) throw GeometryError("object '" + label_ + "': invalid rigid transform");
}

ObjectInstance ObjectInstance::moved(const RigidTransform& motion) const {
  return ObjectInstance(label_, mesh_, basis_, compose(motion, transform_));
}

// ---------------------------------------------------------------------------
// Triangle distance primitives

namespace {

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  const double c = d1.dot(r), b = d1.dot(d2);
  const double denom = a * e - b * b;
  double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 dir = q - p;
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 h = dir.cross(e2);
  const double det = e1.dot(h);
  if (std::abs(det) < 1e-300) return false;
  const double inv = 1.0 / det;
  const Vec3 s = p - a;
  const double u = inv * s.dot(h);
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qv = s.cross(e1);
  const double v = inv * dir.dot(qv);
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = inv * e2.dot(qv);
  return t >= 0.0 && t <= 1.0;
}

double triangle_distance(const TriangleMesh& ma, const Panel& pa, const TriangleMesh& mb, const Panel& pb) {
  const Vec3 a[3] = {ma.vertex(pa.v[0]), ma.vertex(pa.v[1]), ma.vertex(pa.v[2])};
  const Vec3 b[3] = {mb.vertex(pb.v[0]), mb.vertex(pb.v[1]), mb.vertex(pb.v[2])};
  for (int i = 0; i < 3; ++i) {
    if (segment_hits_triangle(a[i], a[(i + 1) % 3], b[0], b[1], b[2])) return 0.0;
    if (segment_hits_triangle(b[i], b[(i + 1) % 3], a[0], a[1], a[2])) return 0.0;
  }
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    d = std::min(d, (a[i] - closest_on_triangle(a[i], b[0], b[1], b[2])).norm());
    d = std::min(d, (b[i] - closest_on_triangle(b[i], a[0], a[1], a[2])).norm());
    for (int j = 0; j < 3; ++j) {
      d = std::min(d, segment_distance(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]));
    }
  }
  return d;
}

// Generalized winding number of a closed surface around p.
double winding_number(const TriangleMesh& m, const Vec3& p) {
  double total = 0.0;
  for (const auto& f : m.panels()) {
    const Vec3 a = m.vertex(f.v[0]) - p, b = m.vertex(f.v[1]) - p, c = m.vertex(f.v[2]) - p;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * std::numbers::pi);
}

}  // namespace

double surface_distance(const TriangleMesh& a, const TriangleMesh& b, bool* nested) {
  struct Candidate {
    double bound;
    int pa, pb;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<size_t>(a.panel_count()) * static_cast<size_t>(b.panel_count()));
  for (int i = 0; i < a.panel_count(); ++i) {
    const Panel& pa = a.panel(i);
    for (int j = 0; j < b.panel_count(); ++j) {
      const Panel& pb = b.panel(j);
      cands.push_back({(pa.centroid - pb.centroid).norm() - pa.radius - pb.radius, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& x, const Candidate& y) { return x.bound < y.bound; });
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    if (c.bound >= best) break;
    best = std::min(best, triangle_distance(a, a.panel(c.pa), b, b.panel(c.pb)));
    if (best <= 0.0) break;
  }
  if (nested) {
    *nested = best > 0.0 && (std::abs(winding_number(b, a.vertex(0))) > 0.5 ||
                             std::abs(winding_number(a, b.vertex(0))) > 0.5);
  }
  return std::max(best, 0.0);
}

// ---------------------------------------------------------------------------

Configuration::Configuration(std::vector<ObjectInstance> objects) : objects_(std::move(objects)) {
  const size_t n = objects_.size();
  offsets_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    offsets_[i] = dimension_;
    dimension_ += objects_[i].basis().size();
  }
  separation_.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // Measured in the frame of object i so a global motion leaves it unchanged.
      const RigidTransform& ti = objects_[i].transform();
      const RigidTransform& tj = objects_[j].transform();
      const TriangleMesh rel = objects_[j].mesh().transformed(
          ti.rotation.transpose() * tj.rotation, ti.rotation.transpose() * (tj.translation - ti.translation));
      bool nested = false;
      const double d = surface_distance(objects_[i].mesh(), rel, &nested);
      if (!(d > 0.0) || nested) {
        throw GeometryError("objects '" + objects_[i].label() + "' and '" + objects_[j].label() +
                            "' overlap or touch");
      }
      separation_[i * n + j] = separation_[j * n + i] = d;
    }
  }
}

int Configuration::index_of(const std::string& label) const {
  for (size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].label() == label) return static_cast<int>(i);
  throw GeometryError("no object labelled '" + label + "'");
}

double Configuration::min_separation(int i, int j) const {
  const int n = object_count();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw GeometryError("min_separation needs two distinct valid object indices");
  }
  return separation_[static_cast<size_t>(i * n + j)];
}

double Configuration::min_separation() const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < object_count(); ++i)
    for (int j = i + 1; j < object_count(); ++j) d = std::min(d, min_separation(i, j));
  return d;
}

Configuration Configuration::with_motion(int i, const RigidTransform& motion) const {
  std::vector<ObjectInstance> objs = objects_;
  objs.at(static_cast<size_t>(i)) = objs[static_cast<size_t>(i)].moved(motion);
  return Configuration(std::move(objs));
}

Configuration Configuration::with_global_motion(const RigidTransform& motion) const {
  std::vector<ObjectInstance> objs;
  objs.reserve(objects_.size());
  for (const auto& o : objects_) objs.push_back(o.moved(motion));
  return Configuration(std::move(objs));
}

}  // namespace casimir
