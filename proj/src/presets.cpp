#include "casimir/presets.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "casimir/errors.hpp"

namespace casimir {

Configuration sphere_pair(double radius, int subdivisions, double center_distance) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_sphere(radius, subdivisions));
  auto basis = std::make_shared<const RwgBasis>(mesh);
  const double h = 0.5 * center_distance;
  std::vector<ObjectInstance> objs;
  objs.emplace_back("lower", mesh, basis, RigidTransform::translate(Vec3(0, 0, -h)));
  objs.emplace_back("upper", mesh, basis, RigidTransform::translate(Vec3(0, 0, h)));
  return Configuration(std::move(objs));
}

Configuration capsule_pair(double radius, double length, int resolution, double gap, bool crossed) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_capsule(radius, length, resolution));
  auto basis = std::make_shared<const RwgBasis>(mesh);
  const double h = radius + 0.5 * gap;
  const RigidTransform along_x = RigidTransform::rotate_deg(Axis::Y, 90.0);
  const RigidTransform along_y = RigidTransform::rotate_deg(Axis::X, 90.0);
  std::vector<ObjectInstance> objs;
  objs.emplace_back("lower", mesh, basis, compose(RigidTransform::translate(Vec3(0, 0, -h)), along_x));
  objs.emplace_back("upper", mesh, basis,
                    compose(RigidTransform::translate(Vec3(0, 0, h)), crossed ? along_y : along_x));
  return Configuration(std::move(objs));
}

Vec3 tetrahedron_rotor_pivot(double pivot_distance) { return Vec3(0, pivot_distance, 0); }

Configuration tetrahedron_pair(double edge, int subdivisions, double pivot_distance, double theta_deg,
                               double phi_deg) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_tetrahedron(edge, subdivisions));
  auto basis = std::make_shared<const RwgBasis>(mesh);
  // The generator puts a base vertex on +x; a quarter turn brings it to +y,
  // towards the partner, and leaves the pivot (on the z axis) in place.
  const RigidTransform base = RigidTransform::rotate_deg(Axis::Z, 90.0);
  const Vec3 pivot0 = tetrahedron_pivot(edge);
  const RigidTransform fixed = compose(RigidTransform::translate(-pivot0), base);
  const RigidTransform rotor0 = compose(RigidTransform::translate(Vec3(0, pivot_distance, 0)), fixed);
  const RigidTransform turn = orientation_rotation(theta_deg, phi_deg, tetrahedron_rotor_pivot(pivot_distance));
  std::vector<ObjectInstance> objs;
  objs.emplace_back("fixed", mesh, basis, fixed);
  objs.emplace_back("rotor", mesh, basis, compose(turn, rotor0));
  return Configuration(std::move(objs));
}

PresetScale preset_scale(const std::string& name) {
  if (name == "coarse") return {2, 12, 2};
  if (name == "fine") return {3, 20, 3};
  throw std::invalid_argument("unknown preset scale '" + name + "' (expected coarse or fine)");
}

InverseFit fit_inverse(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = 1.0 / x[i];
    b(r) = y[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  InverseFit fit{c(0), c(1), 0.0};
  for (size_t i = 0; i < x.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(fit.a + fit.b / x[i] - y[i]));
  }
  return fit;
}

}  // namespace casimir
