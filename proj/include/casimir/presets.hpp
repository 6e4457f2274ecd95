#pragma once

#include <string>
#include <vector>

#include "casimir/geometry.hpp"

namespace casimir {

/// Two spheres of radius R on the z axis, centers `center_distance` apart,
/// object "lower" below "upper".
Configuration sphere_pair(double radius, int subdivisions, double center_distance);

/// Two capsules of radius R and total length L separated along z by a
/// surface gap `gap`. Parallel: both axes along x. Crossed: lower along x,
/// upper along y.
Configuration capsule_pair(double radius, double length, int resolution, double gap, bool crossed);

/// Tetrahedron pair for the orientation landscape. Both start with one base
/// vertex on +y; "fixed" has its pivot at the origin, "rotor" at +D y and is
/// turned by phi about z, then theta about y, around its pivot.
Configuration tetrahedron_pair(double edge, int subdivisions, double pivot_distance, double theta_deg,
                               double phi_deg);

/// Pivot of the "rotor" object of tetrahedron_pair.
Vec3 tetrahedron_rotor_pivot(double pivot_distance);

/// Mesh sizes for preset runs.
struct PresetScale {
  int sphere_subdivisions;
  int capsule_resolution;
  int tetrahedron_subdivisions;
};

PresetScale preset_scale(const std::string& name);  // "coarse" or "fine"

/// Least-squares fit y = a + b / x.
struct InverseFit {
  double a = 0.0;
  double b = 0.0;
  double max_residual = 0.0;
};
InverseFit fit_inverse(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace casimir
