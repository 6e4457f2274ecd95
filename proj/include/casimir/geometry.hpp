#pragma once

#include <memory>
#include <string>
#include <vector>

#include "casimir/mesh.hpp"

namespace casimir {

enum class Axis { X, Y, Z };

Axis parse_axis(const std::string& name);
Vec3 axis_vector(Axis a);

/// Proper rigid motion x -> rotation * x + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform translate(const Vec3& d);
  /// Right-handed rotation by `radians` about `axis` through `origin`.
  static RigidTransform rotate(Axis axis, double radians, const Vec3& origin = Vec3::Zero());
  static RigidTransform rotate_deg(Axis axis, double degrees, const Vec3& origin = Vec3::Zero()) {
    return rotate(axis, degrees * (3.14159265358979323846 / 180.0), origin);
  }

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
  RigidTransform inverse() const;
  /// Orthogonality and det = +1 to `tol`.
  bool is_valid(double tol = 1e-12) const;
};

/// Applies `inner` first, then `outer`.
RigidTransform compose(const RigidTransform& outer, const RigidTransform& inner);

/// Rotation protocol for tetrahedron orientation sweeps: phi about z, then
/// theta about y, both about `pivot`. Angles in degrees.
RigidTransform orientation_rotation(double theta_deg, double phi_deg, const Vec3& pivot);

/// Rotation origin for orientation sweeps: the point H/2 below the apex with
/// H = sqrt(3) L / 2, in the frame of generate_tetrahedron(L, s).
Vec3 tetrahedron_pivot(double edge);

/// A placed copy of a mesh. Basis indices refer to the untransformed topology;
/// `placed()` is the transformed surface every computation uses.
class ObjectInstance {
 public:
  ObjectInstance(std::string label, std::shared_ptr<const TriangleMesh> mesh,
                 RigidTransform transform = {});
  ObjectInstance(std::string label, std::shared_ptr<const TriangleMesh> mesh,
                 std::shared_ptr<const RwgBasis> basis, RigidTransform transform);

  const std::string& label() const { return label_; }
  const TriangleMesh& mesh() const { return *mesh_; }
  const RwgBasis& basis() const { return *basis_; }
  const RigidTransform& transform() const { return transform_; }
  const TriangleMesh& placed() const { return placed_; }

  /// Same mesh and basis, transform replaced by compose(motion, transform()).
  ObjectInstance moved(const RigidTransform& motion) const;

 private:
  std::string label_;
  std::shared_ptr<const TriangleMesh> mesh_;
  std::shared_ptr<const RwgBasis> basis_;
  RigidTransform transform_;
  TriangleMesh placed_;
};

/// Ordered set of objects with their basis blocks and pairwise separations.
/// Construction rejects touching, intersecting or nested objects.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<ObjectInstance> objects);

  const std::vector<ObjectInstance>& objects() const { return objects_; }
  const ObjectInstance& object(int i) const { return objects_[static_cast<size_t>(i)]; }
  int object_count() const { return static_cast<int>(objects_.size()); }
  int index_of(const std::string& label) const;  // throws GeometryError

  /// Total basis dimension and the offset of each object's block.
  int dimension() const { return dimension_; }
  int offset(int i) const { return offsets_[static_cast<size_t>(i)]; }
  int block_size(int i) const { return object(i).basis().size(); }

  /// Surface-to-surface distance between objects i and j.
  double min_separation(int i, int j) const;
  /// Smallest pairwise separation; +inf for a single object.
  double min_separation() const;

  /// Copy with object i moved by `motion` (applied after its transform).
  Configuration with_motion(int i, const RigidTransform& motion) const;
  /// Copy with every object moved by `motion`.
  Configuration with_global_motion(const RigidTransform& motion) const;

 private:
  std::vector<ObjectInstance> objects_;
  std::vector<int> offsets_;
  int dimension_ = 0;
  std::vector<double> separation_;  // row-major object_count^2
};

/// Exact distance between two placed surfaces, or 0 when they touch or
/// intersect. Nested surfaces are reported through `nested`.
double surface_distance(const TriangleMesh& a, const TriangleMesh& b, bool* nested = nullptr);

/// Parses the plain-text geometry format. Relative mesh paths resolve
/// against `base_dir`. Throws ParseError / GeometryError.
Configuration parse_geometry(std::istream& in, const std::string& base_dir = ".");
Configuration read_geometry_file(const std::string& path);

/// Builds a mesh from a generator spec such as "sphere(1,2)",
/// "capsule(1,6,12)" or "tetrahedron(1,2)".
TriangleMesh mesh_from_generator(const std::string& spec);

}  // namespace casimir
