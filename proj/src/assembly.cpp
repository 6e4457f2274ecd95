#include "casimir/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <condition_variable>
#include <mutex>
#include <optional>

#include "casimir/errors.hpp"
#include "casimir/kernel.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

double BlockMatrix::symmetry_defect() const {
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (values - values.transpose()).cwiseAbs().maxCoeff() / scale;
}

InteractionMatrix InteractionMatrix::scaled(double c) const {
  if (!(c > 0.0)) throw NumericalError("matrix scale factor must be positive");
  InteractionMatrix out = *this;
  out.values *= c;
  out.scale *= c;
  return out;
}

namespace {

// Per-object panel data reused across all pairs at one kappa.
struct ObjectTable {
  std::vector<PanelGeometry> geometry;
  std::vector<PanelBasisSides> sides;
  std::vector<std::array<int, 3>> global;  // global basis index per side
  std::vector<PanelPoints> far;
  std::vector<PanelPoints> near;
};

// Self blocks use the untransformed mesh and cross blocks use the frame of
// object 0. The kernel is invariant under rigid motion, and this way a
// global motion only moves objects rigidly instead of re-rounding every
// vertex, which matters for the 1/kappa^2 term at small kappa.
ObjectTable make_table(const Configuration& config, int obj, const QuadratureSpec& quad, bool local) {
  const ObjectInstance& o = config.object(obj);
  std::optional<TriangleMesh> framed;
  if (!local && obj != 0) {
    const RigidTransform& f = config.object(0).transform();
    const RigidTransform& t = o.transform();
    framed = o.mesh().transformed(f.rotation.transpose() * t.rotation,
                                  f.rotation.transpose() * (t.translation - f.translation));
  }
  const TriangleMesh& mesh = framed ? *framed : o.mesh();
  const auto& far_rule = triangle_rule(quad.far_points);
  const auto& near_rule = triangle_rule(quad.near_points);
  ObjectTable t;
  const auto n = static_cast<size_t>(mesh.panel_count());
  t.geometry.reserve(n);
  t.sides.reserve(n);
  t.global.reserve(n);
  t.far.reserve(n);
  t.near.reserve(n);
  for (int p = 0; p < mesh.panel_count(); ++p) {
    t.geometry.push_back(PanelGeometry::from_mesh(mesh, p, obj));
    t.sides.push_back(basis_sides(o.basis(), p));
    std::array<int, 3> g{};
    for (size_t k = 0; k < 3; ++k) {
      const int local = o.basis().panel_edges(p)[k].basis;
      g[k] = local < 0 ? -1 : config.offset(obj) + local;
    }
    t.global.push_back(g);
    t.far.push_back(panel_points(t.geometry.back(), far_rule));
    t.near.push_back(panel_points(t.geometry.back(), near_rule));
  }
  return t;
}

struct Entry {
  int row;
  int col;
  double value;
};

struct Request {
  bool self_blocks = true;
  bool cross_blocks = true;
  int derivative_object = -1;
  Vec3 direction = Vec3::UnitZ();
};

void check_request(const Configuration& config, double kappa, const QuadratureSpec& quad,
                   const AssemblyOptions& opts) {
  KernelParams{kappa}.validate();
  quad.validate();
  if (config.object_count() == 0) throw GeometryError("configuration has no objects");
  if (config.dimension() > opts.max_dimension) {
    throw NumericalError("basis dimension " + std::to_string(config.dimension()) + " exceeds the dense limit " +
                         std::to_string(opts.max_dimension));
  }
}

BlockMatrix empty_like(const Configuration& config, double kappa) {
  BlockMatrix m;
  m.values = Eigen::MatrixXd::Zero(config.dimension(), config.dimension());
  for (int i = 0; i < config.object_count(); ++i) {
    m.offsets.push_back(config.offset(i));
    m.sizes.push_back(config.block_size(i));
  }
  m.kappa = kappa;
  return m;
}

void scatter(const Eigen::Matrix3d& e, const std::array<int, 3>& ra, const std::array<int, 3>& cb, bool same_panel,
             std::vector<Entry>& out) {
  for (size_t k = 0; k < 3; ++k) {
    if (ra[k] < 0) continue;
    for (size_t j = 0; j < 3; ++j) {
      if (cb[j] < 0) continue;
      if (same_panel) {
        out.push_back({ra[k], cb[j], 0.5 * (e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) +
                                            e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)))});
      } else {
        const double v = e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        out.push_back({ra[k], cb[j], v});
        out.push_back({cb[j], ra[k], v});
      }
    }
  }
}

void assemble_into(const Configuration& config, double kappa, const QuadratureSpec& quad,
                   const AssemblyOptions& opts, const Request& req, Eigen::MatrixXd* values,
                   Eigen::MatrixXd* derivative) {
  const int n_obj = config.object_count();
  std::vector<ObjectTable> local, placed;
  for (int i = 0; i < n_obj; ++i) {
    if (req.self_blocks) local.push_back(make_table(config, i, quad, true));
    if (req.cross_blocks && n_obj > 1) placed.push_back(make_table(config, i, quad, false));
  }

  struct Task {
    int a, b, panel;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < n_obj; ++i) {
    for (int j = i; j < n_obj; ++j) {
      const bool self = i == j;
      if (self && !req.self_blocks) continue;
      if (!self && !req.cross_blocks) continue;
      if (!self && !values && req.derivative_object != i && req.derivative_object != j) continue;
      for (int p = 0; p < config.object(i).placed().panel_count(); ++p) tasks.push_back({i, j, p});
    }
  }

  const KernelParams params{kappa};
  const Vec3 direction = config.object(0).transform().rotation.transpose() * req.direction;
  // Tasks commit in index order so the sums do not depend on thread timing.
  std::mutex write_mu;
  std::condition_variable turn;
  int next_commit = 0;
  parallel_for(static_cast<int>(tasks.size()), opts.workers, [&](int t) {
    const Task& task = tasks[static_cast<size_t>(t)];
    const bool self = task.a == task.b;
    const auto& tables = self ? local : placed;
    const ObjectTable& ta = tables[static_cast<size_t>(task.a)];
    const ObjectTable& tb = tables[static_cast<size_t>(task.b)];
    const auto pa = static_cast<size_t>(task.panel);
    const PanelGeometry& ga = ta.geometry[pa];
    // Moving object b instead of a flips the sign of the derivative kernel.
    double dsign = 0.0;
    if (!self && req.derivative_object == task.a) dsign = 1.0;
    if (!self && req.derivative_object == task.b) dsign = -1.0;

    std::vector<Entry> out, dout;
    std::exception_ptr error;
    const size_t first = self ? pa : 0;
    try {
      for (size_t pb = first; pb < tb.geometry.size(); ++pb) {
        const PanelGeometry& gb = tb.geometry[pb];
        const PairClassification cls = classify_pair(ga, gb, quad.near_factor);
        const bool near = cls.kind == PanelPairClass::Near;
        PanelMoments mv, md;
        if (cls.kind == PanelPairClass::Near || cls.kind == PanelPairClass::Far) {
          const PanelPoints& xa = near ? ta.near[pa] : ta.far[pa];
          const PanelPoints& xb = near ? tb.near[pb] : tb.far[pb];
          if (dsign != 0.0 && derivative) {
            regular_pair_moments_with_directional(xa, ga.centroid, xb, gb.centroid, kappa, direction, mv, md);
          } else {
            mv = regular_pair_moments(xa, ga.centroid, xb, gb.centroid, kappa);
          }
        } else {
          mv = panel_pair_moments(ga, gb, cls, params, quad);
        }
        if (values) {
          scatter(panel_pair_elements(mv, ga, ta.sides[pa], gb, tb.sides[pb], kappa), ta.global[pa], tb.global[pb],
                  self && pb == pa, out);
        }
        if (dsign != 0.0 && derivative) {
          const Eigen::Matrix3d e = dsign * panel_pair_elements(md, ga, ta.sides[pa], gb, tb.sides[pb], kappa);
          scatter(e, ta.global[pa], tb.global[pb], false, dout);
        }
      }
    } catch (...) {
      error = std::current_exception();
    }

    std::unique_lock<std::mutex> lock(write_mu);
    turn.wait(lock, [&] { return next_commit == t; });
    if (!error) {
      for (const auto& e : out) (*values)(e.row, e.col) += e.value;
      for (const auto& e : dout) (*derivative)(e.row, e.col) += e.value;
    }
    ++next_commit;
    turn.notify_all();
    if (error) std::rethrow_exception(error);
  });

  if (values && !values->allFinite()) throw NumericalError("non-finite entries in assembled matrix");
}

InteractionMatrix as_interaction(BlockMatrix m, bool inf) {
  InteractionMatrix out;
  static_cast<BlockMatrix&>(out) = std::move(m);
  out.infinite_separation = inf;
  return out;
}

void assert_symmetric(const BlockMatrix& m) {
  if (m.symmetry_defect() > 1e-10) {
    throw NumericalError("assembled matrix is not symmetric (defect " + std::to_string(m.symmetry_defect()) + ")");
  }
}

}  // namespace

std::pair<InteractionMatrix, InteractionMatrix> assemble_with_inf(const Configuration& config, double kappa,
                                                                  const QuadratureSpec& quad,
                                                                  const AssemblyOptions& opts) {
  check_request(config, kappa, quad, opts);
  BlockMatrix inf = empty_like(config, kappa);
  Request self_only;
  self_only.cross_blocks = false;
  assemble_into(config, kappa, quad, opts, self_only, &inf.values, nullptr);
  BlockMatrix full = inf;
  if (config.object_count() > 1) {
    Request cross_only;
    cross_only.self_blocks = false;
    assemble_into(config, kappa, quad, opts, cross_only, &full.values, nullptr);
  }
  assert_symmetric(full);
  return {as_interaction(std::move(full), false), as_interaction(std::move(inf), true)};
}

InteractionMatrix assemble(const Configuration& config, double kappa, const QuadratureSpec& quad,
                           const AssemblyOptions& opts) {
  check_request(config, kappa, quad, opts);
  BlockMatrix m = empty_like(config, kappa);
  assemble_into(config, kappa, quad, opts, Request{}, &m.values, nullptr);
  assert_symmetric(m);
  return as_interaction(std::move(m), false);
}

InteractionMatrix assemble_inf(const Configuration& config, double kappa, const QuadratureSpec& quad,
                               const AssemblyOptions& opts) {
  check_request(config, kappa, quad, opts);
  BlockMatrix m = empty_like(config, kappa);
  Request self_only;
  self_only.cross_blocks = false;
  assemble_into(config, kappa, quad, opts, self_only, &m.values, nullptr);
  assert_symmetric(m);
  return as_interaction(std::move(m), true);
}

namespace {

MatrixDerivative as_derivative(BlockMatrix m, int object, const Vec3& dir) {
  MatrixDerivative out;
  static_cast<BlockMatrix&>(out) = std::move(m);
  out.object = object;
  out.direction = dir;
  return out;
}

void check_derivative_request(const Configuration& config, int object, const Vec3& direction) {
  if (config.object_count() < 2) throw GeometryError("a force needs at least two objects");
  if (object < 0 || object >= config.object_count()) throw GeometryError("force target index out of range");
  if (std::abs(direction.norm() - 1.0) > 1e-12) throw GeometryError("force direction must be a unit vector");
}

}  // namespace

MatrixDerivative assemble_dz(const Configuration& config, int object, double kappa, const QuadratureSpec& quad,
                             const AssemblyOptions& opts, const Vec3& direction) {
  check_request(config, kappa, quad, opts);
  check_derivative_request(config, object, direction);
  BlockMatrix d = empty_like(config, kappa);
  Request req;
  req.self_blocks = false;
  req.derivative_object = object;
  req.direction = direction;
  assemble_into(config, kappa, quad, opts, req, nullptr, &d.values);
  assert_symmetric(d);
  return as_derivative(std::move(d), object, direction);
}

std::pair<InteractionMatrix, MatrixDerivative> assemble_with_derivative(const Configuration& config, int object,
                                                                        double kappa, const QuadratureSpec& quad,
                                                                        const AssemblyOptions& opts,
                                                                        const Vec3& direction) {
  check_request(config, kappa, quad, opts);
  check_derivative_request(config, object, direction);
  BlockMatrix m = empty_like(config, kappa);
  BlockMatrix d = empty_like(config, kappa);
  Request req;
  req.derivative_object = object;
  req.direction = direction;
  assemble_into(config, kappa, quad, opts, req, &m.values, &d.values);
  assert_symmetric(m);
  assert_symmetric(d);
  return {as_interaction(std::move(m), false), as_derivative(std::move(d), object, direction)};
}

void write_matrix(const std::string& path, const BlockMatrix& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write matrix dump '" + path + "'");
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      std::fprintf(f, c ? " %.16e" : "%.16e", m.values(r, c));
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace casimir
