#include "casimir/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casimir/errors.hpp"

namespace casimir {

namespace {
constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

using PairArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;
using PointVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;

// r_ij = |(ca - cb) + a_i - b_j| for all point pairs.
void pair_offsets(const PanelPoints& a, const Vec3& ca, const PanelPoints& b, const Vec3& cb,
                  PairArray& dx, PairArray& dy, PairArray& dz) {
  const Vec3 d = ca - cb;
  const auto n = a.rel.rows(), m = b.rel.rows();
  dx = (a.rel.col(0).array() + d.x()).replicate(1, m) - b.rel.col(0).transpose().array().replicate(n, 1);
  dy = (a.rel.col(1).array() + d.y()).replicate(1, m) - b.rel.col(1).transpose().array().replicate(n, 1);
  dz = (a.rel.col(2).array() + d.z()).replicate(1, m) - b.rel.col(2).transpose().array().replicate(n, 1);
}

PanelMoments contract(const PairArray& g, const PanelPoints& a, const PanelPoints& b) {
  PanelMoments out;
  const auto gm = g.matrix();
  const PointVector u = gm * b.w;
  const PointVector v = gm.transpose() * a.w;
  out.i0 = a.w.dot(u);
  out.ix = a.rel.transpose() * a.w.cwiseProduct(u);
  out.iy = b.rel.transpose() * b.w.cwiseProduct(v);
  const Eigen::Matrix<double, Eigen::Dynamic, 3, 0, 16, 3> t = gm * (b.w.asDiagonal() * b.rel);
  out.ixy = (a.rel.cwiseProduct(t).rowwise().sum()).dot(a.w);
  return out;
}

void check_finite(const PanelMoments& m, const PanelGeometry& a, const PanelGeometry& b,
                  PanelPairClass kind) {
  if (!std::isfinite(m.i0) || !m.ix.allFinite() || !m.iy.allFinite() || !std::isfinite(m.ixy)) {
    throw NumericalError(std::string("non-finite ") + to_string(kind) + " integral for panel pair (object " +
                         std::to_string(a.instance) + " panel " + std::to_string(a.index) + ", object " +
                         std::to_string(b.instance) + " panel " + std::to_string(b.index) + ")");
  }
}

}  // namespace

void KernelParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw NumericalError("kappa must be positive and finite");
}

double scalar_green(double kappa, double r) {
  if (!(r > 0.0)) throw NumericalError("scalar Green's function evaluated at r <= 0");
  return std::exp(-kappa * r) * kInv4Pi / r;
}

double scalar_green_directional(double kappa, const Vec3& x, const Vec3& xp, const Vec3& dir) {
  const Vec3 d = x - xp;
  const double r = d.norm();
  if (!(r > 0.0)) throw NumericalError("kernel derivative evaluated at coincident points");
  return -(dir.dot(d) / r) * (kappa + 1.0 / r) * scalar_green(kappa, r);
}

const char* to_string(PanelPairClass c) {
  switch (c) {
    case PanelPairClass::SelfPanel: return "self-panel";
    case PanelPairClass::CommonEdge: return "common-edge";
    case PanelPairClass::CommonVertex: return "common-vertex";
    case PanelPairClass::Near: return "near";
    case PanelPairClass::Far: return "far";
  }
  return "?";
}

PanelGeometry PanelGeometry::from_mesh(const TriangleMesh& mesh, int panel, int instance) {
  const Panel& p = mesh.panel(panel);
  PanelGeometry g;
  for (int k = 0; k < 3; ++k) g.corners[static_cast<size_t>(k)] = mesh.vertex(p.v[static_cast<size_t>(k)]);
  g.vertex_ids = p.v;
  g.centroid = p.centroid;
  g.area = p.area;
  g.diameter = p.diameter;
  g.instance = instance;
  g.index = panel;
  return g;
}

PairClassification classify_pair(const PanelGeometry& a, const PanelGeometry& b, double near_factor) {
  PairClassification c;
  if (a.instance == b.instance) {
    if (a.index == b.index) {
      c.kind = PanelPairClass::SelfPanel;
      return c;
    }
    std::array<int, 3> sa{}, sb{};
    int shared = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (a.vertex_ids[static_cast<size_t>(i)] == b.vertex_ids[static_cast<size_t>(j)]) {
          sa[static_cast<size_t>(shared)] = i;
          sb[static_cast<size_t>(shared)] = j;
          ++shared;
        }
      }
    }
    auto complete = [&](std::array<int, 3>& order, const std::array<int, 3>& first) {
      int n = 0;
      for (int k = 0; k < shared; ++k) order[static_cast<size_t>(n++)] = first[static_cast<size_t>(k)];
      for (int k = 0; k < 3; ++k) {
        if (std::find(order.begin(), order.begin() + n, k) == order.begin() + n) {
          order[static_cast<size_t>(n++)] = k;
        }
      }
    };
    if (shared == 2 || shared == 1) {
      c.kind = shared == 2 ? PanelPairClass::CommonEdge : PanelPairClass::CommonVertex;
      complete(c.order_a, sa);
      complete(c.order_b, sb);
      return c;
    }
  }
  const double dist = (a.centroid - b.centroid).norm();
  c.kind = dist < near_factor * std::max(a.diameter, b.diameter) ? PanelPairClass::Near : PanelPairClass::Far;
  return c;
}

PanelPoints panel_points(const PanelGeometry& panel, const TriangleRule& rule) {
  PanelPoints pts;
  const int n = rule.size();
  pts.rel.resize(n, 3);
  pts.w.resize(n);
  const Vec3 e0 = panel.corners[0] - panel.centroid;
  const Vec3 e1 = panel.corners[1] - panel.centroid;
  const Vec3 e2 = panel.corners[2] - panel.centroid;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<size_t>(i);
    pts.rel.row(i) = (rule.b0[k] * e0 + rule.b1[k] * e1 + rule.b2[k] * e2).transpose();
    pts.w(i) = rule.weights[k] * panel.area;
  }
  return pts;
}

PanelMoments regular_pair_moments(const PanelPoints& a, const Vec3& ca, const PanelPoints& b,
                                  const Vec3& cb, double kappa) {
  PairArray dx, dy, dz;
  pair_offsets(a, ca, b, cb, dx, dy, dz);
  const PairArray r = (dx.square() + dy.square() + dz.square()).sqrt();
  const PairArray g = (-kappa * r).exp() * kInv4Pi / r;
  return contract(g, a, b);
}

void regular_pair_moments_with_directional(const PanelPoints& a, const Vec3& ca, const PanelPoints& b,
                                           const Vec3& cb, double kappa, const Vec3& dir,
                                           PanelMoments& value, PanelMoments& derivative) {
  PairArray dx, dy, dz;
  pair_offsets(a, ca, b, cb, dx, dy, dz);
  const PairArray r = (dx.square() + dy.square() + dz.square()).sqrt();
  const PairArray inv_r = r.inverse();
  const PairArray g = (-kappa * r).exp() * kInv4Pi * inv_r;
  const PairArray along = dx * dir.x() + dy * dir.y() + dz * dir.z();
  const PairArray dg = -(along * inv_r) * (kappa + inv_r) * g;
  value = contract(g, a, b);
  derivative = contract(dg, a, b);
}

PanelMoments panel_pair_moments(const PanelGeometry& a, const PanelGeometry& b,
                                const PairClassification& cls, const KernelParams& params,
                                const QuadratureSpec& quad) {
  params.validate();
  PanelMoments m;
  switch (cls.kind) {
    case PanelPairClass::SelfPanel:
    case PanelPairClass::CommonEdge:
    case PanelPairClass::CommonVertex:
      m = singular_pair_moments(a, b, cls, params.kappa, quad.duffy_order);
      break;
    case PanelPairClass::Near:
    case PanelPairClass::Far: {
      const auto& rule = triangle_rule(cls.kind == PanelPairClass::Near ? quad.near_points : quad.far_points);
      m = regular_pair_moments(panel_points(a, rule), a.centroid, panel_points(b, rule), b.centroid,
                               params.kappa);
      break;
    }
  }
  check_finite(m, a, b, cls.kind);
  return m;
}

PanelMoments panel_pair_moments_directional(const PanelGeometry& a, const PanelGeometry& b,
                                            const PairClassification& cls, const KernelParams& params,
                                            const QuadratureSpec& quad, const Vec3& dir) {
  params.validate();
  if (cls.kind != PanelPairClass::Near && cls.kind != PanelPairClass::Far) {
    throw NumericalError("kernel derivative requested for a touching panel pair");
  }
  const auto& rule = triangle_rule(cls.kind == PanelPairClass::Near ? quad.near_points : quad.far_points);
  PanelMoments value, deriv;
  regular_pair_moments_with_directional(panel_points(a, rule), a.centroid, panel_points(b, rule), b.centroid,
                                        params.kappa, dir, value, deriv);
  check_finite(deriv, a, b, cls.kind);
  return deriv;
}

Eigen::Matrix3d panel_pair_elements(const PanelMoments& m, const PanelGeometry& a,
                                    const PanelBasisSides& sa, const PanelGeometry& b,
                                    const PanelBasisSides& sb, double kappa) {
  const double inv_k2 = 1.0 / (kappa * kappa);
  Eigen::Matrix3d out;
  for (int k = 0; k < 3; ++k) {
    const auto ku = static_cast<size_t>(k);
    const Vec3 p = a.corners[ku] - a.centroid;
    const double ca = sa.sign[ku] * sa.length[ku] / a.area;
    for (int j = 0; j < 3; ++j) {
      const auto ju = static_cast<size_t>(j);
      const Vec3 q = b.corners[ju] - b.centroid;
      const double cb = sb.sign[ju] * sb.length[ju] / b.area;
      const double ff = 0.25 * (m.ixy - p.dot(m.iy) - q.dot(m.ix) + p.dot(q) * m.i0);
      out(k, j) = ca * cb * (ff + inv_k2 * m.i0);
    }
  }
  return out;
}

PanelBasisSides basis_sides(const RwgBasis& basis, int panel) {
  PanelBasisSides s;
  const auto& refs = basis.panel_edges(panel);
  for (size_t k = 0; k < 3; ++k) {
    if (refs[k].basis < 0) continue;
    s.sign[k] = refs[k].sign;
    s.length[k] = basis.edge(refs[k].basis).length;
  }
  return s;
}

double rwg_pair_integral(const Configuration& config, int obj_a, int alpha, int obj_b, int beta,
                         const KernelParams& params, const QuadratureSpec& quad) {
  params.validate();
  const ObjectInstance& A = config.object(obj_a);
  const ObjectInstance& B = config.object(obj_b);
  const RwgEdge& ea = A.basis().edge(alpha);
  const RwgEdge& eb = B.basis().edge(beta);
  double total = 0.0;
  for (int pa : {ea.plus_panel, ea.minus_panel}) {
    const PanelGeometry ga = PanelGeometry::from_mesh(A.placed(), pa, obj_a);
    const PanelBasisSides sa = basis_sides(A.basis(), pa);
    int ka = 0;
    while (A.basis().panel_edges(pa)[static_cast<size_t>(ka)].basis != alpha) ++ka;
    for (int pb : {eb.plus_panel, eb.minus_panel}) {
      const PanelGeometry gb = PanelGeometry::from_mesh(B.placed(), pb, obj_b);
      const PanelBasisSides sb = basis_sides(B.basis(), pb);
      int kb = 0;
      while (B.basis().panel_edges(pb)[static_cast<size_t>(kb)].basis != beta) ++kb;
      const auto cls = classify_pair(ga, gb, quad.near_factor);
      const PanelMoments m = panel_pair_moments(ga, gb, cls, params, quad);
      total += panel_pair_elements(m, ga, sa, gb, sb, params.kappa)(ka, kb);
    }
  }
  return total;
}

}  // namespace casimir
