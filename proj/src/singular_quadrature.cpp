// Sauter-Schwab cubature for panel pairs that share a vertex, an edge or are
// identical. Each panel is parametrized over {0 <= t2 <= t1 <= 1} by
// x = A0 + t1 (A1 - A0) + t2 (A2 - A1), shared corners first. The 4D domain is
// split into subdomains on which a Duffy-type substitution cancels the 1/r
// singularity, leaving a smooth integrand for tensor Gauss-Legendre.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/kernel.hpp"

namespace casimir {

namespace {

struct ReferenceTable {
  Eigen::ArrayXd x1, x2, y1, y2, w;
};

ReferenceTable build_table(PanelPairClass kind, int q) {
  const GaussRule g = gauss_legendre_unit(q);
  std::vector<double> x1, x2, y1, y2, w;
  auto push = [&](double a1, double a2, double b1, double b2, double weight) {
    x1.push_back(a1);
    x2.push_back(a2);
    y1.push_back(b1);
    y2.push_back(b2);
    w.push_back(weight);
  };
  for (int i = 0; i < q; ++i) {
    const double xi = g.nodes[static_cast<size_t>(i)];
    for (int j = 0; j < q; ++j) {
      const double e1 = g.nodes[static_cast<size_t>(j)];
      for (int k = 0; k < q; ++k) {
        const double e2 = g.nodes[static_cast<size_t>(k)];
        for (int l = 0; l < q; ++l) {
          const double e3 = g.nodes[static_cast<size_t>(l)];
          const double wt = g.weights[static_cast<size_t>(i)] * g.weights[static_cast<size_t>(j)] *
                            g.weights[static_cast<size_t>(k)] * g.weights[static_cast<size_t>(l)];
          switch (kind) {
            case PanelPairClass::SelfPanel: {
              const double jac = wt * xi * xi * xi * e1 * e1 * e2;
              push(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), jac);
              push(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), jac);
              push(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), jac);
              push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), jac);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), jac);
              push(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), jac);
              break;
            }
            case PanelPairClass::CommonEdge: {
              const double j1 = wt * xi * xi * xi * e1 * e1;
              const double j2 = j1 * e2;
              push(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), j1);
              push(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), j2);
              push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, j2);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, j2);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, j2);
              break;
            }
            case PanelPairClass::CommonVertex: {
              const double jac = wt * xi * xi * xi * e2;
              push(xi, xi * e1, xi * e2, xi * e2 * e3, jac);
              push(xi * e2, xi * e2 * e3, xi, xi * e1, jac);
              break;
            }
            default:
              throw NumericalError("no singular rule for a non-touching pair");
          }
        }
      }
    }
  }
  ReferenceTable t;
  t.x1 = Eigen::Map<Eigen::ArrayXd>(x1.data(), static_cast<Eigen::Index>(x1.size()));
  t.x2 = Eigen::Map<Eigen::ArrayXd>(x2.data(), static_cast<Eigen::Index>(x2.size()));
  t.y1 = Eigen::Map<Eigen::ArrayXd>(y1.data(), static_cast<Eigen::Index>(y1.size()));
  t.y2 = Eigen::Map<Eigen::ArrayXd>(y2.data(), static_cast<Eigen::Index>(y2.size()));
  t.w = Eigen::Map<Eigen::ArrayXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return t;
}

const ReferenceTable& reference_table(PanelPairClass kind, int q) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ReferenceTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<int>(kind), q);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_table(kind, q)).first;
  return it->second;
}

}  // namespace

PanelMoments singular_pair_moments(const PanelGeometry& a, const PanelGeometry& b,
                                   const PairClassification& cls, double kappa, int order) {
  const ReferenceTable& t = reference_table(cls.kind, order);
  auto corner = [](const PanelGeometry& p, const std::array<int, 3>& ord, int k) -> const Vec3& {
    return p.corners[static_cast<size_t>(ord[static_cast<size_t>(k)])];
  };
  const Vec3& a0 = corner(a, cls.order_a, 0);
  const Vec3 ea = corner(a, cls.order_a, 1) - a0;
  const Vec3 fa = corner(a, cls.order_a, 2) - corner(a, cls.order_a, 1);
  const Vec3& b0 = corner(b, cls.order_b, 0);
  const Vec3 eb = corner(b, cls.order_b, 1) - b0;
  const Vec3 fb = corner(b, cls.order_b, 2) - corner(b, cls.order_b, 1);
  // Shared first corner: x - y needs no absolute coordinates.
  const Vec3 base = a0 - b0;
  const Vec3 oa = a0 - a.centroid;
  const Vec3 ob = b0 - b.centroid;

  Eigen::ArrayXd lx[3], ly[3], d[3];
  for (int c = 0; c < 3; ++c) {
    lx[c] = t.x1 * ea(c) + t.x2 * fa(c);
    ly[c] = t.y1 * eb(c) + t.y2 * fb(c);
    d[c] = lx[c] - ly[c] + base(c);
  }
  const Eigen::ArrayXd r = (d[0].square() + d[1].square() + d[2].square()).sqrt();
  const double jac = 4.0 * a.area * b.area;
  const Eigen::ArrayXd wg = t.w * (-kappa * r).exp() / (4.0 * std::numbers::pi * r) * jac;

  PanelMoments m;
  m.i0 = wg.sum();
  double ixy = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::ArrayXd xr = lx[c] + oa(c);
    const Eigen::ArrayXd yr = ly[c] + ob(c);
    m.ix(c) = (wg * xr).sum();
    m.iy(c) = (wg * yr).sum();
    ixy += (wg * xr * yr).sum();
  }
  m.ixy = ixy;
  return m;
}

}  // namespace casimir
