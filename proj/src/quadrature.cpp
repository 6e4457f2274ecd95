#include "casimir/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir {

GaussRule gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussRule r;
  r.nodes.resize(static_cast<size_t>(n));
  r.weights.resize(static_cast<size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<size_t>(i), hi = static_cast<size_t>(n - 1 - i);
    r.nodes[lo] = 0.5 * (1.0 - z);
    r.nodes[hi] = 0.5 * (1.0 + z);
    r.weights[lo] = r.weights[hi] = 0.5 * w;
  }
  return r;
}

namespace {

// Dunavant symmetric rules. Orbits: centroid, (a, a, 1-2a), (a, b, 1-a-b).
struct Orbit {
  int kind;  // 1 centroid, 3 one free coordinate, 6 two free coordinates
  double a, b, w;
};

TriangleRule build(int degree, std::initializer_list<Orbit> orbits) {
  TriangleRule r;
  r.degree = degree;
  auto push = [&](double x, double y, double z, double w) {
    r.b0.push_back(x);
    r.b1.push_back(y);
    r.b2.push_back(z);
    r.weights.push_back(w);
  };
  for (const auto& o : orbits) {
    if (o.kind == 1) {
      push(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, o.w);
    } else if (o.kind == 3) {
      const double c = 1.0 - 2.0 * o.a;
      push(o.a, o.a, c, o.w);
      push(o.a, c, o.a, o.w);
      push(c, o.a, o.a, o.w);
    } else {
      const double c = 1.0 - o.a - o.b;
      push(o.a, o.b, c, o.w);
      push(o.a, c, o.b, o.w);
      push(o.b, o.a, c, o.w);
      push(o.b, c, o.a, o.w);
      push(c, o.a, o.b, o.w);
      push(c, o.b, o.a, o.w);
    }
  }
  return r;
}

TriangleRule make_rule(int points) {
  switch (points) {
    case 1: return build(1, {{1, 0, 0, 1.0}});
    case 3: return build(2, {{3, 1.0 / 6.0, 0, 1.0 / 3.0}});
    case 6:
      return build(4, {{3, 0.445948490915965, 0, 0.223381589678011},
                       {3, 0.091576213509771, 0, 0.109951743655322}});
    case 7:
      return build(5, {{1, 0, 0, 0.225000000000000},
                       {3, 0.470142064105115, 0, 0.132394152788506},
                       {3, 0.101286507323456, 0, 0.125939180544827}});
    case 12:
      return build(6, {{3, 0.249286745170910, 0, 0.116786275726379},
                       {3, 0.063089014491502, 0, 0.050844906370207},
                       {6, 0.310352451033784, 0.053145049844817, 0.082851075618374}});
    case 16:
      return build(8, {{1, 0, 0, 0.144315607677787},
                       {3, 0.459292588292723, 0, 0.095091634267285},
                       {3, 0.170569307751760, 0, 0.103217370534718},
                       {3, 0.050547228317031, 0, 0.032458497623198},
                       {6, 0.263112829634638, 0.008394777409958, 0.027230314174435}});
    default:
      throw std::invalid_argument("no symmetric triangle rule with " + std::to_string(points) + " points");
  }
}

}  // namespace

const TriangleRule& triangle_rule(int points) {
  static std::mutex mu;
  static std::map<int, TriangleRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, make_rule(points)).first;
  return it->second;
}

void QuadratureSpec::validate() const {
  if (n_points < 4) throw std::invalid_argument("xi quadrature needs at least 4 points");
  if (kappa_scale < 0.0 || !std::isfinite(kappa_scale)) throw std::invalid_argument("kappa scale must be >= 0");
  if (duffy_order < 1) throw std::invalid_argument("singular quadrature order must be >= 1");
  if (!(near_factor >= 0.0)) throw std::invalid_argument("near factor must be >= 0");
  triangle_rule(far_points);
  triangle_rule(near_points);
}

}  // namespace casimir
