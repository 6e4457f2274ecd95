#pragma once

#include <vector>

namespace casimir {

/// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre_unit(int n);

/// Symmetric rule on the reference triangle, barycentric points, weights
/// summing to 1 (multiply by the panel area).
struct TriangleRule {
  std::vector<double> b0, b1, b2;
  std::vector<double> weights;
  int degree = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Available point counts: 1, 3, 6, 7, 12, 16 (degrees 1, 2, 4, 5, 6, 8).
const TriangleRule& triangle_rule(int points);

/// Every quadrature knob of a computation: the mapped Gauss-Legendre rule
/// for the imaginary-frequency integral and the panel-pair rules.
struct QuadratureSpec {
  int n_points = 24;
  /// kappa_0 in kappa = kappa_0 u / (1 - u). Zero means 1 / d_min.
  double kappa_scale = 0.0;
  int far_points = 6;
  int near_points = 16;
  int duffy_order = 5;
  /// Pairs closer than near_factor * max diameter use the near rule.
  double near_factor = 3.0;

  void validate() const;  // throws std::invalid_argument
};

}  // namespace casimir
