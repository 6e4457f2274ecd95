#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/spectral.hpp"

namespace casimir {

struct KappaNode {
  double kappa;
  double weight;
};

/// Gauss-Legendre nodes on (0,1) mapped by kappa = k0 u / (1 - u).
/// `kappa_scale` must be positive (resolve the 1/d_min default first).
std::vector<KappaNode> kappa_nodes(int n_points, double kappa_scale);
std::vector<KappaNode> kappa_nodes(const QuadratureSpec& spec);

/// spec.kappa_scale, or 1/d_min of the configuration when it is zero.
double resolve_kappa_scale(const Configuration& config, const QuadratureSpec& spec);

struct SweepResult {
  std::string param_name;
  std::string param_value;
  double energy = 0.0;           // hbar c / length
  std::optional<double> force;   // hbar c / length^2
  std::optional<double> error_estimate;
  int n_basis = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";
  std::vector<IntegrandSample> samples;
};

struct IntegrationOptions {
  /// kappa samples evaluated concurrently; each sample assembles serially.
  int workers = 1;
  /// Re-run the whole integral on an independent n/2-point rule.
  bool error_estimate = false;
  int max_dimension = 6000;
};

SweepResult integrate_energy(const Configuration& config, const QuadratureSpec& spec,
                             const IntegrationOptions& opts = {});

/// Force on `object` along `direction`; the energy is reported too.
SweepResult integrate_force(const Configuration& config, int object, const QuadratureSpec& spec,
                            const IntegrationOptions& opts = {}, const Vec3& direction = Vec3::UnitZ());

}  // namespace casimir
