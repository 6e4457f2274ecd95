#include "casimir/kappa_integration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "casimir/assembly.hpp"
#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

std::vector<KappaNode> kappa_nodes(int n_points, double kappa_scale) {
  if (n_points < 2) throw std::invalid_argument("kappa rule needs at least 2 points");
  if (!(kappa_scale > 0.0) || !std::isfinite(kappa_scale)) {
    throw std::invalid_argument("kappa scale must be positive and finite");
  }
  const GaussRule g = gauss_legendre_unit(n_points);
  std::vector<KappaNode> out;
  out.reserve(g.nodes.size());
  for (size_t k = 0; k < g.nodes.size(); ++k) {
    const double u = g.nodes[k];
    out.push_back({kappa_scale * u / (1.0 - u), g.weights[k] * kappa_scale / ((1.0 - u) * (1.0 - u))});
  }
  return out;
}

std::vector<KappaNode> kappa_nodes(const QuadratureSpec& spec) {
  spec.validate();
  return kappa_nodes(spec.n_points, spec.kappa_scale);
}

double resolve_kappa_scale(const Configuration& config, const QuadratureSpec& spec) {
  if (spec.kappa_scale > 0.0) return spec.kappa_scale;
  const double d = config.min_separation();
  if (!std::isfinite(d)) return 1.0;  // single object: the integrand vanishes anyway
  return 1.0 / d;
}

namespace {

std::string kappa_context(const std::string& what, double kappa) {
  std::ostringstream s;
  s.precision(6);
  s << what << " (at kappa=" << kappa << ")";
  return s.str();
}

struct Totals {
  double energy = 0.0;
  double force = 0.0;
  std::vector<IntegrandSample> samples;
};

Totals integrate(const Configuration& config, int object, const Vec3& direction, const QuadratureSpec& spec,
                 int n_points, const IntegrationOptions& opts) {
  const double k0 = resolve_kappa_scale(config, spec);
  const std::vector<KappaNode> nodes = kappa_nodes(n_points, k0);
  Totals t;
  t.samples.resize(nodes.size());
  AssemblyOptions aopts;
  aopts.workers = 1;
  aopts.max_dimension = opts.max_dimension;

  parallel_for(static_cast<int>(nodes.size()), opts.workers, [&](int k) {
    const double kappa = nodes[static_cast<size_t>(k)].kappa;
    IntegrandSample& s = t.samples[static_cast<size_t>(k)];
    try {
      auto [m, m_inf] = assemble_with_inf(config, kappa, spec, aopts);
      s.energy_integrand = logdet_ratio(m, m_inf, &s);
      s.kappa = kappa;
      if (object >= 0) {
        const MatrixDerivative dm = assemble_dz(config, object, kappa, spec, aopts, direction);
        s.force_integrand = force_trace(m, dm);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(kappa_context(e.what(), kappa));
    }
  });

  // Fixed summation order keeps results independent of the worker count.
  for (size_t k = 0; k < nodes.size(); ++k) {
    t.energy += nodes[k].weight * t.samples[k].energy_integrand;
    t.force += nodes[k].weight * t.samples[k].force_integrand;
  }
  t.energy /= 2.0 * std::numbers::pi;
  t.force /= -2.0 * std::numbers::pi;
  return t;
}

SweepResult run(const Configuration& config, int object, const Vec3& direction, const QuadratureSpec& spec,
                const IntegrationOptions& opts) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  SweepResult r;
  r.n_basis = config.dimension();
  if (config.object_count() < 2) {
    // M equals M_inf: both integrands vanish identically.
    if (object >= 0) r.force = 0.0;
    if (opts.error_estimate) r.error_estimate = 0.0;
    return r;
  }
  Totals full = integrate(config, object, direction, spec, spec.n_points, opts);
  r.energy = full.energy;
  if (object >= 0) r.force = full.force;
  r.samples = std::move(full.samples);
  if (opts.error_estimate) {
    const Totals half = integrate(config, object, direction, spec, std::max(2, spec.n_points / 2), opts);
    r.error_estimate = object >= 0 ? std::abs(full.force - half.force) : std::abs(full.energy - half.energy);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

SweepResult integrate_energy(const Configuration& config, const QuadratureSpec& spec,
                             const IntegrationOptions& opts) {
  return run(config, -1, Vec3::UnitZ(), spec, opts);
}

SweepResult integrate_force(const Configuration& config, int object, const QuadratureSpec& spec,
                            const IntegrationOptions& opts, const Vec3& direction) {
  if (object < 0 || object >= config.object_count()) throw GeometryError("force target index out of range");
  return run(config, object, direction, spec, opts);
}

}  // namespace casimir
