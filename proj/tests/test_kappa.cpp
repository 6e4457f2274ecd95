#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "casimir/errors.hpp"
#include "casimir/kappa_integration.hpp"
#include "casimir/presets.hpp"

using namespace casimir;

namespace {

double integrate(const std::vector<KappaNode>& nodes, double (*f)(double)) {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight * f(n.kappa);
  return s;
}

QuadratureSpec coarse_spec(int n = 16) {
  QuadratureSpec q;
  q.n_points = n;
  return q;
}

}  // namespace

TEST(KappaNodes, PositiveAndOrdered) {
  const auto nodes = kappa_nodes(24, 0.5);
  ASSERT_EQ(nodes.size(), 24u);
  for (size_t i = 0; i < nodes.size(); ++i) {
    EXPECT_GT(nodes[i].kappa, 0.0);
    EXPECT_GT(nodes[i].weight, 0.0);
    if (i > 0) EXPECT_GT(nodes[i].kappa, nodes[i - 1].kappa);
  }
  EXPECT_THROW(kappa_nodes(1, 1.0), std::invalid_argument);
  EXPECT_THROW(kappa_nodes(8, 0.0), std::invalid_argument);
}

TEST(KappaNodes, AnalyticIntegrals) {
  const auto nodes = kappa_nodes(24, 1.0);
  EXPECT_NEAR(integrate(nodes, [](double k) { return 1.0 / ((1 + k) * (1 + k)); }), 1.0, 1e-12);
  // e^-k at kappa_0 = 1 is slow for this mapping: 1.6e-8 at n = 24, 5.5e-10 at n = 32.
  EXPECT_NEAR(integrate(nodes, [](double k) { return std::exp(-k); }), 1.0, 2e-8);
  EXPECT_NEAR(integrate(kappa_nodes(32, 1.0), [](double k) { return std::exp(-k); }), 1.0, 1e-9);
  EXPECT_NEAR(integrate(nodes, [](double k) { return k * std::exp(-2 * k); }), 0.25, 3e-9);
  EXPECT_NEAR(integrate(nodes, [](double k) { return 1.0 / (1 + k * k); }), std::numbers::pi / 2, 1e-9);
  for (double d : {0.5, 4.0, 30.0}) {
    double s = 0.0;
    for (const auto& n : kappa_nodes(24, 1.0 / d)) s += n.weight * std::exp(-2 * n.kappa * d);
    EXPECT_NEAR(s, 1.0 / (2 * d), 1e-9) << "d=" << d;
  }
}

TEST(KappaNodes, ScaleFollowsSeparation) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  EXPECT_DOUBLE_EQ(resolve_kappa_scale(c, QuadratureSpec{}), 1.0 / c.min_separation());
  QuadratureSpec q;
  q.kappa_scale = 3.0;
  EXPECT_EQ(resolve_kappa_scale(c, q), 3.0);
}

TEST(Integration, SingleObjectHasZeroEnergy) {
  std::vector<ObjectInstance> objs;
  objs.emplace_back("only", std::make_shared<const TriangleMesh>(generate_sphere(1.0, 0)));
  const SweepResult r = integrate_energy(Configuration(std::move(objs)), coarse_spec());
  EXPECT_EQ(r.energy, 0.0);
}

TEST(Integration, AttractiveSpheres) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  const SweepResult r = integrate_force(c, 1, coarse_spec());
  EXPECT_LT(r.energy, 0.0);
  ASSERT_TRUE(r.force.has_value());
  EXPECT_LT(*r.force, 0.0);
  EXPECT_EQ(r.n_basis, c.dimension());
  EXPECT_EQ(r.samples.size(), 16u);
  for (const auto& s : r.samples) EXPECT_LE(s.energy_integrand, 0.0);
}

TEST(Integration, NewtonsThirdLaw) {
  const Configuration c = capsule_pair(1.0, 3.0, 6, 1.0, true);
  const double f1 = *integrate_force(c, 1, coarse_spec()).force;
  const double f0 = *integrate_force(c, 0, coarse_spec()).force;
  EXPECT_NEAR(f0 + f1, 0.0, 1e-10 * std::abs(f1));
}

TEST(Integration, MirrorSymmetricTransverseForceVanishes) {
  // Parallel capsules are mirror symmetric under y -> -y.
  const Configuration c = capsule_pair(1.0, 3.0, 6, 1.0, false);
  const double fz = *integrate_force(c, 1, coarse_spec()).force;
  const double fy = *integrate_force(c, 1, coarse_spec(), {}, Vec3::UnitY()).force;
  EXPECT_LE(std::abs(fy), 1e-8 * std::abs(fz));
}

TEST(Integration, TranslationInvariance) {
  const Configuration c = sphere_pair(1.0, 0, 3.5);
  const double e = integrate_energy(c, coarse_spec()).energy;
  const RigidTransform shift = RigidTransform::translate(Vec3(5, -2, 7));
  EXPECT_NEAR(integrate_energy(c.with_global_motion(shift), coarse_spec()).energy, e, 1e-10 * std::abs(e));
}

TEST(Integration, RotationInvariance) {
  const Configuration c = capsule_pair(1.0, 3.0, 6, 1.0, true);
  const double e = integrate_energy(c, coarse_spec()).energy;
  const RigidTransform motion =
      compose(RigidTransform::translate(Vec3(5, -2, 7)), RigidTransform::rotate_deg(Axis::Y, 29));
  EXPECT_NEAR(integrate_energy(c.with_global_motion(motion), coarse_spec()).energy, e, 1e-8 * std::abs(e));
}

TEST(Integration, InsensitiveToKappaScale) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  const double d = c.min_separation();
  QuadratureSpec q = coarse_spec(24);
  IntegrationOptions o;
  o.error_estimate = true;
  q.kappa_scale = 1.0 / d;
  const SweepResult ref = integrate_energy(c, q, o);
  for (double k0 : {0.5 / d, 2.0 / d}) {
    q.kappa_scale = k0;
    EXPECT_LT(std::abs(integrate_energy(c, q).energy - ref.energy), *ref.error_estimate) << "k0=" << k0;
  }
}

TEST(Integration, DoublingNodesChangesLittle) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  const double e24 = integrate_energy(c, coarse_spec(24)).energy;
  const double e48 = integrate_energy(c, coarse_spec(48)).energy;
  EXPECT_LT(std::abs(e48 - e24), 1e-3 * std::abs(e48));
}

TEST(Integration, ForceIsMinusEnergyGradient) {
  // kappa_0 is held fixed so both energies use the same nodes.
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  QuadratureSpec q = coarse_spec();
  q.kappa_scale = 0.5;
  const double h = 1e-4 * 4.0;
  const double ep = integrate_energy(c.with_motion(1, RigidTransform::translate(Vec3(0, 0, h))), q).energy;
  const double em = integrate_energy(c.with_motion(1, RigidTransform::translate(Vec3(0, 0, -h))), q).energy;
  const double f = *integrate_force(c, 1, q).force;
  EXPECT_NEAR(-(ep - em) / (2 * h), f, 1e-4 * std::abs(f));
}

TEST(Integration, WorkerCountIsDeterministic) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  IntegrationOptions one, three;
  three.workers = 3;
  const SweepResult a = integrate_force(c, 1, coarse_spec(), one);
  const SweepResult b = integrate_force(c, 1, coarse_spec(), three);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(*a.force, *b.force);
}

TEST(Integration, ErrorEstimateIsReported) {
  const Configuration c = sphere_pair(1.0, 0, 4.0);
  IntegrationOptions o;
  o.error_estimate = true;
  const SweepResult r = integrate_energy(c, coarse_spec(), o);
  ASSERT_TRUE(r.error_estimate.has_value());
  EXPECT_GE(*r.error_estimate, 0.0);
  EXPECT_LT(*r.error_estimate, 1e-2 * std::abs(r.energy));
  EXPECT_FALSE(integrate_energy(c, coarse_spec()).error_estimate.has_value());
}

TEST(Integration, RefusesOversizedProblems) {
  IntegrationOptions o;
  o.max_dimension = 10;
  EXPECT_THROW(integrate_energy(sphere_pair(1.0, 0, 4.0), coarse_spec(), o), NumericalError);
}
