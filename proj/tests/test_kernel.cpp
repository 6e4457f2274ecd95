#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "casimir/errors.hpp"
#include "casimir/kernel.hpp"
#include "reference_quadrature.hpp"

using namespace casimir;

namespace casimir {
void PrintTo(PanelPairClass c, std::ostream* os) { *os << to_string(c); }
}  // namespace casimir

namespace {

// Largest deviation of the 3x3 RWG element block built from two moment
// sets, relative to the largest reference element.
double element_error(const PanelMoments& got, const PanelMoments& ref, const PanelGeometry& a,
                     const PanelGeometry& b, double kappa) {
  PanelBasisSides sides;
  sides.sign = {1.0, -1.0, 1.0};
  sides.length = {1.0, 1.0, 1.0};
  const Eigen::Matrix3d eg = panel_pair_elements(got, a, sides, b, sides, kappa);
  const Eigen::Matrix3d er = panel_pair_elements(ref, a, sides, b, sides, kappa);
  return (eg - er).cwiseAbs().maxCoeff() / er.cwiseAbs().maxCoeff();
}

struct PanelPairFixture {
  TriangleMesh mesh = generate_sphere(1.0, 2);
  PanelGeometry panel(int i) const { return PanelGeometry::from_mesh(mesh, i, 0); }

  // First panel pair of the requested class with panel 0.
  std::pair<PanelGeometry, PanelGeometry> find(PanelPairClass kind) const {
    const PanelGeometry a = panel(0);
    for (int j = 0; j < mesh.panel_count(); ++j) {
      const PanelGeometry b = panel(j);
      if (classify_pair(a, b).kind == kind) return {a, b};
    }
    throw std::logic_error("no such pair");
  }
};

}  // namespace

TEST(ScalarGreen, ClosedForm) {
  EXPECT_NEAR(scalar_green(1.0, 1.0), std::exp(-1.0) / (4 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(scalar_green(1e-12, 2.0), 1.0 / (8 * std::numbers::pi), 1e-12);
  EXPECT_LT(scalar_green(10.0, 10.0), 1e-45);
  EXPECT_THROW(scalar_green(1.0, 0.0), NumericalError);
}

TEST(ScalarGreen, DzAnalytic) {
  EXPECT_NEAR(scalar_green_dz(1.0, Vec3(0, 0, 1), Vec3(0, 0, 0)), -2 * std::exp(-1.0) / (4 * std::numbers::pi),
              1e-15);
  EXPECT_EQ(scalar_green_dz(1.0, Vec3(1, 0, 0), Vec3(0, 0, 0)), 0.0);
  EXPECT_THROW(scalar_green_dz(1.0, Vec3(1, 0, 0), Vec3(1, 0, 0)), NumericalError);
}

TEST(ScalarGreen, DzMatchesFiniteDifference) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Vec3 x(u(rng), u(rng), u(rng)), xp(u(rng), u(rng), u(rng));
    const double kappa = 0.1 + 2.0 * std::abs(u(rng));
    const double r = (x - xp).norm();
    const double h = 1e-6 * r;
    const Vec3 dz(0, 0, h);
    const double fd = (scalar_green(kappa, (x + dz - xp).norm()) - scalar_green(kappa, (x - dz - xp).norm())) / (2 * h);
    EXPECT_NEAR(scalar_green_dz(kappa, x, xp), fd, 1e-8 * std::abs(fd) + 1e-12);
  }
}

TEST(ClassifyPair, Topology) {
  PanelPairFixture f;
  EXPECT_EQ(classify_pair(f.panel(0), f.panel(0)).kind, PanelPairClass::SelfPanel);
  EXPECT_NO_THROW(f.find(PanelPairClass::CommonEdge));
  EXPECT_NO_THROW(f.find(PanelPairClass::CommonVertex));
  EXPECT_NO_THROW(f.find(PanelPairClass::Near));
  EXPECT_NO_THROW(f.find(PanelPairClass::Far));
}

TEST(ClassifyPair, DifferentInstancesNeverTouch) {
  PanelPairFixture f;
  PanelGeometry b = f.panel(0);
  b.instance = 1;
  const auto c = classify_pair(f.panel(0), b);
  EXPECT_EQ(c.kind, PanelPairClass::Near);
}

class ReferenceAgreement : public ::testing::TestWithParam<PanelPairClass> {};

TEST_P(ReferenceAgreement, MomentsMatchAdaptiveReference) {
  PanelPairFixture f;
  const auto [a, b] = f.find(GetParam());
  const bool touching = GetParam() != PanelPairClass::Near && GetParam() != PanelPairClass::Far;
  for (double kappa : {0.5, 4.0}) {
    const PanelMoments got = panel_pair_moments(a, b, classify_pair(a, b), KernelParams{kappa}, QuadratureSpec{});
    const PanelMoments ref = oracle::reference_moments(a.corners, b.corners, kappa, touching ? 1e-7 : 1e-10);
    const double err = element_error(got, ref, a, b, kappa);
    EXPECT_LT(err, 1e-5) << "kappa=" << kappa;
  }
}

TEST(ReferenceAgreement, FarPairsOnSeparatedSpheres) {
  // Two unit spheres with a surface gap of 2R; closest and farthest panel pairs.
  const TriangleMesh lower = generate_sphere(1.0, 2).transformed(Mat3::Identity(), Vec3(0, 0, -2));
  const TriangleMesh upper = generate_sphere(1.0, 2).transformed(Mat3::Identity(), Vec3(0, 0, 2));
  int top = 0, bottom = 0, far_top = 0;
  for (int i = 0; i < lower.panel_count(); ++i) {
    if (lower.panel(i).centroid.z() > lower.panel(top).centroid.z()) top = i;
    if (lower.panel(i).centroid.z() < lower.panel(far_top).centroid.z()) far_top = i;
  }
  for (int i = 0; i < upper.panel_count(); ++i) {
    if (upper.panel(i).centroid.z() < upper.panel(bottom).centroid.z()) bottom = i;
  }
  const PanelGeometry b = PanelGeometry::from_mesh(upper, bottom, 1);
  for (int pa : {top, far_top}) {
    const PanelGeometry a = PanelGeometry::from_mesh(lower, pa, 0);
    ASSERT_EQ(classify_pair(a, b).kind, PanelPairClass::Far);
    for (double kappa : {0.25, 0.5, 1.0}) {
      const PanelMoments got = panel_pair_moments(a, b, classify_pair(a, b), KernelParams{kappa}, QuadratureSpec{});
      const PanelMoments ref = oracle::reference_moments(a.corners, b.corners, kappa, 1e-11);
      EXPECT_LT(element_error(got, ref, a, b, kappa), 1e-8) << "kappa=" << kappa;
    }
  }
}

namespace {

PanelGeometry rigidly_moved(PanelGeometry p, const Mat3& r, const Vec3& t) {
  for (auto& c : p.corners) c = r * c + t;
  p.centroid = r * p.centroid + t;
  return p;
}

PanelMoments swapped(const PanelMoments& m) { return {m.i0, m.iy, m.ix, m.ixy}; }

double moment_gap(const PanelMoments& a, const PanelMoments& b) {
  const double scale = std::abs(b.i0);
  return std::max({std::abs(a.i0 - b.i0), (a.ix - b.ix).cwiseAbs().maxCoeff(),
                   (a.iy - b.iy).cwiseAbs().maxCoeff(), std::abs(a.ixy - b.ixy)}) /
         scale;
}

}  // namespace

class KernelProperties : public ::testing::TestWithParam<PanelPairClass> {};

TEST_P(KernelProperties, ExchangeSymmetry) {
  PanelPairFixture f;
  const auto [a, b] = f.find(GetParam());
  const KernelParams k{1.3};
  const PanelMoments ab = panel_pair_moments(a, b, classify_pair(a, b), k, QuadratureSpec{});
  const PanelMoments ba = panel_pair_moments(b, a, classify_pair(b, a), k, QuadratureSpec{});
  const bool regular = GetParam() == PanelPairClass::Near || GetParam() == PanelPairClass::Far;
  EXPECT_LT(moment_gap(ab, swapped(ba)), regular ? 1e-13 : 1e-5);
}

TEST_P(KernelProperties, RotationCovariance) {
  PanelPairFixture f;
  const auto [a, b] = f.find(GetParam());
  const Mat3 r = (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized())).toRotationMatrix();
  const Vec3 t(0.3, -1.1, 2.0);
  const KernelParams k{0.8};
  const PanelMoments m = panel_pair_moments(a, b, classify_pair(a, b), k, QuadratureSpec{});
  const PanelGeometry ra = rigidly_moved(a, r, t), rb = rigidly_moved(b, r, t);
  PanelMoments mr = panel_pair_moments(ra, rb, classify_pair(ra, rb), k, QuadratureSpec{});
  mr.ix = r.transpose() * mr.ix;
  mr.iy = r.transpose() * mr.iy;
  EXPECT_LT(moment_gap(mr, m), 1e-12);
}

TEST_P(KernelProperties, PositiveAndDecreasingInKappa) {
  PanelPairFixture f;
  const auto [a, b] = f.find(GetParam());
  double prev = std::numeric_limits<double>::infinity();
  for (double kappa : {0.01, 0.1, 1.0, 10.0}) {
    const double i0 = panel_pair_moments(a, b, classify_pair(a, b), KernelParams{kappa}, QuadratureSpec{}).i0;
    EXPECT_GT(i0, 0.0);
    EXPECT_LT(i0, prev);
    prev = i0;
  }
}

TEST(KernelProperties, ScreeningBound) {
  // g <= e^{-kappa d} / (4 pi d) for all points at distance >= d.
  PanelPairFixture f;
  const auto [a, b] = f.find(PanelPairClass::Far);
  auto radius = [](const PanelGeometry& p) {
    double r = 0.0;
    for (const auto& c : p.corners) r = std::max(r, (c - p.centroid).norm());
    return r;
  };
  const double d = (a.centroid - b.centroid).norm() - radius(a) - radius(b);
  ASSERT_GT(d, 0.0);
  for (double kappa : {1.0, 10.0, 40.0}) {
    const double i0 = panel_pair_moments(a, b, classify_pair(a, b), KernelParams{kappa}, QuadratureSpec{}).i0;
    EXPECT_LE(i0, a.area * b.area * scalar_green(kappa, d)) << "kappa=" << kappa;
  }
}

TEST(KernelProperties, DirectionalMomentsMatchFiniteDifference) {
  PanelPairFixture f;
  for (PanelPairClass kind : {PanelPairClass::Near, PanelPairClass::Far}) {
    const auto [a, b] = f.find(kind);
    const Vec3 dir = Vec3(0.3, -0.5, 0.8).normalized();
    const KernelParams k{0.9};
    const double h = 1e-5;
    const PanelMoments d = panel_pair_moments_directional(a, b, classify_pair(a, b), k, QuadratureSpec{}, dir);
    const PanelGeometry ap = rigidly_moved(a, Mat3::Identity(), h * dir);
    const PanelGeometry am = rigidly_moved(a, Mat3::Identity(), -h * dir);
    const PanelMoments mp = panel_pair_moments(ap, b, classify_pair(a, b), k, QuadratureSpec{});
    const PanelMoments mm = panel_pair_moments(am, b, classify_pair(a, b), k, QuadratureSpec{});
    const double fd = (mp.i0 - mm.i0) / (2 * h);
    EXPECT_NEAR(d.i0, fd, 1e-7 * std::abs(fd)) << to_string(kind);
    EXPECT_NEAR(d.ixy, (mp.ixy - mm.ixy) / (2 * h), 1e-7 * std::abs(fd)) << to_string(kind);
    EXPECT_LT((d.ix - (mp.ix - mm.ix) / (2 * h)).norm(), 1e-7 * std::abs(fd)) << to_string(kind);
  }
}

TEST(KernelProperties, ElementBlockIsSymmetricForSamePanel) {
  PanelPairFixture f;
  const PanelGeometry a = f.panel(3);
  PanelBasisSides sides;
  sides.sign = {1.0, -1.0, 1.0};
  sides.length = {0.3, 0.4, 0.5};
  const PanelMoments m = panel_pair_moments(a, a, classify_pair(a, a), KernelParams{0.5}, QuadratureSpec{});
  const Eigen::Matrix3d e = panel_pair_elements(m, a, sides, a, sides, 0.5);
  EXPECT_LT((e - e.transpose()).cwiseAbs().maxCoeff(), 1e-12 * e.cwiseAbs().maxCoeff());
  sides.sign[1] = 0.0;
  const Eigen::Matrix3d z = panel_pair_elements(m, a, sides, a, sides, 0.5);
  EXPECT_EQ(z.row(1).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(z.col(1).cwiseAbs().maxCoeff(), 0.0);
}

INSTANTIATE_TEST_SUITE_P(AllClasses, KernelProperties,
                         ::testing::Values(PanelPairClass::SelfPanel, PanelPairClass::CommonEdge,
                                           PanelPairClass::CommonVertex, PanelPairClass::Near,
                                           PanelPairClass::Far),
                         [](const auto& info) {
                           std::string s = to_string(info.param);
                           s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
                           return s;
                         });

INSTANTIATE_TEST_SUITE_P(AllClasses, ReferenceAgreement,
                         ::testing::Values(PanelPairClass::SelfPanel, PanelPairClass::CommonEdge,
                                           PanelPairClass::CommonVertex, PanelPairClass::Near,
                                           PanelPairClass::Far),
                         [](const auto& info) {
                           std::string s = to_string(info.param);
                           s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
                           return s;
                         });
