#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "casimir/errors.hpp"
#include "casimir/mesh.hpp"

using namespace casimir;

namespace {

std::string data(const std::string& name) { return std::string(CASIMIR_TEST_DATA) + "/" + name; }

// Area of the level-s icosphere from its flat facets, computed independently
// of the generator by recursive midpoint subdivision of one icosahedron face.
double facet_area(const Vec3& a, const Vec3& b, const Vec3& c, int level) {
  if (level == 0) return 0.5 * (b - a).cross(c - a).norm();
  const Vec3 ab = (a + b).normalized(), bc = (b + c).normalized(), ca = (c + a).normalized();
  return facet_area(a, ab, ca, level - 1) + facet_area(ab, b, bc, level - 1) + facet_area(ca, bc, c, level - 1) +
         facet_area(ab, bc, ca, level - 1);
}

}  // namespace

TEST(ParseMsh, TetrahedronWithSparseIds) {
  const TriangleMesh m = read_msh_file(data("tetrahedron.msh"));
  EXPECT_EQ(m.vertex_count(), 4);  // node 99 is unreferenced and dropped
  EXPECT_EQ(m.panel_count(), 4);
  EXPECT_EQ(m.edge_count(), 6);
  EXPECT_EQ(m.euler_characteristic(), 2);
}

TEST(ParseMsh, Icosahedron) {
  const TriangleMesh m = read_msh_file(data("icosahedron.msh"));
  EXPECT_EQ(m.vertex_count(), 12);
  EXPECT_EQ(m.panel_count(), 20);
  EXPECT_EQ(m.edge_count(), 30);
  EXPECT_EQ(m.euler_characteristic(), 2);
}

TEST(ParseMsh, SingleTriangleIsOpen) {
  try {
    read_msh_file(data("single_triangle.msh"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("edge"), std::string::npos);
  }
}

TEST(ParseMsh, InconsistentOrientation) {
  EXPECT_THROW(read_msh_file(data("flipped.msh")), ValidationError);
}

TEST(ParseMsh, MalformedInputReportsLine) {
  try {
    read_msh_file(data("bad_header.msh"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(read_msh_file(data("truncated.msh")), ParseError);
  std::istringstream junk("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 zero 0\n$EndNodes\n");
  EXPECT_THROW(parse_msh(junk), ParseError);
}

TEST(ParseMsh, RoundTripThroughWriter) {
  const TriangleMesh a = generate_sphere(1.5, 1);
  std::stringstream s;
  write_msh(s, a);
  const TriangleMesh b = parse_msh(s);
  ASSERT_EQ(a.vertex_count(), b.vertex_count());
  ASSERT_EQ(a.panel_count(), b.panel_count());
  for (int i = 0; i < a.vertex_count(); ++i) EXPECT_EQ(a.vertex(i), b.vertex(i));
  for (int i = 0; i < a.panel_count(); ++i) EXPECT_EQ(a.panel(i).v, b.panel(i).v);
}

TEST(Validation, RejectsDuplicateVertices) {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}};
  EXPECT_THROW(TriangleMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 4}}), ValidationError);
}

TEST(Validation, RejectsDegeneratePanel) {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
  EXPECT_THROW(TriangleMesh(v, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}), ValidationError);
}

TEST(GenerateSphere, Level0) {
  const TriangleMesh m = generate_sphere(1.0, 0);
  EXPECT_EQ(m.panel_count(), 20);
  EXPECT_EQ(m.vertex_count(), 12);
  EXPECT_LT(m.total_area(), 4 * std::numbers::pi);
  EXPECT_GT(m.total_area(), 0.75 * 4 * std::numbers::pi);
}

TEST(GenerateSphere, Level2AreaMatchesFacetSum) {
  const TriangleMesh m = generate_sphere(1.0, 2);
  EXPECT_EQ(m.panel_count(), 320);
  // Independent facet sum over the 20 icosahedron faces.
  const double p = (1 + std::sqrt(5.0)) / 2;
  const Vec3 a = Vec3(-1, p, 0).normalized(), b = Vec3(1, p, 0).normalized(), c = Vec3(0, 1, p).normalized();
  const double expected = 20 * facet_area(a, c, b, 2);
  EXPECT_NEAR(m.total_area(), expected, 1e-12 * expected);
  EXPECT_NEAR(m.total_area(), 4 * std::numbers::pi, 0.02 * 4 * std::numbers::pi);
}

TEST(GenerateSphere, VerticesOnSphereAndOutward) {
  const TriangleMesh m = generate_sphere(2.0, 1);
  for (const auto& v : m.vertices()) EXPECT_NEAR(v.norm(), 2.0, 1e-14);
  for (const auto& p : m.panels()) EXPECT_GT(p.normal.dot(p.centroid), 0.0);
}

TEST(GenerateCapsule, DegeneratesToSphere) {
  const TriangleMesh m = generate_capsule(1.0, 2.0, 8);
  for (const auto& v : m.vertices()) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_EQ(m.euler_characteristic(), 2);
}

TEST(GenerateCapsule, ExtentAndArea) {
  const TriangleMesh m = generate_capsule(1.0, 6.0, 12);
  EXPECT_NEAR(m.bbox_max().z() - m.bbox_min().z(), 6.0, 1e-14);
  EXPECT_NEAR(m.bbox_max().x() - m.bbox_min().x(), 2.0, 1e-14);
  const TriangleMesh fine = generate_capsule(1.0, 6.0, 16);
  const double exact = 2 * std::numbers::pi * 4 + 4 * std::numbers::pi;
  EXPECT_NEAR(fine.total_area(), exact, 0.02 * exact);
  for (const auto& p : fine.panels()) EXPECT_GT(p.normal.dot(p.centroid), 0.0);
}

TEST(GenerateCapsule, RejectsBadArguments) {
  EXPECT_THROW(generate_capsule(1.0, 1.5, 12), GeometryError);
  EXPECT_THROW(generate_capsule(1.0, 4.0, 2), GeometryError);
}

TEST(GenerateTetrahedron, Regular) {
  const TriangleMesh m = generate_tetrahedron(1.0, 0);
  EXPECT_EQ(m.panel_count(), 4);
  EXPECT_NEAR(m.total_area(), std::sqrt(3.0), 1e-14);
  for (const auto& p : m.panels()) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR((m.vertex(p.v[static_cast<size_t>(k)]) - m.vertex(p.v[static_cast<size_t>((k + 1) % 3)])).norm(),
                  1.0, 1e-14);
    }
  }
  const TriangleMesh s1 = generate_tetrahedron(1.0, 1);
  EXPECT_EQ(s1.panel_count(), 16);
  EXPECT_NEAR(s1.total_area(), std::sqrt(3.0), 1e-14);
}

TEST(GenerateTetrahedron, Orientation) {
  const TriangleMesh m = generate_tetrahedron(1.0, 0);
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : m.vertices()) centroid += v / 4.0;
  EXPECT_LT(centroid.norm(), 1e-14);
  const Vec3 apex = tetrahedron_apex(1.0);
  EXPECT_NEAR(apex.x(), 0.0, 1e-15);
  EXPECT_NEAR(apex.y(), 0.0, 1e-15);
  int on_plus_x = 0;
  for (const auto& v : m.vertices()) {
    if (v.z() < apex.z() - 1e-12) {
      EXPECT_NEAR(v.z(), m.bbox_min().z(), 1e-14);  // base parallel to xy
      if (v.x() > 0 && std::abs(v.y()) < 1e-14) ++on_plus_x;
    }
  }
  EXPECT_EQ(on_plus_x, 1);
}

TEST(RwgBasis, CountsAndOrdering) {
  auto tet = std::make_shared<const TriangleMesh>(read_msh_file(data("tetrahedron.msh")));
  const RwgBasis b(tet);
  EXPECT_EQ(b.size(), 6);
  for (int i = 1; i < b.size(); ++i) {
    EXPECT_LT(std::make_pair(b.edge(i - 1).v1, b.edge(i - 1).v2), std::make_pair(b.edge(i).v1, b.edge(i).v2));
  }
  auto ico = std::make_shared<const TriangleMesh>(generate_sphere(1.0, 1));
  EXPECT_EQ(RwgBasis(ico).size(), 120);
}

TEST(RwgBasis, PlusPanelTraversesEdgeForward) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_sphere(1.0, 1));
  const RwgBasis b(mesh);
  for (const auto& e : b.edges()) {
    ASSERT_LT(e.v1, e.v2);
    const auto& v = mesh->panel(e.plus_panel).v;
    bool forward = false;
    for (size_t k = 0; k < 3; ++k) forward |= v[k] == e.v1 && v[(k + 1) % 3] == e.v2;
    EXPECT_TRUE(forward);
  }
}

TEST(RwgBasis, DivergenceAndChargeNeutrality) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_sphere(1.0, 1));
  const RwgBasis b(mesh);
  for (int i = 0; i < b.size(); ++i) {
    const RwgEdge& e = b.edge(i);
    const double ap = mesh->panel(e.plus_panel).area, am = mesh->panel(e.minus_panel).area;
    EXPECT_NEAR(b.divergence(i, e.plus_panel), e.length / ap, 1e-12);
    EXPECT_NEAR(b.divergence(i, e.minus_panel), -e.length / am, 1e-12);
    EXPECT_NEAR(b.divergence(i, e.plus_panel) * ap + b.divergence(i, e.minus_panel) * am, 0.0, 1e-14);
  }
}

TEST(RwgBasis, NormalComponentContinuousAcrossEdge) {
  auto mesh = std::make_shared<const TriangleMesh>(generate_sphere(1.0, 1));
  const RwgBasis b(mesh);
  for (int i = 0; i < b.size(); ++i) {
    const RwgEdge& e = b.edge(i);
    const Vec3 a = mesh->vertex(e.v1), c = mesh->vertex(e.v2);
    const Vec3 x = 0.3 * a + 0.7 * c;
    const Vec3 t = (c - a).normalized();
    // In-plane normal to the edge pointing out of the plus panel.
    const Vec3 np = t.cross(mesh->panel(e.plus_panel).normal);
    const Vec3 nm = t.cross(mesh->panel(e.minus_panel).normal);
    EXPECT_NEAR(b.value(i, e.plus_panel, x).dot(np), b.value(i, e.minus_panel, x).dot(nm), 1e-12);
    EXPECT_NEAR(b.value(i, e.plus_panel, x).dot(np), 1.0, 1e-12);
  }
}

TEST(RwgBasis, DeterministicAcrossParses) {
  auto a = std::make_shared<const TriangleMesh>(read_msh_file(data("icosahedron.msh")));
  auto c = std::make_shared<const TriangleMesh>(read_msh_file(data("icosahedron.msh")));
  const RwgBasis ba(a), bc(c);
  ASSERT_EQ(ba.size(), bc.size());
  for (int i = 0; i < ba.size(); ++i) {
    EXPECT_EQ(ba.edge(i).v1, bc.edge(i).v1);
    EXPECT_EQ(ba.edge(i).plus_panel, bc.edge(i).plus_panel);
    EXPECT_EQ(ba.edge(i).minus_free, bc.edge(i).minus_free);
  }
}

TEST(TriangleMesh, TransformRoundTrip) {
  const TriangleMesh m = generate_capsule(1.0, 4.0, 10);
  const Mat3 r = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  const Vec3 t(0.5, -2, 3);
  const TriangleMesh back = m.transformed(r, t).transformed(r.transpose(), -r.transpose() * t);
  for (int i = 0; i < m.vertex_count(); ++i) EXPECT_LT((back.vertex(i) - m.vertex(i)).norm(), 1e-12);
}
