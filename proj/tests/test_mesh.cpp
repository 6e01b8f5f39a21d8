#include "support.hpp"

#include "ehl/errors.hpp"
#include "ehl/fe.hpp"
#include "ehl/mesh.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

namespace ehl {
namespace {

double min_reference_detj(const Mesh& m) {
  double mn = 1e300;
  for (const Quad& q : m.elements)
    for (const auto& gp : fe::gauss_quad_2x2()) {
      const auto dN = fe::quad_shape_deriv(gp.xi, gp.eta);
      Mat2 J = Mat2::Zero();
      for (int a = 0; a < 4; ++a) J += m.nodes[q.nodes[a]] * dN.col(a).transpose();
      mn = std::min(mn, J.determinant());
    }
  return mn;
}

// Every element edge used by exactly one element must carry exactly one
// facet, and facets only sit on such edges.
void expect_boundary_partition(const Mesh& m) {
  std::map<std::pair<Index, Index>, int> edges;
  for (const Quad& q : m.elements)
    for (int a = 0; a < 4; ++a) {
      Index i = q.nodes[a], j = q.nodes[(a + 1) % 4];
      edges[{std::min(i, j), std::max(i, j)}]++;
    }
  std::set<std::pair<Index, Index>> boundary;
  for (auto& [e, c] : edges)
    if (c == 1) boundary.insert(e);
  std::multiset<std::pair<Index, Index>> tagged;
  for (const Facet& f : m.facets)
    tagged.insert({std::min(f.nodes[0], f.nodes[1]), std::max(f.nodes[0], f.nodes[1])});
  EXPECT_EQ(tagged.size(), boundary.size());
  for (const auto& e : boundary) EXPECT_EQ(tagged.count(e), 1u);
}

TEST(GeneratePin, DefaultResolution) {
  const Mesh m = generate_pin(1.5, 1.0, 1.0, 40);
  EXPECT_EQ(m.facets_in(BoundarySet::Slave).size(), 40u);
  EXPECT_NO_THROW(m.validate());
  EXPECT_GT(min_reference_detj(m), 0.0);
  expect_boundary_partition(m);
  EXPECT_FALSE(m.facets_in(BoundarySet::Dirichlet).empty());
}

TEST(GeneratePin, TwoFacetsSpanTheArc) {
  const Mesh m = generate_pin(1.5, 1.0, 1.0, 2);
  const auto nodes = m.nodes_in(BoundarySet::Slave);
  ASSERT_EQ(nodes.size(), 3u);
  double xmin = 1e9, xmax = -1e9;
  for (Index n : nodes) {
    xmin = std::min(xmin, m.nodes[n].x());
    xmax = std::max(xmax, m.nodes[n].x());
  }
  EXPECT_NEAR(xmax - xmin, 1.0, 1e-12);
  EXPECT_NO_THROW(m.validate());
}

TEST(GeneratePin, ManyResolutionsValid) {
  for (Index n : {3, 7, 16, 33})
    for (Index h : {0, 1, 5}) {
      const Mesh m = generate_pin(1.5, 1.0, 1.0, n, h, 0.01);
      EXPECT_NO_THROW(m.validate()) << n << ' ' << h;
      EXPECT_GT(min_reference_detj(m), 0.0);
      expect_boundary_partition(m);
      double ymin = 1e9;
      for (const Vec2& x : m.nodes) ymin = std::min(ymin, x.y());
      EXPECT_GE(ymin, 0.01 - 1e-12);
      if (n % 2 == 0) EXPECT_NEAR(ymin, 0.01, 1e-12);  // a node sits at the lowest point
    }
}

TEST(GenerateHalfCylinder, DefaultCount) {
  const Mesh m = generate_half_cylinder(4.0, 0.1, 4800, 1);
  EXPECT_EQ(m.facets_in(BoundarySet::Slave).size(), 4800u);
  EXPECT_GT(min_reference_detj(m), 0.0);
}

TEST(GenerateHalfCylinder, CoarseRing) {
  const Mesh m = generate_half_cylinder(4.0, 0.1, 8, 2);
  EXPECT_EQ(m.facets_in(BoundarySet::Slave).size(), 8u);
  EXPECT_NO_THROW(m.validate());
  expect_boundary_partition(m);
  const InterfaceMesh im = InterfaceMesh::from_slave(m);
  EXPECT_EQ(im.num_nodes(), 9);
  EXPECT_EQ(im.num_facets(), 8);
  // ordered left to right along the bottom
  for (Index i = 0; i + 1 < im.num_nodes(); ++i)
    EXPECT_LT(m.nodes[im.nodes[i]].x(), m.nodes[im.nodes[i + 1]].x());
}

TEST(CurrentNormal, HorizontalBottomFacetPointsDown) {
  const Mesh m = test::block_mesh(2, 1, 1.0, 1.0, 0.0, BoundarySet::Slave);
  const VecX d = VecX::Zero(m.num_dofs());
  for (Index f : m.facets_in(BoundarySet::Slave)) {
    const Vec2 n = current_normal(m, f, d);
    EXPECT_NEAR(n.x(), 0.0, 1e-15);
    EXPECT_NEAR(n.y(), -1.0, 1e-15);
  }
}

TEST(CurrentNormal, RotatesWithRigidRotation) {
  const Mesh m = test::block_mesh(2, 1, 1.0, 1.0, 0.0, BoundarySet::Slave);
  VecX d(m.num_dofs());
  for (Index n = 0; n < m.num_nodes(); ++n) {
    const Vec2 X = m.nodes[n];
    d.segment<2>(2 * n) = Vec2(-X.y(), X.x()) - X;  // +90 degrees
  }
  const Index f = m.facets_in(BoundarySet::Slave).front();
  const Vec2 n = current_normal(m, f, d);
  EXPECT_NEAR(n.x(), 1.0, 1e-14);
  EXPECT_NEAR(n.y(), 0.0, 1e-14);
}

TEST(CurrentNormal, UnitLengthUnderRandomDeformation) {
  const Mesh m = generate_pin(1.5, 1.0, 1.0, 20);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  VecX d(m.num_dofs());
  for (Index i = 0; i < d.size(); ++i) d[i] = u(rng);
  for (Index f : m.facets_in(BoundarySet::Slave))
    EXPECT_NEAR(current_normal(m, f, d).norm(), 1.0, 1e-14);
}

TEST(InterfaceMesh, NodesEqualSlaveSurfaceNodes) {
  const Mesh m = generate_pin(1.5, 1.0, 1.0, 12);
  const InterfaceMesh im = InterfaceMesh::from_slave(m);
  std::vector<Index> a = im.nodes;
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, m.nodes_in(BoundarySet::Slave));
  for (Index i = 0; i < im.num_facets(); ++i) {
    const Facet& f = m.facets[im.facets[i]];
    EXPECT_EQ(f.nodes[0], im.nodes[i]);
    EXPECT_EQ(f.nodes[1], im.nodes[i + 1]);
  }
}

TEST(MeshIo, RoundTripIsExact) {
  const Mesh m = generate_pin(1.5, 1.0, 1.0, 9, 3, 0.002);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh back = read_mesh(ss);
  EXPECT_EQ(back, m);
}

TEST(MeshIo, SparseIdsAndComments) {
  std::istringstream in(R"(# two-element strip
NODES
10 0 0
20 1 0
30 1 1
40 0 1
ELEMS
7 1 10 20 30 40
FACETS
1 slave 10 20
2 dirichlet 30 40
)");
  const Mesh m = read_mesh(in);
  EXPECT_EQ(m.num_nodes(), 4);
  EXPECT_EQ(m.elements.front().nodes[2], 2);
  EXPECT_NO_THROW(m.validate());
}

TEST(MeshIo, MalformedInputRejected) {
  std::istringstream unknown("NODES\n1 0 0\nELEMS\n1 1 1 2 3 4\n");
  EXPECT_THROW(read_mesh(unknown), InvalidGeometry);
  std::istringstream outside("1 0 0\n");
  EXPECT_THROW(read_mesh(outside), InvalidGeometry);
  EXPECT_THROW(read_mesh_file("/nonexistent/mesh.txt"), IoError);
}

TEST(Validate, RejectsClockwiseElement) {
  Mesh m = test::block_mesh(1, 1, 1.0, 1.0);
  std::swap(m.elements[0].nodes[1], m.elements[0].nodes[3]);
  EXPECT_THROW(m.validate(), InvalidGeometry);
}

TEST(Validate, RejectsSlaveFacetWithoutOwner) {
  Mesh m = test::block_mesh(2, 1, 1.0, 1.0);
  m.facets.push_back({{0, 4}, BoundarySet::Slave});
  EXPECT_THROW(m.validate(), InvalidGeometry);
}

TEST(Validate, RejectsSlaveAndMasterOnSameBody) {
  Mesh m = test::block_mesh(2, 1, 1.0, 1.0, 0.0, BoundarySet::Slave, BoundarySet::Master);
  EXPECT_THROW(m.validate(), InvalidGeometry);
}

}  // namespace
}  // namespace ehl
