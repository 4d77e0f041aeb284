#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <gtest/gtest.h>

#include "nitsche/mesh.hpp"

using namespace nitsche;

TEST(Mesh, SmallestMesh) {
  auto mesh = build_structured_mesh(1, 1, {0, 0, 1, 1});
  EXPECT_EQ(mesh.n_vertices(), 4u);
  EXPECT_EQ(mesh.n_triangles(), 2u);
  EXPECT_EQ(mesh.boundary_facets().size(), 4u);
}

TEST(Mesh, Counts16) {
  auto mesh = build_structured_mesh(16, 16, {-2.01, -2.01, 2.01, 2.01});
  EXPECT_EQ(mesh.n_vertices(), 289u);
  EXPECT_EQ(mesh.n_triangles(), 512u);
  EXPECT_EQ(mesh.boundary_facets().size(), 64u);
}

TEST(Mesh, DegenerateBBoxThrows) {
  EXPECT_THROW(build_structured_mesh(2, 2, {0, 0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(build_structured_mesh(0, 2, {0, 0, 1, 1}), std::invalid_argument);
}

TEST(Mesh, AreasSumAndOrientation) {
  for (auto diag : {Diagonal::LowerLeftUpperRight, Diagonal::UpperLeftLowerRight}) {
    BBox box{-1.5, 0.25, 2.0, 3.0};
    auto mesh = build_structured_mesh(7, 5, box, diag);
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
      double a = signed_area(mesh.corners(t));
      EXPECT_GT(a, 0.0);
      total += a;
    }
    EXPECT_NEAR(total, box.area(), 1e-12 * box.area());
  }
}

TEST(Mesh, EdgeSharing) {
  auto mesh = build_structured_mesh(5, 4, {0, 0, 1, 1});
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  for (auto tri : mesh.triangles()) {
    for (int e = 0; e < 3; ++e) {
      auto a = tri[e], b = tri[(e + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::size_t boundary = 0;
  for (auto& [edge, c] : count) {
    EXPECT_TRUE(c == 1 || c == 2);
    if (c == 1) ++boundary;
  }
  EXPECT_EQ(boundary, mesh.boundary_facets().size());
  for (auto f : mesh.boundary_facets()) {
    auto tri = mesh.triangles()[f.triangle];
    auto a = tri[f.local_edge], b = tri[(f.local_edge + 1) % 3];
    EXPECT_EQ((count[{std::min(a, b), std::max(a, b)}]), 1);
  }
}

TEST(Mesh, SizeIsDiagonalOfCell) {
  auto mesh = build_structured_mesh(16, 16, {-2.01, -2.01, 2.01, 2.01});
  EXPECT_NEAR(mesh.h(), 4.02 / 16 * std::sqrt(2.0), 1e-14);
}

TEST(ElementGeometry, UnitTriangle) {
  auto g = triangle_geometry({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  EXPECT_DOUBLE_EQ(g.area, 0.5);
  // Edge 1 joins (1,0) and (0,1).
  EXPECT_NEAR(g.normals[1].x, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.normals[1].y, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.normals[0].y, -1.0, 1e-15);
  EXPECT_NEAR(g.normals[2].x, -1.0, 1e-15);
  Point2 p = g.map(1, 0);
  EXPECT_EQ(p, (Point2{1, 0}));
  p = g.map(0, 1);
  EXPECT_EQ(p, (Point2{0, 1}));
}

TEST(ElementGeometry, ScalingAndClosure) {
  Triangle t{Point2{0.1, 0.2}, Point2{1.3, 0.4}, Point2{0.5, 1.7}};
  Triangle t2{2.0 * t[0], 2.0 * t[1], 2.0 * t[2]};
  auto g = triangle_geometry(t);
  auto g2 = triangle_geometry(t2);
  EXPECT_NEAR(g2.area, 4 * g.area, 1e-14);
  Point2 sum{};
  for (int e = 0; e < 3; ++e) {
    EXPECT_NEAR(g.normals[e].x, g2.normals[e].x, 1e-15);
    EXPECT_NEAR(g.normals[e].y, g2.normals[e].y, 1e-15);
    EXPECT_NEAR(norm(g.normals[e]), 1.0, 1e-15);
    sum = sum + g.edge_lengths[e] * g.normals[e];
    // Outward: the opposite vertex lies behind the edge.
    Point2 mid = 0.5 * (t[e] + t[(e + 1) % 3]);
    EXPECT_LT(dot(t[(e + 2) % 3] - mid, g.normals[e]), 0.0);
  }
  EXPECT_NEAR(sum.x, 0.0, 1e-14);
  EXPECT_NEAR(sum.y, 0.0, 1e-14);
}

TEST(Mesh, TextDump) {
  auto mesh = build_structured_mesh(1, 1, {0, 0, 1, 1});
  std::ostringstream out;
  write_text(mesh, out);
  std::istringstream in(out.str());
  std::string tag;
  int v = 0, t = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("t ", 0) == 0) ++t;
  }
  EXPECT_EQ(v, 4);
  EXPECT_EQ(t, 2);
}
