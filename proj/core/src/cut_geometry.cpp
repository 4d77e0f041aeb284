#include "nitsche/cut_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nitsche {

std::vector<double> LevelSet::vertex_values(const Mesh& mesh) const {
  std::vector<double> values;
  values.reserve(mesh.n_vertices());
  for (const auto& v : mesh.vertices()) values.push_back(phi_(v));
  return values;
}

LevelSet levelset_l4_norm() {
  return LevelSet([](Point2 p) {
    return std::pow(p.x * p.x * p.x * p.x + p.y * p.y * p.y * p.y, 0.25) - 1.0;
  });
}

LevelSet levelset_planar(double a, double b, double c) {
  return LevelSet([a, b, c](Point2 p) { return a * p.x + b * p.y + c; });
}

double snapped_value(double value, double h) {
  double tol = kSnapTolerance * h;
  return std::abs(value) < tol ? tol : value;
}

CutInfo cut_triangle(const Triangle& corners, std::array<double, 3> values, double h) {
  double tol = kSnapTolerance * h;
  if (std::abs(values[0]) < tol && std::abs(values[1]) < tol && std::abs(values[2]) < tol) {
    throw DegenerateLevelSetError("cut_triangle: level set vanishes on the whole element");
  }
  for (double& v : values) v = snapped_value(v, h);

  const double area = signed_area(corners);
  CutInfo info;
  int n_neg = int(values[0] < 0.0) + int(values[1] < 0.0) + int(values[2] < 0.0);
  if (n_neg == 3) {
    info.classification = Side::Negative;
    info.sub_triangles_neg = {corners};
    info.kappa = {1.0, 0.0};
    info.sub_areas = {area, 0.0};
    return info;
  }
  if (n_neg == 0) {
    info.classification = Side::Positive;
    info.sub_triangles_pos = {corners};
    info.kappa = {0.0, 1.0};
    info.sub_areas = {0.0, area};
    return info;
  }

  info.classification = Side::Cut;
  // The lone vertex is the one whose sign differs from the other two.
  bool lone_negative = n_neg == 1;
  int lone = 0;
  for (int i = 0; i < 3; ++i) {
    if ((values[i] < 0.0) == lone_negative) lone = i;
  }
  int o1 = (lone + 1) % 3;
  int o2 = (lone + 2) % 3;

  auto root = [&](int a, int b) {
    double t = values[a] / (values[a] - values[b]);
    return corners[a] + t * (corners[b] - corners[a]);
  };
  Point2 p1 = root(lone, o1);
  Point2 p2 = root(lone, o2);

  Triangle lone_tri{corners[lone], p1, p2};
  std::array<Triangle, 2> quad_tris;
  if (norm(corners[o2] - p1) <= norm(p2 - corners[o1])) {
    quad_tris = {Triangle{p1, corners[o1], corners[o2]}, Triangle{p1, corners[o2], p2}};
  } else {
    quad_tris = {Triangle{p1, corners[o1], p2}, Triangle{corners[o1], corners[o2], p2}};
  }

  double lone_area = signed_area(lone_tri);
  double quad_area = signed_area(quad_tris[0]) + signed_area(quad_tris[1]);
  int lone_domain = lone_negative ? 0 : 1;
  auto& lone_list = lone_negative ? info.sub_triangles_neg : info.sub_triangles_pos;
  auto& quad_list = lone_negative ? info.sub_triangles_pos : info.sub_triangles_neg;
  lone_list = {lone_tri};
  quad_list = {quad_tris[0], quad_tris[1]};
  info.sub_areas[lone_domain] = lone_area;
  info.sub_areas[1 - lone_domain] = quad_area;
  double total = lone_area + quad_area;
  info.kappa = {info.sub_areas[0] / total, info.sub_areas[1] / total};

  // Gradient of the linear interpolant is normal to its zero line and points
  // toward increasing values.
  P1Element element(corners);
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) grad += values[i] * element.gradient(i);
  grad.normalize();

  InterfaceSegment seg;
  seg.p = p1;
  seg.q = p2;
  seg.normal = {grad.x(), grad.y()};
  seg.length = norm(p2 - p1);
  info.segment = seg;
  return info;
}

CutInfo classify_and_cut(const Mesh& mesh, std::size_t t, std::span<const double> vertex_values) {
  const auto& tri = mesh.triangles()[t];
  return cut_triangle(mesh.corners(t),
                      {vertex_values[tri[0]], vertex_values[tri[1]], vertex_values[tri[2]]},
                      mesh.h());
}

std::vector<CutInfo> classify_and_cut(const Mesh& mesh, std::span<const double> vertex_values) {
  if (vertex_values.size() != mesh.n_vertices()) {
    throw std::invalid_argument("classify_and_cut: one value per mesh vertex required");
  }
  std::vector<CutInfo> cuts;
  cuts.reserve(mesh.n_triangles());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    cuts.push_back(classify_and_cut(mesh, t, vertex_values));
  }
  return cuts;
}

std::vector<CutInfo> classify_and_cut(const Mesh& mesh, const LevelSet& levelset) {
  auto values = levelset.vertex_values(mesh);
  return classify_and_cut(mesh, values);
}

std::vector<InterfacePoint> interface_quadrature(const CutInfo& info, const QuadRule& rule) {
  if (!info.is_cut() || !info.segment) {
    throw std::logic_error("interface_quadrature: element is not cut");
  }
  const auto& seg = *info.segment;
  std::vector<InterfacePoint> points;
  points.reserve(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    double s = rule.points[k][0];
    points.push_back({seg.p + s * (seg.q - seg.p), rule.weights[k] * seg.length, seg.normal});
  }
  return points;
}

}  // namespace nitsche
