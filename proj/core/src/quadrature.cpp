#include "nitsche/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nitsche {

namespace {

// Adds the orbit of barycentric point (a, a, 1-2a) with the given weight
// (normalized to the reference area 1/2).
void add_orbit3(QuadRule& rule, double a, double weight) {
  double b = 1.0 - 2.0 * a;
  for (auto p : {std::array<double, 2>{a, a}, {b, a}, {a, b}}) {
    rule.points.push_back(p);
    rule.weights.push_back(0.5 * weight);
  }
}

}  // namespace

QuadRule triangle_rule(int order) {
  QuadRule rule;
  switch (order) {
    case 1:
      rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {0.5};
      break;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      // Dunavant degree 4, six points.
      add_orbit3(rule, 0.445948490915964886318329253883, 0.223381589678011465944827153374);
      add_orbit3(rule, 0.091576213509770743459571463402, 0.109951743655321867388506179960);
      break;
    case 5: {
      // Radon seven-point rule.
      double s = std::sqrt(15.0);
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.5 * 9.0 / 40.0);
      add_orbit3(rule, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      add_orbit3(rule, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      break;
    }
    default:
      throw std::invalid_argument("triangle_rule: unsupported order " + std::to_string(order));
  }
  return rule;
}

QuadRule segment_rule(int order) {
  if (order < 0) throw std::invalid_argument("segment_rule: negative order");
  int n = order / 2 + 1;
  if (n > 5) throw std::invalid_argument("segment_rule: unsupported order " + std::to_string(order));

  // Gauss-Legendre nodes/weights on [-1,1], positive half.
  static const std::array<std::vector<std::pair<double, double>>, 6> table = {{
      {},
      {{0.0, 2.0}},
      {{0.577350269189625764509148780502, 1.0}},
      {{0.0, 8.0 / 9.0}, {0.774596669241483377035853079956, 5.0 / 9.0}},
      {{0.339981043584856264802665759103, 0.652145154862546142626936050778},
       {0.861136311594052575223946488893, 0.347854845137453857373063949222}},
      {{0.0, 0.568888888888888888888888888889},
       {0.538469310105683091036314420700, 0.478628670499366468041291514836},
       {0.906179845938663992797626878299, 0.236926885056189087514264040720}},
  }};

  QuadRule rule;
  for (auto [x, w] : table[n]) {
    rule.points.push_back({0.5 * (1.0 - x), 0.0});
    rule.weights.push_back(0.5 * w);
    if (x != 0.0) {
      rule.points.push_back({0.5 * (1.0 + x), 0.0});
      rule.weights.push_back(0.5 * w);
    }
  }
  return rule;
}

BasisP1Values eval_basis(double xi, double eta) {
  BasisP1Values b;
  b.values = {1.0 - xi - eta, xi, eta};
  b.gradients = {Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  return b;
}

P1Element::P1Element(const Triangle& corners)
    : corners_(corners), geometry_(triangle_geometry(corners)) {
  if (!(geometry_.area > 0.0)) throw std::invalid_argument("P1Element: degenerate triangle");
  inverse_jacobian_ = geometry_.jacobian.inverse();
  Eigen::Matrix2d inv_t = inverse_jacobian_.transpose();
  auto ref = eval_basis(0.0, 0.0);
  for (int i = 0; i < 3; ++i) gradients_[i] = inv_t * ref.gradients[i];
}

std::array<double, 3> P1Element::values(Point2 p) const {
  Eigen::Vector2d ref = inverse_jacobian_ * Eigen::Vector2d(p.x - corners_[0].x, p.y - corners_[0].y);
  return eval_basis(ref.x(), ref.y()).values;
}

Eigen::Matrix3d P1Element::gradient_gram() const {
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = gradients_[i].dot(gradients_[j]);
  return g;
}

}  // namespace nitsche
