#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "nitsche/mesh.hpp"

namespace nitsche {

/// Quadrature on a reference domain. Triangle rules use (xi, eta) on the
/// triangle (0,0),(1,0),(0,1) and sum to 1/2; segment rules use points[i][0]
/// in [0,1] and sum to 1.
struct QuadRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Positive-weight rule exact for total degree <= order, order in 1..5.
QuadRule triangle_rule(int order);

/// Gauss-Legendre rule on [0,1] exact for degree <= order.
QuadRule segment_rule(int order);

struct BasisP1Values {
  std::array<double, 3> values{};
  std::array<Eigen::Vector2d, 3> gradients{};
};

/// Reference P1 basis: 1 - xi - eta, xi, eta.
BasisP1Values eval_basis(double xi, double eta);

/// P1 Lagrange basis on a physical triangle.
class P1Element {
 public:
  explicit P1Element(const Triangle& corners);

  [[nodiscard]] const Triangle& corners() const { return corners_; }
  [[nodiscard]] double area() const { return geometry_.area; }
  [[nodiscard]] const ElementGeometry& geometry() const { return geometry_; }
  /// Constant physical gradient of shape function i.
  [[nodiscard]] const Eigen::Vector2d& gradient(int i) const { return gradients_[i]; }
  /// Shape function values at a physical point (barycentric coordinates).
  [[nodiscard]] std::array<double, 3> values(Point2 p) const;
  /// The 3x3 matrix G^T G of gradient inner products.
  [[nodiscard]] Eigen::Matrix3d gradient_gram() const;

 private:
  Triangle corners_;
  ElementGeometry geometry_;
  std::array<Eigen::Vector2d, 3> gradients_;
  Eigen::Matrix2d inverse_jacobian_;
};

}  // namespace nitsche
