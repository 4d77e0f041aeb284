#include "nitsche/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nitsche/quadrature.hpp"

namespace nitsche {

using std::numbers::pi;
using std::numbers::sqrt2;

ProblemData ManufacturedSolution::problem_data() const {
  ProblemData data;
  data.source = f;
  data.dirichlet = u;
  return data;
}

namespace {

double l4_fourth(Point2 p) { return p.x * p.x * p.x * p.x + p.y * p.y * p.y * p.y; }

}  // namespace

ManufacturedSolution kink_solution() {
  ManufacturedSolution s;
  s.alpha = {1.0, 2.0};

  // Domain 1, with r4 = x^4 + y^4:
  //   grad u1 = sqrt2 pi sin(pi r4/4) (x^3, y^3)
  //   lap u1  = sqrt2 pi [pi cos(pi r4/4)(x^6 + y^6) + 3 sin(pi r4/4)(x^2 + y^2)]
  s.u[0] = [](Point2 p) { return 1.0 + pi / 2.0 - sqrt2 * std::cos(pi / 4.0 * l4_fourth(p)); };
  s.grad[0] = [](Point2 p) {
    double c = sqrt2 * pi * std::sin(pi / 4.0 * l4_fourth(p));
    return Eigen::Vector2d(c * p.x * p.x * p.x, c * p.y * p.y * p.y);
  };
  s.f[0] = [a = s.alpha[0]](Point2 p) {
    double r4 = l4_fourth(p);
    double x2 = p.x * p.x;
    double y2 = p.y * p.y;
    double lap = sqrt2 * pi *
                 (pi * std::cos(pi / 4.0 * r4) * (x2 * x2 * x2 + y2 * y2 * y2) +
                  3.0 * std::sin(pi / 4.0 * r4) * (x2 + y2));
    return -a * lap;
  };

  // Domain 2, rho = r4^(1/4):
  //   grad rho = r4^(-3/4) (x^3, y^3)
  //   lap rho  = 3 r4^(-3/4)(x^2 + y^2) - 3 r4^(-7/4)(x^6 + y^6)
  auto guard = [](double r4) {
    if (!(r4 > 0.0)) throw std::domain_error("kink_solution: domain-2 branch is singular at the origin");
  };
  s.u[1] = [guard](Point2 p) {
    double r4 = l4_fourth(p);
    guard(r4);
    return pi / 2.0 * std::pow(r4, 0.25);
  };
  s.grad[1] = [guard](Point2 p) {
    double r4 = l4_fourth(p);
    guard(r4);
    double c = pi / 2.0 * std::pow(r4, -0.75);
    return Eigen::Vector2d(c * p.x * p.x * p.x, c * p.y * p.y * p.y);
  };
  s.f[1] = [guard, a = s.alpha[1]](Point2 p) {
    double r4 = l4_fourth(p);
    guard(r4);
    double x2 = p.x * p.x;
    double y2 = p.y * p.y;
    double lap = 3.0 * std::pow(r4, -0.75) * (x2 + y2) -
                 3.0 * std::pow(r4, -1.75) * (x2 * x2 * x2 + y2 * y2 * y2);
    return -a * pi / 2.0 * lap;
  };
  return s;
}

ManufacturedSolution smooth_fitted_solution() {
  ManufacturedSolution s;
  s.u[0] = [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  s.grad[0] = [](Point2 p) {
    return Eigen::Vector2d(pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                           pi * std::sin(pi * p.x) * std::cos(pi * p.y));
  };
  s.f[0] = [](Point2 p) { return 2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y); };
  s.u[1] = s.u[0];
  s.grad[1] = s.grad[0];
  s.f[1] = s.f[0];
  return s;
}

ManufacturedSolution affine_fitted_solution(double a, double b, double c) {
  ManufacturedSolution s;
  s.u[0] = [a, b, c](Point2 p) { return a + b * p.x + c * p.y; };
  s.grad[0] = [b, c](Point2) { return Eigen::Vector2d(b, c); };
  s.f[0] = [](Point2) { return 0.0; };
  s.u[1] = s.u[0];
  s.grad[1] = s.grad[0];
  s.f[1] = s.f[0];
  return s;
}

ManufacturedSolution planar_interface_solution(double x0, double tangential_slope,
                                               std::array<double, 2> alpha) {
  ManufacturedSolution s;
  s.alpha = alpha;
  for (int d = 0; d < 2; ++d) {
    double normal_slope = alpha[1 - d];
    s.u[d] = [=](Point2 p) { return 1.0 + normal_slope * (p.x - x0) + tangential_slope * p.y; };
    s.grad[d] = [=](Point2) { return Eigen::Vector2d(normal_slope, tangential_slope); };
    s.f[d] = [](Point2) { return 0.0; };
  }
  return s;
}

namespace {

struct Accumulator {
  double l2 = 0.0;
  double h1 = 0.0;

  void add_triangle(const Triangle& tri, const P1Element& element,
                    const std::array<double, 3>& coeffs, const ScalarField& u,
                    const VectorField& grad, const QuadRule& rule) {
    Eigen::Vector2d grad_h = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) grad_h += coeffs[i] * element.gradient(i);
    auto geo = triangle_geometry(tri);
    double scale = 2.0 * std::abs(geo.area);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      Point2 x = geo.map(rule.points[k][0], rule.points[k][1]);
      double w = rule.weights[k] * scale;
      auto vals = element.values(x);
      double uh = coeffs[0] * vals[0] + coeffs[1] * vals[1] + coeffs[2] * vals[2];
      double e = u(x) - uh;
      l2 += w * e * e;
      h1 += w * (grad(x) - grad_h).squaredNorm();
    }
  }
};

}  // namespace

ErrorReport error_norms_fitted(const Mesh& mesh, const DofMap& dofs,
                               std::span<const double> solution,
                               const ManufacturedSolution& exact, int order) {
  auto rule = triangle_rule(order);
  Accumulator acc;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    auto corners = mesh.corners(t);
    P1Element element(corners);
    const auto& d = dofs.element_dofs[t];
    acc.add_triangle(corners, element, {solution[d[0]], solution[d[1]], solution[d[2]]},
                     exact.u[0], exact.grad[0], rule);
  }
  return {std::sqrt(acc.l2), std::sqrt(acc.h1), 0.0, dofs.n_dofs, mesh.h()};
}

ErrorReport error_norms_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                  const CutDofMap& dofs, std::span<const double> solution,
                                  const ManufacturedSolution& exact, int order) {
  auto rule = triangle_rule(order);
  auto seg_rule = segment_rule(order);
  Accumulator acc;
  double jump = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    P1Element element(mesh.corners(t));
    std::array<std::array<double, 3>, 2> coeffs{};
    for (int d = 0; d < 2; ++d) {
      const auto& parts = cuts[t].sub_triangles(d);
      if (parts.empty()) continue;
      auto ids = dofs.element_dofs(t, d);
      coeffs[d] = {solution[ids[0]], solution[ids[1]], solution[ids[2]]};
      for (const auto& tri : parts) {
        acc.add_triangle(tri, element, coeffs[d], exact.u[d], exact.grad[d], rule);
      }
    }
    if (cuts[t].is_cut()) {
      for (const auto& qp : interface_quadrature(cuts[t], seg_rule)) {
        auto vals = element.values(qp.point);
        double j = 0.0;
        for (int i = 0; i < 3; ++i) j += (coeffs[0][i] - coeffs[1][i]) * vals[i];
        jump += qp.weight * j * j;
      }
    }
  }
  return {std::sqrt(acc.l2), std::sqrt(acc.h1), std::sqrt(jump), dofs.n_dofs(), mesh.h()};
}

std::vector<std::optional<double>> eoc(std::span<const std::pair<double, double>> errors) {
  if (errors.size() < 2) throw std::invalid_argument("eoc: at least two levels required");
  std::vector<std::optional<double>> rates;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    auto [h0, e0] = errors[k];
    auto [h1, e1] = errors[k + 1];
    if (e0 == 0.0 || e1 == 0.0) {
      rates.emplace_back();
      continue;
    }
    rates.emplace_back(std::log(e0 / e1) / std::log(h0 / h1));
  }
  return rates;
}

}  // namespace nitsche
