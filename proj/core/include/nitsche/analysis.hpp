#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nitsche/assembly.hpp"
#include "nitsche/cut_geometry.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/spaces.hpp"

namespace nitsche {

using VectorField = std::function<Eigen::Vector2d(Point2)>;

/// Exact solution with its gradient and source, per domain. Fitted problems
/// use only index 0.
struct ManufacturedSolution {
  std::array<ScalarField, 2> u;
  std::array<VectorField, 2> grad;
  std::array<ScalarField, 2> f;
  std::array<double, 2> alpha{1.0, 1.0};

  /// Source and Dirichlet data (the trace of u) for assembly.
  [[nodiscard]] ProblemData problem_data() const;
};

/// Interface solution with a kink across ||x||_4 = 1, alpha = (1, 2):
///   u1 = 1 + pi/2 - sqrt(2) cos(pi/4 ||x||_4^4),  u2 = pi/2 ||x||_4.
ManufacturedSolution kink_solution();

/// sin(pi x) sin(pi y) on the unit square, f = 2 pi^2 u.
ManufacturedSolution smooth_fitted_solution();

/// a + b x + c y, f = 0.
ManufacturedSolution affine_fitted_solution(double a, double b, double c);

/// Piecewise affine, continuous, flux-continuous solution for the interface
/// x = x0 with diffusion alpha; the normal slope is alpha[1] in domain 1 and
/// alpha[0] in domain 2.
ManufacturedSolution planar_interface_solution(double x0, double tangential_slope,
                                               std::array<double, 2> alpha);

struct ErrorReport {
  double l2 = 0.0;
  double h1_broken = 0.0;
  double jump_l2_gamma = 0.0;
  std::size_t n_dofs = 0;
  double h = 0.0;
};

ErrorReport error_norms_fitted(const Mesh& mesh, const DofMap& dofs,
                               std::span<const double> solution,
                               const ManufacturedSolution& exact, int order = 4);

/// Integrates each domain's error over its sub-triangles using that domain's
/// exact branch; the jump is measured on the reconstructed interface.
ErrorReport error_norms_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                  const CutDofMap& dofs, std::span<const double> solution,
                                  const ManufacturedSolution& exact, int order = 4);

/// log2(e_k / e_{k+1}) for successive (h, e) pairs; empty where either error is zero.
std::vector<std::optional<double>> eoc(std::span<const std::pair<double, double>> errors);

}  // namespace nitsche
