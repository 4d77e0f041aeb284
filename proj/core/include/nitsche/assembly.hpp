#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nitsche/cut_geometry.hpp"
#include "nitsche/linalg.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/spaces.hpp"

namespace nitsche {

enum class ProblemKind { FittedPoisson, UnfittedInterface };

/// Symmetric Nitsche with penalty lambda/h.
struct Classical {
  double lambda = 1.0;
};

/// Lifting stabilization 2 a(L u, L v) plus a unit-scaled penalty.
struct ParameterFree {};

using Method = std::variant<Classical, ParameterFree>;

using ScalarField = std::function<double(Point2)>;

/// Source and Dirichlet data per domain. The fitted problem reads index 0.
struct ProblemData {
  std::array<ScalarField, 2> source;
  std::array<ScalarField, 2> dirichlet;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::FittedPoisson;
  /// Diffusion per domain; the fitted problem uses unit diffusion.
  std::array<double, 2> alpha{1.0, 1.0};
  Method method = ParameterFree{};
  ProblemData data;

  /// Throws std::invalid_argument on non-positive alpha or lambda.
  void validate() const;
};

struct QuadratureOrders {
  int volume_rhs = 3;
  int facet = 2;
  int facet_rhs = 5;
};

/// Local matrices of one element. Rows index test functions, columns trial
/// functions. Cut elements use 6 local dofs (3 per domain, domain 1 first).
struct ElementMatrices {
  Eigen::MatrixXd A;    ///< (broken) stiffness
  Eigen::MatrixXd Nc;   ///< consistency term
  Eigen::MatrixXd Ns1;  ///< unit penalty (1/h) ([[u]], [[v]])
  Eigen::MatrixXd K;    ///< kernel fix, zero on non-participating elements
  Eigen::MatrixXd L;    ///< lifting, zero on non-participating elements
  Eigen::MatrixXd S;    ///< 2 L^T A L

  /// Penalty weight used by the parameter-free method on this element.
  double penalty_weight = 1.0;
  /// True if the element carries a lifting (touches the boundary / is cut).
  bool participates = false;
};

class LiftingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A, N_c and N_s1 of a fitted element; N_c, N_s1 vanish without boundary edges.
ElementMatrices fitted_element_forms(const Mesh& mesh, std::size_t t,
                                     const QuadratureOrders& orders = {});

/// A, N_c and N_s1 over the doubled local basis of a cut element (3x3 single
/// domain stiffness for uncut elements).
ElementMatrices interface_element_forms(const Mesh& mesh, std::size_t t, const CutInfo& cut,
                                        std::array<double, 2> alpha,
                                        const QuadratureOrders& orders = {});

/// h^-4 m m^T with m_i = (phi_i, 1)_T.
Eigen::MatrixXd kernel_fix(const Mesh& mesh, std::size_t t);
/// One rank-one term per sub-element T_1, T_2.
Eigen::MatrixXd kernel_fix(const Mesh& mesh, std::size_t t, const CutInfo& cut);

/// L = (A + K)^{-1} N_c^T.
Eigen::MatrixXd lifting_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& K,
                               const Eigen::MatrixXd& Nc);

/// 2 L^T A L.
Eigen::MatrixXd stabilization_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& L);

/// Element forms plus K, L and S where the element participates in the lifting.
ElementMatrices fitted_element_matrices(const Mesh& mesh, std::size_t t,
                                        const QuadratureOrders& orders = {});
ElementMatrices interface_element_matrices(const Mesh& mesh, std::size_t t, const CutInfo& cut,
                                           std::array<double, 2> alpha,
                                           const QuadratureOrders& orders = {});

/// Local matrix of the chosen method: A + Nc + Nc^T + (lambda Ns1 | S + w Ns1).
Eigen::MatrixXd combine(const ElementMatrices& m, const Method& method);

GlobalSystem assemble_fitted(const Mesh& mesh, const DofMap& dofs, const ProblemSpec& spec,
                             const QuadratureOrders& orders = {});
GlobalSystem assemble_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                const CutDofMap& dofs, const ProblemSpec& spec,
                                const QuadratureOrders& orders = {});

/// (f, v) + N^c(v, g) + w/h (g, v)_dOmega [+ 2 a(L_g, L v) for the parameter-free method].
std::vector<double> assemble_rhs_fitted(const Mesh& mesh, const DofMap& dofs,
                                        const ProblemSpec& spec,
                                        const QuadratureOrders& orders = {});
/// Volume terms only; interface conditions are homogeneous.
std::vector<double> assemble_rhs_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                           const CutDofMap& dofs, const ProblemSpec& spec,
                                           const QuadratureOrders& orders = {});

/// Separately assembled global operators, for diagnostics.
struct SystemParts {
  CsrMatrix a;             ///< broken stiffness
  CsrMatrix nc;            ///< consistency (not symmetric)
  CsrMatrix ns1;           ///< unit penalty
  CsrMatrix ns1_weighted;  ///< penalty with the parameter-free weight
  CsrMatrix s;             ///< lifting stabilization
};

SystemParts assemble_parts_fitted(const Mesh& mesh, const DofMap& dofs,
                                  const QuadratureOrders& orders = {});
SystemParts assemble_parts_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                     const CutDofMap& dofs, std::array<double, 2> alpha,
                                     const QuadratureOrders& orders = {});

/// sum_k scale_k * M_k (or M_k^T when transposed).
struct ScaledTerm {
  double scale = 1.0;
  const CsrMatrix* matrix = nullptr;
  bool transposed = false;
};
CsrMatrix linear_combination(std::span<const ScaledTerm> terms);

}  // namespace nitsche
