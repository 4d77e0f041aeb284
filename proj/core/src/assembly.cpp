#include "nitsche/assembly.hpp"

#include <cmath>
#include <string>

#include "nitsche/quadrature.hpp"

namespace nitsche {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::Vector2d as_vector(Point2 p) { return {p.x, p.y}; }

/// Points and weights of a triangle rule mapped onto a physical triangle.
template <class F>
void integrate_triangle(const Triangle& tri, const QuadRule& rule, F&& f) {
  auto geo = triangle_geometry(tri);
  double scale = 2.0 * std::abs(geo.area);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    f(geo.map(rule.points[k][0], rule.points[k][1]), rule.weights[k] * scale);
  }
}

/// Integral of each P1 basis function of `element` over the sub-triangles.
Eigen::Vector3d basis_moments(const P1Element& element, const std::vector<Triangle>& parts) {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (const auto& tri : parts) {
    Point2 c = (1.0 / 3.0) * (tri[0] + tri[1] + tri[2]);
    auto vals = element.values(c);
    double a = signed_area(tri);
    for (int i = 0; i < 3; ++i) m(i) += a * vals[i];
  }
  return m;
}

/// Solves (A + K) X = R block by block. K only fixes the constant kernel and
/// K X = 0 at the solution, so each block's K may be rescaled to the size of
/// its A block without changing X.
Eigen::MatrixXd solve_lifting(const Eigen::MatrixXd& A, const Eigen::MatrixXd& K,
                              const Eigen::MatrixXd& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || K.rows() != n || K.cols() != n || R.rows() != n) {
    throw std::invalid_argument("lifting_matrix: dimension mismatch");
  }
  Eigen::Index block = n;
  if (n % 3 == 0 && n > 3) {
    bool block_diagonal = true;
    for (Eigen::Index i = 0; i < n && block_diagonal; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i / 3 != j / 3 && (A(i, j) != 0.0 || K(i, j) != 0.0)) {
          block_diagonal = false;
          break;
        }
    if (block_diagonal) block = 3;
  }

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, R.cols());
  for (Eigen::Index b = 0; b < n; b += block) {
    Eigen::MatrixXd Ab = A.block(b, b, block, block);
    Eigen::MatrixXd Kb = K.block(b, b, block, block);
    double ta = Ab.trace();
    double tk = Kb.trace();
    if (ta == 0.0 && tk == 0.0) {
      // Zero-measure sub-element: nothing to lift onto.
      if (!R.middleRows(b, block).isZero(0.0)) {
        throw LiftingError("lifting_matrix: data on a zero-measure sub-element");
      }
      continue;
    }
    double c = tk > 0.0 ? ta / tk : 1.0;
    Eigen::MatrixXd M = Ab + c * Kb;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw LiftingError("lifting_matrix: A + K is singular");
    X.middleRows(b, block) = lu.solve(R.middleRows(b, block));
  }
  return X;
}

void scatter(std::span<const std::size_t> dofs, const Eigen::MatrixXd& local,
             std::vector<Triplet>& out) {
  for (Eigen::Index i = 0; i < local.rows(); ++i)
    for (Eigen::Index j = 0; j < local.cols(); ++j)
      out.push_back({dofs[std::size_t(i)], dofs[std::size_t(j)], local(i, j)});
}

void scatter(std::span<const std::size_t> dofs, const Eigen::VectorXd& local,
             std::vector<double>& out) {
  for (Eigen::Index i = 0; i < local.size(); ++i) out[dofs[std::size_t(i)]] += local(i);
}

std::vector<std::size_t> local_dofs(const CutDofMap& dofs, std::size_t t, const CutInfo& cut) {
  std::vector<std::size_t> out;
  if (cut.is_cut()) {
    for (int d = 0; d < 2; ++d)
      for (auto i : dofs.element_dofs(t, d)) out.push_back(i);
  } else {
    int d = cut.classification == Side::Negative ? 0 : 1;
    for (auto i : dofs.element_dofs(t, d)) out.push_back(i);
  }
  return out;
}

/// Element-local boundary data vectors of the fitted problem:
/// flux[i] = (-d_n phi_i, g)_{dOmega cap T}, mass[i] = (g, phi_i)_{dOmega cap T} / h.
struct BoundaryData {
  Eigen::Vector3d flux = Eigen::Vector3d::Zero();
  Eigen::Vector3d mass = Eigen::Vector3d::Zero();
};

BoundaryData fitted_boundary_data(const Mesh& mesh, std::size_t t, const ScalarField& g,
                                  int order) {
  BoundaryData out;
  auto edges = mesh.boundary_edges_of(t);
  if (edges.empty()) return out;
  auto corners = mesh.corners(t);
  P1Element element(corners);
  auto rule = segment_rule(order);
  for (int e : edges) {
    Point2 a = corners[e];
    Point2 b = corners[(e + 1) % 3];
    double len = norm(b - a);
    Eigen::Vector2d n = as_vector(element.geometry().normals[e]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      Point2 x = a + rule.points[k][0] * (b - a);
      double w = rule.weights[k] * len;
      double gx = g(x);
      auto vals = element.values(x);
      for (int i = 0; i < 3; ++i) {
        out.flux(i) += w * (-element.gradient(i).dot(n)) * gx;
        out.mass(i) += w * gx * vals[i] / mesh.h();
      }
    }
  }
  return out;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(alpha[0] > 0.0) || !(alpha[1] > 0.0)) {
    throw std::invalid_argument("ProblemSpec: diffusion coefficients must be positive");
  }
  if (const auto* c = std::get_if<Classical>(&method); c && !(c->lambda > 0.0)) {
    throw std::invalid_argument("ProblemSpec: lambda must be positive");
  }
}

ElementMatrices fitted_element_forms(const Mesh& mesh, std::size_t t,
                                     const QuadratureOrders& orders) {
  auto corners = mesh.corners(t);
  P1Element element(corners);
  ElementMatrices m;
  m.A = element.area() * element.gradient_gram();
  m.Nc = Eigen::MatrixXd::Zero(3, 3);
  m.Ns1 = Eigen::MatrixXd::Zero(3, 3);
  m.K = Eigen::MatrixXd::Zero(3, 3);
  m.L = Eigen::MatrixXd::Zero(3, 3);
  m.S = Eigen::MatrixXd::Zero(3, 3);

  auto rule = segment_rule(orders.facet);
  for (int e : mesh.boundary_edges_of(t)) {
    m.participates = true;
    Point2 a = corners[e];
    Point2 b = corners[(e + 1) % 3];
    double len = norm(b - a);
    Eigen::Vector2d n = as_vector(element.geometry().normals[e]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      Point2 x = a + rule.points[k][0] * (b - a);
      double w = rule.weights[k] * len;
      auto vals = element.values(x);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          m.Nc(i, j) += w * (-element.gradient(j).dot(n)) * vals[i];
          m.Ns1(i, j) += w * vals[i] * vals[j] / mesh.h();
        }
      }
    }
  }
  return m;
}

ElementMatrices interface_element_forms(const Mesh& mesh, std::size_t t, const CutInfo& cut,
                                        std::array<double, 2> alpha,
                                        const QuadratureOrders& orders) {
  P1Element element(mesh.corners(t));
  Eigen::Matrix3d gram = element.gradient_gram();
  ElementMatrices m;

  if (!cut.is_cut()) {
    int d = cut.classification == Side::Negative ? 0 : 1;
    m.A = alpha[d] * element.area() * gram;
    m.Nc = m.Ns1 = m.K = m.L = m.S = Eigen::MatrixXd::Zero(3, 3);
    m.penalty_weight = alpha[d];
    return m;
  }

  m.participates = true;
  m.A = Eigen::MatrixXd::Zero(6, 6);
  m.A.block<3, 3>(0, 0) = alpha[0] * cut.sub_areas[0] * gram;
  m.A.block<3, 3>(3, 3) = alpha[1] * cut.sub_areas[1] * gram;
  m.Nc = Eigen::MatrixXd::Zero(6, 6);
  m.Ns1 = Eigen::MatrixXd::Zero(6, 6);
  m.K = m.L = m.S = Eigen::MatrixXd::Zero(6, 6);
  m.penalty_weight = cut.kappa[0] * alpha[0] + cut.kappa[1] * alpha[1];

  // Flux of trial (s, j): -alpha_s kappa_s grad(phi_j).n ; jump of test (s, i): +-phi_i.
  Eigen::Vector2d n = as_vector(cut.segment->normal);
  Eigen::Matrix<double, 6, 1> flux;
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < 3; ++j)
      flux(3 * s + j) = -alpha[s] * cut.kappa[s] * element.gradient(j).dot(n);

  for (const auto& qp : interface_quadrature(cut, segment_rule(orders.facet))) {
    auto vals = element.values(qp.point);
    Eigen::Matrix<double, 6, 1> jump;
    for (int i = 0; i < 3; ++i) {
      jump(i) = vals[i];
      jump(3 + i) = -vals[i];
    }
    m.Nc += qp.weight * jump * flux.transpose();
    m.Ns1 += (qp.weight / mesh.h()) * jump * jump.transpose();
  }
  return m;
}

Eigen::MatrixXd kernel_fix(const Mesh& mesh, std::size_t t) {
  P1Element element(mesh.corners(t));
  Eigen::Vector3d moments = Eigen::Vector3d::Constant(element.area() / 3.0);
  return std::pow(mesh.h(), -4.0) * moments * moments.transpose();
}

Eigen::MatrixXd kernel_fix(const Mesh& mesh, std::size_t t, const CutInfo& cut) {
  if (!cut.is_cut()) {
    throw std::invalid_argument("kernel_fix: interface kernel fix requires a cut element");
  }
  P1Element element(mesh.corners(t));
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(6, 6);
  double scale = std::pow(mesh.h(), -4.0);
  for (int d = 0; d < 2; ++d) {
    Eigen::Vector3d m = basis_moments(element, cut.sub_triangles(d));
    K.block<3, 3>(3 * d, 3 * d) = scale * m * m.transpose();
  }
  return K;
}

Eigen::MatrixXd lifting_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& K,
                               const Eigen::MatrixXd& Nc) {
  if (Nc.isZero(0.0)) return Eigen::MatrixXd::Zero(A.rows(), A.cols());
  return solve_lifting(A, K, Nc.transpose());
}

Eigen::MatrixXd stabilization_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& L) {
  Eigen::MatrixXd S = 2.0 * L.transpose() * A * L;
  return 0.5 * (S + S.transpose());
}

ElementMatrices fitted_element_matrices(const Mesh& mesh, std::size_t t,
                                        const QuadratureOrders& orders) {
  auto m = fitted_element_forms(mesh, t, orders);
  if (m.participates) {
    m.K = kernel_fix(mesh, t);
    m.L = lifting_matrix(m.A, m.K, m.Nc);
    m.S = stabilization_matrix(m.A, m.L);
  }
  return m;
}

ElementMatrices interface_element_matrices(const Mesh& mesh, std::size_t t, const CutInfo& cut,
                                           std::array<double, 2> alpha,
                                           const QuadratureOrders& orders) {
  auto m = interface_element_forms(mesh, t, cut, alpha, orders);
  if (m.participates) {
    m.K = kernel_fix(mesh, t, cut);
    m.L = lifting_matrix(m.A, m.K, m.Nc);
    m.S = stabilization_matrix(m.A, m.L);
  }
  return m;
}

Eigen::MatrixXd combine(const ElementMatrices& m, const Method& method) {
  Eigen::MatrixXd local = m.A + m.Nc + m.Nc.transpose();
  std::visit(Overloaded{
                 [&](const Classical& c) { local += c.lambda * m.Ns1; },
                 [&](const ParameterFree&) { local += m.S + m.penalty_weight * m.Ns1; },
             },
             method);
  return local;
}

GlobalSystem assemble_fitted(const Mesh& mesh, const DofMap& dofs, const ProblemSpec& spec,
                             const QuadratureOrders& orders) {
  spec.validate();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.n_triangles());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    auto m = fitted_element_matrices(mesh, t, orders);
    scatter(dofs.element_dofs[t], combine(m, spec.method), triplets);
  }
  GlobalSystem sys;
  sys.matrix = CsrMatrix::from_triplets(dofs.n_dofs, triplets);
  sys.rhs = assemble_rhs_fitted(mesh, dofs, spec, orders);
  return sys;
}

GlobalSystem assemble_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                const CutDofMap& dofs, const ProblemSpec& spec,
                                const QuadratureOrders& orders) {
  spec.validate();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.n_triangles());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    auto m = interface_element_matrices(mesh, t, cuts[t], spec.alpha, orders);
    scatter(local_dofs(dofs, t, cuts[t]), combine(m, spec.method), triplets);
  }
  GlobalSystem sys;
  sys.matrix = CsrMatrix::from_triplets(dofs.n_dofs(), triplets);
  sys.rhs = assemble_rhs_interface(mesh, cuts, dofs, spec, orders);
  return sys;
}

std::vector<double> assemble_rhs_fitted(const Mesh& mesh, const DofMap& dofs,
                                        const ProblemSpec& spec, const QuadratureOrders& orders) {
  std::vector<double> rhs(dofs.n_dofs, 0.0);
  auto rule = triangle_rule(orders.volume_rhs);
  const auto& f = spec.data.source[0];
  const auto& g = spec.data.dirichlet[0];
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    auto corners = mesh.corners(t);
    P1Element element(corners);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(3);
    if (f) {
      integrate_triangle(corners, rule, [&](Point2 x, double w) {
        double fx = f(x);
        auto vals = element.values(x);
        for (int i = 0; i < 3; ++i) local(i) += w * fx * vals[i];
      });
    }
    if (g && !mesh.boundary_edges_of(t).empty()) {
      auto data = fitted_boundary_data(mesh, t, g, orders.facet_rhs);
      local += data.flux;
      std::visit(Overloaded{
                     [&](const Classical& c) { local += c.lambda * data.mass; },
                     [&](const ParameterFree&) {
                       local += data.mass;
                       auto m = fitted_element_matrices(mesh, t, orders);
                       Eigen::VectorXd lifted_g = solve_lifting(m.A, m.K, data.flux);
                       local += 2.0 * m.L.transpose() * m.A * lifted_g;
                     },
                 },
                 spec.method);
    }
    scatter(dofs.element_dofs[t], local, rhs);
  }
  return rhs;
}

std::vector<double> assemble_rhs_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                           const CutDofMap& dofs, const ProblemSpec& spec,
                                           const QuadratureOrders& orders) {
  std::vector<double> rhs(dofs.n_dofs(), 0.0);
  auto rule = triangle_rule(orders.volume_rhs);
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    P1Element element(mesh.corners(t));
    for (int d = 0; d < 2; ++d) {
      const auto& f = spec.data.source[d];
      const auto& parts = cuts[t].sub_triangles(d);
      if (!f || parts.empty()) continue;
      Eigen::VectorXd local = Eigen::VectorXd::Zero(3);
      for (const auto& tri : parts) {
        integrate_triangle(tri, rule, [&](Point2 x, double w) {
          double fx = f(x);
          auto vals = element.values(x);
          for (int i = 0; i < 3; ++i) local(i) += w * fx * vals[i];
        });
      }
      scatter(dofs.element_dofs(t, d), local, rhs);
    }
  }
  return rhs;
}

namespace {

struct PartTriplets {
  std::vector<Triplet> a, nc, ns1, ns1w, s;

  void add(std::span<const std::size_t> dofs, const ElementMatrices& m) {
    scatter(dofs, m.A, a);
    scatter(dofs, m.Nc, nc);
    scatter(dofs, m.Ns1, ns1);
    scatter(dofs, Eigen::MatrixXd(m.penalty_weight * m.Ns1), ns1w);
    scatter(dofs, m.S, s);
  }

  SystemParts finish(std::size_t n) const {
    return {CsrMatrix::from_triplets(n, a), CsrMatrix::from_triplets(n, nc),
            CsrMatrix::from_triplets(n, ns1), CsrMatrix::from_triplets(n, ns1w),
            CsrMatrix::from_triplets(n, s)};
  }
};

}  // namespace

SystemParts assemble_parts_fitted(const Mesh& mesh, const DofMap& dofs,
                                  const QuadratureOrders& orders) {
  PartTriplets parts;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    parts.add(dofs.element_dofs[t], fitted_element_matrices(mesh, t, orders));
  }
  return parts.finish(dofs.n_dofs);
}

SystemParts assemble_parts_interface(const Mesh& mesh, std::span<const CutInfo> cuts,
                                     const CutDofMap& dofs, std::array<double, 2> alpha,
                                     const QuadratureOrders& orders) {
  PartTriplets parts;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    parts.add(local_dofs(dofs, t, cuts[t]),
              interface_element_matrices(mesh, t, cuts[t], alpha, orders));
  }
  return parts.finish(dofs.n_dofs());
}

CsrMatrix linear_combination(std::span<const ScaledTerm> terms) {
  if (terms.empty()) return {};
  std::size_t n = terms.front().matrix->size();
  std::vector<Triplet> t;
  for (const auto& term : terms) {
    const CsrMatrix& m = *term.matrix;
    if (m.size() != n) throw std::invalid_argument("linear_combination: size mismatch");
    auto offsets = m.row_offsets();
    auto cols = m.columns();
    auto vals = m.values();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        std::size_t r = term.transposed ? cols[k] : i;
        std::size_t c = term.transposed ? i : cols[k];
        t.push_back({r, c, term.scale * vals[k]});
      }
    }
  }
  return CsrMatrix::from_triplets(n, t);
}

}  // namespace nitsche
