#include "nitsche/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nitsche {

void RunConfig::validate() const {
  if (nx == 0) throw std::invalid_argument("nx must be >= 1");
  if (method == MethodChoice::Classical) {
    if (!lambda) throw std::invalid_argument("the classical method requires lambda");
    if (!(*lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  } else if (lambda) {
    throw std::invalid_argument("lambda is only meaningful for the classical method");
  }
  bool fitted_exact = exact == ExactChoice::Smooth || exact == ExactChoice::Affine;
  bool interface_exact = exact == ExactChoice::Kink || exact == ExactChoice::Planar;
  if ((problem == ProblemChoice::Fitted && interface_exact) ||
      (problem == ProblemChoice::Interface && fitted_exact)) {
    throw std::invalid_argument("exact solution does not match the problem");
  }
}

BBox RunConfig::effective_bbox() const { return bbox.value_or(default_bbox(problem)); }

Method RunConfig::method_spec() const {
  if (method == MethodChoice::Classical) return Classical{lambda.value_or(1.0)};
  return ParameterFree{};
}

BBox default_bbox(ProblemChoice problem) {
  if (problem == ProblemChoice::Fitted) return {0.0, 0.0, 1.0, 1.0};
  return {-2.01, -2.01, 2.01, 2.01};
}

namespace {

// Interface location of the planar patch solution, off every default grid line.
constexpr double kPlanarOffset = 0.1234567;

}  // namespace

ManufacturedSolution exact_solution(const RunConfig& config) {
  switch (config.exact) {
    case ExactChoice::Smooth:
      return smooth_fitted_solution();
    case ExactChoice::Affine:
      return affine_fitted_solution(0.5, 1.0, 1.0);
    case ExactChoice::Kink:
      return kink_solution();
    case ExactChoice::Planar:
      return planar_interface_solution(kPlanarOffset, 0.5, {1.0, 2.0});
    case ExactChoice::Default:
      break;
  }
  return config.problem == ProblemChoice::Fitted ? smooth_fitted_solution() : kink_solution();
}

ErrorReport Discretization::errors(std::span<const double> solution) const {
  if (cg_dofs) return error_norms_fitted(mesh, *cg_dofs, solution, exact);
  return error_norms_interface(mesh, cuts, *cut_dofs, solution, exact);
}

Discretization discretize(const RunConfig& config) {
  config.validate();
  Discretization d{build_structured_mesh(config.nx, config.nx, config.effective_bbox()),
                   exact_solution(config), {}, {}, {}, {}, {}, {}, {}};
  d.spec.method = config.method_spec();
  d.spec.alpha = d.exact.alpha;
  d.spec.data = d.exact.problem_data();

  if (config.problem == ProblemChoice::Fitted) {
    d.spec.kind = ProblemKind::FittedPoisson;
    d.spec.alpha = {1.0, 1.0};
    d.cg_dofs = build_cg_dofmap(d.mesh);
    d.full = assemble_fitted(d.mesh, *d.cg_dofs, d.spec);
    // Nitsche imposes the boundary data weakly: nothing to eliminate.
    d.reduced = apply_essential_bc(d.full, {});
    return d;
  }

  d.spec.kind = ProblemKind::UnfittedInterface;
  LevelSet levelset = config.exact == ExactChoice::Planar
                          ? levelset_planar(1.0, 0.0, -kPlanarOffset)
                          : levelset_l4_norm();
  d.levelset_values = levelset.vertex_values(d.mesh);
  d.cuts = classify_and_cut(d.mesh, d.levelset_values);
  d.cut_dofs = build_cut_dofmap(d.mesh, d.cuts);
  d.full = assemble_interface(d.mesh, d.cuts, *d.cut_dofs, d.spec);
  const auto& g = d.exact.u;
  auto constraints = boundary_constraints(
      d.mesh, *d.cut_dofs, [&g](Point2 p, int domain) { return g[domain](p); });
  d.reduced = apply_essential_bc(d.full, constraints);
  return d;
}

SolveOutcome run_solve(const RunConfig& config) {
  auto d = discretize(config);
  SolveOutcome out;
  out.n_dofs = d.n_dofs();
  out.n_free = d.reduced.free_dofs.size();
  out.h = d.mesh.h();

  if (out.n_free <= config.max_dense) {
    out.spectral = condition_number(d.reduced.system.matrix);
    if (out.spectral->unstable()) {
      out.unstable = true;
      out.message = "system matrix is not positive definite";
      return out;
    }
  }

  CgOptions options;
  options.tolerance = config.cg_tolerance;
  options.max_iterations = std::max<std::size_t>(10000, 20 * out.n_free);
  try {
    auto result = cg_solve(d.reduced.system.matrix, d.reduced.system.rhs, options);
    out.cg_iterations = result.iterations;
    auto full = d.reduced.expand(result.solution);
    out.errors = d.errors(full);
  } catch (const SolverError& e) {
    out.unstable = true;
    out.message = e.what();
  }
  return out;
}

std::vector<double> default_sweep_lambdas() {
  std::vector<double> out;
  for (double l = 1.0; l <= 8192.0; l *= 2.0) out.push_back(l);
  return out;
}

std::vector<SweepRow> run_lambda_sweep(const RunConfig& config, std::span<const double> lambdas) {
  std::vector<SweepRow> rows;
  RunConfig c = config;
  c.method = MethodChoice::Classical;
  for (double lambda : lambdas) {
    c.lambda = lambda;
    auto d = discretize(c);
    rows.push_back({lambda, condition_number(d.reduced.system.matrix)});
  }
  c.method = MethodChoice::Lifted;
  c.lambda.reset();
  auto d = discretize(c);
  rows.push_back({std::nullopt, condition_number(d.reduced.system.matrix)});
  return rows;
}

namespace {

std::vector<double> solve_or_throw(const Discretization& d, double tolerance) {
  CgOptions options;
  options.tolerance = tolerance;
  options.max_iterations = std::max<std::size_t>(10000, 20 * d.reduced.free_dofs.size());
  auto result = cg_solve(d.reduced.system.matrix, d.reduced.system.rhs, options);
  return d.reduced.expand(result.solution);
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  std::vector<std::pair<double, double>> l2, h1, jump;
  for (const auto& r : rows) {
    l2.emplace_back(r.errors.h, r.errors.l2);
    h1.emplace_back(r.errors.h, r.errors.h1_broken);
    jump.emplace_back(r.errors.h, r.errors.jump_l2_gamma);
  }
  if (rows.size() < 2) return;
  auto e_l2 = eoc(l2);
  auto e_h1 = eoc(h1);
  auto e_jump = eoc(jump);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].eoc_l2 = e_l2[k - 1];
    rows[k].eoc_h1 = e_h1[k - 1];
    rows[k].eoc_jump = e_jump[k - 1];
  }
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::size_t levels) {
  if (levels == 0) throw std::invalid_argument("run_convergence: levels must be >= 1");
  std::vector<ConvergenceRow> rows;
  RunConfig c = config;
  for (std::size_t level = 0; level < levels; ++level) {
    c.nx = config.nx << level;
    auto d = discretize(c);
    auto solution = solve_or_throw(d, c.cg_tolerance);
    rows.push_back({c.nx, d.errors(solution), {}, {}, {}});
  }
  fill_rates(rows);
  return rows;
}

std::vector<JumpRow> run_jump_sweep(const RunConfig& config, std::span<const double> lambdas) {
  std::vector<JumpRow> rows;
  RunConfig c = config;
  c.method = MethodChoice::Classical;
  for (double lambda : lambdas) {
    c.lambda = lambda;
    auto d = discretize(c);
    auto solution = solve_or_throw(d, c.cg_tolerance);
    JumpRow row{lambda, d.errors(solution), {}};
    if (!rows.empty() && row.errors.jump_l2_gamma > 0.0) {
      row.ratio = rows.back().errors.jump_l2_gamma / row.errors.jump_l2_gamma;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nitsche
