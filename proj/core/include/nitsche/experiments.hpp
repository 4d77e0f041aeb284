#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nitsche/analysis.hpp"
#include "nitsche/assembly.hpp"
#include "nitsche/cut_geometry.hpp"
#include "nitsche/linalg.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/spaces.hpp"

namespace nitsche {

enum class ProblemChoice { Fitted, Interface };
enum class MethodChoice { Classical, Lifted };
/// Exact solution; Default picks smooth (fitted) or kink (interface).
enum class ExactChoice { Default, Smooth, Affine, Kink, Planar };

struct RunConfig {
  ProblemChoice problem = ProblemChoice::Interface;
  MethodChoice method = MethodChoice::Lifted;
  std::optional<double> lambda;
  std::size_t nx = 16;
  std::optional<BBox> bbox;
  ExactChoice exact = ExactChoice::Default;
  double cg_tolerance = 1e-10;
  /// Condition numbers are only computed up to this many unknowns.
  std::size_t max_dense = 2000;

  /// lambda is required iff method is classical.
  void validate() const;
  [[nodiscard]] BBox effective_bbox() const;
  [[nodiscard]] Method method_spec() const;
};

/// [0,1]^2 for the fitted problem, [-2.01,2.01]^2 for the interface problem.
BBox default_bbox(ProblemChoice problem);

ManufacturedSolution exact_solution(const RunConfig& config);

/// Mesh, geometry and dofs of one configuration, with the system on the
/// unconstrained dofs.
struct Discretization {
  Mesh mesh;
  ManufacturedSolution exact;
  ProblemSpec spec;
  std::vector<double> levelset_values;
  std::vector<CutInfo> cuts;
  std::optional<DofMap> cg_dofs;
  std::optional<CutDofMap> cut_dofs;
  GlobalSystem full;
  ReducedSystem reduced;

  [[nodiscard]] std::size_t n_dofs() const { return full.matrix.size(); }
  [[nodiscard]] ErrorReport errors(std::span<const double> solution) const;
};

Discretization discretize(const RunConfig& config);

struct SolveOutcome {
  std::size_t n_dofs = 0;
  std::size_t n_free = 0;
  double h = 0.0;
  std::optional<SpectralReport> spectral;
  std::optional<ErrorReport> errors;
  std::size_t cg_iterations = 0;
  bool unstable = false;
  std::string message;
};

/// Assemble, check conditioning (when small enough), solve with CG and
/// measure errors. An indefinite system is reported, not thrown.
SolveOutcome run_solve(const RunConfig& config);

struct SweepRow {
  /// Empty for the parameter-free row.
  std::optional<double> lambda;
  SpectralReport report;
};

/// 1, 2, 4, ..., 8192.
std::vector<double> default_sweep_lambdas();

/// One row per classical lambda, then the parameter-free row.
std::vector<SweepRow> run_lambda_sweep(const RunConfig& config, std::span<const double> lambdas);

struct ConvergenceRow {
  std::size_t nx = 0;
  ErrorReport errors;
  std::optional<double> eoc_l2;
  std::optional<double> eoc_h1;
  std::optional<double> eoc_jump;
};

/// nx, 2nx, ... over `levels` meshes (levels >= 3 for the CLI).
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::size_t levels);

struct JumpRow {
  double lambda = 0.0;
  ErrorReport errors;
  /// jump(previous lambda) / jump(this lambda).
  std::optional<double> ratio;
};

/// Classical method on a fixed mesh for each lambda.
std::vector<JumpRow> run_jump_sweep(const RunConfig& config, std::span<const double> lambdas);

}  // namespace nitsche
