// Experiment driver: solve, lambda-sweep and convergence studies.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nitsche/experiments.hpp"
#include "report.hpp"

namespace {

using namespace nitsche;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnstable = 2;

struct Options {
  std::string problem = "interface";
  std::string method = "lifted";
  std::optional<double> lambda;
  std::size_t nx = 16;
  std::vector<double> bbox;
  std::size_t levels = 4;
  std::string out;
  std::string format = "csv";
  std::string exact = "default";
  std::vector<double> lambdas;
  std::string dump_mesh;
  bool sweep_lambda = false;
};

RunConfig to_config(const Options& o) {
  static const std::map<std::string, ProblemChoice> problems{
      {"fitted", ProblemChoice::Fitted}, {"interface", ProblemChoice::Interface}};
  static const std::map<std::string, MethodChoice> methods{
      {"classical", MethodChoice::Classical}, {"lifted", MethodChoice::Lifted}};
  static const std::map<std::string, ExactChoice> exacts{
      {"default", ExactChoice::Default}, {"smooth", ExactChoice::Smooth},
      {"affine", ExactChoice::Affine},   {"kink", ExactChoice::Kink},
      {"planar", ExactChoice::Planar}};

  RunConfig c;
  c.problem = problems.at(o.problem);
  c.method = methods.at(o.method);
  c.lambda = o.lambda;
  c.nx = o.nx;
  c.exact = exacts.at(o.exact);
  if (!o.bbox.empty()) c.bbox = BBox{o.bbox[0], o.bbox[1], o.bbox[2], o.bbox[3]};
  c.validate();
  return c;
}

/// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const Options& o, Fn&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw std::runtime_error("cannot open " + o.out);
  write(file);
}

void note_dofs(const RunConfig& c) {
  auto d = discretize(c);
  fmt::print(stderr, "mesh {}x{}: {} triangles, {} dofs ({} free)\n", c.nx, c.nx,
             d.mesh.n_triangles(), d.n_dofs(), d.reduced.free_dofs.size());
}

int cmd_solve(const Options& o) {
  RunConfig c = to_config(o);
  auto format = report::parse_format(o.format);
  if (!o.dump_mesh.empty()) {
    std::ofstream file(o.dump_mesh);
    if (!file) throw std::runtime_error("cannot open " + o.dump_mesh);
    write_text(build_structured_mesh(c.nx, c.nx, c.effective_bbox()), file);
  }
  auto outcome = run_solve(c);
  fmt::print(stderr, "dofs: {} ({} free)\n", outcome.n_dofs, outcome.n_free);
  emit(o, [&](std::ostream& s) { report::write_solve(s, format, c, outcome); });
  if (outcome.unstable) {
    fmt::print(stderr, "UNSTABLE: {}\n", outcome.message);
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_lambda_sweep(const Options& o) {
  Options classical = o;
  classical.method = "classical";
  if (!classical.lambda) classical.lambda = 1.0;
  RunConfig c = to_config(classical);
  auto format = report::parse_format(o.format);
  std::vector<double> lambdas = o.lambdas.empty() ? default_sweep_lambdas() : o.lambdas;
  note_dofs(c);
  auto rows = run_lambda_sweep(c, lambdas);
  emit(o, [&](std::ostream& s) { report::write_lambda_sweep(s, format, c, rows); });
  return kExitOk;
}

int cmd_convergence(const Options& o) {
  auto format = report::parse_format(o.format);
  if (o.sweep_lambda) {
    Options classical = o;
    classical.method = "classical";
    if (!classical.lambda) classical.lambda = 1.0;
    RunConfig c = to_config(classical);
    std::vector<double> lambdas = o.lambdas;
    if (lambdas.empty()) {
      for (double l = 64.0; l <= 8192.0; l *= 2.0) lambdas.push_back(l);
    }
    note_dofs(c);
    auto rows = run_jump_sweep(c, lambdas);
    emit(o, [&](std::ostream& s) { report::write_jump_sweep(s, format, c, rows); });
    return kExitOk;
  }
  if (o.levels < 3) throw CLI::ValidationError("--levels", "at least 3 levels are required");
  RunConfig c = to_config(o);
  auto rows = run_convergence(c, o.levels);
  emit(o, [&](std::ostream& s) { report::write_convergence(s, format, c, rows); });
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "fitted or interface")
      ->check(CLI::IsMember({"fitted", "interface"}));
  cmd->add_option("--method", o.method, "classical or lifted")
      ->check(CLI::IsMember({"classical", "lifted"}));
  cmd->add_option("--lambda", o.lambda, "penalty parameter (classical only)");
  cmd->add_option("--nx", o.nx, "cells per direction")->check(CLI::PositiveNumber);
  cmd->add_option("--bbox", o.bbox, "xmin ymin xmax ymax")->expected(4);
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv, json or md")
      ->check(CLI::IsMember({"csv", "json", "md"}));
  cmd->add_option("--exact", o.exact, "exact solution: default, smooth, affine, kink, planar")
      ->check(CLI::IsMember({"default", "smooth", "affine", "kink", "planar"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nitsche FEM experiments"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "assemble, solve, report errors and conditioning");
  add_common(solve, o);
  solve->add_option("--dump-mesh", o.dump_mesh, "write the mesh as text");

  auto* sweep = app.add_subcommand("lambda-sweep", "condition number against the penalty");
  add_common(sweep, o);
  sweep->add_option("--lambdas", o.lambdas, "penalty values (default 1..8192)");

  auto* conv = app.add_subcommand("convergence", "errors and rates under refinement");
  add_common(conv, o);
  conv->add_option("--levels", o.levels, "number of meshes");
  conv->add_flag("--sweep-lambda", o.sweep_lambda, "fixed mesh, classical, jump norm against lambda");
  conv->add_option("--lambdas", o.lambdas, "penalty values for --sweep-lambda (default 64..8192)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*sweep) return cmd_lambda_sweep(o);
    return cmd_convergence(o);
  } catch (const CLI::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const SolverError& e) {
    fmt::print(stderr, "UNSTABLE: {}\n", e.what());
    return kExitUnstable;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
}
