// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "nitsche/experiments.hpp"

using namespace nitsche;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig reference_config() {
  RunConfig c;
  c.problem = ProblemChoice::Interface;
  c.nx = 16;
  return c;
}

// Reference condition numbers for lambda = 16 .. 512.
constexpr std::array<double, 6> kPlateauLambda{16, 32, 64, 128, 256, 512};
constexpr std::array<double, 6> kPlateauCond{86.3, 81.6, 79.2, 83.2, 88.0, 91.3};

struct SweepCache {
  std::vector<SweepRow> rows;
  double seconds = 0.0;

  const SweepRow* find(double lambda) const {
    for (const auto& r : rows)
      if (r.lambda && *r.lambda == lambda) return &r;
    return nullptr;
  }
  const SweepRow& lifted() const { return rows.back(); }
};

SweepCache& sweep() {
  static SweepCache cache = [] {
    SweepCache s;
    auto t0 = std::chrono::steady_clock::now();
    s.rows = run_lambda_sweep(reference_config(), default_sweep_lambdas());
    s.seconds = seconds_since(t0);
    return s;
  }();
  return cache;
}

std::string cond_text(const SweepRow& r) {
  return r.report.cond ? fmt("%.1f", *r.report.cond) : std::string("UNSTABLE");
}

Verdict stability_boundary() {
  const auto& s = sweep();
  bool ok = s.seconds < 30.0;
  std::string detail;
  for (const auto& r : s.rows) {
    if (!r.lambda) continue;
    bool want_unstable = *r.lambda <= 8.0;
    ok = ok && r.report.unstable() == want_unstable;
    detail += fmt("%g:%s ", *r.lambda, cond_text(r).c_str());
  }
  detail += fmt("(%.2fs)", s.seconds);
  return {ok, detail};
}

Verdict plateau() {
  const auto& s = sweep();
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < kPlateauLambda.size(); ++k) {
    const auto* r = s.find(kPlateauLambda[k]);
    double ref = kPlateauCond[k];
    bool in = r && r->report.cond && std::abs(*r->report.cond - ref) <= 0.3 * ref;
    ok = ok && in;
    detail += fmt("%g:%s/%.1f ", kPlateauLambda[k], r ? cond_text(*r).c_str() : "?", ref);
  }
  return {ok, detail};
}

Verdict linear_growth() {
  std::vector<double> lambdas{2048, 4096, 8192, 16384};
  auto rows = run_lambda_sweep(reference_config(), lambdas);
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
    if (!rows[k].report.cond || !rows[k + 1].report.cond) return {false, "unstable row"};
    double ratio = *rows[k + 1].report.cond / *rows[k].report.cond;
    ok = ok && ratio >= 1.7 && ratio <= 2.2;
    detail += fmt("k(%g)/k(%g)=%.3f ", 2 * lambdas[k], lambdas[k], ratio);
  }
  return {ok, detail};
}

Verdict parameter_free() {
  const auto& s = sweep();
  double best = INFINITY;
  double best_lambda = 0.0;
  for (const auto& r : s.rows)
    if (r.lambda && r.report.cond && *r.report.cond < best) {
      best = *r.report.cond;
      best_lambda = *r.lambda;
    }
  const auto& lifted = s.lifted();
  if (!lifted.report.cond) return {false, "lifted system UNSTABLE"};
  double ratio = *lifted.report.cond / best;
  return {ratio >= 0.7 && ratio <= 1.4,
          fmt("lifted %.1f, min classical %.1f at lambda %g, ratio %.3f", *lifted.report.cond,
              best, best_lambda, ratio)};
}

Verdict dof_count() {
  auto d = discretize(reference_config());
  RunConfig alt = reference_config();
  alt.bbox = BBox{-1.005, -1.005, 1.005, 1.005};
  auto a = discretize(alt);
  bool ok = d.n_dofs() == 512 || a.n_dofs() == 512;
  return {ok, fmt("[-2.01,2.01]^2: %zu dofs; [-1.005,1.005]^2: %zu dofs; expected 512",
                  d.n_dofs(), a.n_dofs())};
}

Verdict fitted_convergence() {
  RunConfig c;
  c.problem = ProblemChoice::Fitted;
  c.method = MethodChoice::Lifted;
  c.nx = 8;
  auto t0 = std::chrono::steady_clock::now();
  auto rows = run_convergence(c, 4);
  double secs = seconds_since(t0);
  double l2 = rows.back().eoc_l2.value_or(0.0);
  double h1 = rows.back().eoc_h1.value_or(0.0);
  return {l2 >= 1.9 && h1 >= 0.95 && secs < 60.0,
          fmt("final EOC L2 %.3f, H1 %.3f (%.2fs)", l2, h1, secs)};
}

Verdict unfitted_convergence() {
  RunConfig c = reference_config();
  c.nx = 8;
  auto lifted = run_convergence(c, 4);
  c.method = MethodChoice::Classical;
  c.lambda = 32.0;
  auto classical = run_convergence(c, 4);
  double l2 = lifted.back().eoc_l2.value_or(0.0);
  double h1 = lifted.back().eoc_h1.value_or(0.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    const auto& a = lifted[k].errors;
    const auto& b = classical[k].errors;
    worst = std::max({worst, a.l2 / b.l2, b.l2 / a.l2, a.h1_broken / b.h1_broken,
                      b.h1_broken / a.h1_broken});
  }
  return {l2 >= 1.8 && h1 >= 0.9 && worst <= 2.0,
          fmt("final EOC L2 %.3f, H1 %.3f; max lifted/classical(32) error ratio %.3f", l2, h1,
              worst)};
}

Verdict jump_decay() {
  std::vector<double> lambdas;
  for (double l = 64; l <= 8192; l *= 2) lambdas.push_back(l);
  auto rows = run_jump_sweep(reference_config(), lambdas);
  // Least-squares slope of log(jump) against log(lambda).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    double x = std::log(r.lambda);
    double y = std::log(r.errors.jump_l2_gamma);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope >= -1.25 && slope <= -0.75,
          fmt("log-log slope %.3f (jump %.3e at 64, %.3e at 8192)", slope,
              rows.front().errors.jump_l2_gamma, rows.back().errors.jump_l2_gamma)};
}

double stabilized_min_eig(const SystemParts& p) {
  std::array<ScaledTerm, 4> terms{{{0.5, &p.a, false}, {1.0, &p.nc, false},
                                   {1.0, &p.nc, true}, {1.0, &p.s, false}}};
  auto m = linear_combination(terms).to_dense();
  return sym_eigenvalues(0.5 * (m + m.transpose())).front() / p.a.to_dense().norm();
}

Verdict non_negativity() {
  auto fitted_mesh = build_structured_mesh(4, 4, {0, 0, 1, 1});
  double f = stabilized_min_eig(assemble_parts_fitted(fitted_mesh, build_cg_dofmap(fitted_mesh)));
  RunConfig c = reference_config();
  c.nx = 8;
  auto d = discretize(c);
  double i = stabilized_min_eig(assemble_parts_interface(d.mesh, d.cuts, *d.cut_dofs, d.spec.alpha));
  return {f >= -1e-9 && i >= -1e-9,
          fmt("min eig / ||A||: fitted 4x4 %.3e, interface 8x8 %.3e", f, i)};
}

Verdict lifting_identity() {
  auto d = discretize(reference_config());
  double worst_al = 0.0, worst_kl = 0.0;
  int elements = 0;
  for (std::size_t t = 0; t < d.mesh.n_triangles(); ++t) {
    auto m = interface_element_matrices(d.mesh, t, d.cuts[t], d.spec.alpha);
    if (!m.participates) continue;
    ++elements;
    double scale = m.A.norm() + m.Nc.norm();
    worst_al = std::max(worst_al, (m.A * m.L - m.Nc.transpose()).norm() / scale);
    worst_kl = std::max(worst_kl, (m.K * m.L).norm() / scale);
  }
  return {worst_al <= 1e-11 && worst_kl <= 1e-11,
          fmt("%d cut elements, max |AL-Nc^T|/scale %.2e, max |KL|/scale %.2e", elements,
              worst_al, worst_kl)};
}

double patch_error(const RunConfig& c) {
  auto d = discretize(c);
  auto x = dense_solve(d.reduced.system.matrix, d.reduced.system.rhs);
  auto e = d.errors(d.reduced.expand(x));
  // Relative to the size of the exact solution on the domain.
  double scale = 0.0;
  for (auto p : d.mesh.vertices()) scale = std::max(scale, std::abs(d.exact.u[0](p)));
  return std::max({e.l2, e.h1_broken, e.jump_l2_gamma}) / std::max(scale, 1.0);
}

Verdict patch_tests() {
  RunConfig c;
  c.problem = ProblemChoice::Fitted;
  c.exact = ExactChoice::Affine;
  c.nx = 4;
  double worst = patch_error(c);
  c.method = MethodChoice::Classical;
  for (double lambda : {1.0, 100.0}) {
    c.lambda = lambda;
    worst = std::max(worst, patch_error(c));
  }
  RunConfig p = reference_config();
  p.exact = ExactChoice::Planar;
  p.nx = 8;
  double planar = patch_error(p);
  return {worst <= 1e-9 && planar <= 1e-9,
          fmt("fitted affine max error %.2e, planar interface error %.2e", worst, planar)};
}

Verdict sparsity() {
  RunConfig c = reference_config();
  c.method = MethodChoice::Classical;
  c.lambda = 16.0;
  auto classical = discretize(c);
  c.method = MethodChoice::Lifted;
  c.lambda.reset();
  auto lifted = discretize(c);
  bool same = classical.full.matrix.same_pattern(lifted.full.matrix);
  return {same, fmt("nnz classical %zu, parameter-free %zu", classical.full.matrix.nnz(),
                    lifted.full.matrix.nnz())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  std::vector<Criterion> criteria{
      {1, "stability threshold", stability_boundary},
      {2, "conditioning plateau +-30%", plateau},
      {3, "linear growth regime", linear_growth},
      {4, "parameter-free conditioning", parameter_free},
      {5, "dof count 512", dof_count},
      {6, "fitted convergence", fitted_convergence},
      {7, "unfitted convergence", unfitted_convergence},
      {8, "jump decay", jump_decay},
      {9, "non-negativity of the stabilized form", non_negativity},
      {10, "lifting identity", lifting_identity},
      {11, "patch tests", patch_tests},
      {12, "sparsity equality", sparsity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
