#include "report.hpp"

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace nitsche::report {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kVersion = "0.1.0";

std::string num(double v) { return fmt::format("{:.6g}", v); }
std::string num(const std::optional<double>& v, std::string_view missing = "") {
  return v ? num(*v) : std::string(missing);
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

ordered_json config_json(const RunConfig& c) {
  BBox b = c.effective_bbox();
  return {{"problem", to_string(c.problem)},
          {"method", to_string(c.method)},
          {"lambda", opt(c.lambda)},
          {"nx", c.nx},
          {"bbox", {b.xmin, b.ymin, b.xmax, b.ymax}}};
}

void write_json(std::ostream& out, const RunConfig& config, ordered_json rows) {
  ordered_json doc = {{"config", config_json(config)},
                      {"rows", std::move(rows)},
                      {"meta", {{"version", kVersion}}}};
  out << doc.dump(2) << '\n';
}

/// Emits a pipe table from a header and string rows.
void write_markdown(std::ostream& out, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& c : cells) out << ' ' << c << " |";
    out << '\n';
  };
  line(header);
  out << '|';
  for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& r : rows) line(r);
}

std::string status(const SpectralReport& r) { return r.unstable() ? "UNSTABLE" : "ok"; }

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "md") return Format::Markdown;
  throw std::invalid_argument("unknown format: " + std::string(name));
}

std::string_view to_string(ProblemChoice p) {
  return p == ProblemChoice::Fitted ? "fitted" : "interface";
}

std::string_view to_string(MethodChoice m) {
  return m == MethodChoice::Classical ? "classical" : "lifted";
}

void write_solve(std::ostream& out, Format format, const RunConfig& config,
                 const SolveOutcome& o) {
  std::optional<double> cond = o.spectral ? o.spectral->cond : std::nullopt;
  std::optional<double> l2, h1, jump;
  if (o.errors) {
    l2 = o.errors->l2;
    h1 = o.errors->h1_broken;
    jump = o.errors->jump_l2_gamma;
  }
  std::string state = o.unstable ? "UNSTABLE" : "ok";

  switch (format) {
    case Format::Csv:
      out << "problem,method,lambda,nx,n_dofs,n_free,h,cond,status,l2,h1,jump,cg_iterations\n";
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(config.problem),
                         to_string(config.method), num(config.lambda), config.nx, o.n_dofs,
                         o.n_free, num(o.h), num(cond), state, num(l2), num(h1), num(jump),
                         o.cg_iterations);
      break;
    case Format::Json: {
      ordered_json row = {{"n_dofs", o.n_dofs},     {"n_free", o.n_free}, {"h", o.h},
                          {"cond", opt(cond)},      {"status", state},    {"l2", opt(l2)},
                          {"h1", opt(h1)},          {"jump", opt(jump)},
                          {"cg_iterations", o.cg_iterations}};
      if (!o.message.empty()) row["message"] = o.message;
      write_json(out, config, ordered_json::array({row}));
      break;
    }
    case Format::Markdown:
      write_markdown(out, {"n_dofs", "n_free", "h", "cond", "status", "L2", "H1", "jump"},
                     {{std::to_string(o.n_dofs), std::to_string(o.n_free), num(o.h),
                       num(cond, "-"), state, num(l2, "-"), num(h1, "-"), num(jump, "-")}});
      break;
  }
}

void write_lambda_sweep(std::ostream& out, Format format, const RunConfig& config,
                        std::span<const SweepRow> rows) {
  switch (format) {
    case Format::Csv:
      out << "lambda,cond,status\n";
      for (const auto& r : rows) {
        out << (r.lambda ? num(*r.lambda) : std::string("lifted")) << ',' << num(r.report.cond)
            << ',' << status(r.report) << '\n';
      }
      break;
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        arr.push_back({{"method", r.lambda ? "classical" : "lifted"},
                       {"lambda", opt(r.lambda)},
                       {"cond", opt(r.report.cond)},
                       {"lambda_min", r.report.lambda_min},
                       {"lambda_max", r.report.lambda_max},
                       {"status", status(r.report)}});
      }
      write_json(out, config, std::move(arr));
      break;
    }
    case Format::Markdown: {
      // Transposed layout: one column per lambda.
      std::vector<std::string> header{"lambda"};
      std::vector<std::string> values{"kappa"};
      for (const auto& r : rows) {
        header.push_back(r.lambda ? num(*r.lambda) : "lifted");
        values.push_back(r.report.cond ? fmt::format("{:.1f}", *r.report.cond) : "-");
      }
      write_markdown(out, header, {values});
      break;
    }
  }
}

void write_convergence(std::ostream& out, Format format, const RunConfig& config,
                       std::span<const ConvergenceRow> rows) {
  switch (format) {
    case Format::Csv:
      out << "nx,h,n_dofs,l2,eoc_l2,h1,eoc_h1,jump,eoc_jump\n";
      for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.nx, num(r.errors.h), r.errors.n_dofs,
                           num(r.errors.l2), num(r.eoc_l2), num(r.errors.h1_broken),
                           num(r.eoc_h1), num(r.errors.jump_l2_gamma), num(r.eoc_jump));
      }
      break;
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        arr.push_back({{"nx", r.nx},
                       {"h", r.errors.h},
                       {"n_dofs", r.errors.n_dofs},
                       {"l2", r.errors.l2},
                       {"eoc_l2", opt(r.eoc_l2)},
                       {"h1", r.errors.h1_broken},
                       {"eoc_h1", opt(r.eoc_h1)},
                       {"jump", r.errors.jump_l2_gamma},
                       {"eoc_jump", opt(r.eoc_jump)}});
      }
      write_json(out, config, std::move(arr));
      break;
    }
    case Format::Markdown: {
      std::vector<std::vector<std::string>> body;
      for (const auto& r : rows) {
        body.push_back({std::to_string(r.nx), num(r.errors.h), std::to_string(r.errors.n_dofs),
                        num(r.errors.l2), num(r.eoc_l2, "-"), num(r.errors.h1_broken),
                        num(r.eoc_h1, "-"), num(r.errors.jump_l2_gamma), num(r.eoc_jump, "-")});
      }
      write_markdown(out, {"nx", "h", "n_dofs", "L2", "eoc", "H1", "eoc", "jump", "eoc"}, body);
      break;
    }
  }
}

void write_jump_sweep(std::ostream& out, Format format, const RunConfig& config,
                      std::span<const JumpRow> rows) {
  switch (format) {
    case Format::Csv:
      out << "lambda,n_dofs,l2,h1,jump,ratio\n";
      for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{}\n", num(r.lambda), r.errors.n_dofs,
                           num(r.errors.l2), num(r.errors.h1_broken),
                           num(r.errors.jump_l2_gamma), num(r.ratio));
      }
      break;
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        arr.push_back({{"lambda", r.lambda},
                       {"n_dofs", r.errors.n_dofs},
                       {"l2", r.errors.l2},
                       {"h1", r.errors.h1_broken},
                       {"jump", r.errors.jump_l2_gamma},
                       {"ratio", opt(r.ratio)}});
      }
      write_json(out, config, std::move(arr));
      break;
    }
    case Format::Markdown: {
      std::vector<std::vector<std::string>> body;
      for (const auto& r : rows) {
        body.push_back({num(r.lambda), num(r.errors.l2), num(r.errors.h1_broken),
                        num(r.errors.jump_l2_gamma), num(r.ratio, "-")});
      }
      write_markdown(out, {"lambda", "L2", "H1", "jump", "ratio"}, body);
      break;
    }
  }
}

}  // namespace nitsche::report
