#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "nitsche/experiments.hpp"

namespace nitsche::report {

enum class Format { Csv, Json, Markdown };

Format parse_format(std::string_view name);

std::string_view to_string(ProblemChoice p);
std::string_view to_string(MethodChoice m);

void write_solve(std::ostream& out, Format format, const RunConfig& config,
                 const SolveOutcome& outcome);
void write_lambda_sweep(std::ostream& out, Format format, const RunConfig& config,
                        std::span<const SweepRow> rows);
void write_convergence(std::ostream& out, Format format, const RunConfig& config,
                       std::span<const ConvergenceRow> rows);
void write_jump_sweep(std::ostream& out, Format format, const RunConfig& config,
                      std::span<const JumpRow> rows);

}  // namespace nitsche::report
