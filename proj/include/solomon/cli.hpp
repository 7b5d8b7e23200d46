#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "solomon/report.hpp"

namespace solomon {

/// Outcome of one command invocation, before any output is written.
struct CommandResult {
  RunReport report;
  std::string rendered;  // the report in the requested format
  std::string out_path;  // destination file; empty = stdout
};

/// Parses argv (subcommand first; program name excluded), runs the
/// subcommand, and renders the report. Input problems never escape as
/// exceptions: they become error reports carrying the documented exit
/// status (0 = success / affirmative verdict, 1 = negative verdict,
/// 2 = usage, parse, or validation failure, 3 = internal error).
CommandResult run_command(const std::vector<std::string>& argv);

/// run_command plus output delivery: writes the rendered report to --out
/// (single atomic rename) or to `out`. Returns the process exit status.
int cli_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace solomon
