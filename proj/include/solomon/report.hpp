#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "solomon/elimination.hpp"
#include "solomon/mechanisms.hpp"
#include "solomon/scenario.hpp"
#include "solomon/stability.hpp"

namespace solomon {

/// Reports preserve insertion order so repeated runs serialize to identical
/// bytes. Every money value is rendered through Money::to_string (exact).
using Json = nlohmann::ordered_json;

enum class FileErrorKind {
  IoError,          // file missing or unreadable
  ParseError,       // malformed document or field of the wrong shape
  ValidationError,  // well-formed but violates a scenario invariant
};

std::string to_string(FileErrorKind kind);

class ScenarioFileError : public std::runtime_error {
 public:
  ScenarioFileError(FileErrorKind kind, const std::string& message,
                    std::vector<Violation> violations = {});
  FileErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }  // what() minus the kind prefix
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  FileErrorKind kind_;
  std::string message_;
  std::vector<Violation> violations_;
};

/// Strict scenario-document reader: required fields n (integer), k (integer),
/// delta (money string), profiles (array of arrays of money strings);
/// optional nonnegative_bids (bool), allow_zero_delta (bool), bid_grid_extra
/// (array of money strings). Unknown fields are rejected. The returned
/// scenario passed validate_scenario (ValidationError otherwise).
Scenario scenario_from_json(const Json& doc);

/// Inverse of scenario_from_json up to money-string canonicalization:
/// scenario_from_json(scenario_to_json(s)) reproduces s field for field.
Json scenario_to_json(const Scenario& scenario);

/// Reads, parses, and validates a scenario document from disk.
Scenario parse_scenario_file(const std::string& path);

// -- payload builders ------------------------------------------------------
// Agents are numbered from 1 in every serialized document.

Json strategy_to_json(const Strategy& s);
Json allocation_to_json(const Allocation& allocation);
Json grid_to_json(const BidGrid& grid);
Json validation_to_json(const Scenario& scenario, const BidGrid& grid);
Json elimination_to_json(const EliminationState& state, const std::string& policy_label);
Json check_to_json(const ImplementationReport& report);
Json witness_to_json(const DeviationWitness& witness);
Json stability_to_json(const StabilityReport& report);

/// Side-by-side truthful-bid payoff tables (two-agent scenarios): for each of
/// the four move combinations, the entry mechanism's and the buyout
/// mechanism's payoffs, plus the mandatory-participation baseline row.
Json comparison_to_json(const Scenario& scenario, int profile_index);

/// Outcome of one hand-written strategy profile. The allocation depends on
/// the messages only; payoffs are reported per valuation profile of Q
/// (at_index >= 0 selects one, negative means all). Bids need not lie on the
/// scenario's grid. Auction details appear when a bidding stage was held.
Json evaluation_to_json(const Scenario& scenario, const Mechanism& mechanism,
                        const std::vector<Strategy>& strategies, int at_index);

/// The complete result of one command invocation.
struct RunReport {
  std::vector<std::string> command;  // argv echo, subcommand first
  Json scenario_echo;                // reparseable scenario document (or null)
  Json digest;                       // {n, k, delta, profile_count, grid_size} (or null)
  Json result;                       // payload with a "kind" discriminator
  int exit_status = 0;

  Json to_json() const;
};

class UnsupportedFormatError : public std::invalid_argument {
 public:
  explicit UnsupportedFormatError(const std::string& what) : std::invalid_argument(what) {}
};

/// Renders a report as "json" (canonical, 2-space indent), "csv" (one record
/// per row with a header, payload-specific columns), or "text" (human
/// summary; a stable stability report begins with the line "STABLE").
std::string emit_report(const RunReport& report, const std::string& format);

}  // namespace solomon
