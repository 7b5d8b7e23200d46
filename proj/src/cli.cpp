#include "solomon/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "solomon/elimination.hpp"
#include "solomon/mechanisms.hpp"
#include "solomon/stability.hpp"

namespace solomon {

namespace {

/// Bad flag values and flag/scenario conflicts; reported with exit status 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Flags {
  std::string scenario_path;
  std::string mechanism = "solomon";
  std::string policy = "all-weak";
  std::string format = "json";
  std::string out_path;
  std::vector<std::string> grid_extra;
  int at = -1;  // profile index; -1 = all profiles
  std::string epsilon;
  std::string profile;  // hand-written strategy profile (JSON), eval only
};

Money parse_money_flag(const std::string& text, const std::string& flag) {
  try {
    return Money::parse(text);
  } catch (const MoneyParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

EliminationPolicy parse_policy(const std::string& text, int n) {
  if (text == "all-weak") return EliminationPolicy::all_weak();
  const std::string prefix = "restricted:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<int> agents;
    std::stringstream list(text.substr(prefix.size()));
    std::string item;
    while (std::getline(list, item, ',')) {
      size_t used = 0;
      int agent = 0;
      try {
        agent = std::stoi(item, &used);
      } catch (const std::exception&) {
        throw UsageError("--policy: '" + item + "' is not an agent number");
      }
      if (used != item.size()) {
        throw UsageError("--policy: '" + item + "' is not an agent number");
      }
      if (agent < 1 || agent > n) {
        throw UsageError("--policy: agent " + item + " out of range 1.." + std::to_string(n));
      }
      agents.push_back(agent - 1);
    }
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    if (agents.empty()) {
      throw UsageError("--policy: restricted: needs at least one agent");
    }
    return EliminationPolicy::restricted_first_round(std::move(agents));
  }
  throw UsageError("--policy: unknown policy '" + text +
                   "' (expected all-weak | restricted:AGENTS)");
}

Move parse_move_token(const Json& token) {
  if (token.is_number_integer()) {
    const int value = token.get<int>();
    if (value == 0) return Move::No;
    if (value == 1) return Move::Auction;
    throw UsageError("--profile: move " + std::to_string(value) + " is not 0 or 1");
  }
  if (token.is_string()) {
    const std::string text = token.get<std::string>();
    if (text == "auction" || text == "hers" || text == "1") return Move::Auction;
    if (text == "no" || text == "mine" || text == "0") return Move::No;
    throw UsageError("--profile: unknown move '" + text + "'");
  }
  throw UsageError("--profile: moves must be move labels or 0/1");
}

/// Hand-written profile: a JSON array of [move, bid] pairs (or {move, bid}
/// objects), one per agent. Bids are money strings and need not lie on the
/// scenario's grid; the nonnegative-bids rule still applies.
std::vector<Strategy> parse_profile_flag(const std::string& text, const Scenario& scenario) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("--profile: ") + e.what());
  }
  if (!doc.is_array()) {
    throw UsageError("--profile: expected an array of [move, bid] pairs");
  }
  std::vector<Strategy> out;
  for (const Json& entry : doc) {
    Move move = Move::No;
    Json bid;
    if (entry.is_array() && entry.size() == 2) {
      move = parse_move_token(entry[0]);
      bid = entry[1];
    } else if (entry.is_object() && entry.contains("move") && entry.contains("bid")) {
      move = parse_move_token(entry.at("move"));
      bid = entry.at("bid");
    } else {
      throw UsageError("--profile: each strategy is [move, bid] or {\"move\": .., \"bid\": ..}");
    }
    if (!bid.is_string()) throw UsageError("--profile: bids must be money strings");
    Money amount;
    try {
      amount = Money::parse(bid.get<std::string>());
    } catch (const MoneyParseError& e) {
      throw UsageError(std::string("--profile: ") + e.what());
    }
    if (scenario.nonnegative_bids && amount.is_negative()) {
      throw UsageError("--profile: bid " + amount.to_string() +
                       " is negative but the scenario requires nonnegative bids");
    }
    out.push_back(Strategy{move, amount});
  }
  if (static_cast<int>(out.size()) != scenario.n) {
    throw UsageError("--profile: got " + std::to_string(out.size()) + " strategies for n=" +
                     std::to_string(scenario.n));
  }
  return out;
}

Json make_digest(const Scenario& scenario, const BidGrid& grid) {
  Json digest = Json::object();
  digest["n"] = scenario.n;
  digest["k"] = scenario.k;
  digest["delta"] = scenario.delta.to_string();
  digest["profile_count"] = static_cast<int>(scenario.profiles.size());
  digest["grid_size"] = static_cast<int>(grid.bids.size());
  return digest;
}

Json violations_to_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const Violation& v : violations) {
    Json e = Json::object();
    e["code"] = to_string(v.code);
    e["message"] = v.message;
    out.push_back(std::move(e));
  }
  return out;
}

void set_error(RunReport& report, const std::string& kind, const std::string& message,
               const std::vector<Violation>& violations, int exit_status) {
  Json error = Json::object();
  error["kind"] = kind;
  error["message"] = message;
  if (!violations.empty()) error["violations"] = violations_to_json(violations);
  report.result = Json::object();
  report.result["kind"] = "error";
  report.result["error"] = std::move(error);
  report.exit_status = exit_status;
}

// The profile's unique highest-valuation agent (two-agent profiles).
int high_agent(const std::vector<Money>& v) { return v[0] > v[1] ? 0 : 1; }

void attach_bribe_witnesses(Json& payload, const Scenario& scenario, const Money& epsilon) {
  payload["epsilon"] = epsilon.to_string();
  for (size_t p = 0; p < scenario.profiles.size(); ++p) {
    const std::vector<Money>& v = scenario.profiles[p];
    const int hi = high_agent(v);
    const int lo = 1 - hi;
    Json entry;
    try {
      DeviationWitness witness = olszewski_bribe_witness(v[static_cast<size_t>(hi)],
                                                         v[static_cast<size_t>(lo)],
                                                         scenario.delta, epsilon);
      witness.i = hi;
      witness.j = lo;
      entry = witness_to_json(witness);
    } catch (const HypothesisFailedError& e) {
      entry = Json::object();
      entry["error"] = std::string(e.what());
    }
    payload["profiles"][p]["bribe_witness"] = std::move(entry);
  }
}

void dispatch(const std::string& sub, const Flags& flags, RunReport& report) {
  Scenario scenario = parse_scenario_file(flags.scenario_path);
  for (const std::string& text : flags.grid_extra) {
    scenario.bid_grid_extra.push_back(parse_money_flag(text, "--grid-extra"));
  }
  const BidGrid grid = build_bid_grid(scenario);
  report.scenario_echo = scenario_to_json(scenario);
  report.digest = make_digest(scenario, grid);

  if (sub == "validate") {
    report.result = validation_to_json(scenario, grid);
    return;
  }

  if (sub == "compare") {
    if (scenario.n != 2) {
      throw UsageError("compare needs a two-agent scenario, got n=" +
                       std::to_string(scenario.n));
    }
    const int count = static_cast<int>(scenario.profiles.size());
    if (flags.at >= count) {
      throw UsageError("--at: index " + std::to_string(flags.at) + " out of range 0.." +
                       std::to_string(count - 1));
    }
    Json profiles = Json::array();
    if (flags.at >= 0) {
      profiles.push_back(comparison_to_json(scenario, flags.at));
    } else {
      for (int p = 0; p < count; ++p) profiles.push_back(comparison_to_json(scenario, p));
    }
    report.result = Json::object();
    report.result["kind"] = "comparison";
    report.result["profiles"] = std::move(profiles);
    return;
  }

  std::unique_ptr<Mechanism> mechanism;
  try {
    mechanism = make_mechanism(flags.mechanism, scenario);
  } catch (const UnknownMechanismError& e) {
    throw UsageError(std::string("--mechanism: ") + e.what());
  } catch (const ArityError& e) {
    throw UsageError(std::string("--mechanism: ") + e.what());
  }

  if (sub == "eval") {
    const std::vector<Strategy> strategies = parse_profile_flag(flags.profile, scenario);
    const int count = static_cast<int>(scenario.profiles.size());
    if (flags.at >= count) {
      throw UsageError("--at: index " + std::to_string(flags.at) + " out of range 0.." +
                       std::to_string(count - 1));
    }
    report.result = evaluation_to_json(scenario, *mechanism, strategies, flags.at);
    return;
  }

  if (sub == "eliminate" || sub == "check") {
    const EliminationPolicy policy = parse_policy(flags.policy, scenario.n);
    const EliminationState state = iterate_elimination(scenario, *mechanism, policy);
    const ImplementationReport check = check_implementation(state, *mechanism);
    if (sub == "eliminate") {
      report.result = elimination_to_json(state, flags.policy);
      report.result["check"] = check_to_json(check);
    } else {
      report.result = check_to_json(check);
      report.exit_status = check.implemented ? 0 : 1;
    }
    return;
  }

  if (sub == "stability") {
    const StabilityReport stability = verify_pairwise_stability(*mechanism, scenario);
    report.result = stability_to_json(stability);
    if (mechanism->kind() == MechanismKind::Olszewski) {
      const Money epsilon = flags.epsilon.empty()
                                ? scenario.delta / Money(2)
                                : parse_money_flag(flags.epsilon, "--epsilon");
      attach_bribe_witnesses(report.result, scenario, epsilon);
    }
    report.exit_status = stability.stable ? 0 : 1;
    return;
  }

  throw std::logic_error("unhandled subcommand '" + sub + "'");
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
  CommandResult result;
  result.report.command = argv;

  Flags flags;
  CLI::App app{"verification toolkit for entry-fee (k+1)st-price allocation"};
  app.name("solomon");
  app.require_subcommand(1);

  auto add_common = [&flags](CLI::App* cmd, bool with_mechanism, bool with_policy, bool with_at,
                             bool with_epsilon) {
    cmd->add_option("--scenario", flags.scenario_path, "scenario file (JSON)")->required();
    cmd->add_option("--format", flags.format, "output format: json | csv | text")
        ->capture_default_str();
    cmd->add_option("--out", flags.out_path, "write the report to this file instead of stdout");
    cmd->add_option("--grid-extra", flags.grid_extra,
                    "extra bid grid points (money strings, appended to the auto grid)");
    if (with_mechanism) {
      cmd->add_option("--mechanism", flags.mechanism, "solomon | olszewski | plain-kplus1")
          ->capture_default_str();
    }
    if (with_policy) {
      cmd->add_option("--policy", flags.policy,
                      "all-weak | restricted:AGENTS (1-based, comma-separated)")
          ->capture_default_str();
    }
    if (with_at) {
      cmd->add_option("--at", flags.at, "profile index (0-based; default: all profiles)");
    }
    if (with_epsilon) {
      cmd->add_option("--epsilon", flags.epsilon,
                      "bribe margin (money string; default: delta/2)");
    }
  };

  add_common(app.add_subcommand("validate", "parse and validate a scenario; report its bid grid"),
             false, false, false, false);
  add_common(app.add_subcommand(
                 "eliminate", "run iterated weak-dominance elimination; report trace and "
                              "terminal sets with an attached implementation check"),
             true, true, false, false);
  add_common(app.add_subcommand(
                 "check", "test whether every surviving strategy profile yields the target "
                          "allocation at every valuation profile"),
             true, true, false, false);
  add_common(app.add_subcommand(
                 "stability", "search every agent pair and joint deviation for a profitable "
                              "transfer against the surviving equilibria"),
             true, false, false, true);
  add_common(app.add_subcommand(
                 "compare", "side-by-side truthful-bid payoff tables for all three mechanisms "
                            "(two-agent scenarios)"),
             false, false, true, false);
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "evaluate one hand-written strategy profile; bids may lie off the grid");
  add_common(eval_cmd, true, false, true, false);
  eval_cmd
      ->add_option("--profile", flags.profile,
                   "strategy profile as JSON, e.g. [[\"auction\",\"10\"],[\"no\",\"3\"]]")
      ->required();

  std::string format = "json";
  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
    if (flags.format != "json" && flags.format != "csv" && flags.format != "text") {
      throw UsageError("--format: unsupported format '" + flags.format +
                       "' (expected json | csv | text)");
    }
    format = flags.format;
    result.out_path = flags.out_path;
    dispatch(app.get_subcommands().front()->get_name(), flags, result.report);
  } catch (const CLI::CallForHelp&) {
    result.report.result = Json::object();
    result.report.result["kind"] = "help";
    result.report.result["text"] = app.help("", CLI::AppFormatMode::All);
    result.report.exit_status = 0;
  } catch (const CLI::CallForAllHelp&) {
    result.report.result = Json::object();
    result.report.result["kind"] = "help";
    result.report.result["text"] = app.help("", CLI::AppFormatMode::All);
    result.report.exit_status = 0;
  } catch (const CLI::ParseError& e) {
    set_error(result.report, "UsageError", e.what(), {}, 2);
  } catch (const ScenarioFileError& e) {
    set_error(result.report, to_string(e.kind()), e.message(), e.violations(), 2);
  } catch (const UsageError& e) {
    set_error(result.report, "UsageError", e.what(), {}, 2);
  } catch (const std::exception& e) {
    set_error(result.report, "InternalError", e.what(), {}, 3);
  }

  result.rendered = emit_report(result.report, format);
  return result;
}

int cli_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const CommandResult result = run_command(argv);
  if (result.out_path.empty()) {
    out << result.rendered;
    out.flush();
  } else {
    namespace fs = std::filesystem;
    const fs::path target(result.out_path);
    const fs::path tmp(result.out_path + ".tmp");
    std::error_code ec;
    {
      std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
      if (!file) {
        err << "cannot write '" << tmp.string() << "'\n";
        return 3;
      }
      file << result.rendered;
      file.flush();
      if (!file) {
        err << "write failure on '" << tmp.string() << "'\n";
        fs::remove(tmp, ec);
        return 3;
      }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
      err << "cannot move report into place at '" << target.string() << "': " << ec.message()
          << "\n";
      fs::remove(tmp, ec);
      return 3;
    }
  }
  return result.report.exit_status;
}

}  // namespace solomon
