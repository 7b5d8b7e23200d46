#include "solomon/report.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace solomon {

namespace {

[[noreturn]] void parse_fail(const std::string& message) {
  throw ScenarioFileError(FileErrorKind::ParseError, message);
}

Money money_field(const Json& value, const std::string& where) {
  if (!value.is_string()) parse_fail(where + " must be a money string");
  try {
    return Money::parse(value.get<std::string>());
  } catch (const MoneyParseError& e) {
    parse_fail(where + ": " + e.what());
  }
}

int int_field(const Json& doc, const std::string& name) {
  if (!doc.contains(name) || !doc.at(name).is_number_integer()) {
    parse_fail("field '" + name + "' must be an integer");
  }
  return doc.at(name).get<int>();
}

bool bool_field(const Json& doc, const std::string& name, bool fallback) {
  if (!doc.contains(name)) return fallback;
  if (!doc.at(name).is_boolean()) parse_fail("field '" + name + "' must be a boolean");
  return doc.at(name).get<bool>();
}

Json money_list(const std::vector<Money>& values) {
  Json out = Json::array();
  for (const Money& m : values) out.push_back(m.to_string());
  return out;
}

std::string kind_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::Solomon: return "solomon";
    case MechanismKind::Olszewski: return "olszewski";
    case MechanismKind::PlainKPlus1: return "plain-kplus1";
  }
  return "?";
}

std::string move_name(Move move) { return move == Move::Auction ? "auction" : "no"; }

// ---- rendering helpers (csv / text) ---------------------------------------

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

// "(1,10)" from a serialized strategy object.
std::string compact_strategy(const Json& s) {
  const std::string move = s.at("move").get<std::string>();
  return "(" + std::string(move == "auction" ? "1" : "0") + "," +
         s.at("bid").get<std::string>() + ")";
}

// "(1,0)" from a serialized per-agent allocation entry.
std::string compact_entry(const Json& e) {
  return "(" + std::to_string(e.at("units").get<int>()) + "," +
         e.at("payment").get<std::string>() + ")";
}

std::string compact_allocation(const Json& allocation) {
  std::string out;
  for (const Json& e : allocation) out += compact_entry(e);
  return out;
}

std::string joined(const Json& strings, const std::string& sep) {
  std::string out;
  bool first = true;
  for (const Json& s : strings) {
    if (!first) out += sep;
    first = false;
    out += s.get<std::string>();
  }
  return out;
}

std::string compact_tuple(const Json& strings) { return "(" + joined(strings, ",") + ")"; }

std::string strategy_list(const Json& witness, const std::string& sep) {
  std::string out;
  bool first = true;
  for (const Json& s : witness) {
    if (!first) out += sep;
    first = false;
    out += compact_strategy(s);
  }
  return out;
}

std::string type_label(const Json& rec) {
  return "(v=" + rec.at("valuation").get<std::string>() + "," +
         (rec.at("top").get<bool>() ? "H" : "L") + ")";
}

// ---- per-kind csv --------------------------------------------------------

std::string csv_validation(const RunReport& report) {
  const Json& d = report.digest;
  std::string out = csv_row({"n", "k", "delta", "profile_count", "grid_size", "valid"});
  out += csv_row({std::to_string(d.at("n").get<int>()), std::to_string(d.at("k").get<int>()),
                  d.at("delta").get<std::string>(),
                  std::to_string(d.at("profile_count").get<int>()),
                  std::to_string(d.at("grid_size").get<int>()),
                  report.result.at("valid").get<bool>() ? "true" : "false"});
  return out;
}

std::string csv_elimination(const RunReport& report) {
  std::string out =
      csv_row({"round", "agent", "valuation", "top", "eliminated", "dominator", "strict",
               "witness"});
  for (const Json& rec : report.result.at("records")) {
    out += csv_row({std::to_string(rec.at("round").get<int>()),
                    std::to_string(rec.at("agent").get<int>()),
                    rec.at("valuation").get<std::string>(),
                    rec.at("top").get<bool>() ? "H" : "L",
                    compact_strategy(rec.at("eliminated")),
                    compact_strategy(rec.at("dominator")),
                    rec.at("strict").get<bool>() ? "true" : "false",
                    rec.at("witness").is_null() ? "" : strategy_list(rec.at("witness"), "|")});
  }
  return out;
}

std::string csv_check(const RunReport& report) {
  std::string out =
      csv_row({"profile", "valuations", "target", "surviving_profiles", "outcomes", "matches"});
  for (const Json& p : report.result.at("profiles")) {
    out += csv_row({std::to_string(p.at("profile").get<int>()), joined(p.at("valuations"), " "),
                    compact_allocation(p.at("target")),
                    std::to_string(p.at("surviving_profiles").get<std::uint64_t>()),
                    std::to_string(p.at("outcomes").size()),
                    p.at("matches").get<bool>() ? "true" : "false"});
  }
  return out;
}

std::string csv_stability(const RunReport& report) {
  std::string out = csv_row({"profile", "valuations", "equilibrium_profiles", "stable", "i", "j",
                             "strategy_i", "strategy_j", "transfer", "payoff_i", "payoff_j",
                             "surplus"});
  for (const Json& p : report.result.at("profiles")) {
    std::vector<std::string> row{std::to_string(p.at("profile").get<int>()),
                                 joined(p.at("valuations"), " "),
                                 std::to_string(p.at("equilibrium_profiles").get<std::uint64_t>()),
                                 p.at("stable").get<bool>() ? "true" : "false"};
    if (p.at("witness").is_null()) {
      row.insert(row.end(), {"", "", "", "", "", "", "", ""});
    } else {
      const Json& w = p.at("witness");
      row.insert(row.end(),
                 {std::to_string(w.at("i").get<int>()), std::to_string(w.at("j").get<int>()),
                  compact_strategy(w.at("strategy_i")), compact_strategy(w.at("strategy_j")),
                  w.at("transfer").get<std::string>(), w.at("payoff_i").get<std::string>(),
                  w.at("payoff_j").get<std::string>(), w.at("surplus").get<std::string>()});
    }
    out += csv_row(row);
  }
  return out;
}

std::string csv_comparison(const RunReport& report) {
  std::string out = csv_row({"profile", "moves", "mechanism", "payoffs"});
  for (const Json& p : report.result.at("profiles")) {
    const std::string index = std::to_string(p.at("profile").get<int>());
    for (const Json& c : p.at("cases")) {
      out += csv_row({index, joined(c.at("moves"), " "), "solomon", joined(c.at("solomon"), " ")});
      out += csv_row(
          {index, joined(c.at("olszewski_moves"), " "), "olszewski",
           joined(c.at("olszewski"), " ")});
    }
    out += csv_row({index, "", "plain-kplus1", joined(p.at("plain").at("payoffs"), " ")});
  }
  return out;
}

std::string csv_evaluation(const RunReport& report) {
  const std::string allocation = compact_allocation(report.result.at("allocation"));
  std::string out = csv_row({"profile", "valuations", "allocation", "payoffs"});
  for (const Json& p : report.result.at("profiles")) {
    out += csv_row({std::to_string(p.at("profile").get<int>()), joined(p.at("valuations"), " "),
                    allocation, joined(p.at("payoffs"), " ")});
  }
  return out;
}

std::string csv_error(const RunReport& report) {
  const Json& e = report.result.at("error");
  std::string out = csv_row({"kind", "message"});
  out += csv_row({e.at("kind").get<std::string>(), e.at("message").get<std::string>()});
  for (const Json& v : e.value("violations", Json::array())) {
    out += csv_row({v.at("code").get<std::string>(), v.at("message").get<std::string>()});
  }
  return out;
}

// ---- per-kind text ---------------------------------------------------------

std::string text_validation(const RunReport& report) {
  const Json& d = report.digest;
  std::ostringstream out;
  out << "valid: yes\n";
  out << "scenario: n=" << d.at("n").get<int>() << " k=" << d.at("k").get<int>()
      << " delta=" << d.at("delta").get<std::string>()
      << " profiles=" << d.at("profile_count").get<int>() << "\n";
  const Json& grid = report.result.at("grid");
  out << "grid (" << grid.at("bids").size() << "): " << joined(grid.at("bids"), " ") << "\n";
  for (const Json& c : grid.at("clipped")) {
    out << "clipped: bid " << c.at("bid").get<std::string>() << " for valuation "
        << c.at("valuation").get<std::string>() << " fell below zero\n";
  }
  return out.str();
}

void append_check_text(const Json& check, std::ostringstream& out) {
  out << "implemented: " << (check.at("implemented").get<bool>() ? "true" : "false") << "\n";
  for (const Json& p : check.at("profiles")) {
    out << "profile " << p.at("profile").get<int>() << " v=" << compact_tuple(p.at("valuations"))
        << ": target=" << compact_allocation(p.at("target"))
        << " surviving_profiles=" << p.at("surviving_profiles").get<std::uint64_t>()
        << (p.at("matches").get<bool>() ? " matches" : " MISMATCH") << "\n";
    for (const Json& o : p.at("outcomes")) {
      out << "  outcome " << compact_allocation(o.at("allocation")) << " x"
          << o.at("profiles").get<std::uint64_t>()
          << (o.at("matches").get<bool>() ? " = target" : " != target") << "\n";
    }
  }
}

std::string text_elimination(const RunReport& report) {
  const Json& r = report.result;
  std::ostringstream out;
  out << "mechanism: " << r.at("mechanism").get<std::string>() << "\n";
  out << "policy: " << r.at("policy").get<std::string>() << "\n";
  out << "rounds: " << r.at("rounds_executed").get<int>() << " (last elimination in round "
      << r.at("last_eliminating_round").get<int>() << ")\n";
  for (const Json& rec : r.at("records")) {
    out << "round " << rec.at("round").get<int>() << " agent " << rec.at("agent").get<int>()
        << " " << type_label(rec) << ": " << compact_strategy(rec.at("eliminated"))
        << " dominated by " << compact_strategy(rec.at("dominator"));
    if (rec.at("strict").get<bool>()) {
      out << " [strict]";
    } else {
      out << " [weak, strict vs " << strategy_list(rec.at("witness"), "|") << "]";
    }
    out << "\n";
  }
  for (const Json& agent : r.at("terminal")) {
    for (const Json& cell : agent.at("types")) {
      out << "terminal agent " << agent.at("agent").get<int>() << " " << type_label(cell) << ":";
      const Json& surviving = cell.at("surviving");
      const Json& classes = cell.at("payoff_class");
      for (size_t i = 0; i < surviving.size(); ++i) {
        out << " " << compact_strategy(surviving[i]);
        if (!classes.empty()) out << "#" << classes[i].get<int>();
      }
      out << "\n";
    }
  }
  if (r.contains("check")) append_check_text(r.at("check"), out);
  return out.str();
}

std::string text_check(const RunReport& report) {
  std::ostringstream out;
  append_check_text(report.result, out);
  return out.str();
}

void append_witness_text(const Json& w, std::ostringstream& out) {
  out << "pair (" << w.at("i").get<int>() << "," << w.at("j").get<int>() << ") deviates to "
      << compact_strategy(w.at("strategy_i")) << "," << compact_strategy(w.at("strategy_j"))
      << "; transfer " << w.at("transfer").get<std::string>() << "; payoffs "
      << w.at("payoff_i").get<std::string>() << "," << w.at("payoff_j").get<std::string>()
      << " (equilibrium " << w.at("equilibrium_payoff_i").get<std::string>() << ","
      << w.at("equilibrium_payoff_j").get<std::string>() << "); surplus "
      << w.at("surplus").get<std::string>();
}

std::string text_stability(const RunReport& report) {
  const Json& r = report.result;
  std::ostringstream out;
  out << (r.at("stable").get<bool>() ? "STABLE" : "UNSTABLE") << "\n";
  for (const Json& p : r.at("profiles")) {
    out << "profile " << p.at("profile").get<int>() << " v=" << compact_tuple(p.at("valuations"))
        << ": equilibria=" << p.at("equilibrium_profiles").get<std::uint64_t>()
        << " payoffs=" << compact_tuple(p.at("equilibrium_payoffs"));
    out << (p.at("stable").get<bool>() ? " stable" : " UNSTABLE") << "\n";
    if (!p.at("witness").is_null()) {
      out << "  witness: ";
      append_witness_text(p.at("witness"), out);
      out << "\n";
    }
    if (p.contains("bribe_witness")) {
      const Json& b = p.at("bribe_witness");
      if (b.contains("error")) {
        out << "  bribe: " << b.at("error").get<std::string>() << "\n";
      } else {
        out << "  bribe: ";
        append_witness_text(b, out);
        out << "\n";
      }
    }
  }
  return out.str();
}

std::string text_comparison(const RunReport& report) {
  std::ostringstream out;
  for (const Json& p : report.result.at("profiles")) {
    out << "profile " << p.at("profile").get<int>() << " v=" << compact_tuple(p.at("valuations"))
        << " delta=" << p.at("delta").get<std::string>()
        << " bids=" << compact_tuple(p.at("bids")) << "\n";
    for (const Json& c : p.at("cases")) {
      out << "  solomon " << compact_tuple(c.at("moves")) << " -> "
          << compact_tuple(c.at("solomon")) << " | olszewski "
          << compact_tuple(c.at("olszewski_moves")) << " -> " << compact_tuple(c.at("olszewski"))
          << "\n";
    }
    out << "  plain-kplus1 -> " << compact_tuple(p.at("plain").at("payoffs")) << "\n";
  }
  return out.str();
}

std::string joined_ints(const Json& values, const std::string& sep) {
  std::string out;
  bool first = true;
  for (const Json& v : values) {
    if (!first) out += sep;
    first = false;
    out += std::to_string(v.get<int>());
  }
  return out;
}

std::string text_evaluation(const RunReport& report) {
  const Json& r = report.result;
  std::ostringstream out;
  out << "mechanism: " << r.at("mechanism").get<std::string>() << "\n";
  out << "strategies:";
  const Json& strategies = r.at("strategies");
  const Json& moves = r.at("moves");
  for (size_t i = 0; i < strategies.size(); ++i) {
    out << " " << compact_strategy(strategies[i]) << "[" << moves[i].get<std::string>() << "]";
  }
  out << "\n";
  out << "allocation: " << compact_allocation(r.at("allocation")) << "\n";
  if (r.at("auction").is_null()) {
    out << "auction: none\n";
  } else {
    const Json& a = r.at("auction");
    out << "auction: participants=(" << joined_ints(a.at("participants"), ",") << ") winners=("
        << joined_ints(a.at("winners"), ",") << ") clearing="
        << a.at("clearing_price").get<std::string>() << " fee=" << a.at("fee").get<std::string>()
        << "\n";
  }
  for (const Json& p : r.at("profiles")) {
    out << "profile " << p.at("profile").get<int>() << " v=" << compact_tuple(p.at("valuations"))
        << ": payoffs " << compact_tuple(p.at("payoffs")) << "\n";
  }
  return out.str();
}

std::string text_error(const RunReport& report) {
  const Json& e = report.result.at("error");
  std::ostringstream out;
  out << "error: " << e.at("kind").get<std::string>() << ": " << e.at("message").get<std::string>()
      << "\n";
  for (const Json& v : e.value("violations", Json::array())) {
    out << "  " << v.at("code").get<std::string>() << ": " << v.at("message").get<std::string>()
        << "\n";
  }
  return out.str();
}

}  // namespace

std::string to_string(FileErrorKind kind) {
  switch (kind) {
    case FileErrorKind::IoError: return "IoError";
    case FileErrorKind::ParseError: return "ParseError";
    case FileErrorKind::ValidationError: return "ValidationError";
  }
  return "?";
}

ScenarioFileError::ScenarioFileError(FileErrorKind kind, const std::string& message,
                                     std::vector<Violation> violations)
    : std::runtime_error(to_string(kind) + ": " + message),
      kind_(kind),
      message_(message),
      violations_(std::move(violations)) {}

Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) parse_fail("scenario document must be an object");
  static const std::set<std::string> known = {"n",       "k",        "delta",
                                              "profiles", "nonnegative_bids",
                                              "allow_zero_delta", "bid_grid_extra"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) parse_fail("unknown field '" + item.key() + "'");
  }

  Scenario scenario;
  scenario.n = int_field(doc, "n");
  scenario.k = int_field(doc, "k");
  if (!doc.contains("delta")) parse_fail("field 'delta' must be a money string");
  scenario.delta = money_field(doc.at("delta"), "field 'delta'");

  if (!doc.contains("profiles") || !doc.at("profiles").is_array()) {
    parse_fail("field 'profiles' must be an array of valuation profiles");
  }
  size_t p = 0;
  for (const Json& row : doc.at("profiles")) {
    if (!row.is_array()) {
      parse_fail("profiles[" + std::to_string(p) + "] must be an array of money strings");
    }
    std::vector<Money> profile;
    size_t j = 0;
    for (const Json& cell : row) {
      profile.push_back(money_field(
          cell, "profiles[" + std::to_string(p) + "][" + std::to_string(j) + "]"));
      ++j;
    }
    scenario.profiles.push_back(std::move(profile));
    ++p;
  }

  scenario.nonnegative_bids = bool_field(doc, "nonnegative_bids", true);
  scenario.allow_zero_delta = bool_field(doc, "allow_zero_delta", false);
  if (doc.contains("bid_grid_extra")) {
    if (!doc.at("bid_grid_extra").is_array()) {
      parse_fail("field 'bid_grid_extra' must be an array of money strings");
    }
    size_t j = 0;
    for (const Json& cell : doc.at("bid_grid_extra")) {
      scenario.bid_grid_extra.push_back(
          money_field(cell, "bid_grid_extra[" + std::to_string(j) + "]"));
      ++j;
    }
  }

  const std::vector<Violation> violations = validate_scenario(scenario);
  if (!violations.empty()) {
    std::string message;
    for (size_t i = 0; i < violations.size(); ++i) {
      if (i) message += "; ";
      message += violations[i].message;
    }
    throw ScenarioFileError(FileErrorKind::ValidationError, message, violations);
  }
  return scenario;
}

Json scenario_to_json(const Scenario& scenario) {
  Json doc = Json::object();
  doc["n"] = scenario.n;
  doc["k"] = scenario.k;
  doc["delta"] = scenario.delta.to_string();
  Json profiles = Json::array();
  for (const auto& profile : scenario.profiles) profiles.push_back(money_list(profile));
  doc["profiles"] = std::move(profiles);
  doc["nonnegative_bids"] = scenario.nonnegative_bids;
  doc["allow_zero_delta"] = scenario.allow_zero_delta;
  doc["bid_grid_extra"] = money_list(scenario.bid_grid_extra);
  return doc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioFileError(FileErrorKind::IoError, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw ScenarioFileError(FileErrorKind::IoError, "read failure on '" + path + "'");
  }
  Json doc;
  try {
    doc = Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioFileError(FileErrorKind::ParseError, e.what());
  }
  return scenario_from_json(doc);
}

Json strategy_to_json(const Strategy& s) {
  Json out = Json::object();
  out["move"] = move_name(s.move);
  out["bid"] = s.bid.to_string();
  return out;
}

Json allocation_to_json(const Allocation& allocation) {
  Json out = Json::array();
  for (const AgentAllocation& entry : allocation) {
    Json e = Json::object();
    e["units"] = entry.units;
    e["payment"] = entry.payment.to_string();
    out.push_back(std::move(e));
  }
  return out;
}

Json grid_to_json(const BidGrid& grid) {
  Json out = Json::object();
  out["bids"] = money_list(grid.bids);
  Json clipped = Json::array();
  for (const ClippedWitness& c : grid.clipped_witnesses) {
    Json e = Json::object();
    e["valuation"] = c.valuation.to_string();
    e["bid"] = c.bid.to_string();
    clipped.push_back(std::move(e));
  }
  out["clipped"] = std::move(clipped);
  return out;
}

Json validation_to_json(const Scenario& scenario, const BidGrid& grid) {
  Json out = Json::object();
  out["kind"] = "validation";
  out["valid"] = true;
  out["violations"] = Json::array();
  out["profile_count"] = scenario.profiles.size();
  out["grid"] = grid_to_json(grid);
  return out;
}

Json elimination_to_json(const EliminationState& state, const std::string& policy_label) {
  Json out = Json::object();
  out["kind"] = "elimination";
  out["mechanism"] = kind_name(state.mechanism_kind);
  out["policy"] = policy_label;
  out["rounds_executed"] = state.rounds_executed;
  out["last_eliminating_round"] = state.last_eliminating_round;

  Json records = Json::array();
  for (const EliminationRecord& rec : state.trace) {
    Json r = Json::object();
    r["round"] = rec.round;
    r["agent"] = rec.agent + 1;
    r["valuation"] = rec.type.valuation.to_string();
    r["top"] = rec.type.top;
    r["eliminated"] = strategy_to_json(rec.eliminated);
    r["dominator"] = strategy_to_json(rec.dominator);
    r["strict"] = rec.strict;
    if (rec.witness) {
      Json tuple = Json::array();
      for (const Strategy& s : *rec.witness) tuple.push_back(strategy_to_json(s));
      r["witness"] = std::move(tuple);
    } else {
      r["witness"] = nullptr;
    }
    records.push_back(std::move(r));
  }
  out["records"] = std::move(records);

  Json terminal = Json::array();
  for (size_t agent = 0; agent < state.agents.size(); ++agent) {
    Json a = Json::object();
    a["agent"] = agent + 1;
    Json types = Json::array();
    for (const TypeSurvivors& cell : state.agents[agent]) {
      Json t = Json::object();
      t["valuation"] = cell.type.valuation.to_string();
      t["top"] = cell.type.top;
      Json surviving = Json::array();
      for (const Strategy& s : cell.surviving) surviving.push_back(strategy_to_json(s));
      t["surviving"] = std::move(surviving);
      t["payoff_class"] = cell.payoff_class;
      types.push_back(std::move(t));
    }
    a["types"] = std::move(types);
    terminal.push_back(std::move(a));
  }
  out["terminal"] = std::move(terminal);
  return out;
}

Json check_to_json(const ImplementationReport& report) {
  Json out = Json::object();
  out["kind"] = "check";
  out["implemented"] = report.implemented;
  Json profiles = Json::array();
  for (const ProfileCheck& p : report.profiles) {
    Json e = Json::object();
    e["profile"] = p.profile_index;
    e["valuations"] = money_list(p.valuations);
    e["target"] = allocation_to_json(p.target);
    e["surviving_profiles"] = p.surviving_profiles;
    Json outcomes = Json::array();
    for (const OutcomeCount& o : p.outcomes) {
      Json oe = Json::object();
      oe["allocation"] = allocation_to_json(o.outcome);
      oe["profiles"] = o.profiles;
      oe["matches"] = o.matches;
      outcomes.push_back(std::move(oe));
    }
    e["outcomes"] = std::move(outcomes);
    e["matches"] = p.matches;
    profiles.push_back(std::move(e));
  }
  out["profiles"] = std::move(profiles);
  return out;
}

Json witness_to_json(const DeviationWitness& witness) {
  Json out = Json::object();
  out["i"] = witness.i + 1;
  out["j"] = witness.j + 1;
  out["strategy_i"] = strategy_to_json(witness.strategy_i);
  out["strategy_j"] = strategy_to_json(witness.strategy_j);
  out["transfer"] = witness.transfer.to_string();
  out["payoff_i"] = witness.payoff_i.to_string();
  out["payoff_j"] = witness.payoff_j.to_string();
  out["equilibrium_payoff_i"] = witness.equilibrium_payoff_i.to_string();
  out["equilibrium_payoff_j"] = witness.equilibrium_payoff_j.to_string();
  out["surplus"] = witness.surplus().to_string();
  return out;
}

Json stability_to_json(const StabilityReport& report) {
  Json out = Json::object();
  out["kind"] = "stability";
  out["stable"] = report.stable;
  Json profiles = Json::array();
  for (const ProfileStability& p : report.profiles) {
    Json e = Json::object();
    e["profile"] = p.profile_index;
    e["valuations"] = money_list(p.valuations);
    e["equilibrium_profiles"] = p.equilibrium_profiles;
    e["equilibrium_payoffs"] = money_list(p.equilibrium_payoffs);
    e["stable"] = p.stable;
    e["witness"] = p.witness ? witness_to_json(*p.witness) : Json(nullptr);
    profiles.push_back(std::move(e));
  }
  out["profiles"] = std::move(profiles);
  return out;
}

Json comparison_to_json(const Scenario& scenario, int profile_index) {
  if (scenario.n != 2) {
    throw std::invalid_argument("comparison tables need a two-agent scenario");
  }
  const std::vector<Money>& v = scenario.profiles.at(static_cast<size_t>(profile_index));
  const AgentType theta0{0, v[0], false};
  const AgentType theta1{1, v[1], false};

  Json out = Json::object();
  out["profile"] = profile_index;
  out["valuations"] = money_list(v);
  out["delta"] = scenario.delta.to_string();
  out["bids"] = money_list(v);  // truthful bids

  Json cases = Json::array();
  const Move order[] = {Move::Auction, Move::No};
  for (Move m0 : order) {
    for (Move m1 : order) {
      const std::vector<Strategy> s{Strategy{m0, v[0]}, Strategy{m1, v[1]}};
      const Allocation sol = solomon_outcome(s, scenario.k, scenario.delta);
      const Allocation ols = olszewski_outcome(s, scenario.delta);
      Json c = Json::object();
      c["moves"] = Json::array({move_name(m0), move_name(m1)});
      c["olszewski_moves"] = Json::array({move_label(MechanismKind::Olszewski, m0),
                                          move_label(MechanismKind::Olszewski, m1)});
      c["solomon"] =
          Json::array({payoff(sol, theta0).to_string(), payoff(sol, theta1).to_string()});
      c["olszewski"] =
          Json::array({payoff(ols, theta0).to_string(), payoff(ols, theta1).to_string()});
      cases.push_back(std::move(c));
    }
  }
  out["cases"] = std::move(cases);

  const Allocation plain = plain_auction_outcome(v, scenario.k);
  Json plain_entry = Json::object();
  plain_entry["payoffs"] =
      Json::array({payoff(plain, theta0).to_string(), payoff(plain, theta1).to_string()});
  out["plain"] = std::move(plain_entry);
  return out;
}

Json evaluation_to_json(const Scenario& scenario, const Mechanism& mechanism,
                        const std::vector<Strategy>& strategies, int at_index) {
  Json out = Json::object();
  out["kind"] = "evaluation";
  out["mechanism"] = mechanism.name();
  Json strategy_list = Json::array();
  Json moves = Json::array();
  for (const Strategy& s : strategies) {
    strategy_list.push_back(strategy_to_json(s));
    moves.push_back(move_label(mechanism.kind(), s.move));
  }
  out["strategies"] = std::move(strategy_list);
  out["moves"] = std::move(moves);

  // The outcome is message-determined; only payoffs vary with valuations.
  AuctionResult auction;
  Allocation outcome;
  bool held = false;
  if (mechanism.kind() == MechanismKind::Solomon) {
    outcome = solomon_outcome(strategies, scenario.k, scenario.delta, &auction);
    held = !auction.participants.empty();
  } else if (mechanism.kind() == MechanismKind::PlainKPlus1) {
    std::vector<Money> bids;
    for (const Strategy& s : strategies) bids.push_back(s.bid);
    outcome = plain_auction_outcome(bids, scenario.k, &auction);
    held = true;
  } else {
    outcome = mechanism.outcome(strategies);
  }
  out["allocation"] = allocation_to_json(outcome);
  if (held) {
    Json a = Json::object();
    Json participants = Json::array();
    for (int i : auction.participants) participants.push_back(i + 1);
    Json winners = Json::array();
    for (int i : auction.winners) winners.push_back(i + 1);
    a["participants"] = std::move(participants);
    a["winners"] = std::move(winners);
    a["clearing_price"] = auction.clearing_price.to_string();
    a["fee"] = auction.fee.to_string();
    out["auction"] = std::move(a);
  } else {
    out["auction"] = nullptr;
  }

  Json profiles = Json::array();
  const int count = static_cast<int>(scenario.profiles.size());
  for (int p = 0; p < count; ++p) {
    if (at_index >= 0 && p != at_index) continue;
    const std::vector<Money>& v = scenario.profiles[static_cast<size_t>(p)];
    Json e = Json::object();
    e["profile"] = p;
    e["valuations"] = money_list(v);
    Json payoffs = Json::array();
    for (int i = 0; i < scenario.n; ++i) {
      payoffs.push_back(
          payoff(outcome[static_cast<size_t>(i)], AgentType{i, v[static_cast<size_t>(i)], false})
              .to_string());
    }
    e["payoffs"] = std::move(payoffs);
    profiles.push_back(std::move(e));
  }
  out["profiles"] = std::move(profiles);
  return out;
}

Json RunReport::to_json() const {
  Json out = Json::object();
  out["command"] = command;
  out["scenario"] = scenario_echo;
  out["digest"] = digest;
  out["result"] = result;
  out["exit_status"] = exit_status;
  return out;
}

std::string emit_report(const RunReport& report, const std::string& format) {
  const std::string kind =
      report.result.is_object() && report.result.contains("kind")
          ? report.result.at("kind").get<std::string>()
          : "";
  if (kind == "help") {
    return report.result.at("text").get<std::string>();
  }
  if (format == "json") {
    return report.to_json().dump(2) + "\n";
  }
  if (format == "csv") {
    if (kind == "validation") return csv_validation(report);
    if (kind == "elimination") return csv_elimination(report);
    if (kind == "check") return csv_check(report);
    if (kind == "stability") return csv_stability(report);
    if (kind == "comparison") return csv_comparison(report);
    if (kind == "evaluation") return csv_evaluation(report);
    if (kind == "error") return csv_error(report);
    throw UnsupportedFormatError("no csv rendering for result kind '" + kind + "'");
  }
  if (format == "text") {
    if (kind == "validation") return text_validation(report);
    if (kind == "elimination") return text_elimination(report);
    if (kind == "check") return text_check(report);
    if (kind == "stability") return text_stability(report);
    if (kind == "comparison") return text_comparison(report);
    if (kind == "evaluation") return text_evaluation(report);
    if (kind == "error") return text_error(report);
    throw UnsupportedFormatError("no text rendering for result kind '" + kind + "'");
  }
  throw UnsupportedFormatError("unsupported format '" + format +
                               "' (expected json | csv | text)");
}

}  // namespace solomon
