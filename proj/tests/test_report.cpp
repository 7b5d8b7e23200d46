#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "solomon/cli.hpp"
#include "solomon/report.hpp"

using namespace solomon;

namespace {

namespace fs = std::filesystem;

std::string scenario_path(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

Json minimal_doc() {
  Json doc = Json::object();
  doc["n"] = 2;
  doc["k"] = 1;
  doc["delta"] = "1";
  doc["profiles"] = Json::array({Json::array({"10", "3"})});
  return doc;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name, const std::string& contents = "") {
    path = fs::temp_directory_path() / name;
    if (!contents.empty()) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << contents;
    }
  }
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
  std::string str() const { return path.string(); }
};

FileErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ScenarioFileError& e) {
    return e.kind();
  }
  FAIL("expected a ScenarioFileError");
  return FileErrorKind::IoError;
}

}  // namespace

TEST_CASE("scenario documents parse with defaults applied") {
  const Scenario s = scenario_from_json(minimal_doc());
  CHECK(s.n == 2);
  CHECK(s.k == 1);
  CHECK(s.delta == Money(1));
  REQUIRE(s.profiles.size() == 1);
  CHECK(s.profiles[0] == std::vector<Money>{Money(10), Money(3)});
  CHECK(s.nonnegative_bids);
  CHECK_FALSE(s.allow_zero_delta);
  CHECK(s.bid_grid_extra.empty());
}

TEST_CASE("scenario documents round-trip through serialization") {
  Json doc = minimal_doc();
  doc["nonnegative_bids"] = false;
  doc["allow_zero_delta"] = false;
  doc["bid_grid_extra"] = Json::array({"-4", "7/2"});
  const Scenario first = scenario_from_json(doc);

  const Json echoed = scenario_to_json(first);
  // The echo is a complete document: every field appears, optionals included.
  for (const char* field :
       {"n", "k", "delta", "profiles", "nonnegative_bids", "allow_zero_delta", "bid_grid_extra"}) {
    CHECK(echoed.contains(field));
  }

  const Scenario second = scenario_from_json(echoed);
  CHECK(second.n == first.n);
  CHECK(second.k == first.k);
  CHECK(second.delta == first.delta);
  CHECK(second.profiles == first.profiles);
  CHECK(second.nonnegative_bids == first.nonnegative_bids);
  CHECK(second.allow_zero_delta == first.allow_zero_delta);
  CHECK(second.bid_grid_extra == first.bid_grid_extra);
}

TEST_CASE("money strings are canonicalized on the way through") {
  Json doc = minimal_doc();
  doc["delta"] = "1.00";
  doc["profiles"] = Json::array({Json::array({"10.50", "3"})});
  const Scenario s = scenario_from_json(doc);
  const Json echoed = scenario_to_json(s);
  CHECK(echoed.at("delta").get<std::string>() == "1");
  CHECK(echoed.at("profiles")[0][0].get<std::string>() == "10.5");
}

TEST_CASE("malformed scenario documents name the offending field") {
  auto expect_parse_error = [](Json doc, const std::string& needle) {
    try {
      (void)scenario_from_json(doc);
      FAIL("expected a ScenarioFileError for ", needle);
    } catch (const ScenarioFileError& e) {
      CHECK(e.kind() == FileErrorKind::ParseError);
      CHECK(e.message().find(needle) != std::string::npos);
    }
  };

  Json doc = minimal_doc();
  doc.erase("n");
  expect_parse_error(doc, "'n'");

  doc = minimal_doc();
  doc["n"] = "2";
  expect_parse_error(doc, "'n'");

  doc = minimal_doc();
  doc["delta"] = 1;
  expect_parse_error(doc, "'delta'");

  doc = minimal_doc();
  doc["delta"] = "one";
  expect_parse_error(doc, "'delta'");

  doc = minimal_doc();
  doc["profiles"] = "10 3";
  expect_parse_error(doc, "'profiles'");

  doc = minimal_doc();
  doc["profiles"][0][1] = "3..5";
  expect_parse_error(doc, "profiles[0][1]");

  doc = minimal_doc();
  doc["fee"] = "1";
  expect_parse_error(doc, "'fee'");

  doc = minimal_doc();
  doc["nonnegative_bids"] = "yes";
  expect_parse_error(doc, "'nonnegative_bids'");

  doc = minimal_doc();
  doc["bid_grid_extra"] = "4";
  expect_parse_error(doc, "'bid_grid_extra'");

  expect_parse_error(Json::array(), "object");
}

TEST_CASE("invalid scenarios surface their violations") {
  Json doc = minimal_doc();
  doc["profiles"] = Json::array({Json::array({"5", "5"})});
  try {
    (void)scenario_from_json(doc);
    FAIL("expected a validation failure");
  } catch (const ScenarioFileError& e) {
    CHECK(e.kind() == FileErrorKind::ValidationError);
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].code == ViolationCode::AmbiguousTop);
  }

  doc = minimal_doc();
  doc["delta"] = "0";
  CHECK(kind_of([&] { (void)scenario_from_json(doc); }) == FileErrorKind::ValidationError);
}

TEST_CASE("shipped scenario files parse") {
  const Scenario two = parse_scenario_file(scenario_path("two_agent.json"));
  CHECK(two.n == 2);
  CHECK(two.delta == Money(1));

  const Scenario four = parse_scenario_file(scenario_path("four_agent_two_objects.json"));
  CHECK(four.n == 4);
  CHECK(four.k == 2);

  const Scenario zero = parse_scenario_file(scenario_path("zero_fee.json"));
  CHECK(zero.delta == Money(0));
  CHECK(zero.allow_zero_delta);

  const Scenario negative = parse_scenario_file(scenario_path("negative_bids.json"));
  CHECK_FALSE(negative.nonnegative_bids);
  CHECK(negative.bid_grid_extra == std::vector<Money>{Money(-4)});
}

TEST_CASE("file problems map to the right error kinds") {
  CHECK(kind_of([] { (void)parse_scenario_file("/no/such/file.json"); }) ==
        FileErrorKind::IoError);

  const TempFile broken("solomon_broken_scenario.json", "{\"n\": 2,");
  CHECK(kind_of([&] { (void)parse_scenario_file(broken.str()); }) == FileErrorKind::ParseError);

  const TempFile wrong("solomon_wrong_scenario.json", "{\"n\": 2}");
  CHECK(kind_of([&] { (void)parse_scenario_file(wrong.str()); }) == FileErrorKind::ParseError);
}

TEST_CASE("reports serialize deterministically") {
  const std::vector<std::string> argv{"eliminate", "--scenario", scenario_path("two_agent.json")};
  const CommandResult first = run_command(argv);
  const CommandResult second = run_command(argv);
  CHECK(first.rendered == second.rendered);
  CHECK(first.report.exit_status == 0);

  const Json doc = first.report.to_json();
  for (const char* field : {"command", "scenario", "digest", "result", "exit_status"}) {
    CHECK(doc.contains(field));
  }
  CHECK(doc.at("command")[0].get<std::string>() == "eliminate");
  CHECK(doc.at("digest").at("grid_size").get<int>() == 19);
  CHECK(doc.at("result").at("kind").get<std::string>() == "elimination");
  // Rerunning the serialized scenario echo must reproduce the same scenario.
  const Scenario echoed = scenario_from_json(doc.at("scenario"));
  CHECK(echoed.profiles == std::vector<std::vector<Money>>{{Money(10), Money(3)}});
}

TEST_CASE("command reports carry the documented verdicts and exit codes") {
  // Affirmative implementation check.
  CommandResult check =
      run_command({"check", "--scenario", scenario_path("two_agent.json")});
  CHECK(check.report.exit_status == 0);
  CHECK(check.report.result.at("kind") == "check");
  CHECK(check.report.result.at("implemented").get<bool>());

  // Negative implementation check: mandatory participation misallocates.
  check = run_command({"check", "--scenario", scenario_path("two_agent.json"), "--mechanism",
                       "plain-kplus1"});
  CHECK(check.report.exit_status == 1);
  CHECK_FALSE(check.report.result.at("implemented").get<bool>());

  // The trace command reports the same failing check but still exits 0.
  const CommandResult trace = run_command(
      {"eliminate", "--scenario", scenario_path("two_agent.json"), "--mechanism", "plain-kplus1"});
  CHECK(trace.report.exit_status == 0);
  CHECK_FALSE(trace.report.result.at("check").at("implemented").get<bool>());

  // Stability verdicts: the entry-fee mechanism holds, the buyout one falls.
  CommandResult stability =
      run_command({"stability", "--scenario", scenario_path("two_agent.json")});
  CHECK(stability.report.exit_status == 0);
  CHECK(stability.report.result.at("stable").get<bool>());

  stability = run_command({"stability", "--scenario", scenario_path("two_agent.json"),
                           "--mechanism", "olszewski"});
  CHECK(stability.report.exit_status == 1);
  CHECK_FALSE(stability.report.result.at("stable").get<bool>());
  // The closed-form bribe is attached with the default margin of delta/2.
  const Json& bribe = stability.report.result.at("profiles")[0].at("bribe_witness");
  CHECK(bribe.at("transfer").get<std::string>() == "1.5");
  CHECK(bribe.at("i").get<int>() == 1);  // agents are 1-based in documents
  CHECK(bribe.at("j").get<int>() == 2);
  CHECK(bribe.at("payoff_i").get<std::string>() == "10.5");
  CHECK(bribe.at("payoff_j").get<std::string>() == "7.5");
  CHECK(stability.report.result.at("epsilon").get<std::string>() == "0.5");
}

TEST_CASE("usage and input failures exit with status 2") {
  auto error_kind = [](const CommandResult& r) {
    REQUIRE(r.report.result.at("kind") == "error");
    return r.report.result.at("error").at("kind").get<std::string>();
  };

  CommandResult r = run_command({"check", "--scenario", "/no/such/file.json"});
  CHECK(r.report.exit_status == 2);
  CHECK(error_kind(r) == "IoError");

  r = run_command({"check", "--scenario", scenario_path("two_agent.json"), "--mechanism",
                   "first-price"});
  CHECK(r.report.exit_status == 2);
  CHECK(error_kind(r) == "UsageError");

  r = run_command({"eliminate", "--scenario", scenario_path("two_agent.json"), "--policy",
                   "restricted:0"});
  CHECK(r.report.exit_status == 2);  // agents are 1-based on the command line
  CHECK(error_kind(r) == "UsageError");

  r = run_command({"compare", "--scenario", scenario_path("two_agent.json"), "--at", "5"});
  CHECK(r.report.exit_status == 2);

  r = run_command({"compare", "--scenario", scenario_path("three_agent_two_objects.json")});
  CHECK(r.report.exit_status == 2);  // comparison tables are two-agent only

  r = run_command({"stability", "--scenario", scenario_path("two_agent.json"), "--mechanism",
                   "olszewski", "--epsilon", "bad"});
  CHECK(r.report.exit_status == 2);

  r = run_command({"conquer", "--scenario", scenario_path("two_agent.json")});
  CHECK(r.report.exit_status == 2);

  r = run_command({"check", "--scenario", scenario_path("two_agent.json"), "--format", "xml"});
  CHECK(r.report.exit_status == 2);

  const TempFile invalid("solomon_invalid_scenario.json",
                         "{\"n\": 2, \"k\": 1, \"delta\": \"1\","
                         " \"profiles\": [[\"5\", \"5\"]]}");
  r = run_command({"validate", "--scenario", invalid.str()});
  CHECK(r.report.exit_status == 2);
  CHECK(error_kind(r) == "ValidationError");
  REQUIRE(r.report.result.at("error").contains("violations"));
  CHECK(r.report.result.at("error").at("violations")[0].at("code") == "AmbiguousTop");
}

TEST_CASE("help requests exit cleanly with the full command tree") {
  const CommandResult help = run_command({"--help"});
  CHECK(help.report.exit_status == 0);
  for (const char* sub : {"validate", "eliminate", "check", "stability", "compare", "eval"}) {
    CHECK(help.rendered.find(sub) != std::string::npos);
  }
}

TEST_CASE("comparison tables reproduce the truthful-bid payoffs") {
  const CommandResult r =
      run_command({"compare", "--scenario", scenario_path("two_agent.json"), "--at", "0"});
  REQUIRE(r.report.exit_status == 0);
  const Json& profile = r.report.result.at("profiles")[0];
  CHECK(profile.at("bids") == Json::array({"10", "3"}));

  const Json& cases = profile.at("cases");
  REQUIRE(cases.size() == 4);
  CHECK(cases[0].at("moves") == Json::array({"auction", "auction"}));
  CHECK(cases[0].at("olszewski_moves") == Json::array({"hers", "hers"}));
  CHECK(cases[0].at("solomon") == Json::array({"6", "-1"}));
  CHECK(cases[0].at("olszewski") == Json::array({"9", "9"}));
  CHECK(cases[1].at("moves") == Json::array({"auction", "no"}));
  CHECK(cases[1].at("solomon") == Json::array({"10", "0"}));
  CHECK(cases[1].at("olszewski") == Json::array({"0", "3"}));
  CHECK(cases[2].at("moves") == Json::array({"no", "auction"}));
  CHECK(cases[2].at("solomon") == Json::array({"0", "3"}));
  CHECK(cases[2].at("olszewski") == Json::array({"10", "0"}));
  CHECK(cases[3].at("moves") == Json::array({"no", "no"}));
  CHECK(cases[3].at("solomon") == Json::array({"0", "0"}));
  CHECK(cases[3].at("olszewski") == Json::array({"0", "0"}));
  CHECK(profile.at("plain").at("payoffs") == Json::array({"7", "0"}));
}

TEST_CASE("hand-written profiles evaluate with full auction detail") {
  const CommandResult r = run_command({"eval", "--scenario", scenario_path("two_agent.json"),
                                       "--profile", R"([["auction","10"],["auction","3"]])"});
  REQUIRE(r.report.exit_status == 0);
  const Json& result = r.report.result;
  CHECK(result.at("kind") == "evaluation");
  CHECK(result.at("mechanism") == "solomon");
  CHECK(result.at("moves") == Json::array({"auction", "auction"}));
  CHECK(result.at("allocation")[0].at("units") == 1);
  CHECK(result.at("allocation")[0].at("payment") == "-4");  // clearing 3 plus fee 1
  CHECK(result.at("allocation")[1].at("units") == 0);
  CHECK(result.at("allocation")[1].at("payment") == "-1");  // loser pays the fee
  const Json& auction = result.at("auction");
  CHECK(auction.at("participants") == Json::array({1, 2}));
  CHECK(auction.at("winners") == Json::array({1}));
  CHECK(auction.at("clearing_price") == "3");
  CHECK(auction.at("fee") == "1");
  REQUIRE(result.at("profiles").size() == 1);
  CHECK(result.at("profiles")[0].at("payoffs") == Json::array({"6", "-1"}));
}

TEST_CASE("evaluated bids may lie off the scenario grid") {
  const CommandResult r = run_command({"eval", "--scenario", scenario_path("two_agent.json"),
                                       "--profile", R"([["auction","7/3"],["no","0"]])"});
  REQUIRE(r.report.exit_status == 0);
  // The lone entrant takes the object free; no auction is held.
  CHECK(r.report.result.at("allocation")[0].at("units") == 1);
  CHECK(r.report.result.at("allocation")[0].at("payment") == "0");
  CHECK(r.report.result.at("auction").is_null());
  CHECK(r.report.result.at("profiles")[0].at("payoffs") == Json::array({"10", "0"}));
}

TEST_CASE("evaluation speaks each mechanism's vocabulary") {
  CommandResult r = run_command({"eval", "--scenario", scenario_path("two_agent.json"),
                                 "--mechanism", "olszewski", "--profile",
                                 R"([["hers","10"],["hers","3"]])"});
  REQUIRE(r.report.exit_status == 0);
  CHECK(r.report.result.at("moves") == Json::array({"hers", "hers"}));
  CHECK(r.report.result.at("allocation")[0].at("payment") == "-1");   // winner pays the fee
  CHECK(r.report.result.at("allocation")[1].at("payment") == "9");    // loser gets bid - fee
  CHECK(r.report.result.at("auction").is_null());
  CHECK(r.report.result.at("profiles")[0].at("payoffs") == Json::array({"9", "9"}));

  r = run_command({"eval", "--scenario", scenario_path("two_agent.json"), "--mechanism",
                   "plain-kplus1", "--profile", R"([["no","10"],["no","3"]])"});
  REQUIRE(r.report.exit_status == 0);  // moves are ignored under mandatory participation
  CHECK(r.report.result.at("allocation")[0].at("payment") == "-3");
  CHECK(r.report.result.at("auction").at("fee") == "0");
  CHECK(r.report.result.at("profiles")[0].at("payoffs") == Json::array({"7", "0"}));
}

TEST_CASE("evaluation selects profiles and validates its input") {
  // --at picks one valuation profile out of Q.
  CommandResult r = run_command({"eval", "--scenario",
                                 scenario_path("two_agent_two_types.json"), "--at", "1",
                                 "--profile", R"([["auction","10"],["auction","3"]])"});
  REQUIRE(r.report.exit_status == 0);
  REQUIRE(r.report.result.at("profiles").size() == 1);
  CHECK(r.report.result.at("profiles")[0].at("profile") == 1);
  CHECK(r.report.result.at("profiles")[0].at("payoffs") == Json::array({"-1", "-1"}));

  // Negative bids pass only when the scenario allows them.
  r = run_command({"eval", "--scenario", scenario_path("negative_bids.json"), "--profile",
                   R"([["auction","-4"],["auction","-4"]])"});
  REQUIRE(r.report.exit_status == 0);
  CHECK(r.report.result.at("allocation")[0].at("payment") == "3");  // clearing -4 plus fee 1
  CHECK(r.report.result.at("profiles")[0].at("payoffs") == Json::array({"13", "-1"}));

  for (const std::vector<std::string>& bad : {
           std::vector<std::string>{"eval", "--scenario", scenario_path("two_agent.json"),
                                    "--profile", "[[\"auction\""},
           {"eval", "--scenario", scenario_path("two_agent.json"), "--profile",
            R"([["auction","10"]])"},
           {"eval", "--scenario", scenario_path("two_agent.json"), "--profile",
            R"([["auction","-1"],["no","0"]])"},
           {"eval", "--scenario", scenario_path("two_agent.json"), "--profile",
            R"([["later","10"],["no","0"]])"},
           {"eval", "--scenario", scenario_path("two_agent.json"), "--profile",
            R"([["auction",10],["no","0"]])"},
           {"eval", "--scenario", scenario_path("two_agent.json"), "--at", "3", "--profile",
            R"([["auction","10"],["no","0"]])"},
       }) {
    const CommandResult failed = run_command(bad);
    CHECK(failed.report.exit_status == 2);
    CHECK(failed.report.result.at("error").at("kind") == "UsageError");
  }
}

TEST_CASE("evaluation renders as csv and text") {
  const std::vector<std::string> argv{"eval", "--scenario",
                                      scenario_path("two_agent_two_types.json"), "--profile",
                                      R"([["auction","10"],["auction","3"]])"};
  std::vector<std::string> csv_argv = argv;
  csv_argv.insert(csv_argv.end(), {"--format", "csv"});
  const CommandResult csv = run_command(csv_argv);
  CHECK(std::count(csv.rendered.begin(), csv.rendered.end(), '\n') == 3);  // header + 2 profiles
  CHECK(csv.rendered.rfind("profile,valuations,allocation,payoffs\n", 0) == 0);

  std::vector<std::string> text_argv = argv;
  text_argv.insert(text_argv.end(), {"--format", "text"});
  const CommandResult text = run_command(text_argv);
  CHECK(text.rendered.rfind("mechanism: solomon\n", 0) == 0);
  CHECK(text.rendered.find("allocation: (1,-4)(0,-1)") != std::string::npos);
  CHECK(text.rendered.find("participants=(1,2)") != std::string::npos);
}

TEST_CASE("csv output is one header plus one row per record") {
  const CommandResult trace = run_command(
      {"eliminate", "--scenario", scenario_path("two_agent.json"), "--format", "csv"});
  const auto lines = static_cast<size_t>(
      std::count(trace.rendered.begin(), trace.rendered.end(), '\n'));
  CHECK(lines == trace.report.result.at("records").size() + 1);
  CHECK(trace.rendered.rfind("round,agent,valuation,top,eliminated,dominator,strict,witness\n",
                             0) == 0);

  const CommandResult check = run_command(
      {"check", "--scenario", scenario_path("two_agent.json"), "--format", "csv"});
  CHECK(std::count(check.rendered.begin(), check.rendered.end(), '\n') == 2);
}

TEST_CASE("text stability reports lead with the verdict") {
  CommandResult r = run_command(
      {"stability", "--scenario", scenario_path("two_agent.json"), "--format", "text"});
  CHECK(r.rendered.rfind("STABLE\n", 0) == 0);

  r = run_command({"stability", "--scenario", scenario_path("two_agent.json"), "--mechanism",
                   "olszewski", "--format", "text"});
  CHECK(r.rendered.rfind("UNSTABLE\n", 0) == 0);
  CHECK(r.rendered.find("bribe:") != std::string::npos);
}

TEST_CASE("renderers reject formats they do not know") {
  RunReport report;
  report.result = Json::object();
  report.result["kind"] = "check";
  report.result["implemented"] = true;
  report.result["profiles"] = Json::array();
  CHECK_THROWS_AS((void)emit_report(report, "xml"), UnsupportedFormatError);
  CHECK_THROWS_AS((void)emit_report(report, ""), UnsupportedFormatError);
}

TEST_CASE("empty traces serialize with no records and full terminal sets") {
  Scenario s;
  s.n = 2;
  s.k = 1;
  s.delta = Money(1);
  s.profiles = {{Money(10), Money(3)}};
  const Scenario valid = require_valid(s);
  const auto mechanism = make_mechanism("plain-kplus1", valid);
  BidGrid single;
  single.bids = {Money(5)};
  const EliminationState state = iterate_elimination(valid, *mechanism,
                                                     EliminationPolicy::all_weak(), {}, &single);
  const Json doc = elimination_to_json(state, "all-weak");
  CHECK(doc.at("records").empty());
  CHECK(doc.at("last_eliminating_round").get<int>() == 0);
  CHECK(doc.at("rounds_executed").get<int>() == 1);
  REQUIRE(doc.at("terminal").size() == 2);
  CHECK(doc.at("terminal")[0].at("agent").get<int>() == 1);
  CHECK(doc.at("terminal")[0].at("types")[0].at("surviving").size() == 1);
}

TEST_CASE("stdout and file delivery carry the same bytes") {
  const std::vector<std::string> argv{"validate", "--scenario",
                                      scenario_path("two_agent.json")};
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli_main(argv, out, err);
  CHECK(status == 0);
  CHECK(err.str().empty());
  CHECK_FALSE(out.str().empty());

  const TempFile target("solomon_report_out.json");
  std::vector<std::string> with_out = argv;
  with_out.insert(with_out.end(), {"--out", target.str()});
  std::ostringstream out2;
  const int status2 = cli_main(with_out, out2, err);
  CHECK(status2 == 0);
  CHECK(out2.str().empty());  // the report went to the file instead
  CHECK_FALSE(fs::exists(target.str() + ".tmp"));

  // The file content differs from stdout only in the echoed command line.
  const Json from_stdout = Json::parse(out.str());
  const Json from_file = Json::parse(slurp(target.str()));
  CHECK(from_file.at("result") == from_stdout.at("result"));
  CHECK(from_file.at("scenario") == from_stdout.at("scenario"));
  CHECK(from_file.at("command") != from_stdout.at("command"));
}

TEST_CASE("commands leave the scenario file untouched") {
  const std::string path = scenario_path("two_agent.json");
  const std::string before = slurp(path);
  (void)run_command({"eliminate", "--scenario", path});
  (void)run_command({"stability", "--scenario", path, "--mechanism", "olszewski"});
  CHECK(slurp(path) == before);
}

TEST_CASE("extra grid points flow into the digest and the echoed scenario") {
  const CommandResult r = run_command({"validate", "--scenario",
                                       scenario_path("two_agent.json"), "--grid-extra", "100",
                                       "--grid-extra", "1/4"});
  REQUIRE(r.report.exit_status == 0);
  CHECK(r.report.digest.at("grid_size").get<int>() == 21);
  const Json& extras = r.report.scenario_echo.at("bid_grid_extra");
  REQUIRE(extras.size() == 2);
  CHECK(extras[0].get<std::string>() == "100");
  CHECK(extras[1].get<std::string>() == "0.25");  // canonical rendering of 1/4

  const CommandResult bad = run_command({"validate", "--scenario",
                                         scenario_path("two_agent.json"), "--grid-extra", "x"});
  CHECK(bad.report.exit_status == 2);
}
