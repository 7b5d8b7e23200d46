#include "solomon/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace solomon {

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "scenario validation failed:";
  for (const Violation& v : violations) {
    out << "\n  [" << to_string(v.code) << "] " << v.message;
  }
  return out.str();
}

// Agent indices sorted by valuation descending, index ascending.
std::vector<int> rank_agents(const std::vector<Money>& profile) {
  std::vector<int> order(profile.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return profile[a] > profile[b];
  });
  return order;
}

}  // namespace

std::string to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::BadParams: return "BadParams";
    case ViolationCode::BadShape: return "BadShape";
    case ViolationCode::AmbiguousTop: return "AmbiguousTop";
    case ViolationCode::GapViolation: return "GapViolation";
  }
  return "UnknownViolation";
}

ScenarioValidationError::ScenarioValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_scenario(Scenario& raw) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode code, std::string message) {
    out.push_back(Violation{code, std::move(message)});
  };

  if (raw.k <= 0 || raw.k >= raw.n) {
    std::ostringstream msg;
    msg << "need 0 < k < n, got k=" << raw.k << ", n=" << raw.n;
    add(ViolationCode::BadParams, msg.str());
  }
  if (raw.delta.is_negative()) {
    add(ViolationCode::BadParams, "delta must be positive, got " + raw.delta.to_string());
  } else if (raw.delta.is_zero() && !raw.allow_zero_delta) {
    add(ViolationCode::BadParams, "delta = 0 requires allow_zero_delta");
  }

  // Q is a set: drop exact duplicates, keeping first-occurrence order.
  std::vector<std::vector<Money>> unique_profiles;
  for (auto& profile : raw.profiles) {
    if (std::find(unique_profiles.begin(), unique_profiles.end(), profile) ==
        unique_profiles.end()) {
      unique_profiles.push_back(std::move(profile));
    }
  }
  raw.profiles = std::move(unique_profiles);

  if (raw.profiles.empty()) {
    add(ViolationCode::BadShape, "profiles must contain at least one valuation vector");
  }

  const bool params_ok = raw.k > 0 && raw.k < raw.n;
  for (size_t p = 0; p < raw.profiles.size(); ++p) {
    const auto& profile = raw.profiles[p];
    if (static_cast<int>(profile.size()) != raw.n) {
      std::ostringstream msg;
      msg << "profile " << p << " has " << profile.size() << " entries, expected n=" << raw.n;
      add(ViolationCode::BadShape, msg.str());
      continue;
    }
    if (!params_ok) continue;  // boundary checks need a well-defined k-th position

    int positive = 0;
    for (const Money& v : profile) {
      if (v.is_positive()) ++positive;
    }
    if (positive < raw.k) {
      std::ostringstream msg;
      msg << "profile " << p << " has only " << positive
          << " positive valuations, expected at least k=" << raw.k;
      add(ViolationCode::BadShape, msg.str());
      continue;
    }

    const std::vector<int> order = rank_agents(profile);
    const Money& boundary_high = profile[order[raw.k - 1]];
    const Money& boundary_low = profile[order[raw.k]];
    if (boundary_high == boundary_low) {
      std::ostringstream msg;
      msg << "profile " << p << ": valuations ranked " << raw.k << " and " << raw.k + 1
          << " tie at " << boundary_high.to_string() << "; top set is not unique";
      add(ViolationCode::AmbiguousTop, msg.str());
    } else if (boundary_high - boundary_low <= raw.delta) {
      std::ostringstream msg;
      msg << "profile " << p << ": gap " << (boundary_high - boundary_low).to_string()
          << " between ranked valuations " << raw.k << " and " << raw.k + 1
          << " does not exceed delta=" << raw.delta.to_string();
      add(ViolationCode::GapViolation, msg.str());
    }
  }
  return out;
}

Scenario require_valid(Scenario raw) {
  std::vector<Violation> violations = validate_scenario(raw);
  if (!violations.empty()) throw ScenarioValidationError(std::move(violations));
  return raw;
}

std::vector<int> top_set(const std::vector<Money>& profile, int k) {
  std::vector<int> order = rank_agents(profile);
  order.resize(static_cast<size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

Allocation choice_function(const std::vector<Money>& profile, int k) {
  Allocation alloc(profile.size());
  for (int i : top_set(profile, k)) alloc[static_cast<size_t>(i)].units = 1;
  return alloc;
}

Money payoff(const AgentAllocation& alloc, const AgentType& theta) {
  return theta.valuation * Money(alloc.units) + alloc.payment;
}

Money payoff(const Allocation& alloc, const AgentType& theta) {
  return payoff(alloc.at(static_cast<size_t>(theta.agent)), theta);
}

std::vector<AgentType> agent_types(const Scenario& scenario, int agent) {
  std::vector<AgentType> types;
  for (const auto& profile : scenario.profiles) {
    const std::vector<int> top = top_set(profile, scenario.k);
    const bool in_top = std::binary_search(top.begin(), top.end(), agent);
    types.push_back(AgentType{agent, profile[static_cast<size_t>(agent)], in_top});
  }
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

std::vector<std::vector<AgentType>> belief_set(const Scenario& scenario, const AgentType& theta) {
  std::vector<std::vector<AgentType>> tuples;
  for (const auto& profile : scenario.profiles) {
    const std::vector<int> top = top_set(profile, scenario.k);
    auto in_top = [&](int agent) { return std::binary_search(top.begin(), top.end(), agent); };
    if (profile[static_cast<size_t>(theta.agent)] != theta.valuation) continue;
    if (in_top(theta.agent) != theta.top) continue;

    std::vector<AgentType> tuple;
    for (int j = 0; j < scenario.n; ++j) {
      if (j == theta.agent) continue;
      tuple.push_back(AgentType{j, profile[static_cast<size_t>(j)], in_top(j)});
    }
    tuples.push_back(std::move(tuple));
  }
  if (tuples.empty()) {
    std::ostringstream msg;
    msg << "type (agent " << theta.agent + 1 << ", valuation " << theta.valuation.to_string()
        << ", " << (theta.top ? "top" : "low") << ") matches no profile";
    throw UnknownTypeError(msg.str());
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  return tuples;
}

bool BidGrid::contains(const Money& b) const {
  return std::binary_search(bids.begin(), bids.end(), b);
}

std::optional<int> BidGrid::index_of(const Money& b) const {
  auto it = std::lower_bound(bids.begin(), bids.end(), b);
  if (it == bids.end() || *it != b) return std::nullopt;
  return static_cast<int>(it - bids.begin());
}

BidGrid build_bid_grid(const Scenario& scenario) {
  const Money half = scenario.delta / Money(2);
  const Money zero;

  std::vector<Money> support;
  for (const auto& profile : scenario.profiles) {
    support.insert(support.end(), profile.begin(), profile.end());
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  BidGrid grid;
  auto admit = [&](const Money& b) {
    if (scenario.nonnegative_bids && b.is_negative()) return;
    grid.bids.push_back(b);
  };

  for (const Money& u : support) {
    admit(u);
    for (int j = -4; j <= 4; ++j) {
      if (j == 0) continue;
      admit(u + Money(j) * half);
    }
    // Dominance arguments lean on u-2d, u-d, and u+d; losing one to the
    // nonnegativity clip is legal but worth surfacing.
    if (scenario.nonnegative_bids) {
      for (const Money& witness :
           {u - scenario.delta - scenario.delta, u - scenario.delta, u + scenario.delta}) {
        if (witness.is_negative()) {
          grid.clipped_witnesses.push_back(ClippedWitness{u, witness});
        }
      }
    }
  }
  for (const Money& extra : scenario.bid_grid_extra) admit(extra);
  if (scenario.nonnegative_bids) grid.bids.push_back(zero);

  std::sort(grid.bids.begin(), grid.bids.end());
  grid.bids.erase(std::unique(grid.bids.begin(), grid.bids.end()), grid.bids.end());
  return grid;
}

}  // namespace solomon
