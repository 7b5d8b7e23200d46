#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solomon/money.hpp"

namespace solomon {

// Agents are numbered 1..n in every input and output; internal vectors are
// 0-based with the offset applied only at the serialization boundary.

/// A privately observed type: own valuation plus the top-k membership flag.
struct AgentType {
  int agent = 0;  // 0-based index
  Money valuation;
  bool top = false;

  friend bool operator==(const AgentType&, const AgentType&) = default;
  friend bool operator<(const AgentType& a, const AgentType& b) {
    if (a.agent != b.agent) return a.agent < b.agent;
    if (a.valuation != b.valuation) return a.valuation < b.valuation;
    return a.top < b.top;
  }
};

/// Per-agent outcome: units of the object received and the payment received
/// (negative = the agent pays).
struct AgentAllocation {
  int units = 0;
  Money payment;

  friend bool operator==(const AgentAllocation&, const AgentAllocation&) = default;
  friend bool operator<(const AgentAllocation& a, const AgentAllocation& b) {
    if (a.units != b.units) return a.units < b.units;
    return a.payment < b.payment;
  }
};

using Allocation = std::vector<AgentAllocation>;

/// A problem instance: n agents, k objects, gap/fee parameter delta, and the
/// finite set Q of possible valuation profiles.
struct Scenario {
  int n = 0;
  int k = 0;
  Money delta;
  std::vector<std::vector<Money>> profiles;
  bool nonnegative_bids = true;
  bool allow_zero_delta = false;
  std::vector<Money> bid_grid_extra;
};

enum class ViolationCode {
  BadParams,     // k <= 0, k >= n, or delta <= 0 without the override
  BadShape,      // wrong arity or fewer than k strictly positive components
  AmbiguousTop,  // k-th and (k+1)-st valuations tie
  GapViolation,  // v_i - v_j <= delta across the H/L boundary
};

struct Violation {
  ViolationCode code;
  std::string message;
};

std::string to_string(ViolationCode code);

/// Raised by require_valid when a scenario fails validation; carries every
/// violated invariant, not just the first.
class ScenarioValidationError : public std::runtime_error {
 public:
  explicit ScenarioValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Checks every scenario invariant and returns the full list of violations
/// (empty = valid). Duplicate profiles are dropped in place, keeping
/// first-occurrence order: Q is a set.
std::vector<Violation> validate_scenario(Scenario& raw);

/// validate_scenario + throw on failure; returns the validated scenario.
Scenario require_valid(Scenario raw);

/// The k agents with the highest valuations (0-based indices, ascending).
/// Callers must pass profiles from a validated scenario; boundary ties were
/// rejected there, so the set is unique.
std::vector<int> top_set(const std::vector<Money>& profile, int k);

/// The target allocation f(v): one free unit to each member of the top set,
/// zero payments everywhere.
Allocation choice_function(const std::vector<Money>& profile, int k);

/// u_i((x_i, y_i), theta_i) = v_i * x_i + y_i, exactly.
Money payoff(const AgentAllocation& alloc, const AgentType& theta);
Money payoff(const Allocation& alloc, const AgentType& theta);

/// All types (v_i, H(i)) agent i can observe across Q, sorted.
std::vector<AgentType> agent_types(const Scenario& scenario, int agent);

class UnknownTypeError : public std::runtime_error {
 public:
  explicit UnknownTypeError(const std::string& what) : std::runtime_error(what) {}
};

/// Opponent type tuples jointly consistent with theta: exactly those
/// theta_{-i} that extend theta to a full profile of Q with its top set.
/// Each tuple lists the other agents' types in ascending agent order.
/// Throws UnknownTypeError if theta matches no profile.
std::vector<std::vector<AgentType>> belief_set(const Scenario& scenario, const AgentType& theta);

/// A clipped non-elimination witness: the bid `valuation + offset` required by
/// the dominance arguments fell below zero under nonnegative_bids.
struct ClippedWitness {
  Money valuation;
  Money bid;  // the unavailable (pre-clip) grid point
};

/// Finite, sorted, deduplicated stand-in for the real bid line.
struct BidGrid {
  std::vector<Money> bids;
  std::vector<ClippedWitness> clipped_witnesses;

  bool contains(const Money& b) const;
  std::optional<int> index_of(const Money& b) const;
};

/// Valuations of Q, the eight half-step offsets u + j*delta/2 (j = -4..4,
/// j != 0) around each, user-supplied extra points, and 0 under
/// nonnegative_bids; points below zero are dropped when bids must be
/// nonnegative, and dropped witness bids (u-2d, u-d, u+d) are reported.
BidGrid build_bid_grid(const Scenario& scenario);

}  // namespace solomon
