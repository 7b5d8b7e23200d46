#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "solomon/mechanisms.hpp"
#include "solomon/scenario.hpp"

namespace solomon {

/// Which (agent, type) cells may eliminate in which round. AllWeakEveryRound
/// is the standard procedure; RestrictedFirstRound confines round 1 to the
/// listed agents and reverts to the standard rule from round 2 on.
struct EliminationPolicy {
  enum class Kind { AllWeakEveryRound, RestrictedFirstRound };
  Kind kind = Kind::AllWeakEveryRound;
  std::vector<int> first_round_agents;  // 0-based; used by RestrictedFirstRound

  static EliminationPolicy all_weak() { return {}; }
  static EliminationPolicy restricted_first_round(std::vector<int> agents) {
    return {Kind::RestrictedFirstRound, std::move(agents)};
  }
};

/// Execution knobs. Neither may change any result: parallelism splits work
/// across (agent, type) cells between round barriers, and the permutation
/// seed shuffles internal scan orders to prove order-independence.
struct EliminationOptions {
  bool parallel = true;
  std::optional<std::uint64_t> permutation_seed;
};

/// One elimination event. The dominator is the first strategy in canonical
/// order ((0,·) before (1,·), bids ascending) that weakly dominates the
/// eliminated strategy within the pre-round surviving set. When the dominance
/// is not strict everywhere, `witness` holds the lexicographically smallest
/// opponent tuple (agents ascending, self omitted) with a strict gain.
struct EliminationRecord {
  int round = 0;
  int agent = 0;
  AgentType type;
  Strategy eliminated;
  Strategy dominator;
  bool strict = false;
  std::optional<std::vector<Strategy>> witness;
};

/// Surviving strategies of one (agent, type) cell, canonical order. After the
/// run, payoff_class groups strategies with identical payoffs against every
/// terminal belief tuple (ids assigned by first appearance; the strategies in
/// class 0 include the canonically smallest survivor).
struct TypeSurvivors {
  AgentType type;
  std::vector<Strategy> surviving;
  std::vector<int> payoff_class;
};

/// Per-round snapshot of all surviving sets: [agent][type slot][strategy],
/// slots aligned with EliminationState::agents.
using SurvivorSnapshot = std::vector<std::vector<std::vector<Strategy>>>;

struct EliminationState {
  Scenario scenario;
  BidGrid grid;
  MechanismKind mechanism_kind = MechanismKind::Solomon;
  int rounds_executed = 0;        // rounds run, including a final empty one
  int last_eliminating_round = 0; // T: the last round that removed anything
  std::vector<std::vector<TypeSurvivors>> agents;  // [agent][type slot]
  std::vector<EliminationRecord> trace;
  std::vector<SurvivorSnapshot> history;  // history[r] = sets after round r

  const TypeSurvivors& survivors(int agent, const AgentType& type) const;
};

class EmptyBeliefsError : public std::logic_error {
 public:
  explicit EmptyBeliefsError(const std::string& what) : std::logic_error(what) {}
};

/// Outcome of a single dominance query.
struct DominanceResult {
  bool dominated = false;
  Strategy dominator;  // meaningful only when dominated
  bool strict = false;
  std::optional<std::vector<Strategy>> witness;  // absent when strict or not dominated
};

/// Explicit-tuple dominance check: does any candidate give theta's agent at
/// least the payoff of `s` against every belief tuple and strictly more
/// against at least one? Candidates are scanned in canonical order; tuples
/// list opponents by ascending agent with the agent's own slot omitted.
DominanceResult is_weakly_dominated(const Strategy& s, const std::vector<Strategy>& candidates,
                                    const std::vector<std::vector<Strategy>>& beliefs,
                                    const AgentType& theta, const Mechanism& mechanism);

/// Round-0 state: full strategy universe ({0,1} x grid, or grid alone under
/// the mandatory-participation baseline) for every (agent, type) cell.
/// A grid override replaces the scenario's auto-built grid.
EliminationState make_initial_state(const Scenario& scenario, const Mechanism& mechanism,
                                    const BidGrid* grid_override = nullptr);

/// Runs one simultaneous round: every in-scope cell is checked against the
/// frozen pre-round snapshot, then all removals apply at once. Returns true
/// when anything was eliminated.
bool eliminate_round(EliminationState& state, const Mechanism& mechanism,
                     const EliminationPolicy& policy, const EliminationOptions& options = {});

/// Runs rounds to the fixed point (a full-scope round that removes nothing),
/// then annotates payoff-equivalence classes on the terminal sets.
EliminationState iterate_elimination(const Scenario& scenario, const Mechanism& mechanism,
                                     const EliminationPolicy& policy,
                                     const EliminationOptions& options = {},
                                     const BidGrid* grid_override = nullptr);

/// Materializes the belief tuple set of (agent, theta) at a snapshot:
/// the union over consistent opponent type tuples of the products of their
/// surviving sets at round r. Grows multiplicatively; intended for small
/// instances and replay checks.
std::vector<std::vector<Strategy>> belief_tuples_at(const EliminationState& state, int round,
                                                    int agent, const AgentType& theta);

/// One distinct allocation reachable from surviving strategy profiles,
/// with the number of profiles that produce it.
struct OutcomeCount {
  Allocation outcome;
  std::uint64_t profiles = 0;
  bool matches = false;  // equals the profile's target allocation
};

/// check_implementation result for one valuation profile.
struct ProfileCheck {
  int profile_index = 0;
  std::vector<Money> valuations;
  std::uint64_t surviving_profiles = 0;  // product of surviving-set sizes
  Allocation target;                     // free objects to the top set
  std::vector<OutcomeCount> outcomes;    // sorted by allocation
  bool matches = false;
};

struct ImplementationReport {
  bool implemented = false;
  std::vector<ProfileCheck> profiles;
};

/// For every profile v of Q, compares the outcome of every surviving strategy
/// profile at v's types against the target allocation. implemented=true iff
/// they all coincide for every profile.
ImplementationReport check_implementation(const EliminationState& terminal,
                                          const Mechanism& mechanism);
ImplementationReport check_implementation(const Scenario& scenario, const Mechanism& mechanism,
                                          const EliminationPolicy& policy,
                                          const EliminationOptions& options = {});

}  // namespace solomon
