#pragma once

#include <optional>

#include "solomon/elimination.hpp"
#include "solomon/mechanisms.hpp"
#include "solomon/scenario.hpp"

namespace solomon {

/// A profitable joint deviation of two agents plus the side payment making
/// both strictly better off. `transfer` flows from j to i when positive.
struct DeviationWitness {
  int i = 0;  // 0-based agent indices
  int j = 0;
  Strategy strategy_i;  // the pair's deviation strategies
  Strategy strategy_j;
  Money transfer;
  Money payoff_i;  // post-transfer payoffs at the deviation
  Money payoff_j;
  Money equilibrium_payoff_i;
  Money equilibrium_payoff_j;

  /// Pre-transfer joint gain over the equilibrium sum; positive by
  /// construction, split equally by `transfer`.
  Money surplus() const {
    return (payoff_i - equilibrium_payoff_i) + (payoff_j - equilibrium_payoff_j);
  }
};

/// Optional restrictions for targeted searches: a single unordered pair of
/// agents, and/or a single move combination for the deviating pair (the
/// first entry constrains the lower-indexed agent of the pair).
struct DeviationFilter {
  std::optional<std::pair<int, int>> pair;
  std::optional<std::pair<Move, Move>> moves;
};

/// Exhaustive search over every agent pair and every joint deviation drawn
/// from `deviation_space`, holding the rest of `equilibrium` fixed. A pair
/// can profitably deviate iff some deviation's payoff sum strictly exceeds
/// that pair's equilibrium sum; the witness returned maximizes the surplus
/// (ties resolved toward the lexicographically smallest pair and strategies)
/// and carries the equal-split transfer. Returns nullopt when stable.
std::optional<DeviationWitness> deviation_sum_search(const Mechanism& mechanism,
                                                     const std::vector<Money>& valuations,
                                                     const std::vector<Strategy>& equilibrium,
                                                     const std::vector<Strategy>& deviation_space,
                                                     const DeviationFilter& filter = {});

/// Largest attainable pre-transfer sum u_i + u_j over the pair's joint
/// deviations (the quantity the stability condition compares against the
/// equilibrium sum).
Money max_deviation_sum(const Mechanism& mechanism, const std::vector<Money>& valuations,
                        const std::vector<Strategy>& equilibrium, int i, int j,
                        const std::vector<Strategy>& deviation_space);

class HypothesisFailedError : public std::runtime_error {
 public:
  explicit HypothesisFailedError(const std::string& what) : std::runtime_error(what) {}
};

/// The closed-form instability witness for the two-agent buyout mechanism:
/// against the truth-telling equilibrium ("mine" from the high type, "hers"
/// from the low type), both say "hers" with truthful bids and the low type
/// pays the high type delta + epsilon. Requires v_i > v_j, epsilon > 0, and
/// v_i - 2*delta - epsilon > 0; payoffs are evaluated through the outcome
/// function, not assumed.
DeviationWitness olszewski_bribe_witness(const Money& v_i, const Money& v_j, const Money& delta,
                                         const Money& epsilon);

class NoEquilibriumError : public std::runtime_error {
 public:
  explicit NoEquilibriumError(const std::string& what) : std::runtime_error(what) {}
};

/// Stability verdict for one valuation profile of Q.
struct ProfileStability {
  int profile_index = 0;
  std::vector<Money> valuations;
  std::uint64_t equilibrium_profiles = 0;  // distinct outcome-class profiles searched
  std::vector<Money> equilibrium_payoffs;  // at the canonically first equilibrium
  bool stable = true;
  std::optional<DeviationWitness> witness;  // max-surplus witness over all equilibria
};

struct StabilityReport {
  bool stable = true;
  std::vector<ProfileStability> profiles;
};

/// Runs the elimination to its terminal sets, then checks every surviving
/// equilibrium profile of every v in Q against every pairwise grid deviation.
/// Throws NoEquilibriumError if some agent's terminal set is empty.
StabilityReport verify_pairwise_stability(const Mechanism& mechanism, const Scenario& scenario,
                                          const EliminationOptions& options = {});

/// Same check against an already-computed terminal state.
StabilityReport verify_pairwise_stability(const Mechanism& mechanism,
                                          const EliminationState& terminal);

}  // namespace solomon
