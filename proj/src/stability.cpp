#include "solomon/stability.hpp"

#include <algorithm>
#include <sstream>

namespace solomon {

namespace {

// Preference order for reported witnesses: larger surplus first, then the
// lexicographically smallest description, so aggregation over any iteration
// order lands on the same witness.
bool witness_improves(const DeviationWitness& candidate, const DeviationWitness& incumbent) {
  const Money cs = candidate.surplus();
  const Money is = incumbent.surplus();
  if (cs != is) return cs > is;
  auto key = [](const DeviationWitness& w) {
    return std::tie(w.i, w.j, w.strategy_i, w.strategy_j, w.transfer, w.payoff_i, w.payoff_j);
  };
  return key(candidate) < key(incumbent);
}

Money agent_payoff(const Allocation& outcome, const std::vector<Money>& valuations, int agent) {
  return payoff(outcome[static_cast<size_t>(agent)],
                AgentType{agent, valuations[static_cast<size_t>(agent)], false});
}

}  // namespace

std::optional<DeviationWitness> deviation_sum_search(const Mechanism& mechanism,
                                                     const std::vector<Money>& valuations,
                                                     const std::vector<Strategy>& equilibrium,
                                                     const std::vector<Strategy>& deviation_space,
                                                     const DeviationFilter& filter) {
  const int n = static_cast<int>(equilibrium.size());
  if (static_cast<int>(valuations.size()) != n) {
    throw std::invalid_argument("valuations must cover every agent in the profile");
  }

  const Allocation eq_outcome = mechanism.outcome(equilibrium);
  std::vector<Money> eq_payoffs;
  eq_payoffs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eq_payoffs.push_back(agent_payoff(eq_outcome, valuations, i));

  std::optional<std::pair<int, int>> only_pair = filter.pair;
  if (only_pair && only_pair->first > only_pair->second) {
    std::swap(only_pair->first, only_pair->second);
  }

  std::optional<DeviationWitness> best;
  std::vector<Strategy> profile;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (only_pair && (only_pair->first != i || only_pair->second != j)) continue;
      const Money eq_sum = eq_payoffs[static_cast<size_t>(i)] + eq_payoffs[static_cast<size_t>(j)];
      profile = equilibrium;
      for (const Strategy& si : deviation_space) {
        if (filter.moves && si.move != filter.moves->first) continue;
        profile[static_cast<size_t>(i)] = si;
        for (const Strategy& sj : deviation_space) {
          if (filter.moves && sj.move != filter.moves->second) continue;
          profile[static_cast<size_t>(j)] = sj;
          const Allocation outcome = mechanism.outcome(profile);
          const Money w_i = agent_payoff(outcome, valuations, i);
          const Money w_j = agent_payoff(outcome, valuations, j);
          const Money sum = w_i + w_j;
          if (sum <= eq_sum) continue;

          const Money surplus = sum - eq_sum;
          const Money half = surplus / Money(2);
          DeviationWitness witness;
          witness.i = i;
          witness.j = j;
          witness.strategy_i = si;
          witness.strategy_j = sj;
          // Equal split: both agents end exactly half the surplus above their
          // equilibrium payoffs.
          witness.transfer = eq_payoffs[static_cast<size_t>(i)] + half - w_i;
          witness.payoff_i = w_i + witness.transfer;
          witness.payoff_j = w_j - witness.transfer;
          witness.equilibrium_payoff_i = eq_payoffs[static_cast<size_t>(i)];
          witness.equilibrium_payoff_j = eq_payoffs[static_cast<size_t>(j)];
          if (!best || witness_improves(witness, *best)) best = std::move(witness);
        }
        profile[static_cast<size_t>(j)] = equilibrium[static_cast<size_t>(j)];
      }
      profile[static_cast<size_t>(i)] = equilibrium[static_cast<size_t>(i)];
    }
  }
  return best;
}

Money max_deviation_sum(const Mechanism& mechanism, const std::vector<Money>& valuations,
                        const std::vector<Strategy>& equilibrium, int i, int j,
                        const std::vector<Strategy>& deviation_space) {
  std::vector<Strategy> profile = equilibrium;
  std::optional<Money> best;
  for (const Strategy& si : deviation_space) {
    profile[static_cast<size_t>(i)] = si;
    for (const Strategy& sj : deviation_space) {
      profile[static_cast<size_t>(j)] = sj;
      const Allocation outcome = mechanism.outcome(profile);
      const Money sum = agent_payoff(outcome, valuations, i) + agent_payoff(outcome, valuations, j);
      if (!best || sum > *best) best = sum;
    }
  }
  if (!best) throw std::invalid_argument("deviation space is empty");
  return *best;
}

DeviationWitness olszewski_bribe_witness(const Money& v_i, const Money& v_j, const Money& delta,
                                         const Money& epsilon) {
  if (!epsilon.is_positive()) {
    throw HypothesisFailedError("epsilon must be positive, got " + epsilon.to_string());
  }
  if (!(v_i > v_j)) {
    throw HypothesisFailedError("need v_i > v_j, got v_i=" + v_i.to_string() +
                                ", v_j=" + v_j.to_string());
  }
  const Money residual = v_i - delta - delta - epsilon;
  if (!residual.is_positive()) {
    std::ostringstream msg;
    msg << "need v_i - 2*delta - epsilon > 0, got " << residual.to_string();
    throw HypothesisFailedError(msg.str());
  }

  const std::vector<Money> valuations{v_i, v_j};
  // Truth-telling equilibrium: the high type claims the object, the low type
  // concedes; the object goes to the high type with no payments.
  const std::vector<Strategy> equilibrium{Strategy{Move::No, v_i}, Strategy{Move::Auction, v_j}};
  const Allocation eq_outcome = olszewski_outcome(equilibrium, delta);

  // The deviation: both concede ("hers") with truthful bids, so the high
  // type buys the object at the fee and the low type collects the bid.
  const std::vector<Strategy> deviation{Strategy{Move::Auction, v_i},
                                        Strategy{Move::Auction, v_j}};
  const Allocation dev_outcome = olszewski_outcome(deviation, delta);

  DeviationWitness witness;
  witness.i = 0;
  witness.j = 1;
  witness.strategy_i = deviation[0];
  witness.strategy_j = deviation[1];
  witness.transfer = delta + epsilon;
  witness.equilibrium_payoff_i = agent_payoff(eq_outcome, valuations, 0);
  witness.equilibrium_payoff_j = agent_payoff(eq_outcome, valuations, 1);
  witness.payoff_i = agent_payoff(dev_outcome, valuations, 0) + witness.transfer;
  witness.payoff_j = agent_payoff(dev_outcome, valuations, 1) - witness.transfer;

  if (witness.payoff_i != v_i + epsilon || witness.payoff_j != residual) {
    throw std::logic_error("bribe witness disagrees with the outcome function");
  }
  return witness;
}

StabilityReport verify_pairwise_stability(const Mechanism& mechanism,
                                          const EliminationState& terminal) {
  if (mechanism.kind() != terminal.mechanism_kind) {
    throw std::invalid_argument("state was initialized for a different mechanism");
  }
  const Scenario& scenario = terminal.scenario;
  const std::vector<Strategy> space = strategy_universe(terminal.grid, mechanism.kind());

  StabilityReport report;
  for (size_t p = 0; p < scenario.profiles.size(); ++p) {
    const std::vector<Money>& v = scenario.profiles[p];
    const std::vector<int> top = top_set(v, scenario.k);

    ProfileStability entry;
    entry.profile_index = static_cast<int>(p);
    entry.valuations = v;

    // One representative per outcome class: all (0,·) strategies act alike,
    // so equilibria differing only in a stay-out bid are the same profile.
    std::vector<std::vector<Strategy>> classes(static_cast<size_t>(scenario.n));
    for (int i = 0; i < scenario.n; ++i) {
      const bool in_top = std::binary_search(top.begin(), top.end(), i);
      const AgentType theta{i, v[static_cast<size_t>(i)], in_top};
      const TypeSurvivors& cell = terminal.survivors(i, theta);
      if (cell.surviving.empty()) {
        std::ostringstream msg;
        msg << "agent " << i + 1 << " has no surviving strategies at profile " << p;
        throw NoEquilibriumError(msg.str());
      }
      auto& list = classes[static_cast<size_t>(i)];
      for (const Strategy& s : cell.surviving) {
        if (terminal.mechanism_kind != MechanismKind::PlainKPlus1 && s.move == Move::No &&
            !list.empty() && list.back().move == Move::No) {
          continue;
        }
        list.push_back(s);
      }
    }

    std::vector<size_t> cursor(static_cast<size_t>(scenario.n), 0);
    std::vector<Strategy> equilibrium(static_cast<size_t>(scenario.n));
    while (true) {
      for (int i = 0; i < scenario.n; ++i) {
        equilibrium[static_cast<size_t>(i)] =
            classes[static_cast<size_t>(i)][cursor[static_cast<size_t>(i)]];
      }
      if (entry.equilibrium_profiles == 0) {
        const Allocation outcome = mechanism.outcome(equilibrium);
        for (int i = 0; i < scenario.n; ++i) {
          entry.equilibrium_payoffs.push_back(agent_payoff(outcome, v, i));
        }
      }
      ++entry.equilibrium_profiles;
      const auto witness = deviation_sum_search(mechanism, v, equilibrium, space);
      if (witness) {
        entry.stable = false;
        if (!entry.witness || witness_improves(*witness, *entry.witness)) {
          entry.witness = witness;
        }
      }
      int i = scenario.n - 1;
      while (i >= 0 && ++cursor[static_cast<size_t>(i)] == classes[static_cast<size_t>(i)].size()) {
        cursor[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }

    if (!entry.stable) report.stable = false;
    report.profiles.push_back(std::move(entry));
  }
  return report;
}

StabilityReport verify_pairwise_stability(const Mechanism& mechanism, const Scenario& scenario,
                                          const EliminationOptions& options) {
  const EliminationState terminal =
      iterate_elimination(scenario, mechanism, EliminationPolicy::all_weak(), options);
  return verify_pairwise_stability(mechanism, terminal);
}

}  // namespace solomon
