#include "solomon/elimination.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace solomon {

namespace {

// ---------------------------------------------------------------------------
// Strategy universe and behavior classes
//
// Strategies are handled as indices into a canonically ordered universe:
// the (0,·) block (bids ascending) followed by the (1,·) block, or just the
// bid list under the mandatory-participation baseline. An opponent's
// strategy affects a viewer's payoff only through its behavior class —
// "stays out" or "bids grid[c]" — plus which side of the viewer the
// opponent's index falls on (ties break toward lower indices). Belief sets
// therefore collapse to multisets of classes per side, which keeps the full
// cross product of opponent strategies tractable.
// ---------------------------------------------------------------------------

struct UniverseInfo {
  int grid_size = 0;
  bool has_no_block = false;

  bool is_auction(int idx) const { return !has_no_block || idx >= grid_size; }
  int bid_index(int idx) const {
    return has_no_block && idx >= grid_size ? idx - grid_size : idx;
  }
  // 0 = stays out (opt-in mechanisms only); otherwise 1 + bid index, or the
  // bid index itself when participation is mandatory.
  int opp_class(int idx) const {
    if (!has_no_block) return idx;
    return idx < grid_size ? 0 : 1 + (idx - grid_size);
  }
};

struct EngineContext {
  const Scenario* scenario = nullptr;
  const BidGrid* grid = nullptr;
  MechanismKind kind = MechanismKind::Solomon;
  UniverseInfo uinfo;
  std::vector<Strategy> universe;
};

EngineContext make_context(const EliminationState& state) {
  EngineContext ctx;
  ctx.scenario = &state.scenario;
  ctx.grid = &state.grid;
  ctx.kind = state.mechanism_kind;
  ctx.uinfo.grid_size = static_cast<int>(state.grid.bids.size());
  ctx.uinfo.has_no_block = state.mechanism_kind != MechanismKind::PlainKPlus1;
  ctx.universe = strategy_universe(state.grid, state.mechanism_kind);
  return ctx;
}

// ---------------------------------------------------------------------------
// Payoff identifiers
//
// Every payoff a type can realize is one of a handful of exact values:
// nothing, the object free, a fee loss, or a win/settlement at some grid
// clearing price. Evaluations return small integer ids; ids map to exact
// Money values once per (agent, type) and are then compared by rank.
// ---------------------------------------------------------------------------

constexpr int kIdZero = 0;    // no object, no payment
constexpr int kIdObject = 1;  // object received free
constexpr int kIdThird = 2;   // fee loss (entry-fee auction) / fee-discounted win (buyout)
constexpr int kIdBase = 3;    // + clearing-price / winning-bid index
constexpr int kIdPlainBase = 1;

std::vector<Money> payoff_values(const EngineContext& ctx, const Money& valuation) {
  const Money& delta = ctx.scenario->delta;
  std::vector<Money> values;
  switch (ctx.kind) {
    case MechanismKind::Solomon:
      values = {Money(), valuation, -delta};
      for (const Money& b : ctx.grid->bids) values.push_back(valuation - b - delta);
      break;
    case MechanismKind::Olszewski:
      values = {Money(), valuation, valuation - delta};
      for (const Money& b : ctx.grid->bids) values.push_back(b - delta);
      break;
    case MechanismKind::PlainKPlus1:
      values = {Money()};
      for (const Money& b : ctx.grid->bids) values.push_back(valuation - b);
      break;
  }
  return values;
}

// id -> rank of the id's exact value among all distinct values for this type.
std::vector<int> payoff_ranks(const EngineContext& ctx, const Money& valuation) {
  const std::vector<Money> values = payoff_values(ctx, valuation);
  std::vector<Money> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ranks(values.size());
  for (size_t id = 0; id < values.size(); ++id) {
    ranks[id] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), values[id]) - sorted.begin());
  }
  return ranks;
}

// Entry-fee (k+1)st-price auction, viewed from one agent. `cls` holds the
// opponents' behavior classes; the first `lower_count` entries belong to
// lower-indexed opponents, which beat the viewer on bid ties.
int solomon_payoff_id(int k, bool own_auction, int own_bid, const int* cls, int lower_count,
                      int opp_count, std::vector<int>& scratch) {
  if (!own_auction) return kIdZero;
  scratch.clear();
  int above = 0;
  for (int p = 0; p < opp_count; ++p) {
    const int c = cls[p];
    if (c == 0) continue;
    const int b = c - 1;
    scratch.push_back(b);
    if (b > own_bid || (b == own_bid && p < lower_count)) ++above;
  }
  if (static_cast<int>(scratch.size()) + 1 <= k) return kIdObject;
  scratch.push_back(own_bid);
  std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end(), std::greater<int>());
  const int clearing = scratch[static_cast<size_t>(k)];
  return above < k ? kIdBase + clearing : kIdThird;
}

int olszewski_payoff_id(int agent, bool own_auction, int own_bid, int opp_class) {
  if (!own_auction) {
    // Saying "mine" takes the object unless the opponent also claims it.
    return opp_class >= 1 ? kIdObject : kIdZero;
  }
  if (opp_class == 0) return kIdZero;  // the opponent claimed it
  const int opp_bid = opp_class - 1;
  const bool win = agent == 0 ? own_bid >= opp_bid : own_bid > opp_bid;
  return win ? kIdThird : kIdBase + opp_bid;
}

int plain_payoff_id(int k, int own_bid, const int* cls, int lower_count, int opp_count,
                    std::vector<int>& scratch) {
  scratch.clear();
  int above = 0;
  for (int p = 0; p < opp_count; ++p) {
    const int b = cls[p];
    scratch.push_back(b);
    if (b > own_bid || (b == own_bid && p < lower_count)) ++above;
  }
  scratch.push_back(own_bid);
  std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end(), std::greater<int>());
  const int clearing = scratch[static_cast<size_t>(k)];
  return above < k ? kIdPlainBase + clearing : kIdZero;
}

int eval_payoff_id(const EngineContext& ctx, int agent, int own_idx, const int* cls,
                   std::vector<int>& scratch) {
  const bool auction = ctx.uinfo.is_auction(own_idx);
  const int bid = ctx.uinfo.bid_index(own_idx);
  const int opp_count = ctx.scenario->n - 1;
  switch (ctx.kind) {
    case MechanismKind::Solomon:
      return solomon_payoff_id(ctx.scenario->k, auction, bid, cls, agent, opp_count, scratch);
    case MechanismKind::Olszewski:
      return olszewski_payoff_id(agent, auction, bid, cls[0]);
    case MechanismKind::PlainKPlus1:
      return plain_payoff_id(ctx.scenario->k, bid, cls, agent, opp_count, scratch);
  }
  throw std::logic_error("unreachable mechanism kind");
}

// ---------------------------------------------------------------------------
// Belief signatures
// ---------------------------------------------------------------------------

// The distinct behavior-class multisets reachable from a cell's belief set,
// each with the lexicographically smallest opponent strategy tuple producing
// it (for witness reporting).
struct SigTable {
  int opp_count = 0;
  std::vector<int> classes;            // flat [sig * opp_count], per-side sorted
  std::vector<std::vector<int>> reps;  // representative tuples, universe indices
  int count() const { return static_cast<int>(reps.size()); }
  const int* cls(int sig) const {
    return classes.data() + static_cast<size_t>(sig) * static_cast<size_t>(opp_count);
  }
};

// Internal surviving sets: universe indices, ascending, per [agent][type slot].
using IndexSets = std::vector<std::vector<std::vector<int>>>;

// Resolves a cell's belief type tuples to per-opponent type-slot indices.
std::vector<std::vector<int>> belief_slot_tuples(const Scenario& scenario,
                                                 const std::vector<std::vector<AgentType>>& types,
                                                 int agent, const AgentType& theta) {
  std::vector<std::vector<int>> out;
  for (const auto& tuple : belief_set(scenario, theta)) {
    std::vector<int> slots;
    slots.reserve(tuple.size());
    for (const AgentType& opp : tuple) {
      const auto& list = types[static_cast<size_t>(opp.agent)];
      const auto it = std::find(list.begin(), list.end(), opp);
      if (it == list.end()) throw std::logic_error("belief type missing from the type lists");
      slots.push_back(static_cast<int>(it - list.begin()));
    }
    out.push_back(std::move(slots));
  }
  return out;
}

SigTable build_signatures(const EngineContext& ctx, int agent,
                          const std::vector<std::vector<int>>& type_tuples,
                          const IndexSets& sets) {
  const int opp_count = ctx.scenario->n - 1;
  SigTable table;
  table.opp_count = opp_count;

  const bool packable = opp_count <= 8 && ctx.uinfo.grid_size + 1 <= 255;
  std::unordered_map<std::uint64_t, int> packed_lookup;
  std::map<std::vector<int>, int> generic_lookup;

  std::vector<std::vector<std::pair<int, int>>> options(static_cast<size_t>(opp_count));
  std::vector<size_t> cursor(static_cast<size_t>(opp_count));
  std::vector<int> key(static_cast<size_t>(opp_count));
  std::vector<int> rep(static_cast<size_t>(opp_count));

  for (const auto& tuple : type_tuples) {
    bool has_empty_option = false;
    for (int p = 0; p < opp_count; ++p) {
      const int j = p < agent ? p : p + 1;
      const auto& surviving = sets[static_cast<size_t>(j)][static_cast<size_t>(tuple[p])];
      auto& opts = options[static_cast<size_t>(p)];
      opts.clear();
      int last_class = -1;
      // Ascending universe indices give non-decreasing classes, so the first
      // index seen per class is that class's minimum.
      for (int idx : surviving) {
        const int c = ctx.uinfo.opp_class(idx);
        if (c != last_class) {
          opts.emplace_back(c, idx);
          last_class = c;
        }
      }
      if (opts.empty()) has_empty_option = true;
    }
    if (has_empty_option) continue;

    std::fill(cursor.begin(), cursor.end(), 0);
    while (true) {
      for (int p = 0; p < opp_count; ++p) {
        const auto& choice = options[static_cast<size_t>(p)][cursor[static_cast<size_t>(p)]];
        key[static_cast<size_t>(p)] = choice.first;
        rep[static_cast<size_t>(p)] = choice.second;
      }
      // Opponents below the viewer occupy the first `agent` positions; sort
      // each side so permutations of interchangeable opponents coincide.
      std::sort(key.begin(), key.begin() + agent);
      std::sort(key.begin() + agent, key.end());

      int sig = -1;
      bool inserted = false;
      if (packable) {
        std::uint64_t packed = 0;
        for (int c : key) packed = (packed << 8) | static_cast<std::uint64_t>(c + 1);
        auto [it, fresh] = packed_lookup.try_emplace(packed, table.count());
        sig = it->second;
        inserted = fresh;
      } else {
        auto [it, fresh] = generic_lookup.try_emplace(key, table.count());
        sig = it->second;
        inserted = fresh;
      }
      if (inserted) {
        table.classes.insert(table.classes.end(), key.begin(), key.end());
        table.reps.push_back(rep);
      } else if (rep < table.reps[static_cast<size_t>(sig)]) {
        table.reps[static_cast<size_t>(sig)] = rep;
      }

      int p = opp_count - 1;
      while (p >= 0 &&
             ++cursor[static_cast<size_t>(p)] == options[static_cast<size_t>(p)].size()) {
        cursor[static_cast<size_t>(p)] = 0;
        --p;
      }
      if (p < 0) break;
    }
  }
  return table;
}

// Payoff rank of every own strategy against every signature.
std::vector<int> payoff_matrix(const EngineContext& ctx, int agent, const AgentType& theta,
                               const std::vector<int>& own, const SigTable& sigs) {
  const std::vector<int> ranks = payoff_ranks(ctx, theta.valuation);
  std::vector<int> matrix(own.size() * static_cast<size_t>(sigs.count()));
  std::vector<int> scratch;
  scratch.reserve(static_cast<size_t>(ctx.scenario->n));
  for (size_t s = 0; s < own.size(); ++s) {
    int* row = matrix.data() + s * static_cast<size_t>(sigs.count());
    for (int sig = 0; sig < sigs.count(); ++sig) {
      row[sig] =
          ranks[static_cast<size_t>(eval_payoff_id(ctx, agent, own[s], sigs.cls(sig), scratch))];
    }
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Per-cell dominance pass
// ---------------------------------------------------------------------------

struct CellResult {
  int agent = 0;
  int slot = 0;
  std::vector<int> eliminated;  // universe indices
  std::vector<EliminationRecord> records;
};

CellResult process_cell(const EngineContext& ctx, int agent, int slot, const AgentType& theta,
                        const std::vector<std::vector<int>>& type_tuples, const IndexSets& sets,
                        const EliminationOptions& options, int round) {
  CellResult result;
  result.agent = agent;
  result.slot = slot;

  const std::vector<int>& own = sets[static_cast<size_t>(agent)][static_cast<size_t>(slot)];
  if (own.size() < 2) return result;

  const SigTable sigs = build_signatures(ctx, agent, type_tuples, sets);
  if (sigs.count() == 0) {
    std::ostringstream msg;
    msg << "agent " << agent + 1 << " has an empty belief set";
    throw EmptyBeliefsError(msg.str());
  }
  const std::vector<int> matrix = payoff_matrix(ctx, agent, theta, own, sigs);
  const size_t stride = static_cast<size_t>(sigs.count());
  auto row = [&](size_t pos) { return matrix.data() + pos * stride; };

  // Scan orders are shuffled under a permutation seed; selections below are
  // minima over the full candidate range, so the orders cannot matter.
  std::vector<size_t> order(own.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<size_t> candidate_order = order;
  const bool shuffled = options.permutation_seed.has_value();
  if (shuffled) {
    std::seed_seq seq{*options.permutation_seed, static_cast<std::uint64_t>(agent),
                      static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(round)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
    std::shuffle(candidate_order.begin(), candidate_order.end(), rng);
  }

  for (size_t s_pos : order) {
    const int* ps = row(s_pos);
    size_t best = own.size();  // sentinel: no dominator found
    for (size_t d_pos : candidate_order) {
      if (d_pos == s_pos) continue;
      const int* pd = row(d_pos);
      bool ge = true;
      bool any_strict = false;
      for (size_t sig = 0; sig < stride; ++sig) {
        if (pd[sig] < ps[sig]) {
          ge = false;
          break;
        }
        if (pd[sig] > ps[sig]) any_strict = true;
      }
      if (ge && any_strict) {
        if (d_pos < best) best = d_pos;
        if (!shuffled) break;  // ascending scan: the first hit is the minimum
      }
    }
    if (best == own.size()) continue;

    const int* pd = row(best);
    bool strict = true;
    int witness_sig = -1;
    for (size_t sig = 0; sig < stride; ++sig) {
      if (pd[sig] > ps[sig]) {
        if (witness_sig < 0 ||
            sigs.reps[static_cast<size_t>(sig)] < sigs.reps[static_cast<size_t>(witness_sig)]) {
          witness_sig = static_cast<int>(sig);
        }
      } else {
        strict = false;
      }
    }

    EliminationRecord record;
    record.round = round;
    record.agent = agent;
    record.type = theta;
    record.eliminated = ctx.universe[static_cast<size_t>(own[s_pos])];
    record.dominator = ctx.universe[static_cast<size_t>(own[best])];
    record.strict = strict;
    if (!strict) {
      std::vector<Strategy> tuple;
      for (int idx : sigs.reps[static_cast<size_t>(witness_sig)]) {
        tuple.push_back(ctx.universe[static_cast<size_t>(idx)]);
      }
      record.witness = std::move(tuple);
    }
    result.records.push_back(std::move(record));
    result.eliminated.push_back(own[s_pos]);
  }
  return result;
}

// ---------------------------------------------------------------------------
// State plumbing
// ---------------------------------------------------------------------------

int universe_index(const EngineContext& ctx, const Strategy& s) {
  const auto bid = ctx.grid->index_of(s.bid);
  if (!bid) throw std::invalid_argument("strategy bid " + s.bid.to_string() + " is not on the grid");
  if (s.move == Move::No) {
    if (!ctx.uinfo.has_no_block) {
      throw std::invalid_argument("move (0,·) is not available under this mechanism");
    }
    return *bid;
  }
  return (ctx.uinfo.has_no_block ? ctx.uinfo.grid_size : 0) + *bid;
}

IndexSets to_index_sets(const EngineContext& ctx,
                        const std::vector<std::vector<TypeSurvivors>>& agents) {
  IndexSets sets(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    sets[i].resize(agents[i].size());
    for (size_t t = 0; t < agents[i].size(); ++t) {
      auto& indices = sets[i][t];
      indices.reserve(agents[i][t].surviving.size());
      for (const Strategy& s : agents[i][t].surviving) indices.push_back(universe_index(ctx, s));
      std::sort(indices.begin(), indices.end());
    }
  }
  return sets;
}

std::vector<std::vector<AgentType>> type_lists(const std::vector<std::vector<TypeSurvivors>>& agents) {
  std::vector<std::vector<AgentType>> types(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    for (const TypeSurvivors& cell : agents[i]) types[i].push_back(cell.type);
  }
  return types;
}

SurvivorSnapshot snapshot_of(const std::vector<std::vector<TypeSurvivors>>& agents) {
  SurvivorSnapshot snap(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    for (const TypeSurvivors& cell : agents[i]) snap[i].push_back(cell.surviving);
  }
  return snap;
}

std::vector<int> round_scope(const EliminationState& state, const EliminationPolicy& policy,
                             int round) {
  std::vector<int> scope;
  if (policy.kind == EliminationPolicy::Kind::RestrictedFirstRound && round == 1) {
    scope = policy.first_round_agents;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    for (int agent : scope) {
      if (agent < 0 || agent >= state.scenario.n) {
        std::ostringstream msg;
        msg << "policy agent " << agent + 1 << " out of range 1.." << state.scenario.n;
        throw std::invalid_argument(msg.str());
      }
    }
  } else {
    scope.resize(static_cast<size_t>(state.scenario.n));
    std::iota(scope.begin(), scope.end(), 0);
  }
  return scope;
}

// Terminal annotation: strategies of a cell fall in one payoff class iff
// their payoffs agree against every remaining belief signature.
void annotate_payoff_classes(EliminationState& state) {
  const EngineContext ctx = make_context(state);
  const IndexSets sets = to_index_sets(ctx, state.agents);
  const auto types = type_lists(state.agents);
  for (int agent = 0; agent < state.scenario.n; ++agent) {
    for (size_t slot = 0; slot < state.agents[static_cast<size_t>(agent)].size(); ++slot) {
      TypeSurvivors& cell = state.agents[static_cast<size_t>(agent)][slot];
      const auto tuples = belief_slot_tuples(state.scenario, types, agent, cell.type);
      const SigTable sigs = build_signatures(ctx, agent, tuples, sets);
      const std::vector<int>& own = sets[static_cast<size_t>(agent)][slot];
      const std::vector<int> matrix = payoff_matrix(ctx, agent, cell.type, own, sigs);
      const size_t stride = static_cast<size_t>(sigs.count());

      cell.payoff_class.assign(own.size(), -1);
      int next_class = 0;
      for (size_t a = 0; a < own.size(); ++a) {
        if (cell.payoff_class[a] >= 0) continue;
        cell.payoff_class[a] = next_class;
        const int* pa = matrix.data() + a * stride;
        for (size_t b = a + 1; b < own.size(); ++b) {
          if (cell.payoff_class[b] >= 0) continue;
          const int* pb = matrix.data() + b * stride;
          if (std::equal(pa, pa + stride, pb)) cell.payoff_class[b] = next_class;
        }
        ++next_class;
      }
    }
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

const TypeSurvivors& EliminationState::survivors(int agent, const AgentType& type) const {
  for (const TypeSurvivors& cell : agents.at(static_cast<size_t>(agent))) {
    if (cell.type == type) return cell;
  }
  std::ostringstream msg;
  msg << "agent " << agent + 1 << " has no type with valuation " << type.valuation.to_string();
  throw std::out_of_range(msg.str());
}

DominanceResult is_weakly_dominated(const Strategy& s, const std::vector<Strategy>& candidates,
                                    const std::vector<std::vector<Strategy>>& beliefs,
                                    const AgentType& theta, const Mechanism& mechanism) {
  if (beliefs.empty()) {
    throw EmptyBeliefsError("dominance is undefined against an empty belief set");
  }
  const int agent = theta.agent;
  auto evaluate = [&](const Strategy& own, const std::vector<Strategy>& tuple) {
    std::vector<Strategy> profile;
    profile.reserve(tuple.size() + 1);
    profile.insert(profile.end(), tuple.begin(), tuple.begin() + agent);
    profile.push_back(own);
    profile.insert(profile.end(), tuple.begin() + agent, tuple.end());
    return payoff(mechanism.outcome(profile), theta);
  };

  std::vector<Money> base;
  base.reserve(beliefs.size());
  for (const auto& tuple : beliefs) base.push_back(evaluate(s, tuple));

  std::vector<Strategy> ordered = candidates;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  for (const Strategy& candidate : ordered) {
    if (candidate == s) continue;
    bool ge = true;
    bool any_strict = false;
    std::vector<char> strict_at(beliefs.size(), 0);
    for (size_t t = 0; t < beliefs.size(); ++t) {
      const Money u = evaluate(candidate, beliefs[t]);
      if (u < base[t]) {
        ge = false;
        break;
      }
      if (u > base[t]) {
        any_strict = true;
        strict_at[t] = 1;
      }
    }
    if (!ge || !any_strict) continue;

    DominanceResult result;
    result.dominated = true;
    result.dominator = candidate;
    result.strict = std::all_of(strict_at.begin(), strict_at.end(), [](char c) { return c != 0; });
    if (!result.strict) {
      const std::vector<Strategy>* best = nullptr;
      for (size_t t = 0; t < beliefs.size(); ++t) {
        if (strict_at[t] && (!best || beliefs[t] < *best)) best = &beliefs[t];
      }
      result.witness = *best;
    }
    return result;
  }
  return {};
}

EliminationState make_initial_state(const Scenario& scenario, const Mechanism& mechanism,
                                    const BidGrid* grid_override) {
  EliminationState state;
  state.scenario = require_valid(scenario);
  if (grid_override) {
    state.grid = *grid_override;
    std::sort(state.grid.bids.begin(), state.grid.bids.end());
    state.grid.bids.erase(std::unique(state.grid.bids.begin(), state.grid.bids.end()),
                          state.grid.bids.end());
    if (state.grid.bids.empty()) throw std::invalid_argument("bid grid override is empty");
  } else {
    state.grid = build_bid_grid(state.scenario);
  }
  state.mechanism_kind = mechanism.kind();
  if (state.mechanism_kind == MechanismKind::Olszewski && state.scenario.n != 2) {
    throw ArityError("mechanism 'olszewski' needs n=2");
  }

  const std::vector<Strategy> universe = strategy_universe(state.grid, state.mechanism_kind);
  state.agents.resize(static_cast<size_t>(state.scenario.n));
  for (int i = 0; i < state.scenario.n; ++i) {
    for (const AgentType& theta : agent_types(state.scenario, i)) {
      state.agents[static_cast<size_t>(i)].push_back(TypeSurvivors{theta, universe, {}});
    }
  }
  state.history.push_back(snapshot_of(state.agents));
  return state;
}

bool eliminate_round(EliminationState& state, const Mechanism& mechanism,
                     const EliminationPolicy& policy, const EliminationOptions& options) {
  if (mechanism.kind() != state.mechanism_kind) {
    throw std::invalid_argument("state was initialized for a different mechanism");
  }
  const EngineContext ctx = make_context(state);
  const IndexSets sets = to_index_sets(ctx, state.agents);
  const auto types = type_lists(state.agents);
  const int round = state.rounds_executed + 1;

  struct Task {
    int agent;
    int slot;
  };
  std::vector<Task> tasks;
  for (int agent : round_scope(state, policy, round)) {
    const auto& cells = state.agents[static_cast<size_t>(agent)];
    for (size_t slot = 0; slot < cells.size(); ++slot) {
      tasks.push_back(Task{agent, static_cast<int>(slot)});
    }
  }
  if (options.permutation_seed) {
    std::seed_seq seq{*options.permutation_seed, static_cast<std::uint64_t>(round)};
    std::mt19937_64 rng(seq);
    std::shuffle(tasks.begin(), tasks.end(), rng);
  }

  auto run_task = [&](const Task& task) {
    const AgentType& theta =
        state.agents[static_cast<size_t>(task.agent)][static_cast<size_t>(task.slot)].type;
    const auto tuples = belief_slot_tuples(state.scenario, types, task.agent, theta);
    return process_cell(ctx, task.agent, task.slot, theta, tuples, sets, options, round);
  };

  std::vector<CellResult> results;
  results.reserve(tasks.size());
  if (options.parallel && tasks.size() > 1) {
    std::vector<std::future<CellResult>> futures;
    futures.reserve(tasks.size());
    for (const Task& task : tasks) {
      futures.push_back(std::async(std::launch::async, run_task, task));
    }
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (const Task& task : tasks) results.push_back(run_task(task));
  }

  bool any = false;
  std::vector<EliminationRecord> round_records;
  for (CellResult& result : results) {
    if (result.eliminated.empty()) continue;
    any = true;
    TypeSurvivors& cell =
        state.agents[static_cast<size_t>(result.agent)][static_cast<size_t>(result.slot)];
    std::sort(result.eliminated.begin(), result.eliminated.end());
    std::vector<Strategy> kept;
    kept.reserve(cell.surviving.size() - result.eliminated.size());
    for (const Strategy& s : cell.surviving) {
      const int idx = universe_index(ctx, s);
      if (!std::binary_search(result.eliminated.begin(), result.eliminated.end(), idx)) {
        kept.push_back(s);
      }
    }
    cell.surviving = std::move(kept);
    cell.payoff_class.clear();
    for (EliminationRecord& record : result.records) round_records.push_back(std::move(record));
  }

  std::sort(round_records.begin(), round_records.end(),
            [](const EliminationRecord& a, const EliminationRecord& b) {
              if (a.agent != b.agent) return a.agent < b.agent;
              if (!(a.type == b.type)) return a.type < b.type;
              return a.eliminated < b.eliminated;
            });
  for (EliminationRecord& record : round_records) state.trace.push_back(std::move(record));

  state.rounds_executed = round;
  if (any) state.last_eliminating_round = round;
  state.history.push_back(snapshot_of(state.agents));
  return any;
}

EliminationState iterate_elimination(const Scenario& scenario, const Mechanism& mechanism,
                                     const EliminationPolicy& policy,
                                     const EliminationOptions& options,
                                     const BidGrid* grid_override) {
  EliminationState state = make_initial_state(scenario, mechanism, grid_override);
  while (true) {
    const int round = state.rounds_executed + 1;
    const bool full_scope =
        !(policy.kind == EliminationPolicy::Kind::RestrictedFirstRound && round == 1);
    const bool any = eliminate_round(state, mechanism, policy, options);
    // A restricted first round that removes nothing is not a fixed-point
    // certificate; only a full-scope quiet round is.
    if (!any && full_scope) break;
  }
  annotate_payoff_classes(state);
  return state;
}

std::vector<std::vector<Strategy>> belief_tuples_at(const EliminationState& state, int round,
                                                    int agent, const AgentType& theta) {
  if (round < 0 || round >= static_cast<int>(state.history.size())) {
    std::ostringstream msg;
    msg << "no snapshot for round " << round << " (have 0.." << state.history.size() - 1 << ")";
    throw std::out_of_range(msg.str());
  }
  const SurvivorSnapshot& snap = state.history[static_cast<size_t>(round)];
  const auto types = type_lists(state.agents);

  std::vector<std::vector<Strategy>> tuples;
  for (const auto& slots : belief_slot_tuples(state.scenario, types, agent, theta)) {
    const int opp_count = static_cast<int>(slots.size());
    std::vector<const std::vector<Strategy>*> pools;
    bool empty = false;
    for (int p = 0; p < opp_count; ++p) {
      const int j = p < agent ? p : p + 1;
      pools.push_back(&snap[static_cast<size_t>(j)][static_cast<size_t>(slots[p])]);
      if (pools.back()->empty()) empty = true;
    }
    if (empty) continue;

    std::vector<size_t> cursor(static_cast<size_t>(opp_count), 0);
    while (true) {
      std::vector<Strategy> tuple;
      tuple.reserve(static_cast<size_t>(opp_count));
      for (int p = 0; p < opp_count; ++p) {
        tuple.push_back((*pools[static_cast<size_t>(p)])[cursor[static_cast<size_t>(p)]]);
      }
      tuples.push_back(std::move(tuple));
      int p = opp_count - 1;
      while (p >= 0 && ++cursor[static_cast<size_t>(p)] == pools[static_cast<size_t>(p)]->size()) {
        cursor[static_cast<size_t>(p)] = 0;
        --p;
      }
      if (p < 0) break;
    }
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  return tuples;
}

ImplementationReport check_implementation(const EliminationState& terminal,
                                          const Mechanism& mechanism) {
  if (mechanism.kind() != terminal.mechanism_kind) {
    throw std::invalid_argument("state was initialized for a different mechanism");
  }
  const Scenario& scenario = terminal.scenario;
  ImplementationReport report;
  report.implemented = true;

  for (size_t p = 0; p < scenario.profiles.size(); ++p) {
    const std::vector<Money>& v = scenario.profiles[p];
    const std::vector<int> top = top_set(v, scenario.k);

    ProfileCheck check;
    check.profile_index = static_cast<int>(p);
    check.valuations = v;
    check.target = choice_function(v, scenario.k);
    check.surviving_profiles = 1;

    // Strategies sharing a move/bid footprint produce identical outcomes;
    // enumerate one representative per footprint and weight by class size.
    struct OutcomeClass {
      Strategy representative;
      std::uint64_t weight;
    };
    std::vector<std::vector<OutcomeClass>> classes(static_cast<size_t>(scenario.n));
    for (int i = 0; i < scenario.n; ++i) {
      const bool in_top = std::binary_search(top.begin(), top.end(), i);
      const AgentType theta{i, v[static_cast<size_t>(i)], in_top};
      const TypeSurvivors& cell = terminal.survivors(i, theta);
      check.surviving_profiles =
          saturating_mul(check.surviving_profiles, cell.surviving.size());
      auto& list = classes[static_cast<size_t>(i)];
      for (const Strategy& s : cell.surviving) {
        if (terminal.mechanism_kind != MechanismKind::PlainKPlus1 && s.move == Move::No &&
            !list.empty() && list.back().representative.move == Move::No) {
          ++list.back().weight;  // every (0,·) plays identically
        } else {
          list.push_back(OutcomeClass{s, 1});
        }
      }
    }

    std::map<Allocation, std::uint64_t> outcomes;
    if (std::none_of(classes.begin(), classes.end(),
                     [](const auto& list) { return list.empty(); })) {
      std::vector<size_t> cursor(static_cast<size_t>(scenario.n), 0);
      std::vector<Strategy> profile(static_cast<size_t>(scenario.n));
      while (true) {
        std::uint64_t weight = 1;
        for (int i = 0; i < scenario.n; ++i) {
          const OutcomeClass& cls = classes[static_cast<size_t>(i)][cursor[static_cast<size_t>(i)]];
          profile[static_cast<size_t>(i)] = cls.representative;
          weight = saturating_mul(weight, cls.weight);
        }
        outcomes[mechanism.outcome(profile)] += weight;
        int i = scenario.n - 1;
        while (i >= 0 &&
               ++cursor[static_cast<size_t>(i)] == classes[static_cast<size_t>(i)].size()) {
          cursor[static_cast<size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }

    check.matches = !outcomes.empty();
    for (auto& [alloc, count] : outcomes) {
      const bool match = alloc == check.target;
      if (!match) check.matches = false;
      check.outcomes.push_back(OutcomeCount{alloc, count, match});
    }
    if (!check.matches) report.implemented = false;
    report.profiles.push_back(std::move(check));
  }
  return report;
}

ImplementationReport check_implementation(const Scenario& scenario, const Mechanism& mechanism,
                                          const EliminationPolicy& policy,
                                          const EliminationOptions& options) {
  const EliminationState terminal = iterate_elimination(scenario, mechanism, policy, options);
  return check_implementation(terminal, mechanism);
}

}  // namespace solomon
