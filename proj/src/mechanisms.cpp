#include "solomon/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace solomon {

namespace {

// Named-bid order: bid descending, then agent index ascending. `entries`
// holds (agent, bid) pairs and is sorted in place.
void sort_named_bids(std::vector<std::pair<int, Money>>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

}  // namespace

std::string move_label(MechanismKind kind, Move move) {
  if (kind == MechanismKind::Olszewski) {
    return move == Move::Auction ? "hers" : "mine";
  }
  return move == Move::Auction ? "auction" : "no";
}

std::string to_string(const Strategy& s) {
  std::ostringstream out;
  out << "(" << (s.move == Move::Auction ? 1 : 0) << "," << s.bid.to_string() << ")";
  return out.str();
}

Stage1Result solomon_stage1_resolve(const std::vector<Move>& moves, int k) {
  std::vector<int> sayers;
  for (size_t i = 0; i < moves.size(); ++i) {
    if (moves[i] == Move::Auction) sayers.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(sayers.size()) >= k + 1) {
    return GoToAuction{std::move(sayers)};
  }
  Allocation alloc(moves.size());
  for (int i : sayers) alloc[static_cast<size_t>(i)].units = 1;
  return alloc;
}

Allocation solomon_stage2_outcome(int n, const std::vector<int>& participants,
                                  const std::vector<Money>& bids, int k, const Money& delta,
                                  AuctionResult* result) {
  if (static_cast<int>(participants.size()) < k + 1) {
    std::ostringstream msg;
    msg << "auction needs at least " << k + 1 << " participants, got " << participants.size();
    throw TooFewParticipantsError(msg.str());
  }
  if (participants.size() != bids.size()) {
    throw std::invalid_argument("bids must run parallel to participants");
  }

  std::vector<std::pair<int, Money>> named;
  named.reserve(participants.size());
  for (size_t p = 0; p < participants.size(); ++p) {
    named.emplace_back(participants[p], bids[p]);
  }
  sort_named_bids(named);

  const Money& clearing = named[static_cast<size_t>(k)].second;
  Allocation alloc(static_cast<size_t>(n));
  std::vector<int> winners;
  for (size_t rank = 0; rank < named.size(); ++rank) {
    auto& slot = alloc[static_cast<size_t>(named[rank].first)];
    if (static_cast<int>(rank) < k) {
      slot.units = 1;
      slot.payment = -(clearing + delta);
      winners.push_back(named[rank].first);
    } else {
      slot.payment = -delta;
    }
  }
  if (result) {
    std::sort(winners.begin(), winners.end());
    *result = AuctionResult{participants, std::move(winners), clearing, delta};
  }
  return alloc;
}

Allocation solomon_outcome(const std::vector<Strategy>& s, int k, const Money& delta,
                           AuctionResult* result) {
  std::vector<Move> moves;
  moves.reserve(s.size());
  for (const Strategy& si : s) moves.push_back(si.move);

  Stage1Result stage1 = solomon_stage1_resolve(moves, k);
  if (auto* alloc = std::get_if<Allocation>(&stage1)) {
    return std::move(*alloc);
  }
  auto& auction = std::get<GoToAuction>(stage1);
  std::vector<Money> bids;
  bids.reserve(auction.participants.size());
  for (int i : auction.participants) bids.push_back(s[static_cast<size_t>(i)].bid);
  return solomon_stage2_outcome(static_cast<int>(s.size()), auction.participants, bids, k, delta,
                                result);
}

Allocation solomon_outcome(const std::vector<Strategy>& s, const Scenario& scenario,
                           AuctionResult* result) {
  return solomon_outcome(s, scenario.k, scenario.delta, result);
}

Allocation olszewski_outcome(const std::vector<Strategy>& s, const Money& delta) {
  if (s.size() != 2) {
    std::ostringstream msg;
    msg << "two-agent mechanism got " << s.size() << " strategies";
    throw ArityError(msg.str());
  }
  Allocation alloc(2);
  const bool hers0 = s[0].move == Move::Auction;
  const bool hers1 = s[1].move == Move::Auction;
  if (!hers0 && !hers1) return alloc;  // both claim it: nobody gets anything
  if (hers0 != hers1) {
    alloc[hers0 ? 1 : 0].units = 1;  // the lone "mine"-sayer takes it free
    return alloc;
  }
  // Both say "hers": higher bid wins (ties to agent 1), winner pays the fee,
  // loser receives the winning bid net of the fee.
  const size_t winner = s[1].bid > s[0].bid ? 1 : 0;
  const size_t loser = 1 - winner;
  alloc[winner].units = 1;
  alloc[winner].payment = -delta;
  alloc[loser].payment = s[winner].bid - delta;
  return alloc;
}

Allocation plain_auction_outcome(const std::vector<Money>& bids, int k, AuctionResult* result) {
  const int n = static_cast<int>(bids.size());
  if (n < k + 1) {
    std::ostringstream msg;
    msg << "auction needs at least " << k + 1 << " bidders, got " << n;
    throw TooFewParticipantsError(msg.str());
  }
  std::vector<std::pair<int, Money>> named;
  named.reserve(bids.size());
  for (int i = 0; i < n; ++i) named.emplace_back(i, bids[static_cast<size_t>(i)]);
  sort_named_bids(named);

  const Money& clearing = named[static_cast<size_t>(k)].second;
  Allocation alloc(static_cast<size_t>(n));
  std::vector<int> winners;
  for (int rank = 0; rank < k; ++rank) {
    auto& slot = alloc[static_cast<size_t>(named[static_cast<size_t>(rank)].first)];
    slot.units = 1;
    slot.payment = -clearing;
    winners.push_back(named[static_cast<size_t>(rank)].first);
  }
  if (result) {
    std::sort(winners.begin(), winners.end());
    std::vector<int> everyone(static_cast<size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 0);
    *result = AuctionResult{std::move(everyone), std::move(winners), clearing, Money()};
  }
  return alloc;
}

std::vector<Strategy> strategy_universe(const BidGrid& grid, MechanismKind kind) {
  std::vector<Strategy> universe;
  if (kind != MechanismKind::PlainKPlus1) {
    for (const Money& b : grid.bids) universe.push_back(Strategy{Move::No, b});
  }
  for (const Money& b : grid.bids) universe.push_back(Strategy{Move::Auction, b});
  return universe;
}

namespace {

class SolomonMechanism final : public Mechanism {
 public:
  SolomonMechanism(int k, Money delta) : k_(k), delta_(std::move(delta)) {}
  MechanismKind kind() const override { return MechanismKind::Solomon; }
  std::string name() const override { return "solomon"; }
  Allocation outcome(const std::vector<Strategy>& s) const override {
    return solomon_outcome(s, k_, delta_);
  }

 private:
  int k_;
  Money delta_;
};

class OlszewskiMechanism final : public Mechanism {
 public:
  explicit OlszewskiMechanism(Money delta) : delta_(std::move(delta)) {}
  MechanismKind kind() const override { return MechanismKind::Olszewski; }
  std::string name() const override { return "olszewski"; }
  Allocation outcome(const std::vector<Strategy>& s) const override {
    return olszewski_outcome(s, delta_);
  }

 private:
  Money delta_;
};

class PlainMechanism final : public Mechanism {
 public:
  explicit PlainMechanism(int k) : k_(k) {}
  MechanismKind kind() const override { return MechanismKind::PlainKPlus1; }
  std::string name() const override { return "plain-kplus1"; }
  Allocation outcome(const std::vector<Strategy>& s) const override {
    std::vector<Money> bids;
    bids.reserve(s.size());
    for (const Strategy& si : s) bids.push_back(si.bid);
    return plain_auction_outcome(bids, k_);
  }

 private:
  int k_;
};

}  // namespace

std::unique_ptr<Mechanism> make_mechanism(std::string_view selector, const Scenario& scenario) {
  if (selector == "solomon") {
    return std::make_unique<SolomonMechanism>(scenario.k, scenario.delta);
  }
  if (selector == "olszewski") {
    if (scenario.n != 2) {
      std::ostringstream msg;
      msg << "mechanism 'olszewski' needs n=2, scenario has n=" << scenario.n;
      throw ArityError(msg.str());
    }
    return std::make_unique<OlszewskiMechanism>(scenario.delta);
  }
  if (selector == "plain-kplus1") {
    return std::make_unique<PlainMechanism>(scenario.k);
  }
  throw UnknownMechanismError("unknown mechanism '" + std::string(selector) +
                              "' (expected solomon | olszewski | plain-kplus1)");
}

}  // namespace solomon
