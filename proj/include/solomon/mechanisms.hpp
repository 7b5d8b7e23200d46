#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "solomon/scenario.hpp"

namespace solomon {

/// First-stage message. In the entry-fee mechanism the labels are
/// "auction"/"no"; in the two-agent buyout mechanism the same slots read
/// "hers"/"mine" (Auction = "hers", No = "mine").
enum class Move { No = 0, Auction = 1 };

/// A pure strategy: the first-stage move plus the bid the agent would place
/// if an auction happens. The bid is carried even when the move makes it
/// unreachable, so strategies with identical play can still differ as objects.
struct Strategy {
  Move move = Move::No;
  Money bid;

  friend bool operator==(const Strategy&, const Strategy&) = default;
  // Canonical order: No before Auction, then bid ascending. Dominator and
  // witness selection report the first hit in this order.
  friend bool operator<(const Strategy& a, const Strategy& b) {
    if (a.move != b.move) return a.move < b.move;
    return a.bid < b.bid;
  }
};

enum class MechanismKind { Solomon, Olszewski, PlainKPlus1 };

/// Move label under a mechanism's vocabulary ("auction"/"no" or "hers"/"mine").
std::string move_label(MechanismKind kind, Move move);

/// Compact "(m,b)" rendering used in traces, e.g. "(1,10)" or "(0,7/2)".
std::string to_string(const Strategy& s);

/// Details of a held auction, for reporting.
struct AuctionResult {
  std::vector<int> participants;  // ascending agent indices
  std::vector<int> winners;       // ascending, size k
  Money clearing_price;           // bid of the (k+1)st named bid
  Money fee;
};

class TooFewParticipantsError : public std::logic_error {
 public:
  explicit TooFewParticipantsError(const std::string& what) : std::logic_error(what) {}
};

class ArityError : public std::invalid_argument {
 public:
  explicit ArityError(const std::string& what) : std::invalid_argument(what) {}
};

struct GoToAuction {
  std::vector<int> participants;  // the Auction-sayers, ascending
};

/// Either the game ends at stage 1 with this allocation, or the listed
/// participants proceed to the bidding stage.
using Stage1Result = std::variant<Allocation, GoToAuction>;

/// Stage-1 rule: k+1 or more "auction" moves send those agents to the
/// auction; between 1 and k "auction" moves hand them the objects free;
/// none means nobody gets anything.
Stage1Result solomon_stage1_resolve(const std::vector<Move>& moves, int k);

/// (k+1)st-price auction with participation fee: named bids (b_i, i) sorted
/// by bid descending then index ascending; the first k win a unit and pay
/// the (k+1)st bid plus delta; the remaining participants pay delta;
/// non-participants get (0, 0). `bids` runs parallel to `participants`.
Allocation solomon_stage2_outcome(int n, const std::vector<int>& participants,
                                  const std::vector<Money>& bids, int k, const Money& delta,
                                  AuctionResult* result = nullptr);

/// Full two-stage outcome g(s).
Allocation solomon_outcome(const std::vector<Strategy>& s, int k, const Money& delta,
                           AuctionResult* result = nullptr);
Allocation solomon_outcome(const std::vector<Strategy>& s, const Scenario& scenario,
                           AuctionResult* result = nullptr);

/// Two-agent buyout mechanism. Exactly one "mine" (Move::No): that agent
/// takes the object free. Both "mine": nobody gets anything. Both "hers"
/// (Move::Auction): the higher bidder (ties to the lower index) wins paying
/// delta, and the loser receives the winning bid minus delta.
Allocation olszewski_outcome(const std::vector<Strategy>& s, const Money& delta);

/// Baseline (k+1)st-price auction: everyone bids, winners pay the clearing
/// price, no fee, losers pay nothing.
Allocation plain_auction_outcome(const std::vector<Money>& bids, int k,
                                 AuctionResult* result = nullptr);

/// Full pure-strategy space over a bid grid, canonical order: both moves per
/// bid for the opt-in mechanisms, bids alone when participation is mandatory.
std::vector<Strategy> strategy_universe(const BidGrid& grid, MechanismKind kind);

/// Uniform handle over the three outcome functions, fixed to a scenario's
/// k and delta. Outcomes depend on messages only.
class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual MechanismKind kind() const = 0;
  virtual std::string name() const = 0;  // the selector string
  virtual Allocation outcome(const std::vector<Strategy>& s) const = 0;
};

class UnknownMechanismError : public std::runtime_error {
 public:
  explicit UnknownMechanismError(const std::string& what) : std::runtime_error(what) {}
};

/// Builds a mechanism from its selector ("solomon" | "olszewski" |
/// "plain-kplus1"). Throws UnknownMechanismError for anything else and
/// ArityError for "olszewski" with n != 2.
std::unique_ptr<Mechanism> make_mechanism(std::string_view selector, const Scenario& scenario);

}  // namespace solomon
