#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dam/network.h"

namespace dam {

// Output of an auction rule on one network state: the placement, payment
// and utility functions, indexed by AgentIndex.
struct AllocationResult {
  std::vector<bool> placement;
  std::vector<Rational> payment;  // 0 for sellers
  std::vector<Rational> utility;
  // For each seller (by AgentIndex) the buyer who bought her unit, if any.
  std::vector<std::optional<AgentIndex>> sold_to;

  friend bool operator==(const AllocationResult&,
                         const AllocationResult&) = default;
};

// A deterministic, polynomial-time evaluator MarketNetwork -> allocation.
class AuctionRule {
 public:
  virtual ~AuctionRule() = default;
  virtual std::string_view name() const = 0;
  virtual AllocationResult evaluate(const MarketNetwork& net) const = 0;
};

// Buyer neighbours of `seller`, highest valuation first, ties by ascending
// buyer id. Throws NotASeller.
std::vector<AgentIndex> ranked_bidders(const MarketNetwork& net,
                                       AgentIndex seller);

// Single item, multiple units, first price.
//
// Sellers are processed in ascending id order. Each takes the best-ranked
// neighbour not already served by an earlier seller; that buyer pays her
// valuation. A seller without a remaining bidder keeps her unit.
AllocationResult smf_evaluate(const MarketNetwork& net);

class SmfRule final : public AuctionRule {
 public:
  std::string_view name() const override { return "smf"; }
  AllocationResult evaluate(const MarketNetwork& net) const override {
    return smf_evaluate(net);
  }
};

// Process-wide rule registry; "smf" is always present.
std::shared_ptr<const AuctionRule> find_rule(std::string_view name);
void register_rule(std::shared_ptr<const AuctionRule> rule);
std::vector<std::string> registered_rules();

}  // namespace dam
