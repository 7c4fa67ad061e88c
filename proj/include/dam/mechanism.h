#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dam/auction.h"
#include "dam/network.h"

namespace dam {

// A market network together with the auction rule that prices it.
struct Mechanism {
  MarketNetwork network;
  std::shared_ptr<const AuctionRule> rule;

  AllocationResult allocate() const { return rule->evaluate(network); }

  friend bool operator==(const Mechanism& a, const Mechanism& b) {
    return a.network == b.network && a.rule == b.rule;
  }
};

// One concurrent incentivisation: a target buyer (or skip) for every seller.
class JointAction {
 public:
  JointAction() = default;
  // All sellers of `net` skip.
  explicit JointAction(const MarketNetwork& net)
      : targets_(net.sellers().size()) {}

  // `buyer` == nullopt means skip.
  void assign(const MarketNetwork& net, AgentIndex seller,
              std::optional<AgentIndex> buyer);
  std::optional<AgentIndex> target_of(const MarketNetwork& net,
                                      AgentIndex seller) const {
    return targets_[net.seller_position(seller)];
  }
  // Targets in sellers() order.
  const std::vector<std::optional<AgentIndex>>& targets() const {
    return targets_;
  }
  std::vector<std::optional<AgentIndex>>& targets() { return targets_; }
  bool all_skip() const;

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<std::optional<AgentIndex>> targets_;
};

// Empty iff the network satisfies every definitional invariant. Each entry
// starts with a short tag ("irreflexivity", "valuation exceeds budget", ...)
// followed by details.
std::vector<std::string> validate_network(const MarketNetwork& net);
std::vector<std::string> validate_mechanism(const Mechanism& m);

// Throws UnknownNominal.
AgentIndex resolve_name(const Mechanism& m, std::string_view nominal);

// Every acting seller is a friend of her target and can pay its incentive.
bool action_precondition(const MarketNetwork& net, const JointAction& act);
inline bool action_precondition(const Mechanism& m, const JointAction& act) {
  return action_precondition(m.network, act);
}

// The concurrent update. For each targeted buyer the seller offering the
// largest incentive wins (ties: smallest seller id); the winner gains the
// buyer's buyer-friends as neighbours and pays the incentive to the buyer.
// Losing sellers are unaffected. Throws PreconditionViolated.
MarketNetwork apply_joint_action(const MarketNetwork& net,
                                 const JointAction& act);
Mechanism apply_joint_action(const Mechanism& m, const JointAction& act);

// Parses "s1:a, s2:skip" where each side is a nominal or an agent id
// (nominals first). Unlisted sellers skip.
JointAction parse_joint_action(const MarketNetwork& net, std::string_view text);
std::string format_joint_action(const MarketNetwork& net,
                                const JointAction& act);

}  // namespace dam
