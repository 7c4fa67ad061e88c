#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dam/rational.h"

namespace dam {

using AgentIndex = std::size_t;

enum class AgentKind { seller, buyer };

struct Agent {
  std::string id;
  AgentKind kind = AgentKind::buyer;
  std::vector<std::string> names;
  Rational valuation;  // always 0 for sellers
};

// A market network with n sellers: agents, the friendship relation, budgets,
// valuations, incentives and the naming function.
//
// Everything that never changes under a mechanism update (agents, names,
// valuations, incentives) lives in a shared immutable roster, so copying a
// network only copies budgets and the adjacency bit matrix.
//
// The class does not enforce the definitional invariants (irreflexivity,
// V <= Bdg, ...); it can represent invalid networks so that
// validate_network() can report them. Loaders refuse invalid input.
class MarketNetwork {
 public:
  MarketNetwork();

  AgentIndex add_seller(std::string id, std::vector<std::string> names,
                        Rational budget);
  AgentIndex add_buyer(std::string id, std::vector<std::string> names,
                       Rational budget, Rational valuation);
  void set_incentive(AgentIndex buyer, AgentIndex seller, Rational amount);

  // Adds the undirected edge a--b. Self-loops are stored (and then reported
  // by validation).
  void add_edge(AgentIndex a, AgentIndex b);
  bool friends(AgentIndex a, AgentIndex b) const {
    return (adjacency_[a * words_ + b / 64] >> (b % 64)) & 1u;
  }
  std::vector<AgentIndex> friends_of(AgentIndex a) const;
  std::size_t edge_count() const;

  std::size_t size() const { return roster_->agents.size(); }
  const Agent& agent(AgentIndex i) const { return roster_->agents[i]; }
  bool is_seller(AgentIndex i) const {
    return agent(i).kind == AgentKind::seller;
  }
  bool is_buyer(AgentIndex i) const { return agent(i).kind == AgentKind::buyer; }

  // Agents in insertion order, split by kind.
  std::span<const AgentIndex> sellers() const { return roster_->sellers; }
  std::span<const AgentIndex> buyers() const { return roster_->buyers; }
  // Position of a seller within sellers(); undefined for buyers.
  std::size_t seller_position(AgentIndex seller) const {
    return roster_->seller_position[seller];
  }

  const Rational& budget(AgentIndex i) const { return budgets_[i]; }
  void set_budget(AgentIndex i, Rational value) { budgets_[i] = value; }
  std::span<const Rational> budgets() const { return budgets_; }

  const Rational& valuation(AgentIndex i) const { return agent(i).valuation; }
  // I(buyer, seller); 0 when never set.
  const Rational& incentive(AgentIndex buyer, AgentIndex seller) const {
    return roster_->incentives[buyer * roster_->sellers.size() +
                               roster_->seller_position[seller]];
  }

  std::optional<AgentIndex> find_id(std::string_view id) const;
  // First agent carrying the name; duplicates are a validation error.
  std::optional<AgentIndex> find_name(std::string_view name) const;
  // The first listed name of an agent, used whenever one name per agent is
  // needed (quantification, translation, generated formulas).
  const std::string& canonical_name(AgentIndex i) const;

  // Raw adjacency row of one agent, 64 agents per word.
  std::span<const std::uint64_t> row(AgentIndex i) const {
    return {adjacency_.data() + i * words_, words_};
  }

  bool same_roster(const MarketNetwork& other) const {
    return roster_ == other.roster_;
  }

  friend bool operator==(const MarketNetwork& a, const MarketNetwork& b);

 private:
  struct Roster {
    std::vector<Agent> agents;
    std::vector<AgentIndex> sellers;
    std::vector<AgentIndex> buyers;
    std::vector<std::size_t> seller_position;
    // buyer-major, one slot per (agent, seller position)
    std::vector<Rational> incentives;
    std::map<std::string, AgentIndex, std::less<>> by_id;
    std::map<std::string, AgentIndex, std::less<>> by_name;
  };

  AgentIndex add_agent(Agent agent, Rational budget);
  Roster& mutable_roster();

  std::shared_ptr<const Roster> roster_;
  std::vector<Rational> budgets_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adjacency_;
};

}  // namespace dam
