#include "dam/network.h"

#include <bit>
#include <limits>
#include <utility>

#include "dam/errors.h"

namespace dam {

namespace {

constexpr std::size_t kNoPosition = std::numeric_limits<std::size_t>::max();

}  // namespace

MarketNetwork::MarketNetwork() : roster_(std::make_shared<Roster>()) {}

MarketNetwork::Roster& MarketNetwork::mutable_roster() {
  if (roster_.use_count() != 1) roster_ = std::make_shared<Roster>(*roster_);
  return const_cast<Roster&>(*roster_);
}

AgentIndex MarketNetwork::add_agent(Agent agent, Rational budget) {
  if (agent.id.empty()) throw Error("agent id must be non-empty");
  if (find_id(agent.id)) throw Error("duplicate agent id '" + agent.id + "'");

  Roster& r = mutable_roster();
  const AgentIndex index = r.agents.size();
  const std::size_t old_sellers = r.sellers.size();
  const bool seller = agent.kind == AgentKind::seller;

  r.by_id.emplace(agent.id, index);
  for (const auto& name : agent.names) r.by_name.emplace(name, index);
  r.agents.push_back(std::move(agent));
  if (seller) {
    r.seller_position.push_back(r.sellers.size());
    r.sellers.push_back(index);
  } else {
    r.seller_position.push_back(kNoPosition);
    r.buyers.push_back(index);
  }

  // Re-lay out the incentive matrix for the new shape.
  const std::size_t new_sellers = r.sellers.size();
  std::vector<Rational> incentives(r.agents.size() * new_sellers);
  for (AgentIndex b = 0; b + 1 < r.agents.size(); ++b) {
    for (std::size_t s = 0; s < old_sellers; ++s) {
      incentives[b * new_sellers + s] = r.incentives[b * old_sellers + s];
    }
  }
  r.incentives = std::move(incentives);

  budgets_.push_back(budget);

  const std::size_t n = r.agents.size();
  const std::size_t words = (n + 63) / 64;
  if (words != words_) {
    std::vector<std::uint64_t> grown(n * words, 0);
    for (AgentIndex a = 0; a + 1 < n; ++a) {
      for (std::size_t w = 0; w < words_; ++w) {
        grown[a * words + w] = adjacency_[a * words_ + w];
      }
    }
    adjacency_ = std::move(grown);
    words_ = words;
  } else {
    adjacency_.resize(n * words_, 0);
  }
  return index;
}

AgentIndex MarketNetwork::add_seller(std::string id,
                                     std::vector<std::string> names,
                                     Rational budget) {
  return add_agent(Agent{std::move(id), AgentKind::seller, std::move(names),
                         Rational(0)},
                   budget);
}

AgentIndex MarketNetwork::add_buyer(std::string id,
                                    std::vector<std::string> names,
                                    Rational budget, Rational valuation) {
  return add_agent(
      Agent{std::move(id), AgentKind::buyer, std::move(names), valuation},
      budget);
}

void MarketNetwork::set_incentive(AgentIndex buyer, AgentIndex seller,
                                  Rational amount) {
  if (!is_seller(seller)) {
    throw NotASeller("'" + agent(seller).id + "' is not a seller");
  }
  Roster& r = mutable_roster();
  r.incentives[buyer * r.sellers.size() + r.seller_position[seller]] = amount;
}

void MarketNetwork::add_edge(AgentIndex a, AgentIndex b) {
  adjacency_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  adjacency_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
}

std::vector<AgentIndex> MarketNetwork::friends_of(AgentIndex a) const {
  std::vector<AgentIndex> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = adjacency_[a * words_ + w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t MarketNetwork::edge_count() const {
  std::size_t twice = 0;
  std::size_t loops = 0;
  for (auto word : adjacency_) twice += std::popcount(word);
  for (AgentIndex a = 0; a < size(); ++a) loops += friends(a, a) ? 1 : 0;
  return (twice - loops) / 2 + loops;
}

std::optional<AgentIndex> MarketNetwork::find_id(std::string_view id) const {
  auto it = roster_->by_id.find(id);
  if (it == roster_->by_id.end()) return std::nullopt;
  return it->second;
}

std::optional<AgentIndex> MarketNetwork::find_name(
    std::string_view name) const {
  auto it = roster_->by_name.find(name);
  if (it == roster_->by_name.end()) return std::nullopt;
  return it->second;
}

const std::string& MarketNetwork::canonical_name(AgentIndex i) const {
  const Agent& a = agent(i);
  return a.names.empty() ? a.id : a.names.front();
}

bool operator==(const MarketNetwork& a, const MarketNetwork& b) {
  if (a.budgets_ != b.budgets_ || a.adjacency_ != b.adjacency_) return false;
  if (a.roster_ == b.roster_) return true;
  const auto& ra = *a.roster_;
  const auto& rb = *b.roster_;
  if (ra.agents.size() != rb.agents.size()) return false;
  for (std::size_t i = 0; i < ra.agents.size(); ++i) {
    const Agent& x = ra.agents[i];
    const Agent& y = rb.agents[i];
    if (x.id != y.id || x.kind != y.kind || x.names != y.names ||
        x.valuation != y.valuation) {
      return false;
    }
  }
  return ra.incentives == rb.incentives;
}

}  // namespace dam
