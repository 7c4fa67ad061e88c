#include "dam/auction.h"

#include <algorithm>
#include <map>
#include <mutex>

#include "dam/errors.h"

namespace dam {

std::vector<AgentIndex> ranked_bidders(const MarketNetwork& net,
                                       AgentIndex seller) {
  if (seller >= net.size() || !net.is_seller(seller)) {
    throw NotASeller("agent is not a seller");
  }
  std::vector<AgentIndex> bidders;
  for (AgentIndex b : net.friends_of(seller)) {
    if (net.is_buyer(b)) bidders.push_back(b);
  }
  std::sort(bidders.begin(), bidders.end(), [&](AgentIndex x, AgentIndex y) {
    if (net.valuation(x) != net.valuation(y)) {
      return net.valuation(x) > net.valuation(y);
    }
    return net.agent(x).id < net.agent(y).id;
  });
  return bidders;
}

AllocationResult smf_evaluate(const MarketNetwork& net) {
  const std::size_t n = net.size();
  AllocationResult out;
  out.placement.assign(n, false);
  out.payment.assign(n, Rational(0));
  out.utility.assign(n, Rational(0));
  out.sold_to.assign(n, std::nullopt);

  std::vector<AgentIndex> order(net.sellers().begin(), net.sellers().end());
  std::sort(order.begin(), order.end(), [&](AgentIndex x, AgentIndex y) {
    return net.agent(x).id < net.agent(y).id;
  });

  std::vector<bool> served(n, false);
  for (AgentIndex s : order) {
    for (AgentIndex b : ranked_bidders(net, s)) {
      if (served[b]) continue;
      served[b] = true;
      out.sold_to[s] = b;
      break;
    }
    if (!out.sold_to[s]) out.placement[s] = true;
  }

  for (AgentIndex b : net.buyers()) {
    out.placement[b] = served[b];
    if (served[b]) out.payment[b] = net.valuation(b);
    out.utility[b] = net.budget(b) - out.payment[b];
  }
  for (AgentIndex s : net.sellers()) {
    out.utility[s] = net.budget(s);
    if (out.sold_to[s]) out.utility[s] += net.valuation(*out.sold_to[s]);
  }
  return out;
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const AuctionRule>, std::less<>> rules;

  Registry() { rules.emplace("smf", std::make_shared<SmfRule>()); }
};

Registry& registry() {
  static Registry instance;
  return instance;
}

}  // namespace

std::shared_ptr<const AuctionRule> find_rule(std::string_view name) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.rules.find(name);
  if (it == r.rules.end()) {
    throw Error("unknown auction rule '" + std::string(name) + "'");
  }
  return it->second;
}

void register_rule(std::shared_ptr<const AuctionRule> rule) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  r.rules[std::string(rule->name())] = std::move(rule);
}

std::vector<std::string> registered_rules() {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, rule] : r.rules) names.push_back(name);
  return names;
}

}  // namespace dam
