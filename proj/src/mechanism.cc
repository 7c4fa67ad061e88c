#include "dam/mechanism.h"

#include <algorithm>
#include <map>
#include <set>

#include "dam/errors.h"

namespace dam {

void JointAction::assign(const MarketNetwork& net, AgentIndex seller,
                         std::optional<AgentIndex> buyer) {
  if (!net.is_seller(seller)) {
    throw NotASeller("'" + net.agent(seller).id + "' is not a seller");
  }
  if (targets_.size() != net.sellers().size()) {
    targets_.resize(net.sellers().size());
  }
  targets_[net.seller_position(seller)] = buyer;
}

bool JointAction::all_skip() const {
  return std::none_of(targets_.begin(), targets_.end(),
                      [](const auto& t) { return t.has_value(); });
}

std::vector<std::string> validate_network(const MarketNetwork& net) {
  std::vector<std::string> out;
  if (net.sellers().empty()) out.push_back("no sellers: need at least one");
  if (net.buyers().empty()) out.push_back("no buyers: need at least one");

  std::map<std::string, AgentIndex> owner;
  for (AgentIndex a = 0; a < net.size(); ++a) {
    const Agent& agent = net.agent(a);
    if (agent.names.empty()) {
      out.push_back("unnamed agent: '" + agent.id + "' has no nominal");
    }
    for (const auto& name : agent.names) {
      auto [it, inserted] = owner.emplace(name, a);
      if (!inserted && it->second != a) {
        const bool mixed = net.agent(it->second).kind != agent.kind;
        out.push_back(std::string(mixed ? "namespace clash"
                                        : "ambiguous nominal") +
                      ": '" + name + "' names both '" +
                      net.agent(it->second).id + "' and '" + agent.id + "'");
      }
    }
    if (net.budget(a) < 0) {
      out.push_back("negative budget: '" + agent.id + "'");
    }
    if (agent.kind == AgentKind::buyer) {
      if (agent.valuation < 0) {
        out.push_back("negative valuation: '" + agent.id + "'");
      }
      if (agent.valuation > net.budget(a)) {
        out.push_back("valuation exceeds budget: '" + agent.id + "' has V=" +
                      to_string(agent.valuation) +
                      " > Bdg=" + to_string(net.budget(a)));
      }
      for (AgentIndex s : net.sellers()) {
        if (net.incentive(a, s) < 0) {
          out.push_back("negative incentive: I('" + agent.id + "', '" +
                        net.agent(s).id + "')");
        }
      }
    }
  }

  for (AgentIndex a = 0; a < net.size(); ++a) {
    if (net.friends(a, a)) {
      out.push_back("irreflexivity: self-loop on '" + net.agent(a).id + "'");
    }
    for (AgentIndex b = a + 1; b < net.size(); ++b) {
      if (net.friends(a, b) != net.friends(b, a)) {
        out.push_back("symmetry: edge between '" + net.agent(a).id +
                      "' and '" + net.agent(b).id + "' is one-sided");
      }
      if (net.friends(a, b) && net.is_seller(a) && net.is_seller(b)) {
        out.push_back("seller-seller edge: '" + net.agent(a).id + "' -- '" +
                      net.agent(b).id + "'");
      }
    }
  }
  return out;
}

std::vector<std::string> validate_mechanism(const Mechanism& m) {
  auto out = validate_network(m.network);
  if (!m.rule) out.push_back("missing auction rule");
  return out;
}

AgentIndex resolve_name(const Mechanism& m, std::string_view nominal) {
  if (auto a = m.network.find_name(nominal)) return *a;
  throw UnknownNominal(std::string(nominal));
}

bool action_precondition(const MarketNetwork& net, const JointAction& act) {
  const auto sellers = net.sellers();
  const auto& targets = act.targets();
  for (std::size_t i = 0; i < targets.size() && i < sellers.size(); ++i) {
    if (!targets[i]) continue;
    const AgentIndex s = sellers[i];
    const AgentIndex b = *targets[i];
    if (!net.is_buyer(b) || !net.friends(s, b)) return false;
    if (net.budget(s) < net.incentive(b, s)) return false;
  }
  return true;
}

MarketNetwork apply_joint_action(const MarketNetwork& net,
                                 const JointAction& act) {
  if (!action_precondition(net, act)) {
    throw PreconditionViolated(
        "joint action not enabled: a seller targets a non-neighbour or "
        "cannot afford the incentive");
  }
  const auto sellers = net.sellers();
  const auto& targets = act.targets();

  // buyer -> winning seller
  std::map<AgentIndex, AgentIndex> winner;
  for (std::size_t i = 0; i < targets.size() && i < sellers.size(); ++i) {
    if (!targets[i]) continue;
    const AgentIndex s = sellers[i];
    const AgentIndex b = *targets[i];
    auto [it, inserted] = winner.emplace(b, s);
    if (inserted) continue;
    const AgentIndex current = it->second;
    const Rational& offer = net.incentive(b, s);
    const Rational& best = net.incentive(b, current);
    if (offer > best ||
        (offer == best && net.agent(s).id < net.agent(current).id)) {
      it->second = s;
    }
  }

  MarketNetwork out = net;
  for (const auto& [b, s] : winner) {
    // Referrals are read from the pre-update network.
    for (AgentIndex f : net.friends_of(b)) {
      if (net.is_buyer(f)) out.add_edge(s, f);
    }
    const Rational paid = net.incentive(b, s);
    out.set_budget(s, out.budget(s) - paid);
    out.set_budget(b, out.budget(b) + paid);
  }
  return out;
}

Mechanism apply_joint_action(const Mechanism& m, const JointAction& act) {
  return Mechanism{apply_joint_action(m.network, act), m.rule};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<AgentIndex> lookup(const MarketNetwork& net,
                                 std::string_view token) {
  if (auto a = net.find_name(token)) return a;
  return net.find_id(token);
}

}  // namespace

JointAction parse_joint_action(const MarketNetwork& net,
                               std::string_view text) {
  JointAction act(net);
  std::set<AgentIndex> seen;
  text = trim(text);
  if (text.empty()) return act;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error("expected 'seller:target' but got '" + std::string(item) +
                  "'");
    }
    const auto seller_token = trim(item.substr(0, colon));
    const auto target_token = trim(item.substr(colon + 1));
    const auto seller = lookup(net, seller_token);
    if (!seller) throw UnknownNominal(std::string(seller_token));
    if (!net.is_seller(*seller)) {
      throw ArityError("'" + std::string(seller_token) + "' is not a seller");
    }
    if (!seen.insert(*seller).second) {
      throw ArityError("seller '" + net.agent(*seller).id +
                       "' assigned twice");
    }
    std::optional<AgentIndex> target;
    if (target_token != "skip") {
      target = lookup(net, target_token);
      if (!target) throw UnknownNominal(std::string(target_token));
      if (!net.is_buyer(*target)) {
        throw Error("'" + std::string(target_token) + "' is not a buyer");
      }
    }
    act.assign(net, *seller, target);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return act;
}

std::string format_joint_action(const MarketNetwork& net,
                                const JointAction& act) {
  std::string out;
  const auto sellers = net.sellers();
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    if (!out.empty()) out += ", ";
    out += net.agent(sellers[i]).id;
    out += ':';
    const auto& t = i < act.targets().size() ? act.targets()[i] : std::nullopt;
    out += t ? net.agent(*t).id : "skip";
  }
  return out;
}

}  // namespace dam
