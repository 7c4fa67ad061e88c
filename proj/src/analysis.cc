#include "dam/analysis.h"

#include <cstring>
#include <string>
#include <unordered_map>

#include "dam/checker.h"
#include "dam/errors.h"

namespace dam {

Profile parse_profile(const MarketNetwork& net, std::string_view text) {
  Profile out;
  while (true) {
    const auto semi = text.find(';');
    out.push_back(parse_joint_action(net, text.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    text = text.substr(semi + 1);
  }
  return out;
}

namespace {

// Plays the profile; nullopt if some step is not enabled.
std::optional<MarketNetwork> play(const MarketNetwork& start,
                                  const Profile& profile) {
  MarketNetwork net = start;
  for (const auto& act : profile) {
    if (!action_precondition(net, act)) return std::nullopt;
    net = apply_joint_action(net, act);
  }
  return net;
}

std::vector<Rational> seller_utilities(const Mechanism& m,
                                       const MarketNetwork& net) {
  const AllocationResult r = m.rule->evaluate(net);
  std::vector<Rational> out;
  for (AgentIndex s : net.sellers()) out.push_back(r.utility[s]);
  return out;
}

std::vector<Binding> bindings_of(const MarketNetwork& net,
                                 const JointAction& act) {
  std::vector<Binding> out;
  const auto sellers = net.sellers();
  for (std::size_t p = 0; p < sellers.size(); ++p) {
    Binding b{net.canonical_name(sellers[p]), std::nullopt};
    if (p < act.targets().size() && act.targets()[p]) {
      b.target = net.canonical_name(*act.targets()[p]);
    }
    out.push_back(std::move(b));
  }
  return out;
}

Formula diamonds(const MarketNetwork& net, const Profile& profile,
                 Formula body) {
  for (auto it = profile.rbegin(); it != profile.rend(); ++it) {
    body = Formula::diffuse_diamond(bindings_of(net, *it), std::move(body));
  }
  return body;
}

Formula utility_is(const std::string& seller, Comparison op,
                   const Rational& value) {
  return Formula::relation({RationalTerm{Rational(1), Subject::named(seller)}},
                           op, value);
}

// Buyers in roster order, then skip.
std::vector<std::optional<AgentIndex>> all_targets(const MarketNetwork& net) {
  std::vector<std::optional<AgentIndex>> out(net.buyers().begin(),
                                             net.buyers().end());
  out.emplace_back(std::nullopt);
  return out;
}

}  // namespace

std::vector<Rational> profile_utilities(const Mechanism& m,
                                        const Profile& profile) {
  auto end = play(m.network, profile);
  if (!end) throw PreconditionViolated("profile is not enabled along its trajectory");
  return seller_utilities(m, *end);
}

Formula ne_formula(const Mechanism& m, const Profile& profile,
                   const std::vector<Rational>& utilities) {
  const MarketNetwork& net = m.network;
  const auto sellers = net.sellers();
  if (profile.empty()) throw ArityError("profile must have at least one step");
  if (utilities.size() != sellers.size()) {
    throw ArityError("expected " + std::to_string(sellers.size()) +
                     " utilities, got " + std::to_string(utilities.size()));
  }

  std::vector<Formula> outcome;
  for (std::size_t p = 0; p < sellers.size(); ++p) {
    outcome.push_back(utility_is(net.canonical_name(sellers[p]),
                                 Comparison::eq, utilities[p]));
  }
  std::vector<Formula> parts{diamonds(net, profile, conjoin(outcome))};

  const auto targets = all_targets(net);
  for (std::size_t t = 0; t < profile.size(); ++t) {
    for (std::size_t p = 0; p < sellers.size(); ++p) {
      const Formula bound = utility_is(net.canonical_name(sellers[p]),
                                       Comparison::le, utilities[p]);
      for (const auto& g : targets) {
        Profile deviation = profile;
        deviation[t].targets().resize(sellers.size());
        deviation[t].targets()[p] = g;
        parts.push_back(diamonds(net, deviation, bound));
      }
    }
  }
  return conjoin(parts);
}

NeResult check_ne_direct(const Mechanism& m, const Profile& profile) {
  NeResult out;
  out.utilities = profile_utilities(m, profile);
  const MarketNetwork& net = m.network;
  const auto sellers = net.sellers();
  const auto targets = all_targets(net);
  for (std::size_t t = 0; t < profile.size(); ++t) {
    for (std::size_t p = 0; p < sellers.size(); ++p) {
      for (const auto& g : targets) {
        Profile deviation = profile;
        deviation[t].targets().resize(sellers.size());
        if (deviation[t].targets()[p] == g) continue;
        deviation[t].targets()[p] = g;
        auto end = play(net, deviation);
        if (!end) continue;
        ++out.deviations_checked;
        const Rational u = seller_utilities(m, *end)[p];
        if (u > out.utilities[p]) {
          out.equilibrium = false;
          out.witness = NeDeviation{sellers[p], t, g, u};
          return out;
        }
      }
    }
  }
  return out;
}

std::size_t default_max_depth(const Mechanism& m) {
  return m.network.sellers().size() * m.network.buyers().size();
}

namespace {

class StrategySearch {
 public:
  StrategySearch(const Mechanism& m, const Formula& goal)
      : mechanism_(m), goal_(desugar(goal)), checker_(m, false) {}

  bool run(const MarketNetwork& net, std::size_t remaining) {
    std::string key = state_key(net);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second >= remaining) return false;
      it->second = remaining;
    } else {
      if (goal_holds(net)) return true;
      memo_.emplace(std::move(key), remaining);
    }
    if (remaining == 0) return false;

    const auto sellers = net.sellers();
    std::vector<std::vector<std::optional<AgentIndex>>> choices;
    for (AgentIndex s : sellers) {
      std::vector<std::optional<AgentIndex>> c;
      for (AgentIndex b : net.buyers()) {
        if (net.friends(s, b) && net.budget(s) >= net.incentive(b, s)) {
          c.emplace_back(b);
        }
      }
      c.emplace_back(std::nullopt);
      choices.push_back(std::move(c));
    }

    JointAction act(net);
    std::vector<std::size_t> digit(sellers.size(), 0);
    while (true) {
      for (std::size_t p = 0; p < sellers.size(); ++p) {
        act.targets()[p] = choices[p][digit[p]];
      }
      if (!act.all_skip()) {
        path_.push_back(act);
        if (run(apply_joint_action(net, act), remaining - 1)) return true;
        path_.pop_back();
      }
      std::size_t p = 0;
      while (p < digit.size() && ++digit[p] == choices[p].size()) digit[p++] = 0;
      if (p == digit.size()) return false;
    }
  }

  std::vector<JointAction>& path() { return path_; }
  std::size_t states() const { return memo_.size(); }

 private:
  bool goal_holds(const MarketNetwork& net) {
    checker_.rebase(net);
    for (AgentIndex s : net.sellers()) {
      if (!checker_.holds(s, goal_)) return false;
    }
    return true;
  }

  // Updates only ever add seller edges and move budget, so a state is
  // fixed by the sellers' rows and the budgets that changed.
  std::string state_key(const MarketNetwork& net) const {
    std::string key;
    auto put = [&key](const auto& value) {
      key.append(reinterpret_cast<const char*>(&value), sizeof(value));
    };
    for (AgentIndex s : net.sellers()) {
      for (std::uint64_t word : net.row(s)) put(word);
    }
    const auto initial = mechanism_.network.budgets();
    const auto now = net.budgets();
    for (std::size_t i = 0; i < now.size(); ++i) {
      if (now[i] == initial[i]) continue;
      put(i);
      put(now[i].numerator());
      put(now[i].denominator());
    }
    return key;
  }

  const Mechanism& mechanism_;
  Formula goal_;
  ModelChecker checker_;
  std::unordered_map<std::string, std::size_t> memo_;
  std::vector<JointAction> path_;
};

}  // namespace

StrategyResult strategy_exists(const Mechanism& m, const Formula& goal,
                               std::optional<std::size_t> max_depth) {
  if (has_coalition(goal)) throw CoalitionOperatorPresent();
  StrategySearch search(m, goal);
  StrategyResult out;
  out.found = search.run(m.network, max_depth.value_or(default_max_depth(m)));
  if (out.found) out.witness = std::move(search.path());
  out.states_explored = search.states();
  return out;
}

namespace {

class Translator {
 public:
  explicit Translator(const Mechanism& m) : net_(m.network) {
    for (AgentIndex b : net_.buyers()) domain_.push_back(net_.canonical_name(b));
    domain_.emplace_back(std::nullopt);
  }

  Formula operator()(const Formula& f) {
    if (auto it = cache_.find(&f.node()); it != cache_.end()) return it->second;
    Formula out = rewrite(f);
    cache_.emplace(&f.node(), out);
    return out;
  }

 private:
  // Works on the surface tree so coalition-free parts keep their sugar.
  Formula rewrite(const Formula& f) {
    using namespace syntax;
    if (!has_coalition(f)) return f;
    if (auto n = f.as<Not>()) {
      if (auto box = n->operand.as<CoalitionBox>()) {
        return coalition_diamond(box->coalition, negate((*this)(box->operand)));
      }
      return Formula::negation((*this)(n->operand));
    }
    if (auto n = f.as<And>()) {
      return Formula::conjunction((*this)(n->lhs), (*this)(n->rhs));
    }
    if (auto n = f.as<Or>()) {
      return Formula::disjunction((*this)(n->lhs), (*this)(n->rhs));
    }
    if (auto n = f.as<Implies>()) {
      return Formula::implication((*this)(n->lhs), (*this)(n->rhs));
    }
    if (auto n = f.as<Iff>()) {
      return Formula::equivalence((*this)(n->lhs), (*this)(n->rhs));
    }
    if (auto n = f.as<Box>()) return Formula::box((*this)(n->operand));
    if (auto n = f.as<Diamond>()) return Formula::diamond((*this)(n->operand));
    if (auto n = f.as<Diffuse>()) {
      return Formula::diffuse(n->action, (*this)(n->operand));
    }
    if (auto n = f.as<DiffuseDiamond>()) {
      return Formula::diffuse_diamond(n->action, (*this)(n->operand));
    }
    if (auto n = f.as<CoalitionDiamond>()) {
      return coalition_diamond(n->coalition, (*this)(n->operand));
    }
    if (auto n = f.as<CoalitionBox>()) {
      // [<C>]phi = !<[C]>!phi
      const Formula inner = negate((*this)(n->operand));
      return Formula::negation(coalition_diamond(n->coalition, inner));
    }
    throw Error("internal: unexpected node in translate");
  }

  static Formula negate(const Formula& f) {
    if (auto n = f.as<syntax::Not>()) return n->operand;
    return Formula::negation(f);
  }

  Formula coalition_diamond(const std::vector<std::string>& coalition,
                            const Formula& body) {
    const auto sellers = net_.sellers();
    std::vector<bool> ours(sellers.size(), false);
    for (const auto& name : coalition) {
      const auto a = net_.find_name(name);
      if (!a) throw UnknownNominal(name);
      if (!net_.is_seller(*a)) throw ArityError("'" + name + "' is not a seller");
      ours[net_.seller_position(*a)] = true;
    }
    std::vector<std::size_t> mine;
    std::vector<std::size_t> others;
    for (std::size_t p = 0; p < sellers.size(); ++p) {
      (ours[p] ? mine : others).push_back(p);
    }

    std::vector<std::optional<std::string>> choice(sellers.size());
    std::vector<Formula> alternatives;
    for_each_assignment(mine, choice, [&] {
      std::vector<Binding> own;
      for (std::size_t p : mine) {
        own.push_back({net_.canonical_name(sellers[p]), choice[p]});
      }
      const Formula enabled =
          own.empty() ? Formula::constant(true)
                      : Formula::diffuse_diamond(own, Formula::constant(true));
      std::vector<Formula> responses;
      for_each_assignment(others, choice, [&] {
        std::vector<Binding> full;
        for (std::size_t p = 0; p < sellers.size(); ++p) {
          full.push_back({net_.canonical_name(sellers[p]), choice[p]});
        }
        responses.push_back(
            Formula::conjunction(enabled, Formula::diffuse(full, body)));
      });
      alternatives.push_back(conjoin(responses));
    });

    Formula out = alternatives.front();
    for (std::size_t i = 1; i < alternatives.size(); ++i) {
      out = Formula::disjunction(out, alternatives[i]);
    }
    return out;
  }

  template <class Fn>
  void for_each_assignment(const std::vector<std::size_t>& positions,
                           std::vector<std::optional<std::string>>& choice,
                           Fn&& fn) {
    std::vector<std::size_t> digit(positions.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < positions.size(); ++i) {
        choice[positions[i]] = domain_[digit[i]];
      }
      fn();
      std::size_t i = 0;
      while (i < digit.size() && ++digit[i] == domain_.size()) digit[i++] = 0;
      if (i == digit.size()) return;
    }
  }

  const MarketNetwork& net_;
  std::vector<std::optional<std::string>> domain_;
  std::unordered_map<const FormulaNode*, Formula> cache_;
};

}  // namespace

Formula translate(const Mechanism& m, const Formula& f) {
  if (!has_coalition(f)) return f;
  return Translator(m)(f);
}

}  // namespace dam
