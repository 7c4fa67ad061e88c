#include "dam/checker.h"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "dam/errors.h"

namespace dam {

namespace {

using Targets = std::vector<std::optional<AgentIndex>>;

struct MemoKey {
  const FormulaNode* node;
  AgentIndex agent;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>()(k.node) * 31 + k.agent;
  }
};

// Names inside one node, resolved against the mechanism.
struct Resolved {
  std::optional<AgentIndex> agent;     // nominal; heart subject (empty = self)
  std::vector<std::optional<AgentIndex>> subjects;  // linear terms
  Targets targets;                     // diffusion action by seller position
  std::vector<std::size_t> coalition;  // seller positions
};

// Buyers a seller may incentivise right now, followed by skip.
std::vector<std::optional<AgentIndex>> enabled_choices(const MarketNetwork& net,
                                                       AgentIndex seller) {
  std::vector<std::optional<AgentIndex>> out;
  for (AgentIndex b : net.buyers()) {
    if (net.friends(seller, b) && net.budget(seller) >= net.incentive(b, seller)) {
      out.emplace_back(b);
    }
  }
  out.emplace_back(std::nullopt);
  return out;
}

}  // namespace

struct ModelChecker::State {
  MarketNetwork net;
  std::optional<AllocationResult> alloc;
  std::unordered_map<MemoKey, bool, MemoHash> memo;
  std::map<Targets, std::unique_ptr<State>> successors;

  explicit State(MarketNetwork n) : net(std::move(n)) {}
};

struct ModelChecker::Impl {
  Mechanism mechanism;
  bool strategic;
  CheckStats& stats;
  std::unique_ptr<State> root;
  std::vector<Formula> kept;  // keeps memo keys alive
  std::unordered_map<const FormulaNode*, Resolved> resolved;

  Impl(const Mechanism& m, bool s, CheckStats& st)
      : mechanism(m), strategic(s), stats(st) {
    root = make_state(m.network);
  }

  std::unique_ptr<State> make_state(MarketNetwork net) {
    ++stats.states_explored;
    return std::make_unique<State>(std::move(net));
  }

  const AllocationResult& allocation(State& st) {
    if (!st.alloc) st.alloc = mechanism.rule->evaluate(st.net);
    return *st.alloc;
  }

  AgentIndex lookup(const std::string& name) {
    return resolve_name(mechanism, name);
  }

  std::optional<AgentIndex> lookup(const Subject& s) {
    if (s.is_self()) return std::nullopt;
    return lookup(*s.name);
  }

  std::size_t seller_position(const std::string& name) {
    const AgentIndex a = lookup(name);
    if (!mechanism.network.is_seller(a)) {
      throw ArityError("'" + name + "' is not a seller");
    }
    return mechanism.network.seller_position(a);
  }

  // Resolves every name once and rejects unknown nominals up front.
  void prepare(const Formula& f) {
    std::unordered_set<const FormulaNode*> seen;
    std::vector<const Formula*> stack{&f};
    while (!stack.empty()) {
      const Formula* cur = stack.back();
      stack.pop_back();
      const FormulaNode* key = &cur->node();
      if (!seen.insert(key).second || resolved.contains(key)) continue;
      Resolved r;
      using namespace syntax;
      if (auto n = cur->as<Nominal>()) {
        r.agent = lookup(n->name);
      } else if (auto n = cur->as<Heart>()) {
        r.agent = lookup(n->target);
      } else if (auto n = cur->as<LinearGeq>()) {
        for (const auto& t : n->terms) r.subjects.push_back(lookup(t.subject));
      } else if (auto n = cur->as<Not>()) {
        stack.push_back(&n->operand);
      } else if (auto n = cur->as<And>()) {
        stack.push_back(&n->lhs);
        stack.push_back(&n->rhs);
      } else if (auto n = cur->as<Box>()) {
        stack.push_back(&n->operand);
      } else if (auto n = cur->as<Diffuse>()) {
        r.targets.assign(mechanism.network.sellers().size(), std::nullopt);
        for (const auto& b : n->action) {
          const std::size_t pos = seller_position(b.seller);
          if (b.target) r.targets[pos] = lookup(*b.target);
        }
        stack.push_back(&n->operand);
      } else if (auto n = cur->as<CoalitionBox>()) {
        for (const auto& s : n->coalition) r.coalition.push_back(seller_position(s));
        std::sort(r.coalition.begin(), r.coalition.end());
        r.coalition.erase(std::unique(r.coalition.begin(), r.coalition.end()),
                          r.coalition.end());
        stack.push_back(&n->operand);
      }
      resolved.emplace(key, std::move(r));
    }
  }

  State& successor(State& st, const Targets& targets) {
    auto it = st.successors.find(targets);
    if (it != st.successors.end()) return *it->second;
    JointAction act(st.net);
    act.targets() = targets;
    auto child = make_state(apply_joint_action(st.net, act));
    State& ref = *child;
    st.successors.emplace(targets, std::move(child));
    return ref;
  }

  bool eval(State& st, const Formula& f, AgentIndex a) {
    const MemoKey key{&f.node(), a};
    if (auto it = st.memo.find(key); it != st.memo.end()) return it->second;
    const bool value = compute(st, f, a);
    st.memo.emplace(key, value);
    return value;
  }

  bool compute(State& st, const Formula& f, AgentIndex a) {
    using namespace syntax;
    const Resolved& r = resolved.at(&f.node());
    if (f.as<Nominal>()) return *r.agent == a;
    if (f.as<Heart>()) return allocation(st).placement[r.agent.value_or(a)];
    if (auto n = f.as<LinearGeq>()) {
      const auto& utility = allocation(st).utility;
      Rational total(0);
      for (std::size_t i = 0; i < n->terms.size(); ++i) {
        total += utility[r.subjects[i].value_or(a)] * n->terms[i].coefficient;
      }
      return total >= n->bound;
    }
    if (auto n = f.as<Not>()) return !eval(st, n->operand, a);
    if (auto n = f.as<And>()) return eval(st, n->lhs, a) && eval(st, n->rhs, a);
    if (auto n = f.as<Box>()) {
      const auto row = st.net.row(a);
      for (std::size_t w = 0; w < row.size(); ++w) {
        for (std::uint64_t bits = row[w]; bits != 0; bits &= bits - 1) {
          const AgentIndex b = w * 64 + std::countr_zero(bits);
          if (!eval(st, n->operand, b)) return false;
        }
      }
      return true;
    }
    if (auto n = f.as<Diffuse>()) {
      JointAction act(st.net);
      act.targets() = r.targets;
      if (!action_precondition(st.net, act)) return true;
      if (act.all_skip()) return eval(st, n->operand, a);
      return eval(successor(st, r.targets), n->operand, a);
    }
    if (auto n = f.as<CoalitionBox>()) {
      if (!strategic) throw CoalitionOperatorPresent();
      return coalition_box(st, r.coalition, n->operand, a);
    }
    throw Error("internal: sugar reached the evaluator");
  }

  // [<C>]phi: for every enabled choice of C some enabled counter-choice
  // leads to phi. A joint action is enabled iff each seller's own choice
  // is, so both quantifiers range over per-seller enabled choices.
  bool coalition_box(State& st, const std::vector<std::size_t>& coalition,
                     const Formula& phi, AgentIndex a) {
    const auto sellers = st.net.sellers();
    const std::size_t n = sellers.size();
    std::vector<bool> in_coalition(n, false);
    for (std::size_t p : coalition) in_coalition[p] = true;

    std::vector<std::vector<std::optional<AgentIndex>>> choices(n);
    std::vector<std::size_t> ours;
    std::vector<std::size_t> theirs;
    for (std::size_t p = 0; p < n; ++p) {
      choices[p] = enabled_choices(st.net, sellers[p]);
      (in_coalition[p] ? ours : theirs).push_back(p);
    }

    Targets targets(n);
    // Odometer over the positions in `group`; fn returns false to stop.
    auto enumerate = [&](const std::vector<std::size_t>& group, auto&& fn) {
      std::vector<std::size_t> digit(group.size(), 0);
      while (true) {
        for (std::size_t i = 0; i < group.size(); ++i) {
          targets[group[i]] = choices[group[i]][digit[i]];
        }
        if (!fn()) return false;
        std::size_t i = 0;
        while (i < group.size() && ++digit[i] == choices[group[i]].size()) {
          digit[i++] = 0;
        }
        if (i == group.size()) return true;
      }
    };

    return enumerate(ours, [&] {
      const bool answered = !enumerate(theirs, [&] {
        return !reaches(st, targets, phi, a);
      });
      return answered;
    });
  }

  bool reaches(State& st, const Targets& targets, const Formula& phi,
               AgentIndex a) {
    bool skip = true;
    for (const auto& t : targets) skip = skip && !t;
    if (skip) return eval(st, phi, a);
    JointAction act(st.net);
    act.targets() = targets;
    auto child = make_state(apply_joint_action(st.net, act));
    return eval(*child, phi, a);
  }
};

ModelChecker::ModelChecker(const Mechanism& m, bool strategic)
    : impl_(std::make_unique<Impl>(m, strategic, stats_)) {
  if (!m.rule) throw InvalidMechanism("mechanism has no auction rule");
}

ModelChecker::~ModelChecker() = default;

bool ModelChecker::holds(AgentIndex at, const Formula& phi) {
  if (at >= impl_->mechanism.network.size()) throw Error("agent out of range");
  if (!impl_->strategic && has_coalition(phi)) throw CoalitionOperatorPresent();
  Formula core = is_core(phi) ? phi : desugar(phi);
  impl_->kept.push_back(core);
  impl_->prepare(core);
  return impl_->eval(*impl_->root, core, at);
}

void ModelChecker::rebase(const MarketNetwork& net) {
  if (!net.same_roster(impl_->mechanism.network)) {
    throw Error("rebase needs a state of the same mechanism");
  }
  impl_->root = impl_->make_state(net);
}

bool check(const Mechanism& m, AgentIndex at, const Formula& phi,
           CheckStats* stats) {
  ModelChecker checker(m, false);
  const bool value = checker.holds(at, phi);
  if (stats) *stats = checker.stats();
  return value;
}

bool check_strategic(const Mechanism& m, AgentIndex at, const Formula& phi,
                     CheckStats* stats) {
  ModelChecker checker(m, true);
  const bool value = checker.holds(at, phi);
  if (stats) *stats = checker.stats();
  return value;
}

namespace {

AgentIndex query_agent(const CheckQuery& q) {
  auto a = q.mechanism.network.find_id(q.at);
  if (!a) throw Error("unknown agent id '" + q.at + "'");
  return *a;
}

}  // namespace

bool check(const CheckQuery& q) {
  return check(q.mechanism, query_agent(q), q.formula);
}

bool check_strategic(const CheckQuery& q) {
  return check_strategic(q.mechanism, query_agent(q), q.formula);
}

std::vector<bool> check_all(const Mechanism& m, const Formula& phi,
                            bool strategic) {
  ModelChecker checker(m, strategic);
  const Formula core = is_core(phi) ? phi : desugar(phi);
  std::vector<bool> out;
  for (AgentIndex a = 0; a < m.network.size(); ++a) {
    out.push_back(checker.holds(a, core));
  }
  return out;
}

}  // namespace dam
