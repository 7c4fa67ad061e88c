#include "fixtures.h"

#include <functional>
#include <stdexcept>

#include "dam/errors.h"

namespace dam::testing {

namespace {

Mechanism finish(MarketNetwork net) {
  return Mechanism{std::move(net), find_rule("smf")};
}

}  // namespace

Mechanism shared_buyers() {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(1));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(1));
  auto b1 = net.add_buyer("b1", {"beta1"}, Rational(1), Rational(1));
  auto b2 = net.add_buyer("b2", {"beta2"}, Rational(1), Rational(1));
  for (auto s : {s1, s2}) {
    for (auto b : {b1, b2}) {
      net.set_incentive(b, s, Rational(1));
      net.add_edge(s, b);
    }
  }
  return finish(std::move(net));
}

Mechanism single_buyer() {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(1));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(1));
  auto b = net.add_buyer("b", {"beta"}, Rational(1), Rational(1));
  net.set_incentive(b, s1, Rational(1));
  net.set_incentive(b, s2, Rational(1));
  net.add_edge(s1, b);
  net.add_edge(s2, b);
  return finish(std::move(net));
}

Mechanism one_seller() {
  MarketNetwork net;
  auto s = net.add_seller("s", {"sigma"}, Rational(5));
  auto a = net.add_buyer("a", {"alpha"}, Rational(3), Rational(1));
  auto b = net.add_buyer("b", {"beta"}, Rational(8), Rational(2));
  auto c = net.add_buyer("c", {"gamma"}, Rational(9), Rational(9));
  auto d = net.add_buyer("d", {"delta"}, Rational(11), Rational(10));
  net.set_incentive(a, s, Rational(5));
  net.set_incentive(b, s, Rational(6));
  net.set_incentive(c, s, Rational(1));
  net.set_incentive(d, s, Rational(0));
  net.add_edge(s, a);
  net.add_edge(s, b);
  net.add_edge(a, b);
  net.add_edge(a, c);
  net.add_edge(d, c);
  return finish(std::move(net));
}

Mechanism two_sellers() {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(1));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(1));
  const std::pair<const char*, const char*> buyers[] = {
      {"a", "alpha"}, {"b", "beta"}, {"c", "gamma"},
      {"d", "delta"}, {"e", "epsilon"}, {"f", "zeta"}};
  for (auto [bid, name] : buyers) {
    const std::string sid = bid;
    const Rational v = sid == "b" ? Rational(4) : sid == "e" ? Rational(3) : Rational(1);
    auto b = net.add_buyer(bid, {name}, Rational(5), v);
    net.set_incentive(b, s1, Rational(1));
    net.set_incentive(b, s2, Rational(1));
  }
  auto at = [&](const char* x) { return *net.find_id(x); };
  const std::pair<const char*, const char*> edges[] = {
      {"s1", "d"}, {"s1", "a"}, {"d", "e"}, {"e", "a"}, {"s2", "f"},
      {"s2", "c"}, {"b", "c"},  {"f", "e"}, {"a", "b"}, {"f", "b"}};
  for (auto [x, y] : edges) net.add_edge(at(x), at(y));
  (void)s1;
  (void)s2;
  return finish(std::move(net));
}

AgentIndex id(const Mechanism& m, const std::string& agent_id) {
  auto a = m.network.find_id(agent_id);
  if (!a) throw std::invalid_argument("no agent " + agent_id);
  return *a;
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

Mechanism random_mechanism(std::mt19937& rng, const RandomShape& shape) {
  MarketNetwork net;
  const int ns = uniform(rng, 1, shape.max_sellers);
  const int nb = uniform(rng, 1, shape.max_buyers);
  std::vector<AgentIndex> sellers, buyers;
  for (int i = 1; i <= ns; ++i) {
    std::vector<std::string> names{"sigma" + std::to_string(i)};
    if (chance(rng, shape.alias)) names.push_back("tau" + std::to_string(i));
    sellers.push_back(net.add_seller("s" + std::to_string(i), names,
                                     Rational(uniform(rng, 0, shape.max_seller_budget))));
  }
  for (int i = 1; i <= nb; ++i) {
    std::vector<std::string> names{"beta" + std::to_string(i)};
    if (chance(rng, shape.alias)) names.push_back("eta" + std::to_string(i));
    const int budget = uniform(rng, 0, 3);
    const int valuation = uniform(rng, 0, budget);
    buyers.push_back(net.add_buyer("b" + std::to_string(i), names, Rational(budget),
                                   Rational(valuation)));
  }
  for (auto b : buyers) {
    for (auto s : sellers) {
      net.set_incentive(b, s, Rational(uniform(rng, 0, shape.max_incentive)));
      if (chance(rng, shape.seller_edge)) net.add_edge(s, b);
    }
  }
  for (std::size_t i = 0; i < buyers.size(); ++i) {
    for (std::size_t j = i + 1; j < buyers.size(); ++j) {
      if (chance(rng, shape.buyer_edge)) net.add_edge(buyers[i], buyers[j]);
    }
  }
  return finish(std::move(net));
}

namespace {

struct FormulaGen {
  std::mt19937& rng;
  const Mechanism& m;
  FormulaShape shape;
  std::vector<std::string> all_names, seller_names, buyer_names;

  FormulaGen(std::mt19937& r, const Mechanism& mech, const FormulaShape& s)
      : rng(r), m(mech), shape(s) {
    for (AgentIndex a = 0; a < m.network.size(); ++a) {
      for (const auto& n : m.network.agent(a).names) {
        all_names.push_back(n);
        (m.network.is_seller(a) ? seller_names : buyer_names).push_back(n);
      }
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(rng, 0, static_cast<int>(v.size()) - 1)];
  }

  Subject subject() {
    if (chance(rng, 0.3)) return Subject::self();
    return Subject::named(pick(all_names));
  }

  Formula atom() {
    switch (uniform(rng, 0, 4)) {
      case 0: return Formula::nominal(pick(all_names));
      case 1: return Formula::heart(subject());
      case 2: return Formula::constant(chance(rng, 0.5));
      default: {
        std::vector<RationalTerm> terms;
        const int count = uniform(rng, 1, 2);
        for (int i = 0; i < count; ++i) {
          Rational c(uniform(rng, -2, 2));
          if (c == 0) c = 1;
          if (chance(rng, 0.2)) c /= 2;
          terms.push_back(RationalTerm{c, subject()});
        }
        Rational bound(uniform(rng, -1, 8));
        if (chance(rng, 0.2)) bound /= 3;
        const auto op = static_cast<Comparison>(uniform(rng, 0, 4));
        return Formula::relation(std::move(terms), op, bound);
      }
    }
  }

  std::vector<Binding> action() {
    std::vector<Binding> out;
    for (AgentIndex s : m.network.sellers()) {
      if (!out.empty() && chance(rng, 0.3)) continue;
      Binding b{pick(m.network.agent(s).names), std::nullopt};
      if (!chance(rng, 0.2)) {
        // mostly buyers; a seller target exercises the disabled case
        b.target = chance(rng, 0.05) ? pick(seller_names) : pick(buyer_names);
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  std::vector<std::string> coalition() {
    std::vector<std::string> out;
    for (AgentIndex s : m.network.sellers()) {
      if (chance(rng, 0.5)) out.push_back(pick(m.network.agent(s).names));
    }
    return out;
  }

  Formula gen(int depth, int size) {
    if (size <= 0 || chance(rng, 0.2)) return atom();
    const int kinds = depth > 0 ? 12 : 5;
    switch (uniform(rng, 0, kinds - 1)) {
      case 0: return Formula::negation(gen(depth, size - 1));
      case 1: return Formula::conjunction(gen(depth, size / 2), gen(depth, size / 2));
      case 2: return Formula::disjunction(gen(depth, size / 2), gen(depth, size / 2));
      case 3: return Formula::implication(gen(depth, size / 2), gen(depth, size / 2));
      case 4: return Formula::equivalence(gen(depth, size / 2), gen(depth, size / 2));
      case 5: return Formula::box(gen(depth - 1, size - 1));
      case 6: return Formula::diamond(gen(depth - 1, size - 1));
      case 7:
      case 8:
        if (shape.diffusion) {
          return chance(rng, 0.5)
                     ? Formula::diffuse(action(), gen(depth - 1, size - 1))
                     : Formula::diffuse_diamond(action(), gen(depth - 1, size - 1));
        }
        return Formula::box(gen(depth - 1, size - 1));
      default:
        if (shape.coalitions) {
          return chance(rng, 0.5)
                     ? Formula::coalition_box(coalition(), gen(depth - 1, size - 1))
                     : Formula::coalition_diamond(coalition(), gen(depth - 1, size - 1));
        }
        return Formula::diamond(gen(depth - 1, size - 1));
    }
  }
};

}  // namespace

Formula random_formula(std::mt19937& rng, const Mechanism& m,
                       const FormulaShape& shape) {
  FormulaGen g(rng, m, shape);
  return g.gen(shape.modal_depth, shape.size);
}

CnfInstance random_cnf(std::mt19937& rng, int max_vars, int max_clauses) {
  CnfInstance c;
  c.num_vars = uniform(rng, 1, max_vars);
  const int k = uniform(rng, 1, max_clauses);
  for (int i = 0; i < k; ++i) {
    std::array<int, 3> clause{};
    // Narrow clauses (repeated variables) make unsatisfiable draws likely.
    const int width = uniform(rng, 1, 3);
    for (int j = 0; j < 3; ++j) {
      if (j < width) {
        const int v = uniform(rng, 1, c.num_vars);
        clause[j] = chance(rng, 0.5) ? v : -v;
      } else {
        clause[j] = clause[j - 1];
      }
    }
    c.clauses.push_back(clause);
  }
  return c;
}

std::vector<PropFormula> matrix_pool() {
  using P = PropFormula;
  const P p = P::var(1), q = P::var(2);
  const P np = P::negation(p), nq = P::negation(q);
  return {p,
          q,
          np,
          nq,
          P::conjunction(p, q),
          P::disjunction(p, q),
          P::equivalence(p, q),
          P::negation(P::equivalence(p, q)),
          P::conjunction(p, nq),
          P::conjunction(np, q),
          P::disjunction(np, q),
          P::disjunction(p, nq),
          P::disjunction(np, nq),
          P::conjunction(np, nq),
          P::disjunction(p, np),
          P::conjunction(p, np),
          P::conjunction(P::disjunction(p, q), P::disjunction(np, nq)),
          P::disjunction(P::conjunction(p, q), P::conjunction(np, nq)),
          P::equivalence(p, nq),
          P::conjunction(P::disjunction(p, q), np)};
}

QbfInstance random_qbf(std::mt19937& rng, int vars) {
  QbfInstance q;
  for (int i = 0; i < vars; ++i) {
    q.prefix.push_back(chance(rng, 0.5) ? Quantifier::forall : Quantifier::exists);
  }
  auto leaf = [&]() {
    PropFormula v = PropFormula::var(uniform(rng, 1, vars));
    return chance(rng, 0.4) ? PropFormula::negation(v) : v;
  };
  std::function<PropFormula(int)> gen = [&](int size) -> PropFormula {
    if (size <= 1) return leaf();
    const PropFormula a = gen(size / 2);
    const PropFormula b = gen(size - size / 2);
    switch (uniform(rng, 0, 2)) {
      case 0: return PropFormula::conjunction(a, b);
      case 1: return PropFormula::disjunction(a, b);
      default: return PropFormula::equivalence(a, b);
    }
  };
  q.matrix = gen(uniform(rng, 2, 6));
  return q;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Reference {
  const Mechanism& base;

  AgentIndex resolve(const std::string& name) const {
    auto a = base.network.find_name(name);
    if (!a) throw UnknownNominal(name);
    return *a;
  }

  AgentIndex subject(const Subject& s, AgentIndex at) const {
    return s.is_self() ? at : resolve(*s.name);
  }

  // Every buyer and skip.
  std::vector<std::optional<AgentIndex>> domain(const MarketNetwork& net) const {
    std::vector<std::optional<AgentIndex>> out(net.buyers().begin(), net.buyers().end());
    out.emplace_back(std::nullopt);
    return out;
  }

  JointAction action(const MarketNetwork& net, const std::vector<Binding>& bs) const {
    JointAction act(net);
    for (const auto& b : bs) {
      act.assign(net, resolve(b.seller),
                 b.target ? std::optional<AgentIndex>(resolve(*b.target)) : std::nullopt);
    }
    return act;
  }

  // Calls fn for every assignment of domain values to `positions`.
  template <class Fn>
  bool all_assignments(const MarketNetwork& net, const std::vector<std::size_t>& positions,
                       JointAction& act, Fn&& fn) const {
    const auto d = domain(net);
    std::vector<std::size_t> digit(positions.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < positions.size(); ++i) {
        act.targets()[positions[i]] = d[digit[i]];
      }
      if (!fn()) return false;
      std::size_t i = 0;
      while (i < digit.size() && ++digit[i] == d.size()) digit[i++] = 0;
      if (i == digit.size()) return true;
    }
  }

  // <[C]>phi
  bool can_force(const MarketNetwork& net, AgentIndex at,
                 const std::vector<std::string>& coalition, const Formula& phi) const {
    std::vector<bool> in(net.sellers().size(), false);
    for (const auto& c : coalition) in[net.seller_position(resolve(c))] = true;
    std::vector<std::size_t> ours, theirs;
    for (std::size_t p = 0; p < in.size(); ++p) (in[p] ? ours : theirs).push_back(p);

    JointAction act(net);
    bool found = false;
    all_assignments(net, ours, act, [&] {
      JointAction own(net);
      for (std::size_t p : ours) own.targets()[p] = act.targets()[p];
      if (!action_precondition(net, own)) return true;
      const bool every = all_assignments(net, theirs, act, [&] {
        if (!action_precondition(net, act)) return true;
        return eval(apply_joint_action(net, act), at, phi);
      });
      if (every) found = true;
      return !found;
    });
    return found;
  }

  bool eval(const MarketNetwork& net, AgentIndex at, const Formula& f) const {
    using namespace syntax;
    auto alloc = [&] { return base.rule->evaluate(net); };
    return std::visit(
        overloaded{
            [&](const Nominal& n) { return resolve(n.name) == at; },
            [&](const Constant& n) { return n.value; },
            [&](const Heart& n) {
              return static_cast<bool>(alloc().placement[subject(n.target, at)]);
            },
            [&](const LinearGeq& n) {
              const auto r = alloc();
              Rational total(0);
              for (const auto& t : n.terms) {
                total += r.utility[subject(t.subject, at)] * t.coefficient;
              }
              return total >= n.bound;
            },
            [&](const Relation& n) {
              const auto r = alloc();
              Rational total(0);
              for (const auto& t : n.terms) {
                total += r.utility[subject(t.subject, at)] * t.coefficient;
              }
              switch (n.op) {
                case Comparison::ge: return total >= n.bound;
                case Comparison::le: return total <= n.bound;
                case Comparison::gt: return total > n.bound;
                case Comparison::lt: return total < n.bound;
                case Comparison::eq: return total == n.bound;
              }
              return false;
            },
            [&](const Not& n) { return !eval(net, at, n.operand); },
            [&](const And& n) { return eval(net, at, n.lhs) && eval(net, at, n.rhs); },
            [&](const Or& n) { return eval(net, at, n.lhs) || eval(net, at, n.rhs); },
            [&](const Implies& n) { return !eval(net, at, n.lhs) || eval(net, at, n.rhs); },
            [&](const Iff& n) { return eval(net, at, n.lhs) == eval(net, at, n.rhs); },
            [&](const Box& n) {
              for (AgentIndex b : net.friends_of(at)) {
                if (!eval(net, b, n.operand)) return false;
              }
              return true;
            },
            [&](const Diamond& n) {
              for (AgentIndex b : net.friends_of(at)) {
                if (eval(net, b, n.operand)) return true;
              }
              return false;
            },
            [&](const Diffuse& n) {
              const JointAction act = action(net, n.action);
              if (!action_precondition(net, act)) return true;
              return eval(apply_joint_action(net, act), at, n.operand);
            },
            [&](const DiffuseDiamond& n) {
              const JointAction act = action(net, n.action);
              if (!action_precondition(net, act)) return false;
              return eval(apply_joint_action(net, act), at, n.operand);
            },
            [&](const CoalitionDiamond& n) {
              return can_force(net, at, n.coalition, n.operand);
            },
            [&](const CoalitionBox& n) {
              return !can_force(net, at, n.coalition, Formula::negation(n.operand));
            },
        },
        f.node().value);
  }
};

}  // namespace

bool reference_holds(const Mechanism& m, AgentIndex at, const Formula& f) {
  return Reference{m}.eval(m.network, at, f);
}

bool reference_strategy(const Mechanism& m, const Formula& goal, int depth) {
  const Reference ref{m};
  auto goal_holds = [&](const MarketNetwork& net) {
    for (AgentIndex s : net.sellers()) {
      if (!ref.eval(net, s, goal)) return false;
    }
    return true;
  };
  std::vector<MarketNetwork> frontier{m.network};
  for (int level = 0;; ++level) {
    for (const auto& net : frontier) {
      if (goal_holds(net)) return true;
    }
    if (level == depth) return false;
    std::vector<MarketNetwork> next;
    for (const auto& net : frontier) {
      std::vector<std::size_t> all;
      for (std::size_t p = 0; p < net.sellers().size(); ++p) all.push_back(p);
      JointAction act(net);
      ref.all_assignments(net, all, act, [&] {
        if (action_precondition(net, act)) next.push_back(apply_joint_action(net, act));
        return true;
      });
    }
    frontier = std::move(next);
  }
}

}  // namespace dam::testing
