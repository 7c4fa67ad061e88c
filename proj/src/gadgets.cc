#include "dam/gadgets.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "dam/errors.h"

namespace dam {

PropFormula PropFormula::var(int v) {
  return PropFormula(std::make_shared<const Node>(Node{Kind::var, v, {}}));
}
PropFormula PropFormula::negation(PropFormula a) {
  return PropFormula(
      std::make_shared<const Node>(Node{Kind::negation, 0, {std::move(a)}}));
}
PropFormula PropFormula::conjunction(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(
      Node{Kind::conjunction, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::disjunction(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(
      Node{Kind::disjunction, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::equivalence(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(
      Node{Kind::equivalence, 0, {std::move(a), std::move(b)}}));
}

bool PropFormula::evaluate(const std::vector<bool>& values) const {
  switch (kind()) {
    case Kind::var: return values.at(variable());
    case Kind::negation: return !lhs().evaluate(values);
    case Kind::conjunction: return lhs().evaluate(values) && rhs().evaluate(values);
    case Kind::disjunction: return lhs().evaluate(values) || rhs().evaluate(values);
    case Kind::equivalence: return lhs().evaluate(values) == rhs().evaluate(values);
  }
  return false;
}

int PropFormula::max_variable() const {
  if (kind() == Kind::var) return variable();
  int m = 0;
  for (const auto& c : node_->children) m = std::max(m, c.max_variable());
  return m;
}

namespace {

constexpr int kOracleLimit = 20;

void check_cnf(const CnfInstance& c) {
  if (c.num_vars < 1) throw MalformedInstance("CNF needs at least one variable");
  if (c.clauses.empty()) throw MalformedInstance("CNF needs at least one clause");
  for (const auto& clause : c.clauses) {
    for (int lit : clause) {
      if (lit == 0 || std::abs(lit) > c.num_vars) {
        throw MalformedInstance("literal " + std::to_string(lit) +
                                " outside 1.." + std::to_string(c.num_vars));
      }
    }
  }
}

void check_qbf(const QbfInstance& q) {
  if (q.prefix.empty()) throw MalformedInstance("QBF needs at least one variable");
  if (q.matrix.max_variable() > static_cast<int>(q.prefix.size())) {
    throw MalformedInstance("QBF matrix has a free variable");
  }
  std::vector<const PropFormula*> stack{&q.matrix};
  while (!stack.empty()) {
    const PropFormula* f = stack.back();
    stack.pop_back();
    if (f->kind() == PropFormula::Kind::var) {
      if (f->variable() < 1) throw MalformedInstance("QBF variable below 1");
      continue;
    }
    stack.push_back(&f->lhs());
    if (f->kind() != PropFormula::Kind::negation) stack.push_back(&f->rhs());
  }
}

std::string idx(int i) { return std::to_string(i); }
std::string idx(int i, int j) { return std::to_string(i) + "_" + std::to_string(j); }

Formula nom(const std::string& name) { return Formula::nominal(name); }

Formula dia(Formula f, int times = 1) {
  for (int i = 0; i < times; ++i) f = Formula::diamond(std::move(f));
  return f;
}

Formula all_of(std::vector<Formula> parts) {
  if (parts.empty()) return Formula::constant(true);
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out = Formula::conjunction(out, parts[i]);
  }
  return out;
}

Formula any_of(std::vector<Formula> parts) {
  if (parts.empty()) return Formula::constant(false);
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out = Formula::disjunction(out, parts[i]);
  }
  return out;
}

}  // namespace

GadgetInstance gen_sat_gadget(const CnfInstance& c) {
  check_cnf(c);
  const int k = static_cast<int>(c.clauses.size());
  const int n = c.num_vars;

  MarketNetwork net;
  const AgentIndex s = net.add_seller("s", {"sigma"}, Rational(1));
  auto buyer = [&](const std::string& id, const std::string& name) {
    return net.add_buyer(id, {name}, Rational(1), Rational(0));
  };

  std::vector<AgentIndex> clause_agent;
  std::vector<std::array<AgentIndex, 3>> literal_agent;
  std::vector<std::array<std::string, 3>> literal_name;
  for (int i = 1; i <= k; ++i) clause_agent.push_back(buyer("b" + idx(i), "beta" + idx(i)));
  for (int i = 1; i <= k; ++i) {
    std::array<AgentIndex, 3> agents{};
    std::array<std::string, 3> names;
    for (int j = 1; j <= 3; ++j) {
      const bool negated = c.clauses[i - 1][j - 1] < 0;
      names[j - 1] = (negated ? "ngamma" : "gamma") + idx(i, j);
      agents[j - 1] = buyer("c" + idx(i, j), names[j - 1]);
    }
    literal_agent.push_back(agents);
    literal_name.push_back(names);
  }
  std::vector<AgentIndex> atom, e1, e2, truth, falsity;
  for (int l = 1; l <= n; ++l) atom.push_back(buyer("d" + idx(l), "delta" + idx(l)));
  for (int l = 1; l <= n; ++l) {
    e1.push_back(buyer("e" + idx(l, 1), "eps" + idx(l, 1)));
    e2.push_back(buyer("e" + idx(l, 2), "eps" + idx(l, 2)));
  }
  for (int l = 1; l <= n; ++l) truth.push_back(buyer("t" + idx(l), "true_" + idx(l)));
  for (int l = 1; l <= n; ++l) falsity.push_back(buyer("f" + idx(l), "false_" + idx(l)));

  for (int i = 0; i < k; ++i) {
    net.add_edge(s, clause_agent[i]);
    for (int j = 0; j < 3; ++j) {
      net.add_edge(clause_agent[i], literal_agent[i][j]);
      net.add_edge(literal_agent[i][j], atom[std::abs(c.clauses[i][j]) - 1]);
    }
  }
  for (int l = 0; l < n; ++l) {
    net.add_edge(atom[l], e1[l]);
    net.add_edge(atom[l], e2[l]);
    net.add_edge(e1[l], truth[l]);
    net.add_edge(e2[l], falsity[l]);
  }

  // Atom l is set to true (false) once the seller is adjacent to true_l
  // (false_l); reachable in three steps from any literal agent on l.
  auto set_to = [&](int l, bool value) {
    const std::string yes = (value ? "true_" : "false_") + idx(l);
    const std::string no = (value ? "false_" : "true_") + idx(l);
    return Formula::conjunction(
        dia(Formula::conjunction(nom(yes), dia(nom("sigma"))), 3),
        Formula::negation(
            dia(Formula::conjunction(nom(no), dia(nom("sigma"))), 3)));
  };

  std::vector<Formula> per_clause;
  for (int i = 0; i < k; ++i) {
    std::vector<Formula> lits, psi0, psi1;
    for (int j = 0; j < 3; ++j) {
      const int lit = c.clauses[i][j];
      const Formula here = nom(literal_name[i][j]);
      lits.push_back(here);
      (lit < 0 ? psi0 : psi1)
          .push_back(Formula::implication(here, set_to(std::abs(lit), lit > 0)));
    }
    const Formula body = Formula::conjunction(
        Formula::conjunction(any_of(lits), all_of(psi0)), all_of(psi1));
    per_clause.push_back(
        Formula::implication(nom("beta" + idx(i + 1)), dia(body)));
  }

  return {Mechanism{std::move(net), find_rule("smf")},
          Formula::box(all_of(per_clause))};
}

namespace {

Formula matrix_formula(const PropFormula& p) {
  using K = PropFormula::Kind;
  switch (p.kind()) {
    case K::var:
      return dia(nom("beta" + idx(p.variable(), 1)));
    case K::negation:
      return Formula::negation(matrix_formula(p.lhs()));
    case K::conjunction:
      return Formula::conjunction(matrix_formula(p.lhs()), matrix_formula(p.rhs()));
    case K::disjunction:
      return Formula::disjunction(matrix_formula(p.lhs()), matrix_formula(p.rhs()));
    case K::equivalence:
      return Formula::equivalence(matrix_formula(p.lhs()), matrix_formula(p.rhs()));
  }
  throw Error("internal: bad propositional node");
}

}  // namespace

GadgetInstance gen_qbf_gadget(const QbfInstance& q) {
  check_qbf(q);
  const int n = static_cast<int>(q.prefix.size());

  MarketNetwork net;
  const AgentIndex s = net.add_seller("s", {"sigma"}, Rational(1));
  std::vector<std::array<AgentIndex, 2>> a(n), b(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j < 2; ++j) {
      a[i - 1][j] = net.add_buyer("a" + idx(i, j), {"alpha" + idx(i, j)},
                                  Rational(1), Rational(0));
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j < 2; ++j) {
      b[i - 1][j] = net.add_buyer("b" + idx(i, j), {"beta" + idx(i, j)},
                                  Rational(1), Rational(0));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 2; ++j) {
      net.add_edge(s, a[i][j]);
      net.add_edge(a[i][j], b[i][j]);
    }
  }

  auto chosen = [](int i, int j) { return dia(nom("beta" + idx(i, j))); };
  // Exactly the first k atoms have a value, and each has exactly one.
  auto fixed = [&](int k) {
    std::vector<Formula> parts;
    for (int i = 1; i <= k; ++i) {
      parts.push_back(
          Formula::equivalence(chosen(i, 0), Formula::negation(chosen(i, 1))));
    }
    for (int i = k + 1; i <= n; ++i) {
      parts.push_back(Formula::conjunction(Formula::negation(chosen(i, 0)),
                                           Formula::negation(chosen(i, 1))));
    }
    return all_of(parts);
  };

  // The outermost quantifier is chosen first, so quantifier k guards with
  // fixed_k and wraps the formula for quantifiers k+1..n.
  Formula phi = matrix_formula(q.matrix);
  for (int k = n; k >= 1; --k) {
    if (q.prefix[k - 1] == Quantifier::forall) {
      phi = Formula::coalition_box({"sigma"}, Formula::implication(fixed(k), phi));
    } else {
      phi = Formula::coalition_diamond({"sigma"},
                                       Formula::conjunction(fixed(k), phi));
    }
  }
  return {Mechanism{std::move(net), find_rule("smf")}, phi};
}

bool sat_oracle(const CnfInstance& c) {
  check_cnf(c);
  if (c.num_vars > kOracleLimit) {
    throw SizeLimitExceeded("sat_oracle handles at most 20 variables");
  }
  const std::uint32_t rows = std::uint32_t{1} << c.num_vars;
  for (std::uint32_t bits = 0; bits < rows; ++bits) {
    const bool all = std::all_of(c.clauses.begin(), c.clauses.end(), [&](const auto& clause) {
      return std::any_of(clause.begin(), clause.end(), [&](int lit) {
        const bool value = (bits >> (std::abs(lit) - 1)) & 1u;
        return lit > 0 ? value : !value;
      });
    });
    if (all) return true;
  }
  return false;
}

namespace {

bool qbf_eval(const QbfInstance& q, std::vector<bool>& values, std::size_t level) {
  if (level == q.prefix.size()) return q.matrix.evaluate(values);
  bool any = false;
  bool every = true;
  for (bool v : {false, true}) {
    values[level + 1] = v;
    const bool r = qbf_eval(q, values, level + 1);
    any = any || r;
    every = every && r;
  }
  return q.prefix[level] == Quantifier::exists ? any : every;
}

}  // namespace

bool qbf_oracle(const QbfInstance& q) {
  check_qbf(q);
  if (q.prefix.size() > static_cast<std::size_t>(kOracleLimit)) {
    throw SizeLimitExceeded("qbf_oracle handles at most 20 variables");
  }
  std::vector<bool> values(q.prefix.size() + 1, false);
  return qbf_eval(q, values, 0);
}

ExpressivityPair expressivity_pair(int n) {
  if (n < 1) throw MalformedInstance("expressivity pair needs n >= 1");
  auto build = [n](int beta_incentive) {
    MarketNetwork net;
    const AgentIndex s = net.add_seller("s", {"sigma"}, Rational(1));
    for (int i = 1; i <= n; ++i) {
      const AgentIndex a =
          net.add_buyer("a" + idx(i), {"alpha" + idx(i)}, Rational(0), Rational(0));
      const AgentIndex leaf =
          net.add_buyer("l" + idx(i), {"lambda" + idx(i)}, Rational(0), Rational(0));
      net.set_incentive(a, s, Rational(1));
      net.add_edge(s, a);
      net.add_edge(a, leaf);
    }
    const AgentIndex b = net.add_buyer("b", {"beta"}, Rational(0), Rational(0));
    const AgentIndex c = net.add_buyer("c", {"gamma"}, Rational(0), Rational(0));
    net.set_incentive(b, s, Rational(beta_incentive));
    net.add_edge(s, b);
    net.add_edge(b, c);
    return Mechanism{std::move(net), find_rule("smf")};
  };
  return {build(2), build(1),
          Formula::coalition_diamond({"sigma"}, Formula::diamond(nom("gamma")))};
}

namespace {

// Integer tokens of one DIMACS body, skipping comment lines.
struct DimacsReader {
  std::istringstream in;
  explicit DimacsReader(std::string_view text) : in{std::string(text)} {}

  // Reads "p cnf <vars> <clauses>".
  std::pair<int, int> header() {
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tag;
      if (!(ls >> tag) || tag == "c") continue;
      std::string format;
      int vars = 0;
      int clauses = 0;
      if (tag != "p" || !(ls >> format >> vars >> clauses) || format != "cnf" ||
          vars < 0 || clauses < 0) {
        throw MalformedInstance("expected 'p cnf <vars> <clauses>' header");
      }
      return {vars, clauses};
    }
    throw MalformedInstance("missing 'p cnf' header");
  }

  // Lines after the header, split into (first token, zero-terminated ints).
  std::vector<std::pair<std::string, std::vector<int>>> lines() {
    std::vector<std::pair<std::string, std::vector<int>>> out;
    std::vector<int> pending;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string first;
      if (!(ls >> first) || first == "c") continue;
      std::string tag;
      if (first == "a" || first == "e") {
        tag = first;
      } else {
        ls.clear();
        ls.str(line);
      }
      std::string tok;
      while (ls >> tok) {
        int v = 0;
        try {
          std::size_t used = 0;
          v = std::stoi(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw MalformedInstance("bad token '" + tok + "'");
        }
        if (v == 0) {
          out.emplace_back(tag, pending);
          pending.clear();
        } else {
          pending.push_back(v);
        }
      }
      if (!tag.empty() && !pending.empty()) {
        throw MalformedInstance("quantifier line must end with 0");
      }
    }
    if (!pending.empty()) throw MalformedInstance("last clause must end with 0");
    return out;
  }
};

}  // namespace

CnfInstance read_dimacs(std::string_view text) {
  DimacsReader reader(text);
  const auto [vars, count] = reader.header();
  CnfInstance out;
  out.num_vars = vars;
  for (auto& [tag, lits] : reader.lines()) {
    if (!tag.empty()) throw MalformedInstance("quantifier line in a CNF file");
    if (lits.empty()) throw MalformedInstance("empty clause");
    if (lits.size() > 3) throw MalformedInstance("clause longer than 3 literals");
    while (lits.size() < 3) lits.push_back(lits.back());
    out.clauses.push_back({lits[0], lits[1], lits[2]});
  }
  if (static_cast<int>(out.clauses.size()) != count) {
    throw MalformedInstance("header announces " + std::to_string(count) +
                            " clauses, found " + std::to_string(out.clauses.size()));
  }
  check_cnf(out);
  return out;
}

std::string format_dimacs(const CnfInstance& c) {
  std::string out = "p cnf " + std::to_string(c.num_vars) + " " +
                    std::to_string(c.clauses.size()) + "\n";
  for (const auto& clause : c.clauses) {
    for (int lit : clause) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

QbfInstance read_qdimacs(std::string_view text) {
  DimacsReader reader(text);
  const auto [vars, count] = reader.header();
  std::map<int, int> renumber;
  QbfInstance out;
  std::vector<std::vector<int>> clauses;
  for (auto& [tag, lits] : reader.lines()) {
    if (!tag.empty()) {
      if (!clauses.empty()) throw MalformedInstance("quantifier after clauses");
      for (int v : lits) {
        if (v < 1 || v > vars) throw MalformedInstance("bad quantified variable");
        if (!renumber.emplace(v, static_cast<int>(renumber.size()) + 1).second) {
          throw MalformedInstance("variable quantified twice");
        }
        out.prefix.push_back(tag == "a" ? Quantifier::forall : Quantifier::exists);
      }
      continue;
    }
    if (lits.empty()) throw MalformedInstance("empty clause");
    clauses.push_back(lits);
  }
  if (static_cast<int>(clauses.size()) != count) {
    throw MalformedInstance("header announces " + std::to_string(count) +
                            " clauses, found " + std::to_string(clauses.size()));
  }
  if (out.prefix.empty()) throw MalformedInstance("no quantified variables");

  std::vector<PropFormula> conj;
  for (const auto& clause : clauses) {
    std::vector<PropFormula> disj;
    for (int lit : clause) {
      auto it = renumber.find(std::abs(lit));
      if (it == renumber.end()) {
        throw MalformedInstance("free variable " + std::to_string(std::abs(lit)));
      }
      PropFormula v = PropFormula::var(it->second);
      disj.push_back(lit > 0 ? v : PropFormula::negation(v));
    }
    PropFormula d = disj.front();
    for (std::size_t i = 1; i < disj.size(); ++i) d = PropFormula::disjunction(d, disj[i]);
    conj.push_back(d);
  }
  if (conj.empty()) {
    // empty matrix: true
    const PropFormula v = PropFormula::var(1);
    out.matrix = PropFormula::disjunction(v, PropFormula::negation(v));
  } else {
    PropFormula m = conj.front();
    for (std::size_t i = 1; i < conj.size(); ++i) m = PropFormula::conjunction(m, conj[i]);
    out.matrix = m;
  }
  return out;
}

}  // namespace dam
