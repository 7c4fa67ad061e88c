#include "dam/formula.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "dam/errors.h"

namespace dam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_action(const std::vector<Binding>& action) {
  if (action.empty()) throw ArityError("diffusion action without bindings");
  for (std::size_t i = 0; i < action.size(); ++i) {
    for (std::size_t j = i + 1; j < action.size(); ++j) {
      if (action[i].seller == action[j].seller) {
        throw ArityError("seller '" + action[i].seller +
                         "' appears twice in one action");
      }
    }
  }
}

std::vector<std::string> normalize_coalition(std::vector<std::string> c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

template <class T>
Formula Formula::make(T value) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{std::move(value)}));
}

Formula Formula::nominal(std::string name) {
  return make(syntax::Nominal{std::move(name)});
}
Formula Formula::linear_geq(std::vector<LinearTerm> terms, std::int64_t bound) {
  return make(syntax::LinearGeq{std::move(terms), bound});
}
Formula Formula::negation(Formula operand) {
  return make(syntax::Not{std::move(operand)});
}
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make(syntax::And{std::move(lhs), std::move(rhs)});
}
Formula Formula::box(Formula operand) {
  return make(syntax::Box{std::move(operand)});
}
Formula Formula::diffuse(std::vector<Binding> action, Formula operand) {
  check_action(action);
  return make(syntax::Diffuse{std::move(action), std::move(operand)});
}
Formula Formula::coalition_box(std::vector<std::string> coalition,
                               Formula operand) {
  return make(syntax::CoalitionBox{normalize_coalition(std::move(coalition)),
                                   std::move(operand)});
}
Formula Formula::heart(Subject target) {
  return make(syntax::Heart{std::move(target)});
}
Formula Formula::constant(bool value) { return make(syntax::Constant{value}); }
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return make(syntax::Or{std::move(lhs), std::move(rhs)});
}
Formula Formula::implication(Formula lhs, Formula rhs) {
  return make(syntax::Implies{std::move(lhs), std::move(rhs)});
}
Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return make(syntax::Iff{std::move(lhs), std::move(rhs)});
}
Formula Formula::diamond(Formula operand) {
  return make(syntax::Diamond{std::move(operand)});
}
Formula Formula::diffuse_diamond(std::vector<Binding> action, Formula operand) {
  check_action(action);
  return make(syntax::DiffuseDiamond{std::move(action), std::move(operand)});
}
Formula Formula::coalition_diamond(std::vector<std::string> coalition,
                                   Formula operand) {
  return make(syntax::CoalitionDiamond{
      normalize_coalition(std::move(coalition)), std::move(operand)});
}
Formula Formula::relation(std::vector<RationalTerm> terms, Comparison op,
                          Rational bound) {
  return make(syntax::Relation{std::move(terms), op, bound});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->value == b.node_->value;
}

Formula conjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::linear_geq({}, 0);
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc = Formula::conjunction(acc, parts[i]);
  }
  return acc;
}

Formula disjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::negation(Formula::linear_geq({}, 0));
  if (parts.size() == 1) return parts.front();
  std::vector<Formula> negated;
  negated.reserve(parts.size());
  for (const auto& p : parts) negated.push_back(Formula::negation(p));
  return Formula::negation(conjoin(negated));
}

namespace {

Formula lower_relation(const syntax::Relation& r) {
  std::int64_t scale = r.bound.denominator();
  for (const auto& t : r.terms) scale = lcm(scale, t.coefficient.denominator());

  std::vector<LinearTerm> pos;
  std::vector<LinearTerm> neg;
  for (const auto& t : r.terms) {
    const Rational scaled = t.coefficient * scale;
    pos.push_back(LinearTerm{scaled.numerator(), t.subject});
    neg.push_back(LinearTerm{-scaled.numerator(), t.subject});
  }
  const std::int64_t z = (r.bound * scale).numerator();

  switch (r.op) {
    case Comparison::ge:
      return Formula::linear_geq(pos, z);
    case Comparison::le:
      return Formula::linear_geq(neg, -z);
    case Comparison::gt:
      return Formula::negation(Formula::linear_geq(neg, -z));
    case Comparison::lt:
      return Formula::negation(Formula::linear_geq(pos, z));
    case Comparison::eq:
      return Formula::conjunction(Formula::linear_geq(pos, z),
                                  Formula::linear_geq(neg, -z));
  }
  return Formula::linear_geq(pos, z);
}

}  // namespace

namespace {

using DesugarCache = std::unordered_map<const FormulaNode*, Formula>;

Formula desugar_node(const Formula& f, DesugarCache& cache);

// Shared subtrees are rewritten once and stay shared.
Formula desugar_cached(const Formula& f, DesugarCache& cache) {
  if (auto it = cache.find(&f.node()); it != cache.end()) return it->second;
  Formula out = desugar_node(f, cache);
  cache.emplace(&f.node(), out);
  return out;
}

Formula desugar_node(const Formula& f, DesugarCache& cache) {
  auto desugar = [&](const Formula& g) { return desugar_cached(g, cache); };
  using namespace syntax;
  return std::visit(
      overloaded{
          [&](const Nominal&) { return f; },
          [&](const LinearGeq&) { return f; },
          [&](const Heart&) { return f; },
          [&](const Not& n) { return Formula::negation(desugar(n.operand)); },
          [&](const And& n) {
            return Formula::conjunction(desugar(n.lhs), desugar(n.rhs));
          },
          [&](const Box& n) { return Formula::box(desugar(n.operand)); },
          [&](const Diffuse& n) {
            return Formula::diffuse(n.action, desugar(n.operand));
          },
          [&](const CoalitionBox& n) {
            return Formula::coalition_box(n.coalition, desugar(n.operand));
          },
          [&](const Constant& n) {
            Formula top = Formula::linear_geq({}, 0);
            return n.value ? top : Formula::negation(top);
          },
          [&](const Or& n) {
            return Formula::negation(
                Formula::conjunction(Formula::negation(desugar(n.lhs)),
                                     Formula::negation(desugar(n.rhs))));
          },
          [&](const Implies& n) {
            return Formula::negation(Formula::conjunction(
                desugar(n.lhs), Formula::negation(desugar(n.rhs))));
          },
          [&](const Iff& n) {
            const Formula a = desugar(n.lhs);
            const Formula b = desugar(n.rhs);
            return Formula::conjunction(
                Formula::negation(
                    Formula::conjunction(a, Formula::negation(b))),
                Formula::negation(
                    Formula::conjunction(b, Formula::negation(a))));
          },
          [&](const Diamond& n) {
            return Formula::negation(
                Formula::box(Formula::negation(desugar(n.operand))));
          },
          [&](const DiffuseDiamond& n) {
            return Formula::negation(Formula::diffuse(
                n.action, Formula::negation(desugar(n.operand))));
          },
          [&](const CoalitionDiamond& n) {
            return Formula::negation(Formula::coalition_box(
                n.coalition, Formula::negation(desugar(n.operand))));
          },
          [&](const Relation& n) { return lower_relation(n); },
      },
      f.node().value);
}

}  // namespace

Formula desugar(const Formula& f) {
  DesugarCache cache;
  return desugar_cached(f, cache);
}

namespace {

// Calls fn on every direct subformula.
template <class Fn>
void for_each_child(const Formula& f, Fn&& fn) {
  using namespace syntax;
  std::visit(overloaded{
                 [&](const Not& n) { fn(n.operand); },
                 [&](const Box& n) { fn(n.operand); },
                 [&](const Diamond& n) { fn(n.operand); },
                 [&](const Diffuse& n) { fn(n.operand); },
                 [&](const DiffuseDiamond& n) { fn(n.operand); },
                 [&](const CoalitionBox& n) { fn(n.operand); },
                 [&](const CoalitionDiamond& n) { fn(n.operand); },
                 [&](const And& n) { fn(n.lhs), fn(n.rhs); },
                 [&](const Or& n) { fn(n.lhs), fn(n.rhs); },
                 [&](const Implies& n) { fn(n.lhs), fn(n.rhs); },
                 [&](const Iff& n) { fn(n.lhs), fn(n.rhs); },
                 [](const auto&) {},
             },
             f.node().value);
}

void collect_subject(const Subject& s, std::set<std::string>& out) {
  if (s.name) out.insert(*s.name);
}

void collect_names(const Formula& f, std::set<std::string>& out,
                   std::unordered_set<const FormulaNode*>& seen) {
  if (!seen.insert(&f.node()).second) return;
  using namespace syntax;
  std::visit(overloaded{
                 [&](const Nominal& n) { out.insert(n.name); },
                 [&](const Heart& n) { collect_subject(n.target, out); },
                 [&](const LinearGeq& n) {
                   for (const auto& t : n.terms) collect_subject(t.subject, out);
                 },
                 [&](const Relation& n) {
                   for (const auto& t : n.terms) collect_subject(t.subject, out);
                 },
                 [&](const Diffuse& n) {
                   for (const auto& b : n.action) {
                     out.insert(b.seller);
                     if (b.target) out.insert(*b.target);
                   }
                 },
                 [&](const DiffuseDiamond& n) {
                   for (const auto& b : n.action) {
                     out.insert(b.seller);
                     if (b.target) out.insert(*b.target);
                   }
                 },
                 [&](const CoalitionBox& n) {
                   out.insert(n.coalition.begin(), n.coalition.end());
                 },
                 [&](const CoalitionDiamond& n) {
                   out.insert(n.coalition.begin(), n.coalition.end());
                 },
                 [](const auto&) {},
             },
             f.node().value);
  for_each_child(f,
                 [&](const Formula& child) { collect_names(child, out, seen); });
}

bool is_modal(const Formula& f) {
  using namespace syntax;
  return f.as<Box>() || f.as<Diamond>() || f.as<Diffuse>() ||
         f.as<DiffuseDiamond>() || f.as<CoalitionBox>() ||
         f.as<CoalitionDiamond>();
}

}  // namespace

namespace {

bool find_coalition(const Formula& f,
                    std::unordered_set<const FormulaNode*>& seen) {
  if (!seen.insert(&f.node()).second) return false;
  if (f.as<syntax::CoalitionBox>() || f.as<syntax::CoalitionDiamond>()) {
    return true;
  }
  bool found = false;
  for_each_child(f, [&](const Formula& child) {
    found = found || find_coalition(child, seen);
  });
  return found;
}

}  // namespace

bool is_core(const Formula& f) {
  using namespace syntax;
  std::unordered_set<const FormulaNode*> seen;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(&cur->node()).second) continue;
    if (cur->as<Constant>() || cur->as<Or>() || cur->as<Implies>() ||
        cur->as<Iff>() || cur->as<Diamond>() || cur->as<DiffuseDiamond>() ||
        cur->as<CoalitionDiamond>() || cur->as<Relation>()) {
      return false;
    }
    for_each_child(*cur, [&](const Formula& child) { stack.push_back(&child); });
  }
  return true;
}

bool has_coalition(const Formula& f) {
  std::unordered_set<const FormulaNode*> seen;
  return find_coalition(f, seen);
}

std::set<std::string> names_of(const Formula& f) {
  std::set<std::string> out;
  std::unordered_set<const FormulaNode*> seen;
  collect_names(f, out, seen);
  return out;
}

std::size_t modal_depth(const Formula& f) {
  std::size_t deepest = 0;
  for_each_child(f, [&](const Formula& child) {
    deepest = std::max(deepest, modal_depth(child));
  });
  return deepest + (is_modal(f) ? 1 : 0);
}

std::size_t formula_size(const Formula& f) {
  std::size_t total = 1;
  for_each_child(f, [&](const Formula& child) { total += formula_size(child); });
  return total;
}

}  // namespace dam
