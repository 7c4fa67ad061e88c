#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dam/rational.h"

namespace dam {

// Subject of a utility term or of the heart operator: a nominal, or the
// agent at which the formula is being evaluated (written @self).
struct Subject {
  std::optional<std::string> name;

  static Subject self() { return Subject{}; }
  static Subject named(std::string n) { return Subject{std::move(n)}; }
  bool is_self() const { return !name.has_value(); }

  friend bool operator==(const Subject&, const Subject&) = default;
};

struct LinearTerm {
  std::int64_t coefficient = 1;
  Subject subject;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

// Surface-syntax term before denominators are cleared.
struct RationalTerm {
  Rational coefficient{1};
  Subject subject;
  friend bool operator==(const RationalTerm&, const RationalTerm&) = default;
};

// seller : target, where an empty target means skip.
struct Binding {
  std::string seller;
  std::optional<std::string> target;
  friend bool operator==(const Binding&, const Binding&) = default;
};

enum class Comparison { ge, le, gt, lt, eq };

struct FormulaNode;

// Immutable, structurally compared formula of the strategic language. The
// coalition-free fragment is the plain n-seller logic.
//
// Core constructors: nominal, linear >=, not, and, box, diffusion box,
// coalition box, heart. The remaining kinds are surface sugar and are
// removed by desugar().
class Formula {
 public:
  Formula() = delete;

  // core
  static Formula nominal(std::string name);
  static Formula linear_geq(std::vector<LinearTerm> terms, std::int64_t bound);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula box(Formula operand);
  // Throws ArityError on an empty or duplicate binding list.
  static Formula diffuse(std::vector<Binding> action, Formula operand);
  // The coalition is stored sorted and without duplicates.
  static Formula coalition_box(std::vector<std::string> coalition,
                               Formula operand);
  static Formula heart(Subject target);

  // sugar
  static Formula constant(bool value);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula diamond(Formula operand);
  static Formula diffuse_diamond(std::vector<Binding> action, Formula operand);
  static Formula coalition_diamond(std::vector<std::string> coalition,
                                   Formula operand);
  // sum(terms) op bound
  static Formula relation(std::vector<RationalTerm> terms, Comparison op,
                          Rational bound);

  const FormulaNode& node() const { return *node_; }
  template <class T>
  const T* as() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node)
      : node_(std::move(node)) {}
  template <class T>
  static Formula make(T value);

  std::shared_ptr<const FormulaNode> node_;
};

namespace syntax {

struct Nominal {
  std::string name;
  friend bool operator==(const Nominal&, const Nominal&) = default;
};
struct LinearGeq {
  std::vector<LinearTerm> terms;
  std::int64_t bound = 0;
  friend bool operator==(const LinearGeq&, const LinearGeq&) = default;
};
struct Not {
  Formula operand;
  friend bool operator==(const Not&, const Not&) = default;
};
struct And {
  Formula lhs, rhs;
  friend bool operator==(const And&, const And&) = default;
};
struct Box {
  Formula operand;
  friend bool operator==(const Box&, const Box&) = default;
};
struct Diffuse {
  std::vector<Binding> action;
  Formula operand;
  friend bool operator==(const Diffuse&, const Diffuse&) = default;
};
struct CoalitionBox {
  std::vector<std::string> coalition;
  Formula operand;
  friend bool operator==(const CoalitionBox&, const CoalitionBox&) = default;
};
struct Heart {
  Subject target;
  friend bool operator==(const Heart&, const Heart&) = default;
};

struct Constant {
  bool value;
  friend bool operator==(const Constant&, const Constant&) = default;
};
struct Or {
  Formula lhs, rhs;
  friend bool operator==(const Or&, const Or&) = default;
};
struct Implies {
  Formula lhs, rhs;
  friend bool operator==(const Implies&, const Implies&) = default;
};
struct Iff {
  Formula lhs, rhs;
  friend bool operator==(const Iff&, const Iff&) = default;
};
struct Diamond {
  Formula operand;
  friend bool operator==(const Diamond&, const Diamond&) = default;
};
struct DiffuseDiamond {
  std::vector<Binding> action;
  Formula operand;
  friend bool operator==(const DiffuseDiamond&,
                         const DiffuseDiamond&) = default;
};
struct CoalitionDiamond {
  std::vector<std::string> coalition;
  Formula operand;
  friend bool operator==(const CoalitionDiamond&,
                         const CoalitionDiamond&) = default;
};
struct Relation {
  std::vector<RationalTerm> terms;
  Comparison op;
  Rational bound;
  friend bool operator==(const Relation&, const Relation&) = default;
};

}  // namespace syntax

struct FormulaNode {
  std::variant<syntax::Nominal, syntax::LinearGeq, syntax::Not, syntax::And,
               syntax::Box, syntax::Diffuse, syntax::CoalitionBox,
               syntax::Heart, syntax::Constant, syntax::Or, syntax::Implies,
               syntax::Iff, syntax::Diamond, syntax::DiffuseDiamond,
               syntax::CoalitionDiamond, syntax::Relation>
      value;
};

template <class T>
const T* Formula::as() const {
  return std::get_if<T>(&node_->value);
}

// Left-nested conjunction; `true` for an empty list.
Formula conjoin(const std::vector<Formula>& parts);
// Left-nested disjunction built from core constructors; `false` when empty.
Formula disjoin(const std::vector<Formula>& parts);

// Rewrites every sugar form into core constructors. Rational coefficients
// are cleared by the lcm of all denominators in the relation.
Formula desugar(const Formula& f);
bool is_core(const Formula& f);
bool has_coalition(const Formula& f);

// Every nominal in f, including action and coalition members.
std::set<std::string> names_of(const Formula& f);

// Number of nested modalities (box, diffusion, coalition, and their duals).
std::size_t modal_depth(const Formula& f);
std::size_t formula_size(const Formula& f);

}  // namespace dam
