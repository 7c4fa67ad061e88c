#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dam/formula.h"
#include "dam/mechanism.h"

namespace dam {

// 3-CNF in DIMACS convention: literal v > 0 is variable v, -v its negation.
struct CnfInstance {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

// Propositional matrix of a QBF.
class PropFormula {
 public:
  enum class Kind { var, negation, conjunction, disjunction, equivalence };

  static PropFormula var(int v);
  static PropFormula negation(PropFormula a);
  static PropFormula conjunction(PropFormula a, PropFormula b);
  static PropFormula disjunction(PropFormula a, PropFormula b);
  static PropFormula equivalence(PropFormula a, PropFormula b);

  Kind kind() const { return node_->kind; }
  int variable() const { return node_->variable; }
  const PropFormula& lhs() const { return node_->children.at(0); }
  const PropFormula& rhs() const { return node_->children.at(1); }

  // values[v] for variable v (index 0 unused).
  bool evaluate(const std::vector<bool>& values) const;
  int max_variable() const;

 private:
  struct Node {
    Kind kind;
    int variable = 0;
    std::vector<PropFormula> children;
  };
  explicit PropFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class Quantifier { forall, exists };

// Q1 p1 ... Qn pn . matrix, variables numbered 1..n in prefix order.
struct QbfInstance {
  std::vector<Quantifier> prefix;
  PropFormula matrix = PropFormula::var(1);
};

struct GadgetInstance {
  Mechanism mechanism;
  Formula formula;
};

// One seller "s" (sigma, budget 1) and for k clauses and n variables the
// buyers b{i} (beta{i}), literal agents c{i}_{j} (gamma{i}_{j}, or
// ngamma{i}_{j} for a negated literal), d{l} (delta{l}), e{l}_1 / e{l}_2
// (eps{l}_1 / eps{l}_2), t{l} (true_{l}) and f{l} (false_{l}): 1+4k+5n
// agents in total. Every incentive is 0, buyers have budget 1 and
// valuation 0. The goal holds after some sequence of incentivisations iff
// the instance is satisfiable. Throws MalformedInstance.
GadgetInstance gen_sat_gadget(const CnfInstance& c);

// One seller "s" (sigma) and buyers a{i}_{j} (alpha{i}_{j}) and b{i}_{j}
// (beta{i}_{j}) for j in {0, 1}: 1+4n agents. The formula is true at s iff
// the QBF is. Throws MalformedInstance.
GadgetInstance gen_qbf_gadget(const QbfInstance& q);

// Brute force over all assignments. Throw SizeLimitExceeded above 20
// variables.
bool sat_oracle(const CnfInstance& c);
bool qbf_oracle(const QbfInstance& q);

struct ExpressivityPair {
  Mechanism m1;
  Mechanism m2;
  Formula formula;  // <[sigma]> <> gamma
};

// Seller s (budget 1) with n buyers a{i} (alpha{i}, incentive 1) each
// owning a leaf l{i}, plus buyer b (beta) owning c (gamma). I(b, s) is 2 in
// m1 and 1 in m2, so only m2 lets the seller reach gamma.
ExpressivityPair expressivity_pair(int n);

// DIMACS "p cnf" reader. Clauses with one or two literals are padded to
// three by repeating their last literal. Throws MalformedInstance.
CnfInstance read_dimacs(std::string_view text);
std::string format_dimacs(const CnfInstance& c);

// QDIMACS reader. Variables are renumbered 1..n in prefix order and the
// clauses become a conjunction of disjunctions. Throws MalformedInstance,
// also for a matrix variable that is not quantified.
QbfInstance read_qdimacs(std::string_view text);

}  // namespace dam
