#pragma once

#include <random>
#include <string>
#include <vector>

#include "dam/analysis.h"
#include "dam/formula.h"
#include "dam/gadgets.h"
#include "dam/mechanism.h"

namespace dam::testing {

// Two sellers sharing buyers b1, b2, or sharing a single buyer b.
Mechanism shared_buyers();
Mechanism single_buyer();

// One seller s (sigma, budget 5); buyers a, b, c, d with
// (budget, valuation, incentive) = (3,1,5), (8,2,6), (9,9,1), (11,10,0).
Mechanism one_seller();

// Sellers s1, s2 (budget 1), buyers a..f, all incentives 1,
// valuations 1 except b = 4 and e = 3. Buyer budgets are 5.
Mechanism two_sellers();

AgentIndex id(const Mechanism& m, const std::string& agent_id);

struct RandomShape {
  int max_sellers = 2;
  int max_buyers = 4;
  int max_seller_budget = 2;
  int max_incentive = 2;
  double seller_edge = 0.5;
  double buyer_edge = 0.4;
  double alias = 0.15;  // chance of a second name
};

Mechanism random_mechanism(std::mt19937& rng, const RandomShape& shape = {});

struct FormulaShape {
  int modal_depth = 2;
  int size = 6;  // rough budget of connectives
  bool coalitions = false;
  bool diffusion = true;
};

// Sugared formula over the names of m.
Formula random_formula(std::mt19937& rng, const Mechanism& m,
                       const FormulaShape& shape = {});

CnfInstance random_cnf(std::mt19937& rng, int max_vars, int max_clauses);
QbfInstance random_qbf(std::mt19937& rng, int vars);
// Twenty fixed matrices over p1, p2 (variables 1 and 2).
std::vector<PropFormula> matrix_pool();

// Direct reading of the semantics on the sugared syntax. Coalitions range
// over every buyer and skip with explicit precondition checks; nothing is
// memoised or pruned.
bool reference_holds(const Mechanism& m, AgentIndex at, const Formula& f);

// Breadth-first enumeration of every enabled joint-action sequence of
// length <= depth (no state merging); true iff one ends in a state where
// the goal holds at every seller.
bool reference_strategy(const Mechanism& m, const Formula& goal, int depth);

}  // namespace dam::testing
