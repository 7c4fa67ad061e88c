#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "dam/formula.h"
#include "dam/mechanism.h"

namespace dam {

// A k-step profile: one joint action per step.
using Profile = std::vector<JointAction>;

// "s1:a, s2:skip; s1:b" (steps separated by ';').
Profile parse_profile(const MarketNetwork& net, std::string_view text);

// Seller utilities (in sellers() order) after playing the profile. Throws
// PreconditionViolated if some step is not enabled along the way.
std::vector<Rational> profile_utilities(const Mechanism& m,
                                        const Profile& profile);

// The equilibrium formula, conjoined left to right:
//
//   <P1>...<Pk>(ut[s1] = m1 & ... & ut[sn] = mn)
//   & <P1>...<Pt[si := g]>...<Pk>(ut[si] <= mi)   for every step t,
//                                                 seller si, and g over
//                                                 all buyers then skip.
//
// Every binding lists all sellers, skip included. Deviations are diamonds,
// so an infeasible deviation makes the formula false. Throws ArityError on
// an empty profile or a utility count different from the seller count.
Formula ne_formula(const Mechanism& m, const Profile& profile,
                   const std::vector<Rational>& utilities);

struct NeDeviation {
  AgentIndex seller;
  std::size_t step;  // 0-based
  std::optional<AgentIndex> target;
  Rational utility;  // the deviator's utility after the deviation
};

struct NeResult {
  bool equilibrium = true;
  std::vector<Rational> utilities;
  std::optional<NeDeviation> witness;  // first improving deviation
  std::size_t deviations_checked = 0;
};

// Game-theoretic check: no seller improves by changing her target at one
// step. Deviations whose trajectory is not enabled are ignored. Throws
// PreconditionViolated if the profile itself is not enabled.
NeResult check_ne_direct(const Mechanism& m, const Profile& profile);

struct StrategyResult {
  bool found = false;
  std::vector<JointAction> witness;
  std::size_t states_explored = 0;
};

// |S| * |B|.
std::size_t default_max_depth(const Mechanism& m);

// Depth-first search for at most max_depth enabled joint actions after
// which the goal holds at every seller. States are identified by the
// sellers' neighbourhoods and all budgets; a state is revisited only with
// more remaining depth than before. The goal must be coalition-free.
StrategyResult strategy_exists(const Mechanism& m, const Formula& goal,
                               std::optional<std::size_t> max_depth = {});

// Coalition-free formula equivalent to f on m at every agent:
//
//   <[C]>phi  ~>  OR_{bC} AND_{bO} (<C:bC> true & [C:bC, O:bO] t(phi))
//
// where bC and bO range over every buyer (canonical name) and skip for
// each coalition and non-coalition seller. Formulas without coalition
// modalities are returned unchanged; shared subformulas stay shared.
Formula translate(const Mechanism& m, const Formula& f);

}  // namespace dam
