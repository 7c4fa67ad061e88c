#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "dam/formula.h"
#include "dam/mechanism.h"

namespace dam {

struct CheckStats {
  // Mechanism states materialised (the initial one included).
  std::size_t states_explored = 0;
};

// M, a |= phi for one mechanism. Sugar is accepted and desugared on entry.
//
// Truth values are memoised per state, so asking about many agents or many
// formulas sharing subformulas through one checker is cheap. Diffusion
// successors are cached; the successors enumerated by coalition modalities
// are not, so the coalition search runs depth first in memory proportional
// to the modal depth.
class ModelChecker {
 public:
  // With strategic == false, formulas containing coalition modalities are
  // refused with CoalitionOperatorPresent.
  explicit ModelChecker(const Mechanism& m, bool strategic = false);
  ~ModelChecker();
  ModelChecker(const ModelChecker&) = delete;
  ModelChecker& operator=(const ModelChecker&) = delete;

  // Throws UnknownNominal if phi names something outside the mechanism and
  // ArityError if an action or coalition lists a non-seller.
  bool holds(AgentIndex at, const Formula& phi);

  // Continues on another state of the same mechanism (same roster). The
  // memo is dropped; resolved names are kept.
  void rebase(const MarketNetwork& net);

  const CheckStats& stats() const { return stats_; }

 private:
  struct State;
  struct Impl;

  CheckStats stats_;
  std::unique_ptr<Impl> impl_;
};

struct CheckQuery {
  Mechanism mechanism;
  std::string at;  // agent id
  Formula formula;
};

// Coalition-free model checking. Throws CoalitionOperatorPresent.
bool check(const Mechanism& m, AgentIndex at, const Formula& phi,
           CheckStats* stats = nullptr);
bool check(const CheckQuery& q);

// Model checking with coalition modalities.
//
// <[C]>phi holds when some choice of buyer-or-skip for the members of C is
// enabled on its own and, for every choice of the other sellers, the joint
// update (if enabled) satisfies phi. [<C>]phi is the dual.
bool check_strategic(const Mechanism& m, AgentIndex at, const Formula& phi,
                     CheckStats* stats = nullptr);
bool check_strategic(const CheckQuery& q);

// Truth value at every agent, in agent order.
std::vector<bool> check_all(const Mechanism& m, const Formula& phi,
                            bool strategic = false);

}  // namespace dam
