#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hrbc/ha/automaton.hpp"

namespace hrbc::reducer {

/// Raised when urgent locations form a cycle (time can never advance).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& message, std::vector<ha::LocationId> cycle);

  const std::vector<ha::LocationId>& cycle() const { return cycle_; }

 private:
  std::vector<ha::LocationId> cycle_;
};

/// Name of the location that replaces an urgent initial location.
inline constexpr const char* pseudo_initial_name = "init";

/// Removes every urgent location. Each path L -> u1 -> ... -> uk -> L'
/// through urgent locations becomes one edge L -> L' whose guard and
/// parallel assignment are the composition of the steps. Paths with the
/// same target, guard and assignment yield a single edge; paths whose
/// guard folds to false are dropped. Direct edges between non-urgent
/// locations are kept unchanged. Only locations reachable from the start
/// remain.
ha::HybridAutomaton aggregate(const ha::HybridAutomaton& ha);

/// Removes locations (and their edges) unreachable from the initial location.
ha::HybridAutomaton prune_unreachable(const ha::HybridAutomaton& ha);

/// One edge's effect composed after another: guard `first.guard &&
/// second.guard[first]` and assignment `second ∘ first`, both normalized.
struct Effect {
  Expr guard;
  std::vector<ha::Assignment> assignments;  // sorted by variable, no identities
};

Effect compose(const Effect& first, const Effect& second);

/// Conjunction with flattened, deduplicated, sorted conjuncts.
Expr canonical_guard(const Expr& guard);

}  // namespace hrbc::reducer
