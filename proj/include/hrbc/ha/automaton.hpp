#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hrbc/diagnostics.hpp"
#include "hrbc/expr.hpp"

namespace hrbc::ha {

using LocationId = int;

struct Location {
  LocationId id = 0;
  std::string name;
  std::map<std::string, Expr> flows;  // variable -> derivative
  Expr invariant;
  bool urgent = false;

  bool operator==(const Location&) const = default;
};

struct Assignment {
  std::string var;
  Expr value;

  bool operator==(const Assignment&) const = default;
};

/// Which semantic rule produced a transition. Informational only.
enum class TransitionKind { plain, message, statement, network, nonurgent, composed };

const char* to_string(TransitionKind kind);
std::optional<TransitionKind> transition_kind_from_string(const std::string& text);

struct Transition {
  LocationId source = 0;
  LocationId target = 0;
  Expr guard;
  /// Parallel: every right-hand side reads the pre-transition valuation.
  /// Each variable is assigned at most once.
  std::vector<Assignment> assignments;
  std::optional<std::string> label;
  TransitionKind kind = TransitionKind::plain;
  std::string note;

  bool operator==(const Transition&) const = default;
};

struct HybridAutomaton {
  std::set<std::string> variables;
  std::set<std::string> labels;
  std::vector<Location> locations;  // sorted by id
  std::vector<Transition> transitions;
  std::map<LocationId, Expr> init;
  LocationId initial_location = 0;

  bool operator==(const HybridAutomaton&) const = default;

  /// Index into `locations`, or npos.
  std::size_t index_of(LocationId id) const;
  const Location& location(LocationId id) const;
  const Location* find_by_name(const std::string& name) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Sorts locations by id. Throws std::invalid_argument on a duplicate id,
/// a dangling transition endpoint, or an unknown initial location.
HybridAutomaton build(std::vector<Location> locations, std::vector<Transition> transitions,
                      std::set<std::string> variables, std::map<LocationId, Expr> init,
                      LocationId initial_location);

/// Empty iff every well-formedness rule holds. Never throws.
std::vector<std::string> validate(const HybridAutomaton& ha);

struct Stats {
  std::size_t locations = 0;
  std::size_t transitions = 0;
  std::size_t urgent = 0;

  bool operator==(const Stats&) const = default;
};

Stats stats(const HybridAutomaton& ha);

/// `locations=<n> transitions=<m> urgent=<k>`
std::string to_string(const Stats& s);

}  // namespace hrbc::ha
