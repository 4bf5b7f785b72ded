#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrbc/expr.hpp"
#include "hrbc/ha/automaton.hpp"

namespace hrbc::sim {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How a choice between simultaneously enabled edges is resolved. Every
/// policy takes an edge as soon as one is enabled.
enum class Policy {
  first,        // lowest transition index
  random,       // uniform, seeded
  urgent_asap,  // lowest index in urgent locations, seeded random elsewhere
};

const char* to_string(Policy p);
std::optional<Policy> policy_from_string(const std::string& text);

struct Options {
  double horizon = 2.0;
  double dt = 1e-3;
  Policy policy = Policy::first;
  std::uint64_t seed = 0;
  /// Absolute tolerance for equality guards and invariants; when unset,
  /// each comparison uses dt * max(1, |rate of change of lhs - rhs|).
  std::optional<double> guard_tolerance;
  /// Consecutive zero-time edges after which the run is stopped.
  std::size_t max_zero_time_edges = 100000;
};

struct Sample {
  double time = 0;
  ha::LocationId location = 0;
  std::vector<double> values;  // in Trace::variables order
};

struct TakenEdge {
  double time = 0;
  std::size_t transition = 0;  // index into ha.transitions
};

enum class Status { completed, invariant_violation, deadlock, zeno };

const char* to_string(Status s);

struct Trace {
  std::vector<std::string> variables;
  std::vector<Sample> samples;
  std::vector<TakenEdge> taken;
  /// Every non-urgent location entered, with its entry time (includes the
  /// start location).
  std::vector<std::pair<double, ha::LocationId>> visits;
  double urgent_time = 0;
  Status status = Status::completed;
  std::string message;
};

/// Runs from the initial location with the all-zero valuation. Throws
/// SimulationError on dt <= 0 or horizon < 0.
Trace simulate(const ha::HybridAutomaton& ha, const Options& options);

struct Verdict {
  bool safe = true;
  std::optional<std::size_t> witness;  // sample index
};

/// First sample satisfying `predicate` (variables and `loc() == name`).
/// Throws SimulationError if the predicate mentions an unknown variable.
Verdict check_forbidden(const ha::HybridAutomaton& ha, const Trace& trace, const Expr& predicate);

struct EquivalenceReport {
  double max_deviation = 0;
  bool same_sample_times = true;
  bool same_locations = true;
  std::vector<ha::LocationId> full_locations;
  std::vector<ha::LocationId> reduced_locations;
  Trace full;
  Trace reduced;
};

/// Simulates both automata with the same options and compares valuations
/// at every sample and the sequences of non-urgent locations entered
/// (the pseudo-initial location of the reduced automaton is skipped).
EquivalenceReport equivalence_check(const ha::HybridAutomaton& full,
                                    const ha::HybridAutomaton& reduced, const Options& options);

/// `time,location,<variables...>` with location names.
std::string to_csv(const ha::HybridAutomaton& ha, const Trace& trace);

}  // namespace hrbc::sim
