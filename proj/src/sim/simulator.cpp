#include "hrbc/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>

namespace hrbc::sim {

using ha::HybridAutomaton;
using ha::LocationId;

namespace {

constexpr double kTiny = 1e-9;

// Expression tree with variables resolved to valuation indices.
struct Node {
  ExprKind kind = ExprKind::boolean;
  Op op = Op::logical_and;
  double number = 0;
  bool truth = true;
  int var = -1;
  LocationId location = -1;  // loc() == name tests; -1 never matches
  bool location_test = false;
  std::vector<Node> kids;
};

using Valuation = std::vector<double>;

class Compiler {
 public:
  Compiler(const std::vector<std::string>& variables, const HybridAutomaton* ha)
      : ha_(ha) {
    for (std::size_t i = 0; i < variables.size(); ++i) index_[variables[i]] = static_cast<int>(i);
  }

  Node compile(const Expr& e) const {
    Node n;
    n.kind = e.kind();
    switch (e.kind()) {
      case ExprKind::number: n.number = to_double(e.value()); return n;
      case ExprKind::boolean: n.truth = e.truth(); return n;
      case ExprKind::variable: {
        auto it = index_.find(e.name());
        if (it == index_.end()) throw SimulationError("unknown variable '" + e.name() + "'");
        n.var = it->second;
        return n;
      }
      case ExprKind::location: throw SimulationError("loc() is only allowed as loc() == <name>");
      case ExprKind::apply: break;
    }
    n.op = e.op();
    const auto& ops = e.operands();
    if (e.op() == Op::equal && ha_ && ops.size() == 2) {
      for (int side = 0; side < 2; ++side) {
        const Expr& l = ops[static_cast<std::size_t>(side)];
        const Expr& r = ops[static_cast<std::size_t>(1 - side)];
        if (l.kind() == ExprKind::location && r.is_variable()) {
          n.location_test = true;
          const ha::Location* loc = ha_->find_by_name(r.name());
          n.location = loc ? loc->id : -1;
          return n;
        }
      }
    }
    for (const Expr& o : ops) n.kids.push_back(compile(o));
    return n;
  }

 private:
  std::map<std::string, int> index_;
  const HybridAutomaton* ha_;
};

double value(const Node& n, const Valuation& v) {
  switch (n.kind) {
    case ExprKind::number: return n.number;
    case ExprKind::variable: return v[static_cast<std::size_t>(n.var)];
    case ExprKind::boolean: return n.truth ? 1 : 0;
    case ExprKind::location: return 0;
    case ExprKind::apply: break;
  }
  switch (n.op) {
    case Op::negate: return -value(n.kids[0], v);
    case Op::add: return value(n.kids[0], v) + value(n.kids[1], v);
    case Op::subtract: return value(n.kids[0], v) - value(n.kids[1], v);
    case Op::multiply: return value(n.kids[0], v) * value(n.kids[1], v);
    case Op::divide: return value(n.kids[0], v) / value(n.kids[1], v);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

// Per-comparison tolerance: `fixed` when set, otherwise dt times the
// rate of change of (lhs - rhs) along the flow, at least dt. `shifted` is
// the valuation one Euler step of length dt ahead.
struct Tolerance {
  const Valuation* shifted = nullptr;
  double dt = 0;
  std::optional<double> fixed;
  bool relax_inequalities = false;

  double of(const Node& cmp, double d) const {
    if (fixed) return *fixed;
    if (!shifted) return dt;
    const double later = value(cmp.kids[0], *shifted) - value(cmp.kids[1], *shifted);
    const double rate = std::fabs(later - d) / dt;
    return dt * (std::isfinite(rate) ? std::max(1.0, rate) : 1.0);
  }
};

// Exact evaluation up to kTiny; used for localization and predicates.
const Tolerance kExact{nullptr, 0, kTiny, false};

bool holds(const Node& n, const Valuation& v, const Tolerance& tol, LocationId location = -1) {
  if (n.kind == ExprKind::boolean) return n.truth;
  if (n.kind != ExprKind::apply) return value(n, v) != 0;
  if (n.location_test) return n.location == location && location >= 0;
  switch (n.op) {
    case Op::logical_not: return !holds(n.kids[0], v, tol, location);
    case Op::logical_and:
      for (const Node& k : n.kids) {
        if (!holds(k, v, tol, location)) return false;
      }
      return true;
    case Op::logical_or:
      for (const Node& k : n.kids) {
        if (holds(k, v, tol, location)) return true;
      }
      return false;
    default: break;
  }
  const double d = value(n.kids[0], v) - value(n.kids[1], v);
  const double eps = tol.of(n, d);
  const double slack = tol.relax_inequalities ? eps : 0;
  switch (n.op) {
    case Op::less: return d < slack;
    case Op::less_equal: return d <= slack;
    case Op::greater: return d > -slack;
    case Op::greater_equal: return d >= -slack;
    case Op::equal: return std::fabs(d) <= eps;
    case Op::not_equal: return std::fabs(d) > eps;
    default: return false;
  }
}

// A guard split for event localization: equality conjuncts as differences
// (met when they change sign), everything else as boolean tests.
struct Guard {
  Node full;
  std::vector<Node> differences;
  std::vector<Node> tests;
};

struct Edge {
  std::size_t index = 0;
  LocationId target = 0;
  Guard guard;
  std::vector<std::pair<int, Node>> assignments;
};

struct Place {
  bool urgent = false;
  std::vector<Node> flows;  // per variable
  Node invariant;
  std::vector<Edge> edges;
};

class Machine {
 public:
  Machine(const HybridAutomaton& ha, const Options& options)
      : ha_(ha), options_(options), rng_(options.seed) {
    if (!(options.dt > 0)) throw SimulationError("dt must be positive");
    if (!(options.horizon >= 0)) throw SimulationError("horizon must be non-negative");
    trace_.variables.assign(ha.variables.begin(), ha.variables.end());
    const Compiler compiler(trace_.variables, nullptr);
    for (const ha::Location& l : ha.locations) {
      Place p;
      p.urgent = l.urgent;
      p.invariant = compiler.compile(l.invariant);
      for (const std::string& v : trace_.variables) {
        auto it = l.flows.find(v);
        p.flows.push_back(compiler.compile(it == l.flows.end() || l.urgent
                                               ? Expr::number(Rational(0))
                                               : it->second));
      }
      places_.emplace(l.id, std::move(p));
    }
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < trace_.variables.size(); ++i) {
      index[trace_.variables[i]] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < ha.transitions.size(); ++i) {
      const ha::Transition& t = ha.transitions[i];
      Edge e;
      e.index = i;
      e.target = t.target;
      e.guard.full = compiler.compile(t.guard);
      for (const Expr& c : conjuncts(normalize(t.guard))) {
        if (c.kind() == ExprKind::apply && c.op() == Op::equal) {
          e.guard.differences.push_back(compiler.compile(
              Expr::binary(Op::subtract, c.operands()[0], c.operands()[1])));
        } else {
          e.guard.tests.push_back(compiler.compile(c));
        }
      }
      for (const ha::Assignment& a : t.assignments) {
        auto it = index.find(a.var);
        if (it == index.end()) throw SimulationError("assignment to unknown variable " + a.var);
        e.assignments.emplace_back(it->second, compiler.compile(a.value));
      }
      places_.at(t.source).edges.push_back(std::move(e));
    }
  }

  Trace run() {
    location_ = ha_.initial_location;
    values_.assign(trace_.variables.size(), 0.0);
    double t = 0;
    if (!place().urgent) trace_.visits.emplace_back(0.0, location_);
    if (!settle(t)) return finish(t);
    record(t);
    const double end = options_.horizon;
    while (t < end - 1e-12) {
      const double h = std::min(options_.dt, end - t);
      const Valuation next = rk4(values_, h);
      double tau = 0;
      if (locate(values_, next, h, tau)) {
        const Valuation before = values_;
        values_ = tau == h ? next : rk4(values_, tau);
        const std::vector<const Edge*> enabled = enabled_edges();
        if (!enabled.empty()) {
          t += tau;
          take(*choose(enabled), t);
          if (!settle(t)) return finish(t);
          record(t);
          continue;
        }
        values_ = before;
      }
      const Valuation ahead = euler(next);
      if (!holds(place().invariant, next, tolerance(&ahead, true))) {
        values_ = next;
        t += h;
        record(t);
        trace_.status = Status::invariant_violation;
        trace_.message = "invariant of " + ha_.location(location_).name + " violated at t=" +
                         std::to_string(t);
        return finish(t);
      }
      values_ = next;
      t += h;
      record(t);
    }
    return finish(t);
  }

 private:
  const Place& place() const { return places_.at(location_); }

  Valuation derivative(const Valuation& v) const {
    Valuation d(v.size());
    const Place& p = place();
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = value(p.flows[i], v);
    return d;
  }

  Valuation rk4(const Valuation& v, double h) const {
    const std::size_t n = v.size();
    auto offset = [&](const Valuation& k, double scale) {
      Valuation out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = v[i] + scale * k[i];
      return out;
    };
    const Valuation k1 = derivative(v);
    const Valuation k2 = derivative(offset(k1, h / 2));
    const Valuation k3 = derivative(offset(k2, h / 2));
    const Valuation k4 = derivative(offset(k3, h));
    Valuation out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return out;
  }

  Valuation euler(const Valuation& v) const {
    Valuation out = derivative(v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] + options_.dt * out[i];
    return out;
  }

  Tolerance tolerance(const Valuation* ahead, bool relax) const {
    return Tolerance{ahead, options_.dt, options_.guard_tolerance, relax};
  }

  // Whether every conjunct of the guard has been met somewhere in (0, tau].
  static bool reached(const Guard& g, const Valuation& from, const Valuation& at) {
    for (const Node& d : g.differences) {
      const double a = value(d, from);
      const double b = value(d, at);
      if (!(std::fabs(b) <= kTiny || std::fabs(a) <= kTiny || (a < 0) != (b < 0))) return false;
    }
    for (const Node& test : g.tests) {
      if (!holds(test, at, kExact)) return false;
    }
    return true;
  }

  // Earliest time within the step at which some guard becomes enabled.
  bool locate(const Valuation& from, const Valuation& to, double h, double& tau) const {
    bool found = false;
    tau = h;
    for (const Edge& e : place().edges) {
      if (!reached(e.guard, from, to)) continue;
      double lo = 0;
      double hi = h;
      while (hi - lo > options_.dt / 100) {
        const double mid = (lo + hi) / 2;
        if (reached(e.guard, from, rk4(from, mid))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const Valuation at = hi == h ? to : rk4(from, hi);
      const Valuation ahead = euler(at);
      if (!holds(e.guard.full, at, tolerance(&ahead, false))) continue;
      if (!found || hi < tau) tau = hi;
      found = true;
    }
    return found;
  }

  std::vector<const Edge*> enabled_edges() const {
    std::vector<const Edge*> out;
    const Valuation ahead = euler(values_);
    const Tolerance tol = tolerance(&ahead, false);
    for (const Edge& e : place().edges) {
      if (holds(e.guard.full, values_, tol)) out.push_back(&e);
    }
    return out;
  }

  const Edge* choose(const std::vector<const Edge*>& enabled) {
    const bool random = options_.policy == Policy::random ||
                        (options_.policy == Policy::urgent_asap && !place().urgent);
    if (!random || enabled.size() == 1) return enabled.front();
    std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
    return enabled[pick(rng_)];
  }

  void take(const Edge& e, double t) {
    Valuation next = values_;
    for (const auto& [var, expr] : e.assignments) next[static_cast<std::size_t>(var)] = value(expr, values_);
    values_ = std::move(next);
    location_ = e.target;
    trace_.taken.push_back({t, e.index});
    if (!place().urgent) trace_.visits.emplace_back(t, location_);
  }

  // Takes enabled edges until a non-urgent location without enabled edges.
  bool settle(double t) {
    for (std::size_t count = 0;; ++count) {
      const std::vector<const Edge*> enabled = enabled_edges();
      if (enabled.empty()) {
        if (!place().urgent) return true;
        trace_.status = Status::deadlock;
        trace_.message = "no enabled edge in urgent location " + ha_.location(location_).name;
        return false;
      }
      if (count >= options_.max_zero_time_edges) {
        trace_.status = Status::zeno;
        trace_.message = "too many zero-time edges at t=" + std::to_string(t);
        return false;
      }
      take(*choose(enabled), t);
    }
  }

  void record(double t) { trace_.samples.push_back({t, location_, values_}); }

  Trace finish(double t) {
    if (trace_.samples.empty() || trace_.samples.back().time != t) record(t);
    return std::move(trace_);
  }

  const HybridAutomaton& ha_;
  Options options_;
  std::mt19937_64 rng_;
  std::map<LocationId, Place> places_;
  Trace trace_;
  LocationId location_ = 0;
  Valuation values_;
};

}  // namespace

const char* to_string(Policy p) {
  switch (p) {
    case Policy::first: return "first";
    case Policy::random: return "random";
    case Policy::urgent_asap: return "urgent-asap";
  }
  return "first";
}

std::optional<Policy> policy_from_string(const std::string& text) {
  for (Policy p : {Policy::first, Policy::random, Policy::urgent_asap}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::completed: return "completed";
    case Status::invariant_violation: return "invariant-violation";
    case Status::deadlock: return "deadlock";
    case Status::zeno: return "zeno";
  }
  return "completed";
}

Trace simulate(const HybridAutomaton& ha, const Options& options) {
  return Machine(ha, options).run();
}

Verdict check_forbidden(const HybridAutomaton& ha, const Trace& trace, const Expr& predicate) {
  const Compiler compiler(trace.variables, &ha);
  const Node p = compiler.compile(normalize(predicate));
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const Sample& s = trace.samples[i];
    if (holds(p, s.values, Tolerance{nullptr, 0, 0.0, false}, s.location)) return {false, i};
  }
  return {};
}

EquivalenceReport equivalence_check(const HybridAutomaton& full, const HybridAutomaton& reduced,
                                    const Options& options) {
  EquivalenceReport report;
  report.full = simulate(full, options);
  report.reduced = simulate(reduced, options);
  for (const auto& [t, id] : report.full.visits) report.full_locations.push_back(id);
  for (const auto& [t, id] : report.reduced.visits) {
    if (full.index_of(id) != HybridAutomaton::npos) report.reduced_locations.push_back(id);
  }
  report.same_locations = report.full_locations == report.reduced_locations;
  const auto& a = report.full.samples;
  const auto& b = report.reduced.samples;
  report.same_sample_times = a.size() == b.size();
  std::vector<std::size_t> map_b;
  for (const std::string& v : report.full.variables) {
    auto it = std::find(report.reduced.variables.begin(), report.reduced.variables.end(), v);
    map_b.push_back(static_cast<std::size_t>(it - report.reduced.variables.begin()));
  }
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::fabs(a[i].time - b[i].time) > 1e-9) report.same_sample_times = false;
    for (std::size_t k = 0; k < map_b.size(); ++k) {
      const double other = map_b[k] < b[i].values.size()
                               ? b[i].values[map_b[k]]
                               : std::numeric_limits<double>::infinity();
      const double d = std::fabs(a[i].values[k] - other);
      report.max_deviation = std::max(report.max_deviation, std::isnan(d) ? HUGE_VAL : d);
    }
  }
  return report;
}

std::string to_csv(const HybridAutomaton& ha, const Trace& trace) {
  std::string out = "time,location";
  for (const std::string& v : trace.variables) out += "," + v;
  out += "\n";
  char buffer[64];
  for (const Sample& s : trace.samples) {
    std::snprintf(buffer, sizeof buffer, "%.9g", s.time);
    out += buffer;
    out += "," + ha.location(s.location).name;
    for (double v : s.values) {
      std::snprintf(buffer, sizeof buffer, ",%.9g", v);
      out += buffer;
    }
    out += "\n";
  }
  return out;
}

}  // namespace hrbc::sim
