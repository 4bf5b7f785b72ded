#include "hrbc/ha/automaton.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hrbc::ha {
namespace {

bool mentions_location(const Expr& e) {
  if (e.kind() == ExprKind::location) return true;
  if (e.kind() != ExprKind::apply) return false;
  return std::any_of(e.operands().begin(), e.operands().end(), mentions_location);
}

}  // namespace

const char* to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::plain: return "plain";
    case TransitionKind::message: return "message";
    case TransitionKind::statement: return "statement";
    case TransitionKind::network: return "network";
    case TransitionKind::nonurgent: return "nonurgent";
    case TransitionKind::composed: return "composed";
  }
  return "plain";
}

std::optional<TransitionKind> transition_kind_from_string(const std::string& text) {
  for (TransitionKind kind : {TransitionKind::plain, TransitionKind::message,
                              TransitionKind::statement, TransitionKind::network,
                              TransitionKind::nonurgent, TransitionKind::composed}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::size_t HybridAutomaton::index_of(LocationId id) const {
  auto it = std::lower_bound(locations.begin(), locations.end(), id,
                             [](const Location& l, LocationId v) { return l.id < v; });
  if (it == locations.end() || it->id != id) return npos;
  return static_cast<std::size_t>(it - locations.begin());
}

const Location& HybridAutomaton::location(LocationId id) const {
  const std::size_t i = index_of(id);
  if (i == npos) throw std::out_of_range("no location with id " + std::to_string(id));
  return locations[i];
}

const Location* HybridAutomaton::find_by_name(const std::string& name) const {
  for (const Location& l : locations) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

HybridAutomaton build(std::vector<Location> locations, std::vector<Transition> transitions,
                      std::set<std::string> variables, std::map<LocationId, Expr> init,
                      LocationId initial_location) {
  std::sort(locations.begin(), locations.end(),
            [](const Location& a, const Location& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < locations.size(); ++i) {
    if (locations[i].id == locations[i - 1].id) {
      throw std::invalid_argument("duplicate location id " + std::to_string(locations[i].id));
    }
  }
  HybridAutomaton ha;
  ha.locations = std::move(locations);
  ha.variables = std::move(variables);
  ha.init = std::move(init);
  ha.initial_location = initial_location;
  for (const Transition& t : transitions) {
    if (ha.index_of(t.source) == HybridAutomaton::npos ||
        ha.index_of(t.target) == HybridAutomaton::npos) {
      throw std::invalid_argument("dangling transition " + std::to_string(t.source) + " -> " +
                                  std::to_string(t.target));
    }
  }
  ha.transitions = std::move(transitions);
  if (ha.index_of(initial_location) == HybridAutomaton::npos) {
    throw std::invalid_argument("unknown initial location " + std::to_string(initial_location));
  }
  for (const auto& [id, condition] : ha.init) {
    if (ha.index_of(id) == HybridAutomaton::npos) {
      throw std::invalid_argument("init condition for unknown location " + std::to_string(id));
    }
  }
  return ha;
}

std::vector<std::string> validate(const HybridAutomaton& ha) {
  std::vector<std::string> out;
  auto report = [&](std::string message) {
    if (std::find(out.begin(), out.end(), message) == out.end()) out.push_back(std::move(message));
  };
  auto check_expr = [&](const Expr& e) {
    for (const std::string& v : variables_of(e)) {
      if (!ha.variables.count(v)) report("unknown variable: " + v);
    }
    if (mentions_location(e)) report("loc() inside an automaton expression");
  };
  for (std::size_t i = 1; i < ha.locations.size(); ++i) {
    if (ha.locations[i].id <= ha.locations[i - 1].id) {
      report("locations not sorted by unique id at " + std::to_string(ha.locations[i].id));
    }
  }
  for (const Location& l : ha.locations) {
    if (!l.urgent) {
      for (const std::string& v : ha.variables) {
        if (!l.flows.count(v)) report("missing flow: " + v);
      }
    }
    for (const auto& [var, rate] : l.flows) {
      if (!ha.variables.count(var)) report("unknown variable: " + var);
      check_expr(rate);
    }
    check_expr(l.invariant);
  }
  for (const Transition& t : ha.transitions) {
    if (ha.index_of(t.source) == HybridAutomaton::npos) {
      report("dangling transition source " + std::to_string(t.source));
    }
    if (ha.index_of(t.target) == HybridAutomaton::npos) {
      report("dangling transition target " + std::to_string(t.target));
    }
    check_expr(t.guard);
    std::set<std::string> assigned;
    for (const Assignment& a : t.assignments) {
      if (!ha.variables.count(a.var)) report("unknown variable: " + a.var);
      if (!assigned.insert(a.var).second) report("variable assigned twice in one transition: " + a.var);
      check_expr(a.value);
    }
  }
  if (ha.index_of(ha.initial_location) == HybridAutomaton::npos) {
    report("unknown initial location " + std::to_string(ha.initial_location));
  }
  for (const auto& [id, condition] : ha.init) {
    if (ha.index_of(id) == HybridAutomaton::npos) {
      report("init condition for unknown location " + std::to_string(id));
    }
    check_expr(condition);
  }
  return out;
}

Stats stats(const HybridAutomaton& ha) {
  Stats s;
  s.locations = ha.locations.size();
  s.transitions = ha.transitions.size();
  s.urgent = static_cast<std::size_t>(
      std::count_if(ha.locations.begin(), ha.locations.end(), [](const Location& l) {
        return l.urgent;
      }));
  return s;
}

std::string to_string(const Stats& s) {
  return "locations=" + std::to_string(s.locations) + " transitions=" +
         std::to_string(s.transitions) + " urgent=" + std::to_string(s.urgent);
}

}  // namespace hrbc::ha
