#include "hrbc/reducer/reducer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace hrbc::reducer {

using ha::Assignment;
using ha::HybridAutomaton;
using ha::Location;
using ha::LocationId;
using ha::Transition;

DivergenceError::DivergenceError(const std::string& message, std::vector<LocationId> cycle)
    : std::runtime_error(message), cycle_(std::move(cycle)) {}

namespace {

std::map<std::string, Expr> as_map(const std::vector<Assignment>& assignments) {
  std::map<std::string, Expr> out;
  for (const Assignment& a : assignments) out[a.var] = a.value;
  return out;
}

std::vector<Assignment> as_list(const std::map<std::string, Expr>& map) {
  std::vector<Assignment> out;
  for (const auto& [var, value] : map) {
    if (value.is_variable() && value.name() == var) continue;
    out.push_back({var, value});
  }
  return out;
}

struct Summary {
  Effect effect;
  LocationId target = 0;
  std::string note;
  ha::TransitionKind kind = ha::TransitionKind::composed;
};

std::string key_of(const Summary& s) {
  std::string key = std::to_string(s.target) + '|' + to_string(s.effect.guard) + '|';
  for (const Assignment& a : s.effect.assignments) key += a.var + ":=" + to_string(a.value) + ';';
  return key + '|' + s.note;
}

std::vector<LocationId> find_urgent_cycle(const HybridAutomaton& ha,
                                          const std::vector<std::vector<std::size_t>>& out) {
  const std::size_t n = ha.locations.size();
  std::vector<int> color(n, 0);
  std::vector<std::size_t> parent(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (!ha.locations[start].urgent || color[start] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == out[node].size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t succ = ha.index_of(ha.transitions[out[node][next++]].target);
      if (!ha.locations[succ].urgent) continue;
      if (color[succ] == 1) {
        std::vector<LocationId> cycle{ha.locations[succ].id};
        for (std::size_t v = node; v != succ; v = parent[v]) cycle.push_back(ha.locations[v].id);
        cycle.push_back(ha.locations[succ].id);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[succ] == 0) {
        color[succ] = 1;
        parent[succ] = node;
        stack.push_back({succ, 0});
      }
    }
  }
  return {};
}

}  // namespace

Expr canonical_guard(const Expr& guard) {
  const Expr g = normalize(guard);
  if (g.is_boolean()) return g;
  std::vector<Expr> parts = conjuncts(g);
  std::vector<std::pair<std::string, Expr>> keyed;
  keyed.reserve(parts.size());
  for (Expr& p : parts) keyed.emplace_back(to_string(p), std::move(p));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Expr> sorted;
  for (auto& [key, e] : keyed) sorted.push_back(std::move(e));
  return conjunction(std::move(sorted));
}

Effect compose(const Effect& first, const Effect& second) {
  const std::map<std::string, Expr> before = as_map(first.assignments);
  Effect out;
  out.guard = canonical_guard(
      conjunction({first.guard, substitute(second.guard, before)}));
  std::map<std::string, Expr> after = before;
  for (const Assignment& a : second.assignments) {
    after[a.var] = normalize(substitute(a.value, before));
  }
  out.assignments = as_list(after);
  return out;
}

HybridAutomaton aggregate(const HybridAutomaton& ha) {
  const std::size_t n = ha.locations.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < ha.transitions.size(); ++i) {
    out[ha.index_of(ha.transitions[i].source)].push_back(i);
  }
  const std::vector<LocationId> cycle = find_urgent_cycle(ha, out);
  if (!cycle.empty()) {
    std::string path;
    for (LocationId id : cycle) {
      if (!path.empty()) path += " -> ";
      path += ha.location(id).name;
    }
    throw DivergenceError("instantaneous divergence: urgent cycle " + path, cycle);
  }

  // Suffix summaries of every urgent location, computed in reverse
  // topological order of the (acyclic) urgent subgraph.
  std::vector<std::vector<Summary>> summaries(n);
  std::vector<bool> done(n, false);
  auto summarize = [&](std::size_t root) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < out[node].size()) {
        const std::size_t succ = ha.index_of(ha.transitions[out[node][next++]].target);
        if (ha.locations[succ].urgent && !done[succ]) stack.push_back({succ, 0});
        continue;
      }
      std::vector<Summary> result;
      std::unordered_set<std::string> seen;
      for (std::size_t ti : out[node]) {
        const Transition& t = ha.transitions[ti];
        const Effect step{t.guard, as_list(as_map(t.assignments))};
        const std::size_t succ = ha.index_of(t.target);
        auto add = [&](Summary s) {
          if (s.effect.guard.is_false()) return;
          if (seen.insert(key_of(s)).second) result.push_back(std::move(s));
        };
        if (!ha.locations[succ].urgent) {
          add({compose(step, Effect{Expr(), {}}), t.target, t.note});
          continue;
        }
        for (const Summary& s : summaries[succ]) {
          add({compose(step, s.effect), s.target, s.note});
        }
      }
      summaries[node] = std::move(result);
      done[node] = true;
      stack.pop_back();
    }
  };

  std::vector<Location> locations;
  std::vector<Transition> transitions;
  std::map<LocationId, Expr> init;
  LocationId start = ha.initial_location;
  const std::size_t initial_index = ha.index_of(ha.initial_location);
  LocationId pseudo = 0;
  if (ha.locations[initial_index].urgent) {
    LocationId max_id = 0;
    for (const Location& l : ha.locations) max_id = std::max(max_id, l.id);
    pseudo = max_id + 1;
    start = pseudo;
  }
  auto init_of = [&](LocationId id) {
    auto it = ha.init.find(id);
    return it == ha.init.end() ? Expr() : it->second;
  };

  std::set<LocationId> visited{start};
  std::deque<LocationId> frontier{start};
  std::map<LocationId, std::vector<Transition>> edges;
  while (!frontier.empty()) {
    const LocationId id = frontier.front();
    frontier.pop_front();
    std::vector<Transition>& mine = edges[id];
    std::set<std::string> seen;
    auto emit_composed = [&](LocationId source, std::size_t urgent_index, const Effect& prefix) {
      if (!done[urgent_index]) summarize(urgent_index);
      for (const Summary& s : summaries[urgent_index]) {
        Summary full{compose(prefix, s.effect), s.target, s.note};
        if (full.effect.guard.is_false() || !seen.insert(key_of(full)).second) continue;
        Transition t;
        t.source = source;
        t.target = s.target;
        t.guard = full.effect.guard;
        t.assignments = full.effect.assignments;
        t.kind = ha::TransitionKind::composed;
        t.note = s.note;
        mine.push_back(std::move(t));
      }
    };
    if (id == pseudo) {
      emit_composed(id, initial_index, Effect{Expr(), {}});
    } else {
      for (std::size_t ti : out[ha.index_of(id)]) {
        const Transition& t = ha.transitions[ti];
        const std::size_t succ = ha.index_of(t.target);
        if (!ha.locations[succ].urgent) {
          mine.push_back(t);
          continue;
        }
        emit_composed(id, succ, Effect{t.guard, as_list(as_map(t.assignments))});
      }
    }
    for (const Transition& t : mine) {
      if (visited.insert(t.target).second) frontier.push_back(t.target);
    }
  }

  for (LocationId id : visited) {
    if (id == pseudo) {
      Location l;
      l.id = pseudo;
      l.name = pseudo_initial_name;
      for (const std::string& v : ha.variables) l.flows[v] = Expr::number(Rational(0));
      locations.push_back(std::move(l));
      init[pseudo] = init_of(ha.initial_location);
    } else {
      locations.push_back(ha.location(id));
      if (ha.init.count(id)) init[id] = ha.init.at(id);
    }
  }
  for (LocationId id : visited) {
    for (Transition& t : edges[id]) transitions.push_back(std::move(t));
  }
  return ha::build(std::move(locations), std::move(transitions), ha.variables, std::move(init),
                   start);
}

HybridAutomaton prune_unreachable(const HybridAutomaton& ha) {
  std::map<LocationId, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < ha.transitions.size(); ++i) out[ha.transitions[i].source].push_back(i);
  std::set<LocationId> reached{ha.initial_location};
  std::deque<LocationId> frontier{ha.initial_location};
  while (!frontier.empty()) {
    const LocationId id = frontier.front();
    frontier.pop_front();
    for (std::size_t ti : out[id]) {
      if (reached.insert(ha.transitions[ti].target).second) frontier.push_back(ha.transitions[ti].target);
    }
  }
  std::vector<Location> locations;
  for (const Location& l : ha.locations) {
    if (reached.count(l.id)) locations.push_back(l);
  }
  std::vector<Transition> transitions;
  for (const Transition& t : ha.transitions) {
    if (reached.count(t.source)) transitions.push_back(t);
  }
  std::map<LocationId, Expr> init;
  for (const auto& [id, e] : ha.init) {
    if (reached.count(id)) init[id] = e;
  }
  return ha::build(std::move(locations), std::move(transitions), ha.variables, std::move(init),
                   ha.initial_location);
}

}  // namespace hrbc::reducer
