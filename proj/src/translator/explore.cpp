#include <algorithm>
#include <unordered_map>

#include "hrbc/translator/translator.hpp"

namespace hrbc::translator {
namespace {

bool same_successors(const Semantics& sem, const std::vector<Successor>& a,
                     const std::vector<Successor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].guard == b[i].guard) || a[i].assignments != b[i].assignments ||
        sem.encode(a[i].next) != sem.encode(b[i].next)) {
      return false;
    }
  }
  return true;
}

bool is_pool_variable(const std::string& name) {
  auto numbered = [&](const std::string& prefix) {
    return name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
           std::all_of(name.begin() + static_cast<std::ptrdiff_t>(prefix.size()), name.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  return numbered("timer") || numbered("arg");
}

// Finds a cycle among urgent locations; returns it as a closed id sequence.
std::vector<int> urgent_cycle(const std::vector<bool>& urgent,
                              const std::vector<std::vector<int>>& edges) {
  const std::size_t n = urgent.size();
  std::vector<int> color(n, 0);
  std::vector<int> parent(n, -1);
  for (std::size_t start = 0; start < n; ++start) {
    if (!urgent[start] || color[start] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(start), 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = edges[static_cast<std::size_t>(node)];
      if (next == out.size()) {
        color[static_cast<std::size_t>(node)] = 2;
        stack.pop_back();
        continue;
      }
      const int succ = out[next++];
      if (!urgent[static_cast<std::size_t>(succ)]) continue;
      if (color[static_cast<std::size_t>(succ)] == 1) {
        std::vector<int> cycle{succ};
        for (int v = node; v != succ; v = parent[static_cast<std::size_t>(v)]) cycle.push_back(v);
        cycle.push_back(succ);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[static_cast<std::size_t>(succ)] == 0) {
        color[static_cast<std::size_t>(succ)] = 1;
        parent[static_cast<std::size_t>(succ)] = node;
        stack.push_back({succ, 0});
      }
    }
  }
  return {};
}

}  // namespace

ExploreResult explore(const frontend::CheckedModel& model, const Limits& limits,
                      const ExploreOptions& options) {
  const Semantics sem(model, limits);
  constexpr int kFault = -1;

  std::unordered_map<std::string, int> ids;
  std::vector<Configuration> configs;
  bool fault_reached = false;

  auto intern = [&](const Configuration& cfg) {
    if (cfg.fault) {
      fault_reached = true;
      return kFault;
    }
    std::string key = sem.encode(cfg);
    auto it = ids.find(key);
    if (it != ids.end()) {
      if (options.verify_merges) {
        const auto& stored = configs[static_cast<std::size_t>(it->second - 1)];
        if (!same_successors(sem, sem.successors(stored), sem.successors(cfg))) {
          throw TranslationError("configurations merged under one encoding behave differently: " +
                                 sem.describe(cfg));
        }
      }
      return it->second;
    }
    if (configs.size() >= limits.max_configs) {
      throw TranslationError("state space exceeds the cutoff of " +
                             std::to_string(limits.max_configs) + " configurations");
    }
    configs.push_back(cfg);
    const int id = static_cast<int>(configs.size());
    ids.emplace(std::move(key), id);
    return id;
  };

  std::vector<ha::Transition> transitions;
  intern(sem.initial_configuration());
  for (std::size_t next = 0; next < configs.size(); ++next) {
    const int source = static_cast<int>(next) + 1;
    std::vector<Successor> succs = sem.successors(configs[next]);
    for (Successor& s : succs) {
      ha::Transition t;
      t.source = source;
      t.target = intern(s.next);
      t.guard = std::move(s.guard);
      t.assignments = std::move(s.assignments);
      t.kind = s.kind;
      t.note = std::move(s.note);
      transitions.push_back(std::move(t));
    }
  }

  const int fault_id = static_cast<int>(configs.size()) + 1;
  if (fault_reached) {
    Configuration f;
    f.fault = true;
    configs.push_back(f);
    for (ha::Transition& t : transitions) {
      if (t.target == kFault) t.target = fault_id;
    }
  }

  std::set<std::string> variables;
  for (const std::string& v : sem.variables()) {
    if (!is_pool_variable(v)) variables.insert(v);
  }
  for (const ha::Transition& t : transitions) {
    for (const ha::Assignment& a : t.assignments) variables.insert(a.var);
  }

  std::vector<ha::Location> locations;
  std::vector<bool> urgent;
  locations.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    FlowsAndInvariant fi = sem.flows_and_invariant(configs[i]);
    ha::Location loc;
    loc.id = id;
    loc.name = sem.location_name(configs[i], id);
    loc.urgent = fi.urgent;
    if (!fi.urgent) {
      for (const std::string& v : variables) {
        auto it = fi.flows.find(v);
        loc.flows[v] = it == fi.flows.end() ? Expr::number(Rational(0)) : it->second;
      }
      loc.invariant = fi.invariant;
    }
    urgent.push_back(fi.urgent);
    locations.push_back(std::move(loc));
  }

  std::vector<std::vector<int>> edges(configs.size());
  for (const ha::Transition& t : transitions) {
    edges[static_cast<std::size_t>(t.source - 1)].push_back(t.target - 1);
  }
  const std::vector<int> cycle = urgent_cycle(urgent, edges);
  if (!cycle.empty()) {
    std::string path;
    for (int v : cycle) {
      if (!path.empty()) path += " -> ";
      path += locations[static_cast<std::size_t>(v)].name;
    }
    throw TranslationError("instantaneous cycle through urgent locations " + path + " (at " +
                           sem.describe(configs[static_cast<std::size_t>(cycle.front())]) + ")");
  }

  std::vector<Expr> zero;
  for (const std::string& v : variables) {
    zero.push_back(Expr::binary(Op::equal, Expr::variable(v), Expr::number(Rational(0))));
  }
  std::map<ha::LocationId, Expr> init{{1, conjunction(std::move(zero))}};

  ExploreResult result;
  result.ha = ha::build(std::move(locations), std::move(transitions), std::move(variables),
                        std::move(init), 1);
  result.configurations = std::move(configs);
  return result;
}

}  // namespace hrbc::translator
