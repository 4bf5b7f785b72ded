#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "hrbc/frontend/parser.hpp"
#include "hrbc/reducer/reducer.hpp"
#include "hrbc/translator/translator.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace hrbc;
using reducer::aggregate;

namespace {

Expr parsed(const std::string& text) { return normalize(frontend::parse_expression(text)); }

ha::Location calm(ha::LocationId id, const std::string& name) {
  ha::Location l;
  l.id = id;
  l.name = name;
  l.flows["x"] = Expr::number(Rational(1));
  return l;
}

ha::Location hurried(ha::LocationId id, const std::string& name) {
  ha::Location l;
  l.id = id;
  l.name = name;
  l.urgent = true;
  return l;
}

ha::Transition edge(ha::LocationId from, ha::LocationId to, const std::string& guard,
                    std::vector<ha::Assignment> assignments = {}) {
  ha::Transition t;
  t.source = from;
  t.target = to;
  t.guard = parsed(guard);
  t.assignments = std::move(assignments);
  return t;
}

std::string assignments_text(const std::vector<ha::Assignment>& as) {
  std::string out;
  for (const auto& a : as) out += a.var + ":=" + to_string(a.value) + ";";
  return out;
}

std::string edge_text(const std::string& target, const Expr& guard,
                      const std::vector<ha::Assignment>& as) {
  return target + " [" + to_string(guard) + "] " + assignments_text(as);
}

struct Expected {
  std::map<std::string, std::multiset<std::string>> direct;
  std::map<std::string, std::set<std::string>> composed;
};

/// Enumerates every urgent path explicitly and composes it by substitution.
Expected brute_force(const ha::HybridAutomaton& a) {
  Expected out;
  std::string source;
  std::function<void(const ha::Transition&, const Expr&, const std::map<std::string, Expr>&)>
      step = [&](const ha::Transition& t, const Expr& guard,
                 const std::map<std::string, Expr>& sigma) {
        Expr g = conjunction({guard, substitute(t.guard, sigma)});
        std::map<std::string, Expr> next = sigma;
        for (const auto& asg : t.assignments) next[asg.var] = substitute(asg.value, sigma);
        const ha::Location& target = a.location(t.target);
        if (target.urgent) {
          for (const auto& u : a.transitions) {
            if (u.source == t.target) step(u, g, next);
          }
          return;
        }
        g = reducer::canonical_guard(normalize(g));
        if (g.is_false()) return;
        std::vector<ha::Assignment> as;
        for (const auto& [v, e] : next) {
          const Expr value = normalize(e);
          if (!(value == Expr::variable(v))) as.push_back({v, value});
        }
        out.composed[source].insert(edge_text(target.name, g, as));
      };
  for (const auto& l : a.locations) {
    if (l.urgent) continue;
    source = l.name;
    for (const auto& t : a.transitions) {
      if (t.source != l.id) continue;
      if (a.location(t.target).urgent) {
        step(t, Expr::boolean(true), {});
      } else {
        out.direct[l.name].insert(edge_text(a.location(t.target).name, t.guard, t.assignments));
      }
    }
  }
  const ha::Location& start = a.location(a.initial_location);
  if (start.urgent) {
    source = reducer::pseudo_initial_name;
    for (const auto& t : a.transitions) {
      if (t.source == start.id) step(t, Expr::boolean(true), {});
    }
  }
  return out;
}

std::string describe(const ha::HybridAutomaton& a) {
  std::string out;
  for (const auto& l : a.locations) out += l.name + " ";
  for (const auto& t : a.transitions) {
    out += "\n" + a.location(t.source).name + " -> " +
           edge_text(a.location(t.target).name, t.guard, t.assignments);
  }
  return out;
}

Expected observed(const ha::HybridAutomaton& r) {
  Expected out;
  for (const auto& t : r.transitions) {
    const std::string source = r.location(t.source).name;
    const std::string text = edge_text(r.location(t.target).name, t.guard, t.assignments);
    if (t.kind == ha::TransitionKind::composed) {
      CHECK(out.composed[source].insert(text).second);
    } else {
      out.direct[source].insert(text);
    }
  }
  return out;
}

std::set<std::string> reachable_names(const ha::HybridAutomaton& r) {
  std::set<std::string> out;
  for (const auto& l : r.locations) out.insert(l.name);
  return out;
}

}  // namespace

TEST_CASE("composition substitutes the first assignment into the second guard") {
  // L1 --x := x + 1--> U --x == 2--> L2
  auto a = ha::build({calm(1, "L1"), hurried(2, "U"), calm(3, "L2")},
                     {edge(1, 2, "true", {{"x", parsed("x + 1")}}), edge(2, 3, "x == 2")}, {"x"},
                     {{1, parsed("x == 0")}}, 1);
  const auto r = aggregate(a);
  REQUIRE(r.transitions.size() == 1);
  const auto& t = r.transitions[0];
  CHECK(r.location(t.source).name == "L1");
  CHECK(r.location(t.target).name == "L2");
  CHECK(t.guard == reducer::canonical_guard(parsed("x + 1 == 2")));
  REQUIRE(t.assignments.size() == 1);
  CHECK(t.assignments[0].var == "x");
  CHECK(t.assignments[0].value == parsed("x + 1"));
  CHECK(t.kind == ha::TransitionKind::composed);
  CHECK(r.locations.size() == 2);
}

TEST_CASE("compose") {
  reducer::Effect first{parsed("x >= 1"), {{"x", parsed("x + 1")}, {"y", parsed("x")}}};
  reducer::Effect second{parsed("y == 3"), {{"x", parsed("y * 2")}}};
  const auto c = reducer::compose(first, second);
  CHECK(c.guard == reducer::canonical_guard(parsed("x >= 1 && x == 3")));
  REQUIRE(c.assignments.size() == 2);
  CHECK(c.assignments[0].var == "x");
  CHECK(c.assignments[0].value == parsed("x * 2"));
  CHECK(c.assignments[1].var == "y");
  CHECK(c.assignments[1].value == parsed("x"));

  reducer::Effect swap{parsed("true"), {{"x", parsed("y")}, {"y", parsed("x")}}};
  const auto twice = reducer::compose(swap, swap);
  CHECK(twice.assignments.empty());
}

TEST_CASE("canonical guards ignore conjunct order and repetition") {
  CHECK(reducer::canonical_guard(parsed("x <= 1 && y == 2 && x <= 1")) ==
        reducer::canonical_guard(parsed("y == 2 && x <= 1")));
  CHECK(reducer::canonical_guard(parsed("true")).is_true());
  CHECK(reducer::canonical_guard(parsed("x < 1 && false")).is_false());
}

TEST_CASE("unsatisfiable composed guards are dropped") {
  auto a = ha::build({calm(1, "L1"), hurried(2, "U"), calm(3, "L2")},
                     {edge(1, 2, "true", {{"x", parsed("1")}}), edge(2, 3, "x == 2")}, {"x"},
                     {{1, parsed("x == 0")}}, 1);
  const auto r = aggregate(a);
  CHECK(r.transitions.empty());
  CHECK(r.locations.size() == 1);
}

TEST_CASE("an urgent initial location becomes the pseudo-initial location") {
  auto a = ha::build({hurried(1, "U"), calm(2, "L")}, {edge(1, 2, "true", {{"x", parsed("5")}})},
                     {"x"}, {{1, parsed("x == 0")}}, 1);
  const auto r = aggregate(a);
  const ha::Location& start = r.location(r.initial_location);
  CHECK(start.name == reducer::pseudo_initial_name);
  CHECK(start.id == 3);
  CHECK_FALSE(start.urgent);
  CHECK(start.flows.at("x") == Expr::number(Rational(0)));
  CHECK(r.init.count(start.id) == 1);
  CHECK(ha::validate(r).empty());
}

TEST_CASE("urgent cycles are reported as divergence") {
  auto a = ha::build({calm(1, "L"), hurried(2, "A"), hurried(3, "B")},
                     {edge(1, 2, "true"), edge(2, 3, "true"), edge(3, 2, "true")}, {"x"},
                     {{1, parsed("x == 0")}}, 1);
  try {
    aggregate(a);
    FAIL("expected divergence");
  } catch (const reducer::DivergenceError& e) {
    CHECK(std::string(e.what()).find("A -> B -> A") != std::string::npos);
    CHECK(e.cycle().size() >= 2);
  }
}

TEST_CASE("prune_unreachable") {
  auto a = ha::build({calm(1, "L1"), calm(2, "L2"), calm(3, "Lost")},
                     {edge(1, 2, "x >= 1"), edge(3, 1, "true")}, {"x"}, {{1, parsed("x == 0")}}, 1);
  const auto p = reducer::prune_unreachable(a);
  CHECK(p.locations.size() == 2);
  CHECK(p.transitions.size() == 1);
  CHECK(p.find_by_name("Lost") == nullptr);
}

TEST_CASE("heater aggregates to its two modes") {
  const auto full = translator::explore(support::checked_fixture("heater"), {}).ha;
  const auto r = aggregate(full);
  CHECK(r.locations.size() == 3);
  CHECK(ha::stats(r).urgent == 0);
  CHECK(r.location(r.initial_location).name == reducer::pseudo_initial_name);
  CHECK(r.transitions.size() == 3);
  CHECK(ha::validate(r).empty());
  for (const auto& t : r.transitions) {
    const std::string from = r.location(t.source).name;
    const std::string to = r.location(t.target).name;
    if (from == reducer::pseudo_initial_name) {
      CHECK(to.find("Off") != std::string::npos);
      REQUIRE(t.assignments.size() == 1);
      CHECK(t.assignments[0].value == Expr::number(Rational(20)));
    } else if (from.find("Off") != std::string::npos) {
      CHECK(t.guard == parsed("heater_t == 18"));
    } else {
      CHECK(t.guard == parsed("heater_t == 22"));
    }
  }
}

TEST_CASE("aggregation is idempotent") {
  for (const std::string name : {"heater", "delay_tank"}) {
    CAPTURE(name);
    const auto r = aggregate(translator::explore(support::checked_fixture(name), {}).ha);
    CHECK(aggregate(r) == r);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto r = aggregate(support::random_automaton(rng, support::pick(rng, 2, 9), i % 2 == 0));
    CHECK(aggregate(r) == r);
  }
}

TEST_CASE("aggregated edges match brute-force path enumeration") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 150; ++round) {
    const auto a = support::random_automaton(rng, support::pick(rng, 2, 9), round % 3 == 0);
    CAPTURE(describe(a));
    const auto r = aggregate(a);
    CHECK(ha::validate(r).empty());
    CHECK(ha::stats(r).urgent == 0);
    const Expected want = brute_force(a);
    const Expected got = observed(r);
    for (const auto& l : r.locations) {
      CAPTURE(l.name);
      auto dw = want.direct.find(l.name);
      auto dg = got.direct.find(l.name);
      CHECK((dw == want.direct.end() ? std::multiset<std::string>{} : dw->second) ==
            (dg == got.direct.end() ? std::multiset<std::string>{} : dg->second));
      auto cw = want.composed.find(l.name);
      auto cg = got.composed.find(l.name);
      CHECK((cw == want.composed.end() ? std::set<std::string>{} : cw->second) ==
            (cg == got.composed.end() ? std::set<std::string>{} : cg->second));
    }
    std::set<std::string> reach{r.location(r.initial_location).name};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& [source, edges] : want.direct) {
        if (!reach.count(source)) continue;
        for (const auto& e : edges) grew = reach.insert(e.substr(0, e.find(' '))).second || grew;
      }
      for (const auto& [source, edges] : want.composed) {
        if (!reach.count(source)) continue;
        for (const auto& e : edges) grew = reach.insert(e.substr(0, e.find(' '))).second || grew;
      }
    }
    CHECK(reachable_names(r) == reach);
  }
}
