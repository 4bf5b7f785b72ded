#include "doctest.h"
#include "hrbc/frontend/parser.hpp"
#include "hrbc/ha/automaton.hpp"

using namespace hrbc;

namespace {

Expr parsed(const std::string& text) { return normalize(frontend::parse_expression(text)); }

ha::Location calm(ha::LocationId id) {
  ha::Location l;
  l.id = id;
  l.name = "l" + std::to_string(id);
  l.flows["x"] = Expr::number(Rational(1));
  return l;
}

ha::Transition edge(ha::LocationId from, ha::LocationId to) {
  ha::Transition t;
  t.source = from;
  t.target = to;
  return t;
}

bool reports(const std::vector<std::string>& problems, const std::string& needle) {
  for (const auto& p : problems) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("build sorts locations and rejects broken references") {
  const auto a = ha::build({calm(3), calm(1)}, {edge(1, 3)}, {"x"}, {{1, parsed("x == 0")}}, 1);
  CHECK(a.locations[0].id == 1);
  CHECK(a.locations[1].id == 3);
  CHECK(a.index_of(3) == 1);
  CHECK(a.index_of(2) == ha::HybridAutomaton::npos);
  CHECK(a.find_by_name("l3") == &a.locations[1]);
  CHECK(a.find_by_name("l2") == nullptr);
  CHECK(ha::validate(a).empty());

  CHECK_THROWS_AS(ha::build({calm(1), calm(1)}, {}, {"x"}, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(ha::build({calm(1)}, {edge(1, 2)}, {"x"}, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(ha::build({calm(1)}, {}, {"x"}, {}, 4), std::invalid_argument);
  CHECK_THROWS_AS(ha::build({calm(1)}, {}, {"x"}, {{5, parsed("true")}}, 1),
                  std::invalid_argument);
}

TEST_CASE("validate reports well-formedness problems") {
  auto a = ha::build({calm(1), calm(2)}, {edge(1, 2)}, {"x", "y"}, {{1, parsed("x == 0")}}, 1);
  CHECK(reports(ha::validate(a), "missing flow: y"));

  a.locations[0].flows["y"] = Expr::number(Rational(0));
  a.locations[1].flows["y"] = Expr::number(Rational(0));
  CHECK(ha::validate(a).empty());

  a.transitions[0].guard = parsed("z > 1");
  CHECK(reports(ha::validate(a), "unknown variable: z"));
  a.transitions[0].guard = Expr::boolean(true);

  a.transitions[0].assignments = {{"x", parsed("1")}, {"x", parsed("2")}};
  CHECK(reports(ha::validate(a), "assigned twice"));
  a.transitions[0].assignments.clear();

  a.locations[1].invariant = frontend::parse_expression("loc() == l1");
  CHECK(reports(ha::validate(a), "loc()"));
  a.locations[1].invariant = Expr::boolean(true);

  a.transitions.push_back(edge(1, 9));
  CHECK(reports(ha::validate(a), "dangling"));
  a.transitions.pop_back();

  a.locations[1].urgent = true;
  a.locations[1].flows.clear();
  CHECK(ha::validate(a).empty());
}

TEST_CASE("statistics") {
  auto a = ha::build({calm(1), calm(2), calm(3)}, {edge(1, 2), edge(2, 3), edge(3, 1)}, {"x"},
                     {{1, parsed("x == 0")}}, 1);
  a.locations[1].urgent = true;
  const auto s = ha::stats(a);
  CHECK(s == ha::Stats{3, 3, 1});
  CHECK(ha::to_string(s) == "locations=3 transitions=3 urgent=1");
}

TEST_CASE("transition kinds round-trip through their names") {
  for (auto k : {ha::TransitionKind::plain, ha::TransitionKind::message,
                 ha::TransitionKind::statement, ha::TransitionKind::network,
                 ha::TransitionKind::nonurgent, ha::TransitionKind::composed}) {
    CHECK(ha::transition_kind_from_string(ha::to_string(k)) == k);
  }
  CHECK_FALSE(ha::transition_kind_from_string("teleport").has_value());
}
