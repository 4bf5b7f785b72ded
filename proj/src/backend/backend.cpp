#include "hrbc/backend/backend.hpp"

#include <functional>
#include <set>

#include <json.hpp>

#include "hrbc/diagnostics.hpp"
#include "hrbc/frontend/parser.hpp"

namespace hrbc::backend {

using ha::HybridAutomaton;
using ha::Location;
using ha::Transition;
using nlohmann::json;

namespace {

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string spaceex(const Expr& e) { return to_string(e, Dialect::spaceex); }

bool has_disjunction(const Expr& e) {
  if (e.kind() != ExprKind::apply) return false;
  if (e.op() == Op::logical_or) return true;
  for (const Expr& o : e.operands()) {
    if (has_disjunction(o)) return true;
  }
  return false;
}

class Warnings {
 public:
  void check(const Expr& e, const std::string& where) {
    for (const Expr& term : nonlinear_subterms(e)) {
      add("nonlinear expression '" + to_string(term) + "' in " + where +
          " is not supported by SpaceEx");
    }
    if (has_disjunction(e)) add("disjunction in " + where + " is not supported by SpaceEx");
  }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  void add(std::string w) {
    if (seen_.insert(w).second) list_.push_back(std::move(w));
  }
  std::vector<std::string> list_;
  std::set<std::string> seen_;
};

Expr parse_field(const json& node, const char* field) {
  const auto it = node.find(field);
  if (it == node.end()) throw BackendError(std::string("missing field '") + field + "'");
  if (!it->is_string()) throw BackendError(std::string("field '") + field + "' must be a string");
  try {
    return normalize(frontend::parse_expression(it->get<std::string>()));
  } catch (const DiagnosticError& e) {
    throw BackendError(std::string("bad expression in '") + field + "': " + e.what());
  }
}

}  // namespace

SpaceExModel emit_spaceex(const HybridAutomaton& ha, const std::string& system_name) {
  bool any_urgent = false;
  std::set<ha::LocationId> urgent;
  for (const Location& l : ha.locations) {
    if (l.urgent) urgent.insert(l.id);
  }
  any_urgent = !urgent.empty();
  if (any_urgent && ha.variables.count(urgency_variable)) {
    throw BackendError(std::string("variable name '") + urgency_variable +
                       "' is reserved for the urgency encoding");
  }

  Warnings warnings;
  std::string xml;
  xml += "<?xml version=\"1.0\" encoding=\"iso-8859-1\"?>\n";
  xml += "<sspaceex xmlns=\"http://www-verimag.imag.fr/xml-namespaces/sspaceex\" version=\"0.2\" "
         "math=\"SpaceEx\">\n";
  xml += "  <component id=\"" + escape(system_name) + "\">\n";
  auto param = [&](const std::string& name) {
    xml += "    <param name=\"" + escape(name) +
           "\" type=\"real\" local=\"false\" d1=\"1\" d2=\"1\" dynamics=\"any\" />\n";
  };
  for (const std::string& v : ha.variables) param(v);
  if (any_urgent) param(urgency_variable);
  for (const std::string& label : ha.labels) {
    xml += "    <param name=\"" + escape(label) + "\" type=\"label\" local=\"false\" />\n";
  }

  const std::string urg = urgency_variable;
  for (const Location& l : ha.locations) {
    xml += "    <location id=\"" + std::to_string(l.id) + "\" name=\"" + escape(l.name) + "\">\n";
    std::string invariant;
    std::string flow;
    auto add_flow = [&](const std::string& var, const std::string& rate) {
      if (!flow.empty()) flow += " & ";
      flow += var + "' == " + rate;
    };
    if (l.urgent) {
      invariant = urg + " <= 0";
      for (const std::string& v : ha.variables) add_flow(v, "0");
      add_flow(urg, "1");
    } else {
      warnings.check(l.invariant, "invariant of " + l.name);
      if (!l.invariant.is_true()) invariant = spaceex(l.invariant);
      for (const std::string& v : ha.variables) {
        auto it = l.flows.find(v);
        if (it == l.flows.end()) {
          add_flow(v, "0");
          continue;
        }
        warnings.check(it->second, "flow of " + v + " in " + l.name);
        add_flow(v, spaceex(it->second));
      }
      if (any_urgent) add_flow(urg, "0");
    }
    if (!invariant.empty()) xml += "      <invariant>" + escape(invariant) + "</invariant>\n";
    if (!flow.empty()) xml += "      <flow>" + escape(flow) + "</flow>\n";
    xml += "    </location>\n";
  }

  for (const Transition& t : ha.transitions) {
    xml += "    <transition source=\"" + std::to_string(t.source) + "\" target=\"" +
           std::to_string(t.target) + "\">\n";
    if (t.label) xml += "      <label>" + escape(*t.label) + "</label>\n";
    const std::string where =
        ha.location(t.source).name + " -> " + ha.location(t.target).name;
    warnings.check(t.guard, "guard of " + where);
    if (!t.guard.is_true()) xml += "      <guard>" + escape(spaceex(t.guard)) + "</guard>\n";
    std::string assignment;
    for (const ha::Assignment& a : t.assignments) {
      warnings.check(a.value, "assignment to " + a.var + " on " + where);
      if (!assignment.empty()) assignment += " & ";
      assignment += a.var + " := " + spaceex(a.value);
    }
    if (urgent.count(t.target)) {
      if (!assignment.empty()) assignment += " & ";
      assignment += urg + " := 0";
    }
    if (!assignment.empty()) {
      xml += "      <assignment>" + escape(assignment) + "</assignment>\n";
    }
    xml += "    </transition>\n";
  }
  xml += "  </component>\n</sspaceex>\n";
  return {std::move(xml), warnings.take()};
}

std::string emit_cfg(const HybridAutomaton& ha, const Expr& forbidden,
                     const std::map<std::string, std::string>& options,
                     const std::string& system_name) {
  bool any_urgent = false;
  for (const Location& l : ha.locations) any_urgent = any_urgent || l.urgent;

  // Names compared with loc() are location names; everything else must
  // be a variable.
  std::set<std::string> locations_named;
  std::function<void(const Expr&)> scan = [&](const Expr& e) {
    if (e.kind() != ExprKind::apply) return;
    if (e.op() == Op::equal && e.operands().size() == 2) {
      const Expr& a = e.operands()[0];
      const Expr& b = e.operands()[1];
      if (a.kind() == ExprKind::location && b.is_variable()) {
        locations_named.insert(b.name());
        return;
      }
      if (b.kind() == ExprKind::location && a.is_variable()) {
        locations_named.insert(a.name());
        return;
      }
    }
    for (const Expr& o : e.operands()) scan(o);
  };
  scan(forbidden);
  for (const std::string& name : locations_named) {
    if (!ha.find_by_name(name)) {
      throw BackendError("forbidden condition names unknown location '" + name + "'");
    }
  }
  std::set<std::string> vars;
  std::function<void(const Expr&)> scan_vars = [&](const Expr& e) {
    if (e.kind() != ExprKind::apply) {
      if (e.is_variable()) vars.insert(e.name());
      return;
    }
    if (e.op() == Op::equal && (e.operands()[0].kind() == ExprKind::location ||
                                e.operands()[1].kind() == ExprKind::location)) {
      return;
    }
    for (const Expr& o : e.operands()) scan_vars(o);
  };
  scan_vars(forbidden);
  for (const std::string& v : vars) {
    if (!ha.variables.count(v)) {
      throw BackendError("forbidden condition uses unknown variable '" + v + "'");
    }
  }

  const std::string loc = "loc(" + system_name + ")";
  auto render = [&](const Expr& e) {
    std::string text = spaceex(e);
    const std::string from = "loc(sys) == ";
    for (std::size_t at = text.find(from); at != std::string::npos; at = text.find(from, at)) {
      text.replace(at, from.size(), loc + "==");
      at += loc.size() + 2;
    }
    return text;
  };

  std::string initially = loc + "==" + ha.location(ha.initial_location).name;
  auto it = ha.init.find(ha.initial_location);
  if (it != ha.init.end() && !it->second.is_true()) initially += " & " + render(it->second);
  if (any_urgent) initially += std::string(" & ") + urgency_variable + " == 0";

  std::string out;
  out += "system = \"" + system_name + "\"\n";
  out += "initially = \"" + initially + "\"\n";
  out += "forbidden = \"" + render(forbidden) + "\"\n";
  std::map<std::string, std::string> all = {{"scenario", "supp"}, {"directions", "oct"}};
  for (const auto& [key, value] : options) all[key] = value;
  for (const auto& [key, value] : all) out += key + " = " + value + "\n";
  return out;
}

std::string emit_json(const HybridAutomaton& ha) {
  json root;
  root["variables"] = ha.variables;
  root["labels"] = ha.labels;
  root["initial"] = ha.initial_location;
  json init = json::array();
  for (const auto& [id, e] : ha.init) init.push_back({{"location", id}, {"condition", to_string(e)}});
  root["init"] = init;
  json locations = json::array();
  for (const Location& l : ha.locations) {
    json flows = json::object();
    for (const auto& [v, e] : l.flows) flows[v] = to_string(e);
    locations.push_back({{"id", l.id},
                         {"name", l.name},
                         {"urgent", l.urgent},
                         {"flows", flows},
                         {"invariant", to_string(l.invariant)}});
  }
  root["locations"] = locations;
  json transitions = json::array();
  for (const Transition& t : ha.transitions) {
    json assignments = json::array();
    for (const ha::Assignment& a : t.assignments) {
      assignments.push_back({{"var", a.var}, {"value", to_string(a.value)}});
    }
    json node = {{"source", t.source},
                 {"target", t.target},
                 {"guard", to_string(t.guard)},
                 {"assignments", assignments},
                 {"kind", ha::to_string(t.kind)},
                 {"note", t.note}};
    if (t.label) node["label"] = *t.label;
    transitions.push_back(std::move(node));
  }
  root["transitions"] = transitions;
  return root.dump(2) + "\n";
}

HybridAutomaton load_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed JSON: ") + e.what());
  }
  try {
    std::set<std::string> variables = root.at("variables").get<std::set<std::string>>();
    std::map<ha::LocationId, Expr> init;
    for (const json& entry : root.at("init")) {
      init[entry.at("location").get<int>()] = parse_field(entry, "condition");
    }
    std::vector<Location> locations;
    for (const json& node : root.at("locations")) {
      Location l;
      l.id = node.at("id").get<int>();
      l.name = node.at("name").get<std::string>();
      l.urgent = node.at("urgent").get<bool>();
      for (const auto& [v, e] : node.at("flows").items()) {
        json holder = {{"flow", e}};
        l.flows[v] = parse_field(holder, "flow");
      }
      l.invariant = parse_field(node, "invariant");
      locations.push_back(std::move(l));
    }
    std::vector<Transition> transitions;
    for (const json& node : root.at("transitions")) {
      Transition t;
      t.source = node.at("source").get<int>();
      t.target = node.at("target").get<int>();
      t.guard = parse_field(node, "guard");
      for (const json& a : node.at("assignments")) {
        t.assignments.push_back({a.at("var").get<std::string>(), parse_field(a, "value")});
      }
      if (node.contains("label")) t.label = node.at("label").get<std::string>();
      const auto kind = ha::transition_kind_from_string(node.value("kind", "plain"));
      if (!kind) throw BackendError("unknown transition kind '" + node.value("kind", "") + "'");
      t.kind = *kind;
      t.note = node.value("note", "");
      transitions.push_back(std::move(t));
    }
    HybridAutomaton out = ha::build(std::move(locations), std::move(transitions),
                                    std::move(variables), std::move(init),
                                    root.at("initial").get<int>());
    out.labels = root.value("labels", std::set<std::string>{});
    return out;
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed automaton: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw BackendError(std::string("inconsistent automaton: ") + e.what());
  }
}

}  // namespace hrbc::backend
