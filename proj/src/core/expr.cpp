#include "hrbc/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrbc {
namespace {

std::shared_ptr<const ExprNode> true_node() {
  static const auto node = [] {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::boolean;
    n->truth = true;
    return n;
  }();
  return node;
}

int precedence(Op op) {
  switch (op) {
    case Op::logical_or: return 1;
    case Op::logical_and: return 2;
    case Op::less:
    case Op::less_equal:
    case Op::greater:
    case Op::greater_equal:
    case Op::equal:
    case Op::not_equal: return 3;
    case Op::add:
    case Op::subtract: return 4;
    case Op::multiply:
    case Op::divide: return 5;
    case Op::negate:
    case Op::logical_not: return 6;
  }
  return 7;
}

const char* symbol(Op op, Dialect dialect) {
  switch (op) {
    case Op::negate: return "-";
    case Op::logical_not: return "!";
    case Op::add: return " + ";
    case Op::subtract: return " - ";
    case Op::multiply: return "*";
    case Op::divide: return "/";
    case Op::less: return " < ";
    case Op::less_equal: return " <= ";
    case Op::greater: return " > ";
    case Op::greater_equal: return " >= ";
    case Op::equal: return " == ";
    case Op::not_equal: return " != ";
    case Op::logical_and: return dialect == Dialect::spaceex ? " & " : " && ";
    case Op::logical_or: return dialect == Dialect::spaceex ? " | " : " || ";
  }
  return "?";
}

// `right_operand` marks positions where a leading minus sign would be read
// as part of the surrounding operator chain.
void print(const Expr& e, Dialect dialect, int parent_prec, bool right_operand, std::string& out) {
  switch (e.kind()) {
    case ExprKind::number: {
      const std::string text = format_rational(e.value());
      const bool fraction = text.find('/') != std::string::npos;
      const bool negative = e.value() < Rational(0);
      const bool wrap = (negative && right_operand) || (fraction && parent_prec >= 5);
      if (wrap) out += '(';
      out += text;
      if (wrap) out += ')';
      return;
    }
    case ExprKind::boolean: out += e.truth() ? "true" : "false"; return;
    case ExprKind::variable: out += e.name(); return;
    case ExprKind::location: out += dialect == Dialect::spaceex ? "loc(sys)" : "loc()"; return;
    case ExprKind::apply: break;
  }
  const int prec = precedence(e.op());
  const bool wrap = prec < parent_prec || (e.op() == Op::negate && right_operand);
  if (wrap) out += '(';
  const auto& ops = e.operands();
  if (ops.size() == 1) {
    out += symbol(e.op(), dialect);
    print(ops[0], dialect, prec, true, out);
  } else {
    const bool comparison = is_comparison(e.op());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i > 0) out += symbol(e.op(), dialect);
      const int child_prec = (i == 0 && !comparison) ? prec : prec + 1;
      const bool right = is_arithmetic(e.op()) && (i > 0 || (!wrap && right_operand));
      print(ops[i], dialect, child_prec, right, out);
    }
  }
  if (wrap) out += ')';
}

std::optional<Rational> fold_arithmetic(Op op, const Rational& a, const Rational& b) {
  switch (op) {
    case Op::add: return a + b;
    case Op::subtract: return a - b;
    case Op::multiply: return a * b;
    case Op::divide:
      if (b == Rational(0)) return std::nullopt;
      return a / b;
    default: return std::nullopt;
  }
}

bool fold_comparison(Op op, const Rational& a, const Rational& b) {
  switch (op) {
    case Op::less: return a < b;
    case Op::less_equal: return a <= b;
    case Op::greater: return a > b;
    case Op::greater_equal: return a >= b;
    case Op::equal: return a == b;
    case Op::not_equal: return a != b;
    default: return false;
  }
}

Expr flatten(Op op, const std::vector<Expr>& raw, SourceSpan span) {
  // op is logical_and or logical_or; `absorbing` short-circuits, `neutral` drops.
  const bool absorbing = op == Op::logical_or;
  std::vector<Expr> out;
  auto push = [&](const Expr& x) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  };
  for (const Expr& operand : raw) {
    if (operand.is_boolean()) {
      if (operand.truth() == absorbing) return Expr::boolean(absorbing, span);
      continue;
    }
    if (operand.kind() == ExprKind::apply && operand.op() == op) {
      for (const Expr& inner : operand.operands()) push(inner);
    } else {
      push(operand);
    }
  }
  if (out.empty()) return Expr::boolean(!absorbing, span);
  if (out.size() == 1) return out.front();
  return Expr::nary(op, std::move(out), span);
}

void collect_nonlinear(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() != ExprKind::apply) return;
  const auto& ops = e.operands();
  if (e.op() == Op::multiply && mentions_variables(ops[0]) && mentions_variables(ops[1])) {
    out.push_back(e);
  } else if (e.op() == Op::divide && mentions_variables(ops[1])) {
    out.push_back(e);
  }
  for (const Expr& operand : ops) collect_nonlinear(operand, out);
}

}  // namespace

Expr::Expr() : node_(true_node()) {}

Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr Expr::number(Rational value, SourceSpan span) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::number;
  n->value = value;
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::boolean(bool value, SourceSpan span) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::boolean;
  n->truth = value;
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name, SourceSpan span) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::variable;
  n->name = std::move(name);
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::location(SourceSpan span) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::location;
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand, SourceSpan span) {
  if (op != Op::negate && op != Op::logical_not) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::apply;
  n->op = op;
  n->operands.push_back(std::move(operand));
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs, SourceSpan span) {
  if (op == Op::negate || op == Op::logical_not) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::apply;
  n->op = op;
  n->operands.push_back(std::move(lhs));
  n->operands.push_back(std::move(rhs));
  n->span = span;
  return Expr(std::move(n));
}

Expr Expr::nary(Op op, std::vector<Expr> operands, SourceSpan span) {
  if (op != Op::logical_and && op != Op::logical_or) throw std::invalid_argument("not a connective");
  if (operands.size() < 2) throw std::invalid_argument("connective needs two operands");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::apply;
  n->op = op;
  n->operands = std::move(operands);
  n->span = span;
  return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
Op Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
bool Expr::truth() const { return node_->truth; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }
SourceSpan Expr::span() const { return node_->span; }

bool Expr::is_comparison() const {
  return kind() == ExprKind::apply && hrbc::is_comparison(op());
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::number: return a.value() == b.value();
    case ExprKind::boolean: return a.truth() == b.truth();
    case ExprKind::variable: return a.name() == b.name();
    case ExprKind::location: return true;
    case ExprKind::apply: return a.op() == b.op() && a.operands() == b.operands();
  }
  return false;
}

bool is_comparison(Op op) {
  return op == Op::less || op == Op::less_equal || op == Op::greater || op == Op::greater_equal ||
         op == Op::equal || op == Op::not_equal;
}

bool is_arithmetic(Op op) {
  return op == Op::negate || op == Op::add || op == Op::subtract || op == Op::multiply ||
         op == Op::divide;
}

std::string to_string(const Expr& e, Dialect dialect) {
  std::string out;
  print(e, dialect, 0, false, out);
  return out;
}

Expr normalize(const Expr& e) {
  if (e.kind() != ExprKind::apply) return e;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  for (const Expr& operand : e.operands()) ops.push_back(normalize(operand));
  const SourceSpan span = e.span();
  switch (e.op()) {
    case Op::negate:
      if (ops[0].is_number()) return Expr::number(-ops[0].value(), span);
      if (ops[0].kind() == ExprKind::apply && ops[0].op() == Op::negate) {
        return ops[0].operands()[0];
      }
      return Expr::unary(Op::negate, ops[0], span);
    case Op::logical_not: return negate(ops[0]);
    case Op::add:
    case Op::subtract:
    case Op::multiply:
    case Op::divide:
      if (ops[0].is_number() && ops[1].is_number()) {
        if (auto folded = fold_arithmetic(e.op(), ops[0].value(), ops[1].value())) {
          return Expr::number(*folded, span);
        }
      }
      if (ops[1].is_number()) {
        const Rational& r = ops[1].value();
        if ((e.op() == Op::add || e.op() == Op::subtract) && r == Rational(0)) return ops[0];
        if ((e.op() == Op::multiply || e.op() == Op::divide) && r == Rational(1)) return ops[0];
      }
      if (ops[0].is_number()) {
        const Rational& l = ops[0].value();
        if (e.op() == Op::add && l == Rational(0)) return ops[1];
        if (e.op() == Op::multiply && l == Rational(1)) return ops[1];
      }
      return Expr::binary(e.op(), ops[0], ops[1], span);
    case Op::not_equal:
      if (ops[0].is_number() && ops[1].is_number()) {
        return Expr::boolean(ops[0].value() != ops[1].value(), span);
      }
      return flatten(Op::logical_or,
                     {Expr::binary(Op::less, ops[0], ops[1], span),
                      Expr::binary(Op::greater, ops[0], ops[1], span)},
                     span);
    case Op::less:
    case Op::less_equal:
    case Op::greater:
    case Op::greater_equal:
    case Op::equal:
      if (ops[0].is_number() && ops[1].is_number()) {
        return Expr::boolean(fold_comparison(e.op(), ops[0].value(), ops[1].value()), span);
      }
      if (ops[0].is_boolean() && ops[1].is_boolean() && e.op() == Op::equal) {
        return Expr::boolean(ops[0].truth() == ops[1].truth(), span);
      }
      return Expr::binary(e.op(), ops[0], ops[1], span);
    case Op::logical_and:
    case Op::logical_or: return flatten(e.op(), ops, span);
  }
  return e;
}

Expr negate(const Expr& e) {
  const SourceSpan span = e.span();
  if (e.is_boolean()) return Expr::boolean(!e.truth(), span);
  if (e.kind() != ExprKind::apply) return Expr::unary(Op::logical_not, e, span);
  const auto& ops = e.operands();
  switch (e.op()) {
    case Op::less: return Expr::binary(Op::greater_equal, ops[0], ops[1], span);
    case Op::less_equal: return Expr::binary(Op::greater, ops[0], ops[1], span);
    case Op::greater: return Expr::binary(Op::less_equal, ops[0], ops[1], span);
    case Op::greater_equal: return Expr::binary(Op::less, ops[0], ops[1], span);
    case Op::equal:
      return flatten(Op::logical_or,
                     {Expr::binary(Op::less, ops[0], ops[1], span),
                      Expr::binary(Op::greater, ops[0], ops[1], span)},
                     span);
    case Op::not_equal: return Expr::binary(Op::equal, ops[0], ops[1], span);
    case Op::logical_not: return ops[0];
    case Op::logical_and:
    case Op::logical_or: {
      std::vector<Expr> negated;
      negated.reserve(ops.size());
      for (const Expr& operand : ops) negated.push_back(negate(operand));
      return flatten(e.op() == Op::logical_and ? Op::logical_or : Op::logical_and, negated, span);
    }
    default: return Expr::unary(Op::logical_not, e, span);
  }
}

Expr conjunction(std::vector<Expr> operands) {
  return flatten(Op::logical_and, operands, {});
}

Expr disjunction(std::vector<Expr> operands) {
  return flatten(Op::logical_or, operands, {});
}

Expr substitute(const Expr& e, const Resolver& resolve) {
  switch (e.kind()) {
    case ExprKind::variable:
      if (auto replacement = resolve(e.name())) return *replacement;
      return e;
    case ExprKind::apply: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      bool changed = false;
      for (const Expr& operand : e.operands()) {
        ops.push_back(substitute(operand, resolve));
        changed = changed || !(ops.back() == operand);
      }
      if (!changed) return e;
      if (ops.size() == 1) return Expr::unary(e.op(), ops[0], e.span());
      if (e.op() == Op::logical_and || e.op() == Op::logical_or) {
        return Expr::nary(e.op(), std::move(ops), e.span());
      }
      return Expr::binary(e.op(), ops[0], ops[1], e.span());
    }
    default: return e;
  }
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  return substitute(e, [&](const std::string& name) -> std::optional<Expr> {
    auto it = bindings.find(name);
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  });
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.is_variable()) {
    out.insert(e.name());
  } else if (e.kind() == ExprKind::apply) {
    for (const Expr& operand : e.operands()) collect_variables(operand, out);
  }
}

std::set<std::string> variables_of(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool mentions_variables(const Expr& e) {
  if (e.is_variable()) return true;
  if (e.kind() != ExprKind::apply) return false;
  return std::any_of(e.operands().begin(), e.operands().end(),
                     [](const Expr& x) { return mentions_variables(x); });
}

std::vector<Expr> nonlinear_subterms(const Expr& e) {
  std::vector<Expr> out;
  collect_nonlinear(e, out);
  return out;
}

std::vector<Expr> conjuncts(const Expr& e) {
  if (e.is_true()) return {};
  if (e.kind() == ExprKind::apply && e.op() == Op::logical_and) return e.operands();
  return {e};
}

std::vector<Expr> disjunctive_normal_form(const Expr& e) {
  if (e.is_false()) return {};
  if (e.kind() == ExprKind::apply && e.op() == Op::logical_or) {
    std::vector<Expr> out;
    for (const Expr& operand : e.operands()) {
      for (Expr& term : disjunctive_normal_form(operand)) {
        if (std::find(out.begin(), out.end(), term) == out.end()) out.push_back(std::move(term));
      }
    }
    return out;
  }
  if (e.kind() == ExprKind::apply && e.op() == Op::logical_and) {
    std::vector<std::vector<Expr>> partial{{}};
    for (const Expr& operand : e.operands()) {
      std::vector<Expr> alternatives = disjunctive_normal_form(operand);
      std::vector<std::vector<Expr>> next;
      for (const auto& prefix : partial) {
        for (const Expr& alternative : alternatives) {
          auto extended = prefix;
          for (const Expr& c : conjuncts(alternative)) extended.push_back(c);
          next.push_back(std::move(extended));
        }
      }
      partial = std::move(next);
    }
    std::vector<Expr> out;
    for (auto& terms : partial) {
      Expr term = flatten(Op::logical_and, terms, e.span());
      if (term.is_false()) continue;
      if (std::find(out.begin(), out.end(), term) == out.end()) out.push_back(std::move(term));
    }
    return out;
  }
  return {e};
}

}  // namespace hrbc
