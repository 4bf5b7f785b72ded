#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hrbc/diagnostics.hpp"
#include "hrbc/rational.hpp"

namespace hrbc {

enum class Op {
  negate,
  logical_not,
  add,
  subtract,
  multiply,
  divide,
  less,
  less_equal,
  greater,
  greater_equal,
  equal,
  not_equal,
  logical_and,
  logical_or,
};

enum class ExprKind {
  number,
  boolean,
  variable,
  location,  // `loc()`, only meaningful in forbidden-state predicates
  apply,
};

struct ExprNode;

/// Immutable arithmetic/boolean expression tree. Copies share structure.
/// A default-constructed Expr is the literal `true`.
class Expr {
 public:
  Expr();

  static Expr number(Rational value, SourceSpan span = {});
  static Expr boolean(bool value, SourceSpan span = {});
  static Expr variable(std::string name, SourceSpan span = {});
  static Expr location(SourceSpan span = {});
  static Expr unary(Op op, Expr operand, SourceSpan span = {});
  static Expr binary(Op op, Expr lhs, Expr rhs, SourceSpan span = {});
  /// `logical_and` / `logical_or` with any number of operands.
  static Expr nary(Op op, std::vector<Expr> operands, SourceSpan span = {});

  ExprKind kind() const;
  Op op() const;
  const Rational& value() const;
  bool truth() const;
  const std::string& name() const;
  const std::vector<Expr>& operands() const;
  SourceSpan span() const;

  bool is_number() const { return kind() == ExprKind::number; }
  bool is_boolean() const { return kind() == ExprKind::boolean; }
  bool is_true() const { return is_boolean() && truth(); }
  bool is_false() const { return is_boolean() && !truth(); }
  bool is_variable() const { return kind() == ExprKind::variable; }
  bool is_comparison() const;

  /// Structural equality; spans are ignored.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node);
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::boolean;
  Op op = Op::logical_and;
  Rational value;
  bool truth = true;
  std::string name;
  std::vector<Expr> operands;
  SourceSpan span;
};

bool is_comparison(Op op);
bool is_arithmetic(Op op);

enum class Dialect {
  native,   // source-language syntax: &&, ||, !
  spaceex,  // SpaceEx syntax: &, |
};

std::string to_string(const Expr& e, Dialect dialect = Dialect::native);

/// Folds operations whose operands are all literals (exactly), drops
/// additive zeros and multiplicative ones, rewrites
/// `a != b` to `a < b || a > b`, pushes `!` through comparisons and
/// connectives, and flattens/deduplicates `&&` and `||` chains.
/// Idempotent.
Expr normalize(const Expr& e);

/// Logical complement of a normalized expression, staying in the comparison
/// fragment: !(a<b) = a>=b, !(a<=b) = a>b, !(a==b) = a<b || a>b, and duals.
Expr negate(const Expr& e);

Expr conjunction(std::vector<Expr> operands);
Expr disjunction(std::vector<Expr> operands);

using Resolver = std::function<std::optional<Expr>(const std::string&)>;

/// Replaces every variable for which `resolve` returns a value.
Expr substitute(const Expr& e, const Resolver& resolve);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

void collect_variables(const Expr& e, std::set<std::string>& out);
std::set<std::string> variables_of(const Expr& e);
bool mentions_variables(const Expr& e);

/// Products and quotients whose both sides (for products) or whose divisor
/// (for quotients) depend on variables.
std::vector<Expr> nonlinear_subterms(const Expr& e);

/// Top-level conjuncts of a normalized expression.
std::vector<Expr> conjuncts(const Expr& e);

/// Disjunctive normal form of a normalized expression, as a list of
/// conjunctions. `false` yields an empty list.
std::vector<Expr> disjunctive_normal_form(const Expr& e);

}  // namespace hrbc
