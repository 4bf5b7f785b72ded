#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrbc/diagnostics.hpp"
#include "hrbc/expr.hpp"
#include "hrbc/rational.hpp"

namespace hrbc::frontend {

enum class PrimType { int_type, real_type, float_type };

const char* to_string(PrimType type);

struct VarDecl {
  PrimType type = PrimType::int_type;
  std::string name;
  SourceSpan span;

  bool operator==(const VarDecl&) const = default;
};

struct KnownRebec {
  std::string class_name;
  std::string name;
  SourceSpan span;

  bool operator==(const KnownRebec&) const = default;
};

enum class StmtKind {
  assign,         // name = expr;
  if_else,        // if (expr) then_block [else else_block]
  delay,          // delay(expr);
  set_mode,       // setmode(name);
  send,           // target.server(args);
  send_set_mode,  // target.setMode(name);
};

struct Statement {
  StmtKind kind = StmtKind::assign;
  std::string name;    // assigned variable, or mode name for set_mode/send_set_mode
  std::string target;  // known rebec or `self`
  std::string server;
  Expr expr;  // assigned value, condition, or delay duration
  std::vector<Expr> args;
  std::vector<Statement> then_block;
  std::vector<Statement> else_block;
  bool has_else = false;
  SourceSpan span;

  bool operator==(const Statement&) const = default;
};

using Block = std::vector<Statement>;

struct MsgSrv {
  std::string name;
  std::vector<VarDecl> params;
  Block body;
  SourceSpan span;

  bool operator==(const MsgSrv&) const = default;
};

struct Flow {
  std::string var;
  Expr rate;
  SourceSpan span;

  bool operator==(const Flow&) const = default;
};

struct Mode {
  std::string name;
  Expr invariant;
  std::vector<Flow> flows;
  Expr guard;
  Block actions;
  SourceSpan span;

  bool operator==(const Mode&) const = default;
};

struct ClassDecl {
  bool physical = false;
  std::string name;
  std::vector<KnownRebec> known_rebecs;
  std::vector<VarDecl> state_vars;
  std::vector<MsgSrv> msgsrvs;
  std::vector<Mode> modes;
  SourceSpan span;

  bool operator==(const ClassDecl&) const = default;

  const MsgSrv* find_msgsrv(const std::string& server) const;
  const Mode* find_mode(const std::string& mode) const;
  const VarDecl* find_var(const std::string& var) const;
};

enum class Connection { wire, can };

struct Binding {
  Connection connection = Connection::wire;
  std::string rebec;
  SourceSpan span;

  bool operator==(const Binding&) const = default;
};

struct InstanceDecl {
  std::string class_name;
  std::string name;
  std::vector<Binding> bindings;
  std::vector<Rational> init_args;
  SourceSpan span;

  bool operator==(const InstanceDecl&) const = default;
};

/// One `sender receiver.server value;` line of a priorities or delays block.
struct CanEntry {
  std::string sender;
  std::string receiver;
  std::string server;
  Rational value;
  SourceSpan span;

  bool operator==(const CanEntry&) const = default;
};

struct CanSpec {
  bool present = false;
  std::vector<CanEntry> priorities;
  std::vector<CanEntry> delays;
  SourceSpan span;

  bool operator==(const CanSpec&) const = default;
};

struct ConstDecl {
  std::string name;
  Rational value;
  SourceSpan span;

  bool operator==(const ConstDecl&) const = default;
};

struct ModelAST {
  std::vector<ConstDecl> constants;
  std::vector<ClassDecl> classes;  // software and physical, in source order
  std::vector<InstanceDecl> instances;
  CanSpec can_spec;

  bool operator==(const ModelAST&) const = default;

  const ClassDecl* find_class(const std::string& name) const;
  const InstanceDecl* find_instance(const std::string& name) const;
};

}  // namespace hrbc::frontend
