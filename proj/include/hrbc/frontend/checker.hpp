#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hrbc/diagnostics.hpp"
#include "hrbc/frontend/ast.hpp"

namespace hrbc::frontend {

/// (sender instance, receiver instance, message server); `setMode` for
/// mode-change requests.
using MessageKey = std::tuple<std::string, std::string, std::string>;

struct ResolvedBinding {
  std::size_t instance = 0;
  Connection connection = Connection::wire;
};

struct CheckedInstance {
  std::string name;
  std::size_t class_index = 0;
  std::map<std::string, ResolvedBinding> known;  // formal known-rebec name -> bound instance
  std::vector<Rational> init_args;
};

enum class NameKind { none, state_var, param, known_rebec, constant };

/// A model that passed every static check. Constants are already
/// substituted into the AST it carries.
struct CheckedModel {
  ModelAST ast;
  std::vector<CheckedInstance> instances;
  std::map<MessageKey, Rational> priorities;
  std::map<MessageKey, Rational> delays;
  std::map<std::string, Rational> constants;

  const ClassDecl& class_of(std::size_t instance) const {
    return ast.classes[instances[instance].class_index];
  }
  std::optional<std::size_t> instance_index(const std::string& name) const;

  /// Resolves an identifier in the scope of `cls`, optionally inside a
  /// message server. Parameters shadow state variables, which shadow
  /// known rebecs, which shadow constants.
  static NameKind resolve(const ClassDecl& cls, const MsgSrv* scope, const std::string& name,
                          const std::map<std::string, Rational>& constants);
};

struct CheckResult {
  std::optional<CheckedModel> model;
  std::vector<Diagnostic> diagnostics;
};

CheckResult check(const ModelAST& ast);

}  // namespace hrbc::frontend
