#include "hrbc/frontend/checker.hpp"

#include <algorithm>
#include <set>

namespace hrbc::frontend {
namespace {

enum class Ty { discrete, continuous, boolean, error };

bool numeric(Ty t) { return t == Ty::discrete || t == Ty::continuous; }

struct Scope {
  const ClassDecl* cls = nullptr;
  const MsgSrv* srv = nullptr;
};

class Checker {
 public:
  explicit Checker(const ModelAST& ast) : ast_(ast) {}

  CheckResult run() {
    collect_constants();
    for (std::size_t i = 0; i < ast_.classes.size(); ++i) check_class(ast_.classes[i]);
    duplicates(ast_.classes, "class");
    check_instances();
    check_can();
    CheckResult result;
    result.diagnostics = std::move(diagnostics_);
    if (has_errors(result.diagnostics)) return result;
    CheckedModel model;
    model.ast = substitute_constants();
    model.constants = constants_;
    model.instances = std::move(instances_);
    model.priorities = std::move(priorities_);
    model.delays = std::move(delays_);
    result.model = std::move(model);
    return result;
  }

 private:
  void error(SourceSpan span, std::string message) {
    diagnostics_.push_back({Severity::error, span, std::move(message)});
  }
  void warning(SourceSpan span, std::string message) {
    diagnostics_.push_back({Severity::warning, span, std::move(message)});
  }

  template <typename T>
  void duplicates(const std::vector<T>& items, const char* what) {
    std::set<std::string> seen;
    for (const T& item : items) {
      if (!seen.insert(item.name).second) {
        error(item.span, std::string("duplicate ") + what + " '" + item.name + "'");
      }
    }
  }

  void collect_constants() {
    for (const ConstDecl& c : ast_.constants) {
      if (!constants_.emplace(c.name, c.value).second) {
        error(c.span, "duplicate constant '" + c.name + "'");
      }
    }
  }

  // ---- classes ----

  void check_class(const ClassDecl& cls) {
    duplicates(cls.known_rebecs, "known rebec");
    duplicates(cls.state_vars, "state variable");
    duplicates(cls.msgsrvs, "message server");
    duplicates(cls.modes, "mode");
    for (const KnownRebec& k : cls.known_rebecs) {
      if (!ast_.find_class(k.class_name)) {
        error(k.span, "unknown class '" + k.class_name + "' for known rebec '" + k.name + "'");
      }
      if (cls.find_var(k.name)) {
        error(k.span, "known rebec '" + k.name + "' clashes with a state variable");
      }
    }
    for (const VarDecl& v : cls.state_vars) {
      if (cls.physical && v.type == PrimType::int_type) {
        error(v.span, "int variable '" + v.name + "' is not allowed in physical class '" +
                          cls.name + "'");
      }
      if (!cls.physical && v.type == PrimType::real_type) {
        error(v.span, "real variable '" + v.name + "' is not allowed in software class '" +
                          cls.name + "'");
      }
    }
    if (!cls.find_msgsrv("initial")) {
      error(cls.span, "class '" + cls.name + "' has no 'initial' message server");
    }
    for (const MsgSrv& srv : cls.msgsrvs) {
      if (srv.name == "setMode") error(srv.span, "'setMode' is a reserved message server name");
      duplicates(srv.params, "parameter");
      for (const VarDecl& p : srv.params) {
        if (cls.physical && p.type == PrimType::int_type) {
          error(p.span, "int parameter '" + p.name + "' is not allowed in physical class '" +
                            cls.name + "'");
        }
        if (!cls.physical && p.type == PrimType::real_type) {
          error(p.span, "real parameter '" + p.name + "' is not allowed in software class '" +
                            cls.name + "'");
        }
      }
      check_block(srv.body, {&cls, &srv});
    }
    for (const Mode& m : cls.modes) {
      if (m.name == "none") error(m.span, "mode name 'none' is reserved");
      expect_boolean(m.invariant, {&cls, nullptr}, "mode invariant");
      expect_boolean(m.guard, {&cls, nullptr}, "mode guard");
      std::set<std::string> flowed;
      for (const Flow& f : m.flows) {
        const VarDecl* v = cls.find_var(f.var);
        if (!v) {
          error(f.span, "flow for unknown variable '" + f.var + "'");
        } else if (v->type != PrimType::real_type) {
          error(f.span, "flow for non-real variable '" + f.var + "'");
        }
        if (!flowed.insert(f.var).second) {
          error(f.span, "variable '" + f.var + "' has more than one flow in mode '" + m.name + "'");
        }
        const Ty t = type_of(f.rate, {&cls, nullptr});
        if (t != Ty::error && !numeric(t)) error(f.rate.span(), "flow rate must be numeric");
      }
      check_block(m.actions, {&cls, nullptr});
    }
  }

  void check_block(const Block& block, Scope scope) {
    for (const Statement& s : block) check_statement(s, scope);
  }

  void check_statement(const Statement& s, Scope scope) {
    const ClassDecl& cls = *scope.cls;
    switch (s.kind) {
      case StmtKind::assign: {
        const VarDecl* target = nullptr;
        if (scope.srv) {
          for (const VarDecl& p : scope.srv->params) {
            if (p.name == s.name) target = &p;
          }
        }
        if (!target) target = cls.find_var(s.name);
        const Ty t = type_of(s.expr, scope);
        if (!target) {
          error(s.span, "assignment to unknown variable '" + s.name + "'");
          return;
        }
        if (t == Ty::boolean) {
          error(s.span, "cannot assign a boolean to '" + s.name + "'");
        } else if (target->type == PrimType::int_type && t == Ty::continuous) {
          error(s.span, "int variable '" + s.name + "' assigned a continuous expression");
        }
        return;
      }
      case StmtKind::if_else:
        expect_boolean(s.expr, scope, "condition");
        check_block(s.then_block, scope);
        check_block(s.else_block, scope);
        return;
      case StmtKind::delay: {
        if (cls.physical) {
          error(s.span, "delay is not allowed in physical class '" + cls.name + "'");
          return;
        }
        const Expr d = normalize(with_constants(s.expr, scope));
        if (!d.is_number() || d.value() <= Rational(0)) {
          error(s.span, "delay duration must be a positive constant");
        }
        return;
      }
      case StmtKind::set_mode:
        if (!cls.physical) {
          error(s.span, "setmode is only allowed in physical classes");
        } else if (s.name != "none" && !cls.find_mode(s.name)) {
          error(s.span, "unknown mode '" + s.name + "' in class '" + cls.name + "'");
        }
        return;
      case StmtKind::send:
      case StmtKind::send_set_mode: check_send(s, scope); return;
    }
  }

  const ClassDecl* target_class(const Statement& s, const ClassDecl& cls) {
    if (s.target == "self") return &cls;
    auto it = std::find_if(cls.known_rebecs.begin(), cls.known_rebecs.end(),
                           [&](const KnownRebec& k) { return k.name == s.target; });
    if (it == cls.known_rebecs.end()) {
      error(s.span, "unknown rebec '" + s.target + "' (not a known rebec of '" + cls.name + "')");
      return nullptr;
    }
    return ast_.find_class(it->class_name);
  }

  void check_send(const Statement& s, Scope scope) {
    const ClassDecl* target = target_class(s, *scope.cls);
    for (const Expr& arg : s.args) type_of(arg, scope);
    if (!target) return;
    if (s.kind == StmtKind::send_set_mode) {
      if (!target->physical) {
        error(s.span, "setMode sent to software rebec '" + s.target + "'");
      } else if (s.name != "none" && !target->find_mode(s.name)) {
        error(s.span, "unknown mode '" + s.name + "' in class '" + target->name + "'");
      }
      return;
    }
    const MsgSrv* srv = target->find_msgsrv(s.server);
    if (!srv) {
      error(s.span, "unknown message server '" + s.server + "' in class '" + target->name + "'");
      return;
    }
    if (srv->params.size() != s.args.size()) {
      error(s.span, "message server '" + s.server + "' expects " +
                        std::to_string(srv->params.size()) + " argument(s), got " +
                        std::to_string(s.args.size()));
      return;
    }
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      const Ty t = type_of(s.args[i], scope);
      if (t == Ty::error) continue;
      if (t == Ty::boolean) {
        error(s.args[i].span(), "boolean argument passed to parameter '" + srv->params[i].name + "'");
      } else if (srv->params[i].type == PrimType::int_type && t == Ty::continuous) {
        error(s.args[i].span(), "int parameter '" + srv->params[i].name +
                                    "' passed a continuous expression");
      }
    }
  }

  void expect_boolean(const Expr& e, Scope scope, const char* what) {
    const Ty t = type_of(e, scope);
    if (t != Ty::error && t != Ty::boolean) error(e.span(), std::string(what) + " must be boolean");
  }

  Ty type_of(const Expr& e, Scope scope) {
    switch (e.kind()) {
      case ExprKind::number: return Ty::discrete;
      case ExprKind::boolean: return Ty::boolean;
      case ExprKind::location: error(e.span(), "loc() is not allowed in models"); return Ty::error;
      case ExprKind::variable: return type_of_name(e, scope);
      case ExprKind::apply: break;
    }
    std::vector<Ty> types;
    for (const Expr& operand : e.operands()) types.push_back(type_of(operand, scope));
    if (std::find(types.begin(), types.end(), Ty::error) != types.end()) return Ty::error;
    const Op op = e.op();
    if (is_arithmetic(op)) {
      if (!std::all_of(types.begin(), types.end(), numeric)) {
        error(e.span(), "arithmetic on a boolean operand");
        return Ty::error;
      }
      return std::find(types.begin(), types.end(), Ty::continuous) != types.end() ? Ty::continuous
                                                                                   : Ty::discrete;
    }
    if (is_comparison(op)) {
      const bool both_numeric = numeric(types[0]) && numeric(types[1]);
      const bool both_boolean = types[0] == Ty::boolean && types[1] == Ty::boolean &&
                                (op == Op::equal || op == Op::not_equal);
      if (!both_numeric && !both_boolean) {
        error(e.span(), "comparison operands have mismatched types");
        return Ty::error;
      }
      return Ty::boolean;
    }
    if (!std::all_of(types.begin(), types.end(), [](Ty t) { return t == Ty::boolean; })) {
      error(e.span(), "logical operator applied to a numeric operand");
      return Ty::error;
    }
    return Ty::boolean;
  }

  Ty type_of_name(const Expr& e, Scope scope) {
    const std::string& name = e.name();
    switch (CheckedModel::resolve(*scope.cls, scope.srv, name, constants_)) {
      case NameKind::param:
        for (const VarDecl& p : scope.srv->params) {
          if (p.name == name) return p.type == PrimType::int_type ? Ty::discrete : Ty::continuous;
        }
        break;
      case NameKind::state_var:
        return scope.cls->find_var(name)->type == PrimType::int_type ? Ty::discrete
                                                                     : Ty::continuous;
      case NameKind::known_rebec:
        error(e.span(), "rebec '" + name + "' used as a value");
        return Ty::error;
      case NameKind::constant: return Ty::discrete;
      case NameKind::none: break;
    }
    error(e.span(), "unknown identifier '" + name + "'");
    return Ty::error;
  }

  Expr with_constants(const Expr& e, Scope scope) const {
    return substitute(e, [&](const std::string& name) -> std::optional<Expr> {
      if (scope.cls &&
          CheckedModel::resolve(*scope.cls, scope.srv, name, constants_) != NameKind::constant) {
        return std::nullopt;
      }
      auto it = constants_.find(name);
      if (it == constants_.end()) return std::nullopt;
      return Expr::number(it->second);
    });
  }

  // ---- instances and network ----

  void check_instances() {
    duplicates(ast_.instances, "instance");
    for (const InstanceDecl& inst : ast_.instances) {
      CheckedInstance checked;
      checked.name = inst.name;
      checked.init_args = inst.init_args;
      const ClassDecl* cls = ast_.find_class(inst.class_name);
      if (!cls) {
        error(inst.span, "unknown class '" + inst.class_name + "'");
        instances_.push_back(std::move(checked));
        continue;
      }
      checked.class_index = static_cast<std::size_t>(cls - ast_.classes.data());
      if (inst.bindings.size() != cls->known_rebecs.size()) {
        error(inst.span, "instance '" + inst.name + "' binds " +
                             std::to_string(inst.bindings.size()) + " rebec(s); class '" +
                             cls->name + "' declares " + std::to_string(cls->known_rebecs.size()));
      }
      const std::size_t n = std::min(inst.bindings.size(), cls->known_rebecs.size());
      for (std::size_t i = 0; i < n; ++i) {
        const Binding& b = inst.bindings[i];
        const KnownRebec& formal = cls->known_rebecs[i];
        const InstanceDecl* bound = ast_.find_instance(b.rebec);
        if (!bound) {
          error(b.span, "unknown rebec '" + b.rebec + "'");
          continue;
        }
        if (bound->class_name != formal.class_name) {
          error(b.span, "rebec '" + b.rebec + "' has class '" + bound->class_name + "' but '" +
                            formal.name + "' requires '" + formal.class_name + "'");
          continue;
        }
        checked.known[formal.name] = {
            static_cast<std::size_t>(bound - ast_.instances.data()), b.connection};
      }
      if (const MsgSrv* initial = cls->find_msgsrv("initial")) {
        if (initial->params.size() != inst.init_args.size()) {
          error(inst.span, "instance '" + inst.name + "' passes " +
                               std::to_string(inst.init_args.size()) +
                               " initial argument(s); 'initial' expects " +
                               std::to_string(initial->params.size()));
        } else {
          for (std::size_t i = 0; i < inst.init_args.size(); ++i) {
            if (initial->params[i].type == PrimType::int_type && !is_integer(inst.init_args[i])) {
              error(inst.span, "initial argument " + std::to_string(i + 1) + " of '" + inst.name +
                                   "' must be an integer");
            }
          }
        }
      }
      instances_.push_back(std::move(checked));
    }
  }

  void check_can() {
    const CanSpec& spec = ast_.can_spec;
    std::map<Rational, SourceSpan> used_priorities;
    auto validate = [&](const CanEntry& e, bool priority) -> std::optional<MessageKey> {
      const InstanceDecl* sender = ast_.find_instance(e.sender);
      const InstanceDecl* receiver = ast_.find_instance(e.receiver);
      if (!sender) {
        error(e.span, "unknown rebec '" + e.sender + "' in CAN specification");
        return std::nullopt;
      }
      if (!receiver) {
        error(e.span, "unknown rebec '" + e.receiver + "' in CAN specification");
        return std::nullopt;
      }
      const ClassDecl* cls = ast_.find_class(receiver->class_name);
      if (cls && e.server != "setMode" && !cls->find_msgsrv(e.server)) {
        error(e.span, "unknown message server '" + e.server + "' in class '" + cls->name + "'");
      }
      if (priority) {
        if (!is_integer(e.value) || e.value <= Rational(0)) {
          error(e.span, "CAN priority must be a positive integer");
        }
      } else if (e.value <= Rational(0)) {
        error(e.span, "CAN delay must be positive");
      }
      return MessageKey{e.sender, e.receiver, e.server};
    };
    for (const CanEntry& e : spec.priorities) {
      auto key = validate(e, true);
      if (!key) continue;
      if (!priorities_.emplace(*key, e.value).second) {
        error(e.span, "duplicate CAN priority entry for " + e.sender + " " + e.receiver + "." +
                          e.server);
      } else if (!used_priorities.emplace(e.value, e.span).second) {
        error(e.span, "duplicate CAN priority " + format_rational(e.value));
      }
    }
    for (const CanEntry& e : spec.delays) {
      auto key = validate(e, false);
      if (!key) continue;
      if (!delays_.emplace(*key, e.value).second) {
        error(e.span, "duplicate CAN delay entry for " + e.sender + " " + e.receiver + "." +
                          e.server);
      }
    }
    // Every message that can travel over a CAN binding needs both entries.
    std::set<MessageKey> reported;
    for (std::size_t i = 0; i < ast_.instances.size() && i < instances_.size(); ++i) {
      const InstanceDecl& inst = ast_.instances[i];
      const ClassDecl* cls = ast_.find_class(inst.class_name);
      if (!cls) continue;
      auto visit = [&](const Statement& s) {
        if (s.kind != StmtKind::send && s.kind != StmtKind::send_set_mode) return;
        if (s.target == "self") return;
        auto it = instances_[i].known.find(s.target);
        if (it == instances_[i].known.end() || it->second.connection != Connection::can) return;
        const std::string server = s.kind == StmtKind::send ? s.server : "setMode";
        const MessageKey key{inst.name, ast_.instances[it->second.instance].name, server};
        if (!reported.insert(key).second) return;
        const std::string label = inst.name + " " + std::get<1>(key) + "." + server;
        if (!priorities_.count(key)) error(s.span, "CAN message " + label + " has no priority");
        if (!delays_.count(key)) error(s.span, "CAN message " + label + " has no delay");
      };
      for (const MsgSrv& srv : cls->msgsrvs) walk(srv.body, visit);
      for (const Mode& m : cls->modes) walk(m.actions, visit);
    }
  }

  template <typename F>
  static void walk(const Block& block, F& visit) {
    for (const Statement& s : block) {
      visit(s);
      walk(s.then_block, visit);
      walk(s.else_block, visit);
    }
  }

  // ---- constant substitution ----

  ModelAST substitute_constants() const {
    ModelAST out = ast_;
    for (ClassDecl& cls : out.classes) {
      for (MsgSrv& srv : cls.msgsrvs) rewrite(srv.body, {&cls, &srv});
      for (Mode& m : cls.modes) {
        const Scope scope{&cls, nullptr};
        m.invariant = with_constants(m.invariant, scope);
        m.guard = with_constants(m.guard, scope);
        for (Flow& f : m.flows) f.rate = with_constants(f.rate, scope);
        rewrite(m.actions, scope);
      }
    }
    return out;
  }

  void rewrite(Block& block, Scope scope) const {
    for (Statement& s : block) {
      s.expr = with_constants(s.expr, scope);
      for (Expr& arg : s.args) arg = with_constants(arg, scope);
      rewrite(s.then_block, scope);
      rewrite(s.else_block, scope);
    }
  }

  const ModelAST& ast_;
  std::vector<Diagnostic> diagnostics_;
  std::map<std::string, Rational> constants_;
  std::vector<CheckedInstance> instances_;
  std::map<MessageKey, Rational> priorities_;
  std::map<MessageKey, Rational> delays_;
};

}  // namespace

std::optional<std::size_t> CheckedModel::instance_index(const std::string& name) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].name == name) return i;
  }
  return std::nullopt;
}

NameKind CheckedModel::resolve(const ClassDecl& cls, const MsgSrv* scope, const std::string& name,
                               const std::map<std::string, Rational>& constants) {
  if (scope) {
    for (const VarDecl& p : scope->params) {
      if (p.name == name) return NameKind::param;
    }
  }
  if (cls.find_var(name)) return NameKind::state_var;
  for (const KnownRebec& k : cls.known_rebecs) {
    if (k.name == name) return NameKind::known_rebec;
  }
  if (constants.count(name)) return NameKind::constant;
  return NameKind::none;
}

CheckResult check(const ModelAST& ast) { return Checker(ast).run(); }

}  // namespace hrbc::frontend
