#include <algorithm>

#include "hrbc/translator/translator.hpp"

namespace hrbc::translator {

using frontend::Block;
using frontend::ClassDecl;
using frontend::Connection;
using frontend::PrimType;
using frontend::Statement;
using frontend::StmtKind;

namespace {

int lowest_free(const std::vector<bool>& used) {
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) return static_cast<int>(i);
  }
  return -1;
}

void insert_pending(Configuration& cfg, PendingEvent event) {
  auto it = std::lower_bound(cfg.pending.begin(), cfg.pending.end(), event.timer,
                             [](const PendingEvent& e, int timer) { return e.timer < timer; });
  cfg.pending.insert(it, std::move(event));
}

void encode_rational(std::string& out, const Rational& r) {
  out += std::to_string(r.numerator());
  if (r.denominator() != 1) {
    out += '/';
    out += std::to_string(r.denominator());
  }
}

void encode_message(std::string& out, const Message& m) {
  out += 'm';
  out += std::to_string(m.sender) + ',' + std::to_string(m.receiver) + ',' +
         std::to_string(m.server) + ',' + std::to_string(m.mode) + '(';
  for (const Arg& a : m.args) {
    if (a.pooled) {
      out += 'p' + std::to_string(a.slot);
    } else {
      encode_rational(out, a.literal);
    }
    out += ';';
  }
  out += ')';
}

Expr equals(const std::string& var, const Rational& value) {
  return Expr::binary(Op::equal, Expr::variable(var), Expr::number(value));
}

}  // namespace

int Limits::queue_bound(const std::string& rebec) const {
  auto it = queue.find(rebec);
  return it == queue.end() ? default_queue : it->second;
}

const char* to_string(UrgencyClass c) {
  switch (c) {
    case UrgencyClass::message_statement: return "message/statement";
    case UrgencyClass::network: return "network";
    case UrgencyClass::nonurgent: return "nonurgent";
    case UrgencyClass::terminal: return "terminal";
  }
  return "terminal";
}

Semantics::Semantics(const frontend::CheckedModel& model, Limits limits)
    : model_(model), limits_(std::move(limits)) {
  if (limits_.default_queue < 1 || limits_.timer_pool < 0 || limits_.arg_pool < 0 ||
      limits_.max_configs < 1) {
    throw TranslationError("exploration limits must be positive");
  }
  for (const auto& [rebec, bound] : limits_.queue) {
    if (!model_.instance_index(rebec)) throw TranslationError("unknown rebec in queue limit: " + rebec);
    if (bound < 1) throw TranslationError("queue bound of " + rebec + " must be positive");
  }
  for (const ClassDecl& cls : model_.ast.classes) {
    std::vector<int> servers;
    for (const auto& srv : cls.msgsrvs) servers.push_back(register_block(&srv.body));
    server_blocks_.push_back(std::move(servers));
    std::vector<int> modes;
    for (const auto& m : cls.modes) modes.push_back(register_block(&m.actions));
    mode_blocks_.push_back(std::move(modes));
    std::vector<int> set_modes;
    for (int m = -1; m < static_cast<int>(cls.modes.size()); ++m) {
      Statement s;
      s.kind = StmtKind::set_mode;
      s.name = m < 0 ? "none" : cls.modes[static_cast<std::size_t>(m)].name;
      synthetic_.push_back(Block{s});
      set_modes.push_back(register_block(&synthetic_.back()));
    }
    set_mode_blocks_.push_back(std::move(set_modes));
    std::vector<int> slots;
    int next_slot = 0;
    for (const auto& v : cls.state_vars) {
      slots.push_back(v.type == PrimType::int_type ? next_slot++ : -1);
    }
    int_var_slot_.push_back(std::move(slots));
  }
  std::map<std::string, std::string> origin;
  auto declare = [&](const std::string& name, const std::string& what) {
    auto [it, inserted] = origin.emplace(name, what);
    if (!inserted) {
      throw TranslationError("automaton variable name '" + name + "' is produced by both " +
                             it->second + " and " + what);
    }
    variables_.insert(name);
  };
  for (int r = 0; r < rebec_count(); ++r) {
    const auto& inst = model_.instances[static_cast<std::size_t>(r)];
    queue_bounds_.push_back(limits_.queue_bound(inst.name));
    const ClassDecl& cls = class_of(r);
    for (const auto& v : cls.state_vars) {
      if (v.type != PrimType::int_type) {
        declare(state_var_name(r, v.name), "state variable " + inst.name + "." + v.name);
      }
    }
    for (std::size_t s = 0; s < cls.msgsrvs.size(); ++s) {
      for (const auto& p : cls.msgsrvs[s].params) {
        if (p.type != PrimType::int_type) {
          declare(param_name(r, static_cast<int>(s), p.name),
                  "parameter " + inst.name + "." + cls.msgsrvs[s].name + "(" + p.name + ")");
        }
      }
    }
  }
  for (int k = 0; k < limits_.timer_pool; ++k) declare(timer_name(k), "the timer pool");
  for (int k = 0; k < limits_.arg_pool; ++k) declare(arg_name(k), "the arg pool");
}

int Semantics::register_block(const Block* block) {
  blocks_.push_back(block);
  const int id = static_cast<int>(blocks_.size()) - 1;
  block_ids_[block] = id;
  for (const Statement& s : *block) {
    if (s.kind == StmtKind::if_else) {
      register_block(&s.then_block);
      register_block(&s.else_block);
    }
  }
  return id;
}

const ClassDecl& Semantics::class_of(int rebec) const {
  return model_.class_of(static_cast<std::size_t>(rebec));
}

std::string Semantics::state_var_name(int rebec, const std::string& var) const {
  return model_.instances[static_cast<std::size_t>(rebec)].name + "_" + var;
}

std::string Semantics::param_name(int rebec, int server, const std::string& param) const {
  return model_.instances[static_cast<std::size_t>(rebec)].name + "_" +
         class_of(rebec).msgsrvs[static_cast<std::size_t>(server)].name + "_" + param;
}

std::string Semantics::timer_name(int slot) { return "timer" + std::to_string(slot); }
std::string Semantics::arg_name(int slot) { return "arg" + std::to_string(slot); }

std::string Semantics::mode_name(int rebec, int mode) const {
  if (mode < 0) return "none";
  return class_of(rebec).modes[static_cast<std::size_t>(mode)].name;
}

const Statement& Semantics::statement_at(const Frame& frame) const {
  return (*blocks_[static_cast<std::size_t>(frame.block)])[static_cast<std::size_t>(frame.index)];
}

void Semantics::advance(RebecState& state) const {
  if (!state.pc.empty()) ++state.pc.back().index;
  while (!state.pc.empty() &&
         static_cast<std::size_t>(state.pc.back().index) >=
             blocks_[static_cast<std::size_t>(state.pc.back().block)]->size()) {
    state.pc.pop_back();
  }
  if (state.pc.empty()) {
    state.server = -1;
    state.locals.clear();
  }
}

void Semantics::enter_block(RebecState& state, int block) const {
  if (!blocks_[static_cast<std::size_t>(block)]->empty()) state.pc.push_back({block, 0});
}

Expr Semantics::translate(const Expr& e, int rebec, const RebecState& state) const {
  const ClassDecl& cls = class_of(rebec);
  const auto& slots = int_var_slot_[model_.instances[static_cast<std::size_t>(rebec)].class_index];
  return normalize(substitute(e, [&](const std::string& name) -> std::optional<Expr> {
    if (state.server >= 0) {
      const auto& params = cls.msgsrvs[static_cast<std::size_t>(state.server)].params;
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name != name) continue;
        if (params[i].type == PrimType::int_type) return Expr::number(state.locals[i]);
        return Expr::variable(param_name(rebec, state.server, name));
      }
    }
    for (std::size_t i = 0; i < cls.state_vars.size(); ++i) {
      if (cls.state_vars[i].name != name) continue;
      if (slots[i] >= 0) return Expr::number(state.ints[static_cast<std::size_t>(slots[i])]);
      return Expr::variable(state_var_name(rebec, name));
    }
    return std::nullopt;
  }));
}

Expr Semantics::translate_discrete(const Expr& e, int rebec, const RebecState& state,
                                   SourceSpan span) const {
  Expr value = translate(e, rebec, state);
  if (!value.is_number() && !value.is_boolean() && !mentions_variables(value)) {
    throw TranslationError(std::to_string(span.line) + ":" + std::to_string(span.column) +
                           ": division by zero in discrete expression '" + to_string(e) +
                           "' of rebec " + model_.instances[static_cast<std::size_t>(rebec)].name);
  }
  return value;
}

Successor Semantics::fault(const Expr& guard, ha::TransitionKind kind, std::string cause) const {
  Successor s;
  s.guard = guard;
  s.next.fault = true;
  s.kind = kind;
  s.note = std::move(cause);
  return s;
}

Configuration Semantics::initial_configuration() const {
  Configuration cfg;
  cfg.timers.assign(static_cast<std::size_t>(limits_.timer_pool), false);
  cfg.args.assign(static_cast<std::size_t>(limits_.arg_pool), false);
  for (int r = 0; r < rebec_count(); ++r) {
    const ClassDecl& cls = class_of(r);
    const auto& inst = model_.instances[static_cast<std::size_t>(r)];
    RebecState state;
    const auto& slots = int_var_slot_[inst.class_index];
    state.ints.assign(static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(),
                                                             [](int s) { return s >= 0; })),
                      Rational(0));
    Message initial;
    initial.sender = r;
    initial.receiver = r;
    auto it = std::find_if(cls.msgsrvs.begin(), cls.msgsrvs.end(),
                           [](const auto& s) { return s.name == "initial"; });
    initial.server = static_cast<int>(it - cls.msgsrvs.begin());
    for (const Rational& v : inst.init_args) initial.args.push_back({false, v, -1});
    state.queue.push_back(std::move(initial));
    cfg.rebecs.push_back(std::move(state));
  }
  return cfg;
}

UrgencyClass Semantics::urgency_class(const Configuration& cfg) const {
  if (cfg.fault) return UrgencyClass::nonurgent;
  bool physical_active = false;
  for (const RebecState& s : cfg.rebecs) {
    if (!s.suspended && (!s.pc.empty() || !s.queue.empty())) return UrgencyClass::message_statement;
    physical_active = physical_active || s.mode >= 0;
  }
  if (!cfg.buffer.empty() && cfg.ready) return UrgencyClass::network;
  if (physical_active || !cfg.pending.empty()) return UrgencyClass::nonurgent;
  return UrgencyClass::terminal;
}

bool Semantics::insert_buffer(Configuration& cfg, const Message& message, std::int64_t priority) {
  auto it = std::lower_bound(cfg.buffer.begin(), cfg.buffer.end(), priority,
                             [](const BufferedMessage& b, std::int64_t p) { return b.priority < p; });
  if (it != cfg.buffer.end() && it->priority == priority) return false;
  cfg.buffer.insert(it, {message, priority});
  return true;
}

std::int64_t Semantics::priority_of(const Message& message) const {
  const std::string server = message.server < 0
                                 ? "setMode"
                                 : class_of(message.receiver)
                                       .msgsrvs[static_cast<std::size_t>(message.server)]
                                       .name;
  const frontend::MessageKey key{model_.instances[static_cast<std::size_t>(message.sender)].name,
                                 model_.instances[static_cast<std::size_t>(message.receiver)].name,
                                 server};
  return model_.priorities.at(key).numerator();
}

Successor Semantics::take_message(const Configuration& cfg, int rebec) const {
  Successor out;
  out.kind = ha::TransitionKind::message;
  out.next = cfg;
  RebecState& st = out.next.rebecs[static_cast<std::size_t>(rebec)];
  const Message msg = st.queue.front();
  st.queue.pop_front();
  const std::size_t cls_index = model_.instances[static_cast<std::size_t>(rebec)].class_index;
  if (msg.server < 0) {
    st.server = -1;
    enter_block(st, set_mode_blocks_[cls_index][static_cast<std::size_t>(msg.mode + 1)]);
    return out;
  }
  const auto& srv = class_of(rebec).msgsrvs[static_cast<std::size_t>(msg.server)];
  st.server = msg.server;
  st.locals.assign(srv.params.size(), Rational(0));
  for (std::size_t i = 0; i < srv.params.size(); ++i) {
    const Arg& arg = msg.args[i];
    if (srv.params[i].type == PrimType::int_type) {
      st.locals[i] = truncate(arg.literal);
      continue;
    }
    const std::string target = param_name(rebec, msg.server, srv.params[i].name);
    if (arg.pooled) {
      out.assignments.push_back({target, Expr::variable(arg_name(arg.slot))});
      out.next.args[static_cast<std::size_t>(arg.slot)] = false;
    } else {
      out.assignments.push_back({target, Expr::number(arg.literal)});
    }
  }
  enter_block(st, server_blocks_[cls_index][static_cast<std::size_t>(msg.server)]);
  if (st.pc.empty()) {
    st.server = -1;
    st.locals.clear();
  }
  return out;
}

std::vector<Successor> Semantics::execute(const Configuration& cfg, int rebec) const {
  const RebecState& pre = cfg.rebecs[static_cast<std::size_t>(rebec)];
  const Statement& s = statement_at(pre.pc.back());
  const ClassDecl& cls = class_of(rebec);
  const auto& inst = model_.instances[static_cast<std::size_t>(rebec)];
  const auto kind = ha::TransitionKind::statement;

  Successor out;
  out.kind = kind;
  out.next = cfg;
  RebecState& st = out.next.rebecs[static_cast<std::size_t>(rebec)];

  switch (s.kind) {
    case StmtKind::assign: {
      int local = -1;
      bool continuous_param = false;
      if (pre.server >= 0) {
        const auto& params = cls.msgsrvs[static_cast<std::size_t>(pre.server)].params;
        for (std::size_t i = 0; i < params.size(); ++i) {
          if (params[i].name != s.name) continue;
          if (params[i].type == PrimType::int_type) {
            local = static_cast<int>(i);
          } else {
            continuous_param = true;
          }
        }
      }
      if (local >= 0) {
        const Expr v = translate_discrete(s.expr, rebec, pre, s.span);
        st.locals[static_cast<std::size_t>(local)] = truncate(v.value());
      } else if (continuous_param) {
        out.assignments.push_back(
            {param_name(rebec, pre.server, s.name), translate(s.expr, rebec, pre)});
      } else {
        const auto& slots = int_var_slot_[inst.class_index];
        std::size_t var = 0;
        while (cls.state_vars[var].name != s.name) ++var;
        if (slots[var] >= 0) {
          const Expr v = translate_discrete(s.expr, rebec, pre, s.span);
          st.ints[static_cast<std::size_t>(slots[var])] = truncate(v.value());
        } else {
          out.assignments.push_back({state_var_name(rebec, s.name), translate(s.expr, rebec, pre)});
        }
      }
      advance(st);
      return {std::move(out)};
    }
    case StmtKind::if_else: {
      const Expr c = translate_discrete(s.expr, rebec, pre, s.span);
      const int then_block = block_ids_.at(&s.then_block);
      const int else_block = block_ids_.at(&s.else_block);
      auto branch = [&](bool taken, const Expr& guard) {
        Successor b;
        b.kind = kind;
        b.guard = guard;
        b.next = cfg;
        RebecState& bs = b.next.rebecs[static_cast<std::size_t>(rebec)];
        ++bs.pc.back().index;
        const int block = taken ? then_block : else_block;
        const std::size_t depth = bs.pc.size();
        enter_block(bs, block);
        if (bs.pc.size() == depth) {
          --bs.pc.back().index;
          advance(bs);
        }
        return b;
      };
      if (c.is_boolean()) return {branch(c.truth(), Expr())};
      std::vector<Successor> result;
      for (const Expr& term : disjunctive_normal_form(c)) result.push_back(branch(true, term));
      for (const Expr& term : disjunctive_normal_form(normalize(negate(c)))) {
        result.push_back(branch(false, term));
      }
      return result;
    }
    case StmtKind::delay: {
      const Expr d = translate(s.expr, rebec, pre);
      const int slot = lowest_free(out.next.timers);
      if (slot < 0) return {fault(Expr(), kind, "timer pool exhausted by delay in " + inst.name)};
      out.next.timers[static_cast<std::size_t>(slot)] = true;
      st.suspended = true;
      PendingEvent event;
      event.delay = d.value();
      event.rebec = rebec;
      event.timer = slot;
      insert_pending(out.next, std::move(event));
      out.assignments.push_back({timer_name(slot), Expr::number(Rational(0))});
      advance(st);
      return {std::move(out)};
    }
    case StmtKind::set_mode: {
      st.mode = -1;
      for (std::size_t m = 0; m < cls.modes.size(); ++m) {
        if (cls.modes[m].name == s.name) st.mode = static_cast<int>(m);
      }
      advance(st);
      return {std::move(out)};
    }
    case StmtKind::send:
    case StmtKind::send_set_mode: {
      int receiver = rebec;
      Connection connection = Connection::wire;
      if (s.target != "self") {
        const auto& binding = inst.known.at(s.target);
        receiver = static_cast<int>(binding.instance);
        connection = binding.connection;
      }
      const ClassDecl& target_cls = class_of(receiver);
      Message msg;
      msg.sender = rebec;
      msg.receiver = receiver;
      if (s.kind == StmtKind::send_set_mode) {
        msg.server = -1;
        for (std::size_t m = 0; m < target_cls.modes.size(); ++m) {
          if (target_cls.modes[m].name == s.name) msg.mode = static_cast<int>(m);
        }
      } else {
        for (std::size_t k = 0; k < target_cls.msgsrvs.size(); ++k) {
          if (target_cls.msgsrvs[k].name == s.server) msg.server = static_cast<int>(k);
        }
        for (const Expr& a : s.args) {
          const Expr value = translate_discrete(a, rebec, pre, s.span);
          if (value.is_number()) {
            msg.args.push_back({false, value.value(), -1});
            continue;
          }
          const int slot = lowest_free(out.next.args);
          if (slot < 0) return {fault(Expr(), kind, "arg pool exhausted by send in " + inst.name)};
          out.next.args[static_cast<std::size_t>(slot)] = true;
          out.assignments.push_back({arg_name(slot), value});
          msg.args.push_back({true, Rational(0), slot});
        }
      }
      const std::string& receiver_name = model_.instances[static_cast<std::size_t>(receiver)].name;
      if (connection == Connection::wire) {
        auto& queue = out.next.rebecs[static_cast<std::size_t>(receiver)].queue;
        if (static_cast<int>(queue.size()) >= queue_bounds_[static_cast<std::size_t>(receiver)]) {
          return {fault(Expr(), kind, "queue overflow at " + receiver_name)};
        }
        queue.push_back(std::move(msg));
      } else if (!insert_buffer(out.next, msg, priority_of(msg))) {
        return {fault(Expr(), kind, "duplicate CAN priority in buffer, sent by " + inst.name)};
      }
      advance(st);
      return {std::move(out)};
    }
  }
  return {};
}

// Renumbers the allocated arg slots of s.next to 0..k-1 in order of
// appearance (buffer, queues, pending transfers).
void Semantics::compact_args(Successor& s) const {
  if (s.next.fault) return;
  std::vector<int> renumber(s.next.args.size(), -1);
  int next_slot = 0;
  auto visit = [&](Message& m) {
    for (Arg& a : m.args) {
      if (!a.pooled) continue;
      int& target = renumber[static_cast<std::size_t>(a.slot)];
      if (target < 0) target = next_slot++;
      a.slot = target;
    }
  };
  for (BufferedMessage& b : s.next.buffer) visit(b.message);
  for (RebecState& r : s.next.rebecs) {
    for (Message& m : r.queue) visit(m);
  }
  for (PendingEvent& e : s.next.pending) {
    if (e.transfer) visit(e.message);
  }
  bool identity = true;
  for (std::size_t old = 0; old < renumber.size(); ++old) {
    identity = identity && (renumber[old] < 0 || renumber[old] == static_cast<int>(old));
  }
  if (identity) return;
  std::map<std::string, std::string> renamed;
  for (std::size_t old = 0; old < renumber.size(); ++old) {
    if (renumber[old] >= 0) renamed[arg_name(static_cast<int>(old))] = arg_name(renumber[old]);
  }
  std::vector<ha::Assignment> assignments;
  std::set<std::string> assigned;
  for (ha::Assignment& a : s.assignments) {
    auto it = renamed.find(a.var);
    if (it != renamed.end()) {
      a.var = it->second;
      assigned.insert(a.var);
      renamed.erase(it);
    }
    assignments.push_back(std::move(a));
  }
  for (const auto& [from, to] : renamed) {
    if (from != to) assignments.push_back({to, Expr::variable(from)});
  }
  s.assignments = std::move(assignments);
  std::fill(s.next.args.begin(), s.next.args.end(), false);
  std::fill(s.next.args.begin(), s.next.args.begin() + next_slot, true);
}

std::vector<Successor> Semantics::finish(std::vector<Successor> succs) const {
  for (Successor& s : succs) compact_args(s);
  return succs;
}

std::vector<Successor> Semantics::successors_message(const Configuration& cfg) const {
  std::vector<Successor> out;
  if (urgency_class(cfg) != UrgencyClass::message_statement) return out;
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    if (!s.suspended && s.pc.empty() && !s.queue.empty()) out.push_back(take_message(cfg, r));
  }
  return finish(std::move(out));
}

std::vector<Successor> Semantics::successors_statement(const Configuration& cfg) const {
  std::vector<Successor> out;
  if (urgency_class(cfg) != UrgencyClass::message_statement) return out;
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    if (!s.suspended && !s.pc.empty()) {
      for (Successor& succ : execute(cfg, r)) out.push_back(std::move(succ));
    }
  }
  return finish(std::move(out));
}

std::optional<Successor> Semantics::successor_network(const Configuration& cfg) const {
  if (urgency_class(cfg) != UrgencyClass::network) return std::nullopt;
  const auto kind = ha::TransitionKind::network;
  if (cfg.buffer.size() > 1 && cfg.buffer[0].priority == cfg.buffer[1].priority) {
    return fault(Expr(), kind, "CAN priority tie");
  }
  Successor out;
  out.kind = kind;
  out.next = cfg;
  const BufferedMessage head = cfg.buffer.front();
  out.next.buffer.erase(out.next.buffer.begin());
  const int slot = lowest_free(out.next.timers);
  if (slot < 0) return fault(Expr(), kind, "timer pool exhausted by CAN transfer");
  out.next.timers[static_cast<std::size_t>(slot)] = true;
  const Message& m = head.message;
  const std::string server =
      m.server < 0 ? "setMode"
                   : class_of(m.receiver).msgsrvs[static_cast<std::size_t>(m.server)].name;
  PendingEvent event;
  event.delay = model_.delays.at({model_.instances[static_cast<std::size_t>(m.sender)].name,
                                  model_.instances[static_cast<std::size_t>(m.receiver)].name,
                                  server});
  event.transfer = true;
  event.message = m;
  event.timer = slot;
  insert_pending(out.next, std::move(event));
  out.next.ready = false;
  out.assignments.push_back({timer_name(slot), Expr::number(Rational(0))});
  compact_args(out);
  return out;
}

std::vector<Successor> Semantics::successors_nonurgent(const Configuration& cfg) const {
  std::vector<Successor> out;
  if (cfg.fault || urgency_class(cfg) != UrgencyClass::nonurgent) return out;
  const auto kind = ha::TransitionKind::nonurgent;
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    if (s.mode < 0) continue;
    const auto& mode = class_of(r).modes[static_cast<std::size_t>(s.mode)];
    const Expr guard = translate(mode.guard, r, s);
    const std::size_t cls_index = model_.instances[static_cast<std::size_t>(r)].class_index;
    for (const Expr& term : disjunctive_normal_form(guard)) {
      Successor succ;
      succ.kind = kind;
      succ.guard = term;
      succ.next = cfg;
      RebecState& ns = succ.next.rebecs[static_cast<std::size_t>(r)];
      ns.mode = -1;
      ns.server = -1;
      ns.locals.clear();
      enter_block(ns, mode_blocks_[cls_index][static_cast<std::size_t>(s.mode)]);
      out.push_back(std::move(succ));
    }
  }
  for (std::size_t i = 0; i < cfg.pending.size(); ++i) {
    const PendingEvent& e = cfg.pending[i];
    const Expr guard = equals(timer_name(e.timer), e.delay);
    Successor succ;
    succ.kind = kind;
    succ.guard = guard;
    succ.next = cfg;
    succ.next.pending.erase(succ.next.pending.begin() + static_cast<std::ptrdiff_t>(i));
    succ.next.timers[static_cast<std::size_t>(e.timer)] = false;
    if (!e.transfer) {
      succ.next.rebecs[static_cast<std::size_t>(e.rebec)].suspended = false;
    } else {
      const int receiver = e.message.receiver;
      auto& queue = succ.next.rebecs[static_cast<std::size_t>(receiver)].queue;
      if (static_cast<int>(queue.size()) >= queue_bounds_[static_cast<std::size_t>(receiver)]) {
        out.push_back(fault(guard, kind,
                            "queue overflow at " +
                                model_.instances[static_cast<std::size_t>(receiver)].name));
        continue;
      }
      queue.push_back(e.message);
      succ.next.ready = true;
    }
    out.push_back(std::move(succ));
  }
  return finish(std::move(out));
}

std::vector<Successor> Semantics::successors(const Configuration& cfg) const {
  if (cfg.fault) return {};
  switch (urgency_class(cfg)) {
    case UrgencyClass::message_statement: {
      std::vector<Successor> out;
      for (int r = 0; r < rebec_count(); ++r) {
        const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
        if (s.suspended) continue;
        if (!s.pc.empty()) {
          for (Successor& succ : execute(cfg, r)) out.push_back(std::move(succ));
        } else if (!s.queue.empty()) {
          out.push_back(take_message(cfg, r));
        }
      }
      return finish(std::move(out));
    }
    case UrgencyClass::network: {
      std::vector<Successor> out;
      if (auto succ = successor_network(cfg)) out.push_back(std::move(*succ));
      return out;
    }
    case UrgencyClass::nonurgent: return successors_nonurgent(cfg);
    case UrgencyClass::terminal: return {};
  }
  return {};
}

FlowsAndInvariant Semantics::flows_and_invariant(const Configuration& cfg) const {
  FlowsAndInvariant out;
  if (!cfg.fault) {
    const UrgencyClass c = urgency_class(cfg);
    if (c == UrgencyClass::message_statement || c == UrgencyClass::network) {
      out.urgent = true;
      return out;
    }
  }
  for (const std::string& v : variables_) out.flows[v] = Expr::number(Rational(0));
  if (cfg.fault) return out;
  std::vector<Expr> invariants;
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    if (s.mode < 0) continue;
    const auto& mode = class_of(r).modes[static_cast<std::size_t>(s.mode)];
    for (const auto& flow : mode.flows) {
      out.flows[state_var_name(r, flow.var)] = translate(flow.rate, r, s);
    }
    invariants.push_back(translate(mode.invariant, r, s));
  }
  for (const PendingEvent& e : cfg.pending) {
    out.flows[timer_name(e.timer)] = Expr::number(Rational(1));
    invariants.push_back(Expr::binary(Op::less_equal, Expr::variable(timer_name(e.timer)),
                                      Expr::number(e.delay)));
  }
  out.invariant = normalize(conjunction(std::move(invariants)));
  return out;
}

std::string Semantics::encode(const Configuration& cfg) const {
  if (cfg.fault) return "FAULT";
  std::string out;
  out.reserve(128);
  for (const RebecState& s : cfg.rebecs) {
    out += '[';
    for (const Rational& v : s.ints) {
      encode_rational(out, v);
      out += ',';
    }
    out += '|';
    for (const Rational& v : s.locals) {
      encode_rational(out, v);
      out += ',';
    }
    out += '|' + std::to_string(s.server) + (s.suspended ? "S" : "") + 'M' + std::to_string(s.mode) + 'q';
    for (const Message& m : s.queue) encode_message(out, m);
    out += 'c';
    for (const Frame& f : s.pc) out += std::to_string(f.block) + '.' + std::to_string(f.index) + ',';
    out += ']';
  }
  out += 'B';
  for (const BufferedMessage& b : cfg.buffer) {
    out += std::to_string(b.priority);
    encode_message(out, b.message);
  }
  out += cfg.ready ? "R" : "r";
  out += 'P';
  for (const PendingEvent& e : cfg.pending) {
    encode_rational(out, e.delay);
    out += e.transfer ? 'T' : 'R';
    if (e.transfer) {
      encode_message(out, e.message);
    } else {
      out += std::to_string(e.rebec);
    }
    out += '@' + std::to_string(e.timer) + ';';
  }
  out += 'A';
  for (bool b : cfg.timers) out += b ? '1' : '0';
  out += '/';
  for (bool b : cfg.args) out += b ? '1' : '0';
  return out;
}

std::string Semantics::describe(const Configuration& cfg) const {
  if (cfg.fault) return "Fault";
  std::string out;
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    const ClassDecl& cls = class_of(r);
    if (!out.empty()) out += "; ";
    out += model_.instances[static_cast<std::size_t>(r)].name + "{";
    if (cls.physical) out += "mode=" + mode_name(r, s.mode) + " ";
    if (s.suspended) out += "suspended ";
    if (!s.pc.empty()) {
      const Statement& st = statement_at(s.pc.back());
      out += "at " + std::to_string(st.span.line) + ":" + std::to_string(st.span.column) + " ";
    }
    out += "queue=" + std::to_string(s.queue.size()) + "}";
  }
  out += "; buffer=" + std::to_string(cfg.buffer.size()) + (cfg.ready ? " ready" : " busy") +
         "; pending=" + std::to_string(cfg.pending.size());
  return out;
}

std::string Semantics::location_name(const Configuration& cfg, int id) const {
  if (cfg.fault) return "Fault";
  const FlowsAndInvariant fi = flows_and_invariant(cfg);
  if (fi.urgent) return "u" + std::to_string(id);
  std::string name = "l" + std::to_string(id);
  for (int r = 0; r < rebec_count(); ++r) {
    const RebecState& s = cfg.rebecs[static_cast<std::size_t>(r)];
    if (s.mode >= 0) {
      name += "_" + model_.instances[static_cast<std::size_t>(r)].name + "_" + mode_name(r, s.mode);
    }
  }
  return name;
}

}  // namespace hrbc::translator
