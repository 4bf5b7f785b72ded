#pragma once

// Brute-force interpreter for discrete-only models, written directly over
// the checked AST with explicit clocks. Used as a reference for the
// translator's reachable discrete states.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrbc/frontend/checker.hpp"
#include "hrbc/translator/translator.hpp"

namespace support {

struct OracleMessage {
  int sender = 0;
  int receiver = 0;
  std::string server;
  std::vector<hrbc::Rational> args;
};

struct OraclePending {
  hrbc::Rational remaining;
  bool transfer = false;
  int rebec = -1;
  OracleMessage message;
};

struct OracleRebec {
  std::map<std::string, hrbc::Rational> vars;
  std::map<std::string, hrbc::Rational> locals;
  const hrbc::frontend::MsgSrv* server = nullptr;
  std::deque<OracleMessage> queue;
  std::vector<std::pair<const hrbc::frontend::Block*, std::size_t>> stack;
  bool suspended = false;
};

struct OracleState {
  std::vector<OracleRebec> rebecs;
  std::vector<std::pair<std::int64_t, OracleMessage>> buffer;
  bool ready = true;
  std::vector<OraclePending> pending;
  bool fault = false;
};

inline std::string oracle_message_text(const hrbc::frontend::CheckedModel& model,
                                       const OracleMessage& m) {
  std::string out = model.instances[static_cast<std::size_t>(m.sender)].name + ">" +
                    model.instances[static_cast<std::size_t>(m.receiver)].name + "." + m.server +
                    "(";
  for (const auto& a : m.args) out += hrbc::format_rational(a) + ",";
  return out + ")";
}

/// Observable discrete content: int variables, queues, bus buffer and the
/// multiset of pending events (without their remaining time).
inline std::string oracle_projection(const hrbc::frontend::CheckedModel& model,
                                     const OracleState& s) {
  if (s.fault) return "FAULT";
  std::ostringstream out;
  for (std::size_t r = 0; r < s.rebecs.size(); ++r) {
    out << model.instances[r].name << "{";
    for (const auto& v : model.class_of(r).state_vars) {
      if (v.type == hrbc::frontend::PrimType::int_type) {
        out << v.name << "=" << hrbc::format_rational(s.rebecs[r].vars.at(v.name)) << ";";
      }
    }
    out << "q:";
    for (const auto& m : s.rebecs[r].queue) out << oracle_message_text(model, m) << ";";
    out << "}";
  }
  out << "bus:";
  for (const auto& [p, m] : s.buffer) out << oracle_message_text(model, m) << ";";
  std::vector<std::string> pending;
  for (const auto& e : s.pending) {
    pending.push_back(e.transfer ? "T" + oracle_message_text(model, e.message)
                                 : "R" + model.instances[static_cast<std::size_t>(e.rebec)].name);
  }
  std::sort(pending.begin(), pending.end());
  out << "pending:";
  for (const auto& p : pending) out << p << ";";
  return out.str();
}

inline std::string oracle_valuation(const hrbc::frontend::CheckedModel& model,
                                    const OracleState& s) {
  if (s.fault) return "FAULT";
  std::string out;
  for (std::size_t r = 0; r < s.rebecs.size(); ++r) {
    for (const auto& v : model.class_of(r).state_vars) {
      if (v.type == hrbc::frontend::PrimType::int_type) {
        out += model.instances[r].name + "." + v.name + "=" +
               hrbc::format_rational(s.rebecs[r].vars.at(v.name)) + ";";
      }
    }
  }
  return out;
}

class Oracle {
 public:
  Oracle(const hrbc::frontend::CheckedModel& model, hrbc::translator::Limits limits)
      : model_(model), limits_(std::move(limits)) {}

  /// Projections of every reachable state in which no rebec can run and
  /// the bus cannot start a transfer.
  std::set<std::string> quiescent_states(std::size_t cutoff = 200000) const {
    return explore_states(cutoff).first;
  }

  /// Int valuations of every reachable state, fault included.
  std::set<std::string> valuations(std::size_t cutoff = 200000) const {
    return explore_states(cutoff).second;
  }

 private:
  std::pair<std::set<std::string>, std::set<std::string>> explore_states(std::size_t cutoff) const {
    std::set<std::string> seen;
    std::set<std::string> out;
    std::set<std::string> vals;
    std::vector<OracleState> work{initial()};
    seen.insert(key(work.back()));
    while (!work.empty()) {
      OracleState s = std::move(work.back());
      work.pop_back();
      std::vector<OracleState> next = step(s);
      if (next.empty() || quiescent(s)) out.insert(oracle_projection(model_, s));
      vals.insert(oracle_valuation(model_, s));
      for (auto& n : next) {
        if (seen.insert(key(n)).second) work.push_back(std::move(n));
      }
      if (seen.size() > cutoff) throw std::runtime_error("oracle cutoff exceeded");
    }
    return {out, vals};
  }

  struct Value {
    bool is_bool = false;
    bool truth = false;
    hrbc::Rational number;
  };

  static hrbc::Rational trunc(const hrbc::Rational& r) {
    return hrbc::Rational(r.numerator() / r.denominator());
  }

  OracleState initial() const {
    OracleState s;
    for (std::size_t r = 0; r < model_.instances.size(); ++r) {
      OracleRebec rb;
      for (const auto& v : model_.class_of(r).state_vars) {
        if (v.type != hrbc::frontend::PrimType::int_type) {
          throw std::runtime_error("oracle handles int variables only");
        }
        rb.vars[v.name] = hrbc::Rational(0);
      }
      rb.queue.push_back({static_cast<int>(r), static_cast<int>(r), "initial",
                          model_.instances[r].init_args});
      s.rebecs.push_back(std::move(rb));
    }
    return s;
  }

  bool runnable(const OracleRebec& r) const {
    return !r.suspended && (!r.stack.empty() || !r.queue.empty());
  }

  bool quiescent(const OracleState& s) const {
    if (s.fault) return true;
    for (const auto& r : s.rebecs) {
      if (runnable(r)) return false;
    }
    return s.buffer.empty() || !s.ready;
  }

  std::string key(const OracleState& s) const {
    std::ostringstream out;
    out << oracle_projection(model_, s) << "|ready=" << s.ready;
    for (const auto& r : s.rebecs) {
      out << "|" << r.suspended << ":";
      for (const auto& [b, i] : r.stack) out << static_cast<const void*>(b) << "@" << i << ",";
      for (const auto& [n, v] : r.locals) out << n << "=" << hrbc::format_rational(v) << ",";
    }
    for (const auto& e : s.pending) out << "|" << hrbc::format_rational(e.remaining);
    return out.str();
  }

  Value eval(const hrbc::Expr& e, const OracleRebec& r) const {
    using hrbc::ExprKind;
    using hrbc::Op;
    switch (e.kind()) {
      case ExprKind::number: return {false, false, e.value()};
      case ExprKind::boolean: return {true, e.truth(), {}};
      case ExprKind::variable: {
        auto l = r.locals.find(e.name());
        if (l != r.locals.end()) return {false, false, l->second};
        auto v = r.vars.find(e.name());
        if (v != r.vars.end()) return {false, false, v->second};
        auto c = model_.constants.find(e.name());
        if (c != model_.constants.end()) return {false, false, c->second};
        throw std::runtime_error("oracle: unknown name " + e.name());
      }
      case ExprKind::location: throw std::runtime_error("oracle: loc() in a model");
      case ExprKind::apply: break;
    }
    const auto& ops = e.operands();
    if (e.op() == Op::logical_and || e.op() == Op::logical_or) {
      const bool conj = e.op() == Op::logical_and;
      bool acc = conj;
      for (const auto& o : ops) acc = conj ? (acc && eval(o, r).truth) : (acc || eval(o, r).truth);
      return {true, acc, {}};
    }
    if (e.op() == Op::logical_not) return {true, !eval(ops[0], r).truth, {}};
    if (e.op() == Op::negate) return {false, false, -eval(ops[0], r).number};
    const hrbc::Rational a = eval(ops[0], r).number;
    const hrbc::Rational b = eval(ops[1], r).number;
    switch (e.op()) {
      case Op::add: return {false, false, a + b};
      case Op::subtract: return {false, false, a - b};
      case Op::multiply: return {false, false, a * b};
      case Op::divide:
        if (b == hrbc::Rational(0)) throw std::runtime_error("oracle: division by zero");
        return {false, false, a / b};
      case Op::less: return {true, a < b, {}};
      case Op::less_equal: return {true, a <= b, {}};
      case Op::greater: return {true, a > b, {}};
      case Op::greater_equal: return {true, a >= b, {}};
      case Op::equal: return {true, a == b, {}};
      case Op::not_equal: return {true, a != b, {}};
      default: throw std::runtime_error("oracle: unexpected operator");
    }
  }

  static void pop_finished(OracleRebec& r) {
    while (!r.stack.empty() && r.stack.back().second >= r.stack.back().first->size()) {
      r.stack.pop_back();
    }
    if (r.stack.empty()) {
      r.server = nullptr;
      r.locals.clear();
    }
  }

  static OracleState faulted() {
    OracleState f;
    f.fault = true;
    return f;
  }

  std::vector<OracleState> step(const OracleState& s) const {
    if (s.fault) return {};
    std::vector<OracleState> out;
    for (std::size_t r = 0; r < s.rebecs.size(); ++r) {
      if (runnable(s.rebecs[r])) out.push_back(run(s, static_cast<int>(r)));
    }
    if (!out.empty()) return out;
    if (!s.buffer.empty() && s.ready) {
      OracleState n = s;
      OracleMessage m = n.buffer.front().second;
      n.buffer.erase(n.buffer.begin());
      if (static_cast<int>(n.pending.size()) >= limits_.timer_pool) return {faulted()};
      const hrbc::frontend::MessageKey k{model_.instances[static_cast<std::size_t>(m.sender)].name,
                                         model_.instances[static_cast<std::size_t>(m.receiver)].name,
                                         m.server};
      n.pending.push_back({model_.delays.at(k), true, -1, m});
      n.ready = false;
      return {n};
    }
    if (s.pending.empty()) return {};
    hrbc::Rational least = s.pending.front().remaining;
    for (const auto& e : s.pending) least = std::min(least, e.remaining);
    for (std::size_t i = 0; i < s.pending.size(); ++i) {
      if (s.pending[i].remaining != least) continue;
      OracleState n = s;
      const OraclePending fired = n.pending[i];
      n.pending.erase(n.pending.begin() + static_cast<std::ptrdiff_t>(i));
      for (auto& e : n.pending) e.remaining -= least;
      if (fired.transfer) {
        if (!enqueue(n, fired.message)) {
          out.push_back(faulted());
          continue;
        }
        n.ready = true;
      } else {
        n.rebecs[static_cast<std::size_t>(fired.rebec)].suspended = false;
      }
      out.push_back(std::move(n));
    }
    return out;
  }

  bool enqueue(OracleState& s, const OracleMessage& m) const {
    auto& q = s.rebecs[static_cast<std::size_t>(m.receiver)].queue;
    const std::string& name = model_.instances[static_cast<std::size_t>(m.receiver)].name;
    if (static_cast<int>(q.size()) >= limits_.queue_bound(name)) return false;
    q.push_back(m);
    return true;
  }

  OracleState run(const OracleState& s, int index) const {
    OracleState n = s;
    OracleRebec& r = n.rebecs[static_cast<std::size_t>(index)];
    const auto& cls = model_.class_of(static_cast<std::size_t>(index));
    if (r.stack.empty()) {
      OracleMessage m = r.queue.front();
      r.queue.pop_front();
      const auto* srv = cls.find_msgsrv(m.server);
      r.server = srv;
      r.locals.clear();
      for (std::size_t i = 0; i < srv->params.size(); ++i) {
        r.locals[srv->params[i].name] = trunc(m.args[i]);
      }
      r.stack.push_back({&srv->body, 0});
      pop_finished(r);
      return n;
    }
    auto& frame = r.stack.back();
    const hrbc::frontend::Statement& st = (*frame.first)[frame.second];
    ++frame.second;
    using hrbc::frontend::StmtKind;
    switch (st.kind) {
      case StmtKind::assign: {
        const hrbc::Rational v = trunc(eval(st.expr, r).number);
        if (r.locals.count(st.name)) {
          r.locals[st.name] = v;
        } else {
          r.vars[st.name] = v;
        }
        break;
      }
      case StmtKind::if_else: {
        const bool c = eval(st.expr, r).truth;
        const auto* block = c ? &st.then_block : &st.else_block;
        r.stack.push_back({block, 0});
        break;
      }
      case StmtKind::delay: {
        if (static_cast<int>(n.pending.size()) >= limits_.timer_pool) return faulted();
        r.suspended = true;
        n.pending.push_back({eval(st.expr, r).number, false, index, {}});
        break;
      }
      case StmtKind::send: {
        OracleMessage m;
        m.sender = index;
        m.server = st.server;
        for (const auto& a : st.args) m.args.push_back(eval(a, r).number);
        hrbc::frontend::Connection conn = hrbc::frontend::Connection::wire;
        if (st.target == "self") {
          m.receiver = index;
        } else {
          const auto& b =
              model_.instances[static_cast<std::size_t>(index)].known.at(st.target);
          m.receiver = static_cast<int>(b.instance);
          conn = b.connection;
        }
        if (conn == hrbc::frontend::Connection::wire) {
          if (!enqueue(n, m)) return faulted();
        } else {
          const hrbc::frontend::MessageKey k{
              model_.instances[static_cast<std::size_t>(index)].name,
              model_.instances[static_cast<std::size_t>(m.receiver)].name, m.server};
          const std::int64_t p = model_.priorities.at(k).numerator();
          for (const auto& [q, other] : n.buffer) {
            if (q == p) return faulted();
          }
          auto it = std::find_if(n.buffer.begin(), n.buffer.end(),
                                 [p](const auto& b) { return b.first > p; });
          n.buffer.insert(it, {p, m});
        }
        break;
      }
      default: throw std::runtime_error("oracle handles discrete statements only");
    }
    pop_finished(r);
    return n;
  }

  const hrbc::frontend::CheckedModel& model_;
  hrbc::translator::Limits limits_;
};

inline OracleState oracle_view(const hrbc::translator::Semantics& sem,
                               const hrbc::translator::Configuration& cfg) {
  const auto& model = sem.model();
  OracleState s;
  s.fault = cfg.fault;
  auto convert = [&](const hrbc::translator::Message& m) {
    OracleMessage o;
    o.sender = m.sender;
    o.receiver = m.receiver;
    o.server = model.class_of(static_cast<std::size_t>(m.receiver))
                   .msgsrvs[static_cast<std::size_t>(m.server)]
                   .name;
    for (const auto& a : m.args) o.args.push_back(a.literal);
    return o;
  };
  if (cfg.fault) return s;
  for (std::size_t r = 0; r < cfg.rebecs.size(); ++r) {
    OracleRebec rb;
    std::size_t slot = 0;
    for (const auto& v : model.class_of(r).state_vars) {
      if (v.type == hrbc::frontend::PrimType::int_type) rb.vars[v.name] = cfg.rebecs[r].ints[slot++];
    }
    for (const auto& m : cfg.rebecs[r].queue) rb.queue.push_back(convert(m));
    s.rebecs.push_back(std::move(rb));
  }
  for (const auto& b : cfg.buffer) s.buffer.push_back({b.priority, convert(b.message)});
  for (const auto& e : cfg.pending) {
    OraclePending p;
    p.transfer = e.transfer;
    p.rebec = e.rebec;
    if (e.transfer) p.message = convert(e.message);
    s.pending.push_back(p);
  }
  return s;
}

/// The oracle's projections applied to the translator's configurations.
inline std::set<std::string> explored_valuations(
    const hrbc::translator::Semantics& sem,
    const std::vector<hrbc::translator::Configuration>& configurations) {
  std::set<std::string> out;
  for (const auto& cfg : configurations) out.insert(oracle_valuation(sem.model(), oracle_view(sem, cfg)));
  return out;
}

inline std::set<std::string> explored_quiescent_states(
    const hrbc::translator::Semantics& sem,
    const std::vector<hrbc::translator::Configuration>& configurations) {
  using hrbc::translator::UrgencyClass;
  std::set<std::string> out;
  for (const auto& cfg : configurations) {
    const UrgencyClass c = sem.urgency_class(cfg);
    if (!cfg.fault && c != UrgencyClass::nonurgent && c != UrgencyClass::terminal) continue;
    out.insert(oracle_projection(sem.model(), oracle_view(sem, cfg)));
  }
  return out;
}

}  // namespace support
