#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrbc/expr.hpp"
#include "hrbc/frontend/checker.hpp"
#include "hrbc/ha/automaton.hpp"

namespace hrbc::translator {

struct Limits {
  int default_queue = 1;
  std::map<std::string, int> queue;  // per-rebec override
  int timer_pool = 1;
  int arg_pool = 4;
  std::size_t max_configs = 200000;

  int queue_bound(const std::string& rebec) const;
};

/// Raised when exploration cannot produce an automaton (cutoff exceeded,
/// instantaneous cycle, discrete evaluation error).
class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A message argument: a discrete literal, or an arg-pool slot holding a
/// continuous value.
struct Arg {
  bool pooled = false;
  Rational literal;
  int slot = -1;

  bool operator==(const Arg&) const = default;
};

struct Message {
  int sender = 0;
  int receiver = 0;
  int server = -1;  // index into the receiver class's msgsrvs; -1 for setMode
  int mode = -1;    // setMode target; -1 for none
  std::vector<Arg> args;

  bool operator==(const Message&) const = default;
};

struct Frame {
  int block = 0;
  int index = 0;

  bool operator==(const Frame&) const = default;
};

struct RebecState {
  std::vector<Rational> ints;    // int state variables, in declaration order of int vars
  std::vector<Rational> locals;  // int parameters of the running message server
  int server = -1;               // running message server, -1 when idle or in mode actions
  bool suspended = false;
  int mode = -1;  // active mode (physical rebecs); -1 is `none`
  std::deque<Message> queue;
  std::vector<Frame> pc;  // empty: nothing to execute

  bool operator==(const RebecState&) const = default;
};

struct BufferedMessage {
  Message message;
  std::int64_t priority = 0;

  bool operator==(const BufferedMessage&) const = default;
};

struct PendingEvent {
  Rational delay;
  bool transfer = false;  // false: Resume(rebec)
  int rebec = -1;
  Message message;
  int timer = -1;

  bool operator==(const PendingEvent&) const = default;
};

struct Configuration {
  std::vector<RebecState> rebecs;
  std::vector<BufferedMessage> buffer;  // sorted by priority
  bool ready = true;
  std::vector<PendingEvent> pending;  // sorted by timer slot
  std::vector<bool> timers;           // allocated timer slots
  std::vector<bool> args;             // allocated arg slots
  bool fault = false;

  bool operator==(const Configuration&) const = default;
};

enum class UrgencyClass { message_statement, network, nonurgent, terminal };

const char* to_string(UrgencyClass c);

struct Successor {
  Expr guard;
  std::vector<ha::Assignment> assignments;
  Configuration next;
  ha::TransitionKind kind = ha::TransitionKind::plain;
  std::string note;  // fault cause, when next.fault
};

struct FlowsAndInvariant {
  std::map<std::string, Expr> flows;
  Expr invariant;
  bool urgent = false;
};

/// The operational semantics of one checked model under fixed limits.
/// Holds a reference to the model, which must outlive it.
class Semantics {
 public:
  Semantics(const frontend::CheckedModel& model, Limits limits);

  Configuration initial_configuration() const;
  UrgencyClass urgency_class(const Configuration& cfg) const;

  std::vector<Successor> successors_message(const Configuration& cfg) const;
  std::vector<Successor> successors_statement(const Configuration& cfg) const;
  std::optional<Successor> successor_network(const Configuration& cfg) const;
  std::vector<Successor> successors_nonurgent(const Configuration& cfg) const;
  /// All successors allowed by the urgency ordering, rebec-major.
  std::vector<Successor> successors(const Configuration& cfg) const;

  FlowsAndInvariant flows_and_invariant(const Configuration& cfg) const;

  /// Deterministic, injective serialization.
  std::string encode(const Configuration& cfg) const;
  std::string describe(const Configuration& cfg) const;
  /// `l<id>` plus the active modes, e.g. `l4_heater_Off`.
  std::string location_name(const Configuration& cfg, int id) const;

  /// All continuous variables of the model: state variables, message
  /// server parameters, and the timer and arg pools.
  const std::set<std::string>& variables() const { return variables_; }
  std::string state_var_name(int rebec, const std::string& var) const;
  std::string param_name(int rebec, int server, const std::string& param) const;
  static std::string timer_name(int slot);
  static std::string arg_name(int slot);

  const frontend::CheckedModel& model() const { return model_; }
  const Limits& limits() const { return limits_; }
  int rebec_count() const { return static_cast<int>(model_.instances.size()); }
  const frontend::ClassDecl& class_of(int rebec) const;
  /// Inserts into the CAN buffer keeping it sorted; false on a priority clash.
  static bool insert_buffer(Configuration& cfg, const Message& message, std::int64_t priority);
  std::int64_t priority_of(const Message& message) const;

 private:
  int register_block(const frontend::Block* block);
  const frontend::Statement& statement_at(const Frame& frame) const;
  void advance(RebecState& state) const;
  void enter_block(RebecState& state, int block) const;
  Expr translate(const Expr& e, int rebec, const RebecState& state) const;
  Expr translate_discrete(const Expr& e, int rebec, const RebecState& state,
                          SourceSpan span) const;
  std::vector<Successor> execute(const Configuration& cfg, int rebec) const;
  Successor take_message(const Configuration& cfg, int rebec) const;
  Successor fault(const Expr& guard, ha::TransitionKind kind, std::string cause) const;
  std::string mode_name(int rebec, int mode) const;
  void compact_args(Successor& s) const;
  std::vector<Successor> finish(std::vector<Successor> succs) const;

  const frontend::CheckedModel& model_;
  Limits limits_;
  std::vector<const frontend::Block*> blocks_;
  std::map<const frontend::Block*, int> block_ids_;
  std::deque<frontend::Block> synthetic_;
  // per class: msgsrv body blocks, mode action blocks, setMode blocks (index 0 is none)
  std::vector<std::vector<int>> server_blocks_;
  std::vector<std::vector<int>> mode_blocks_;
  std::vector<std::vector<int>> set_mode_blocks_;
  std::vector<std::vector<int>> int_var_slot_;  // per class: state var index -> int slot or -1
  std::vector<int> queue_bounds_;
  std::set<std::string> variables_;
};

struct ExploreResult {
  ha::HybridAutomaton ha;
  /// configurations[id - 1] is the configuration of location `id`; the
  /// Fault location, when present, has the last id and a fault configuration.
  std::vector<Configuration> configurations;
};

struct ExploreOptions {
  /// Re-derive successors of every configuration reached twice and compare
  /// them with the stored configuration's successors.
  bool verify_merges = false;
};

ExploreResult explore(const frontend::CheckedModel& model, const Limits& limits,
                      const ExploreOptions& options = {});

}  // namespace hrbc::translator
