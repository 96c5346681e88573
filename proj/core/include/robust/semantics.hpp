#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robust/syntax.hpp"

namespace robust {

using ThreadId = std::uint32_t;

// ---------------------------------------------------------------------------
// Machine state

/// A store waiting in a per-address buffer.
struct PendingStore {
  Value address = 0;
  Value value = 0;
  bool operator==(const PendingStore&) const = default;
};

/// An entry of the all-addresses buffer: a store or an issued fence.
struct BufferEntry {
  enum class Kind : std::uint8_t { Store, Fence };
  Kind kind = Kind::Store;
  Value address = 0;
  Value value = 0;
  std::vector<Value> fence_addresses;

  static BufferEntry store(Value address, Value value) { return {Kind::Store, address, value, {}}; }
  static BufferEntry fence(std::vector<Value> addresses) { return {Kind::Fence, 0, 0, std::move(addresses)}; }
  bool is_fence() const { return kind == Kind::Fence; }
  bool operator==(const BufferEntry&) const = default;
};

struct ThreadState {
  std::uint32_t pc = 0;  ///< label index, see Machine::label_name
  std::vector<Value> registers;
  /// All per-address buffers of the thread interleaved in issue order; the
  /// queue for address a is the subsequence with that address.
  std::vector<PendingStore> per_address;
  std::vector<BufferEntry> all_addresses;

  std::size_t pending_for(Value address) const;
  bool buffers_empty() const { return per_address.empty() && all_addresses.empty(); }
  bool operator==(const ThreadState&) const = default;
};

struct MachineState {
  std::vector<ThreadState> threads;
  std::vector<Value> memory;

  bool buffers_empty() const;
  std::size_t hash() const;
  bool operator==(const MachineState&) const = default;
};

struct MachineStateHash {
  std::size_t operator()(const MachineState& s) const { return s.hash(); }
};

// ---------------------------------------------------------------------------
// Actions and computations

enum class ActionKind : std::uint8_t { Store, Load, Issue, Local, ScFence, Fence };

std::string_view to_string(ActionKind k);

struct Action {
  ThreadId thread = 0;
  ActionKind kind = ActionKind::Local;
  Value address = 0;             ///< Store, Load
  Value value = 0;               ///< Store, Load
  std::vector<Value> addresses;  ///< Fence

  bool is_retirement() const { return kind == ActionKind::Store || kind == ActionKind::Fence; }
  bool operator==(const Action&) const = default;
};

std::string describe(const Action& a, const Program& p);

/// A sequence of actions. Issue actions carry no payload of their own, so
/// the entry each one put into the buffers is recorded alongside, in the
/// order the issues occur.
struct Computation {
  std::vector<Action> actions;
  std::vector<BufferEntry> issued;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }

  /// For each Store/Fence action, the index of its Issue action. Stores of one
  /// thread to one address, and fences of one thread, retire in issue order.
  std::vector<std::optional<std::size_t>> issue_index() const;

  /// For each Issue action, the index of its Store/Fence action if it retired.
  std::vector<std::optional<std::size_t>> retire_index() const;

  /// True iff every Issue has a matching retirement and vice versa.
  bool pairing_complete() const;

  bool operator==(const Computation&) const = default;
};

// ---------------------------------------------------------------------------
// Transitions

enum class Rule : std::uint8_t {
  EarlyRead1,
  EarlyRead2,
  ReadMemory,
  IssueStore,
  AdvanceBuffer,
  StoreToMemory,
  ScFence,
  IssueFence,
  Fence,
  LocalAssignment,
  LocalAssertion,
};

std::string_view to_string(Rule r);

struct Transition {
  ThreadId thread = 0;
  Rule rule = Rule::LocalAssignment;
  /// Empty for the internal advance step; two entries for an SC store or
  /// fence (issue immediately followed by its retirement).
  std::vector<Action> actions;
  std::optional<BufferEntry> issued;
  MachineState next;

  bool is_internal() const { return actions.empty(); }
};

enum class SemanticsMode : std::uint8_t { Relaxed, Sc };

struct MachineOptions {
  /// Maximum length of every per-address queue and every all-addresses
  /// buffer. Zero means no buffering at all, which coincides with SC.
  unsigned buffer_bound = 3;
};

/// Executable form of a validated program.
class Machine {
 public:
  explicit Machine(Program p, MachineOptions options = {});

  const Program& program() const { return program_; }
  const MachineOptions& options() const { return options_; }
  std::size_t thread_count() const { return threads_.size(); }
  Value domain_size() const { return program_.domain_size; }

  MachineState initial_state() const;

  /// Successors under the relaxed semantics, in deterministic order: threads
  /// in declaration order, then rules in the order of the Rule enum, then
  /// instructions in declaration order and buffered addresses oldest first.
  std::vector<Transition> enabled(const MachineState& s) const;

  /// Successors under SC: stores and fences take effect at issue.
  std::vector<Transition> sc_enabled(const MachineState& s) const;

  std::vector<Transition> successors(const MachineState& s, SemanticsMode mode) const {
    return mode == SemanticsMode::Sc ? sc_enabled(s) : enabled(s);
  }

  /// True iff the thread sits at a label without instructions.
  bool terminated(const MachineState& s, ThreadId t) const;

  /// True iff every instruction at the thread's pc only touches registers.
  bool at_local_instructions(const MachineState& s, ThreadId t) const;

  const std::string& label_name(ThreadId t, std::uint32_t label) const;
  std::optional<std::uint32_t> label_index(ThreadId t, std::string_view name) const;

  /// Human-readable reasons why each thread makes no progress in `s`.
  std::vector<std::string> explain_blocked(const MachineState& s, SemanticsMode mode) const;

 private:
  struct CompiledInstruction {
    const Instruction* source = nullptr;
    std::size_t source_index = 0;
    std::uint32_t next = 0;
    std::size_t dest = 0;
    CompiledExpr address;
    CompiledExpr value;
    std::vector<CompiledExpr> fence_addresses;
  };
  struct CompiledThread {
    std::vector<std::string> labels;
    std::vector<std::vector<CompiledInstruction>> at_label;
    std::uint32_t init = 0;
    std::size_t register_count = 0;
  };

  void thread_successors(const MachineState& s, ThreadId t, bool sc, std::vector<Transition>& out) const;
  Value load_value(const ThreadState& ts, const MachineState& s, Value address, Rule& rule) const;

  Program program_;
  MachineOptions options_;
  std::vector<CompiledThread> threads_;
};

/// Returned by apply() when the requested transition is not enabled.
class InvalidChoice : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

MachineState apply(const Machine& m, const MachineState& s, std::size_t choice,
                   SemanticsMode mode = SemanticsMode::Relaxed);

struct StuckReport {
  Computation prefix;
  MachineState state;
  std::size_t index = 0;  ///< position in the schedule that could not be taken
  std::size_t enabled_count = 0;
  std::vector<std::string> reasons;
};

using RunResult = std::variant<Computation, StuckReport>;

/// Replays a schedule of choice indices. Internal advance steps are taken but
/// produce no action.
RunResult run(const Machine& m, const std::vector<std::size_t>& schedule,
              SemanticsMode mode = SemanticsMode::Relaxed, MachineState* final_state = nullptr);

/// Finds a schedule whose recorded actions are exactly `target.actions`,
/// inserting internal advance steps where needed. Issue actions match by
/// thread, and also by buffer entry when `target.issued` is non-empty.
std::optional<std::vector<std::size_t>> realize(const Machine& m, const Computation& target,
                                                SemanticsMode mode = SemanticsMode::Relaxed);

}  // namespace robust
