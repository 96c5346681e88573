#pragma once

#include <functional>
#include <set>
#include <stdexcept>
#include <variant>

#include "robust/trace.hpp"

namespace robust {

struct ExplorationConfig {
  unsigned buffer_bound = 3;
  /// Bounds the number of recorded actions of a computation.
  std::size_t max_actions = 24;
  SemanticsMode mode = SemanticsMode::Relaxed;
  /// Hard cap on expanded search nodes; hitting it marks the result truncated.
  std::size_t max_nodes = 20'000'000;
};

/// Incremental delays/reorders bookkeeping along a computation prefix.
class CostTracker {
 public:
  explicit CostTracker(std::size_t threads = 0);

  void record(const Action& a, const BufferEntry* issued);

  /// Cost every completion of the prefix is bounded below by.
  CostTriple lower_bound(std::size_t length) const;
  std::size_t delays() const;
  std::size_t delayed_store_count() const;
  std::set<ThreadId> delaying_threads() const;

 private:
  struct Op {
    bool fence = false;
    Value address = 0;
    std::size_t delays = 0;
    std::size_t reorders = 0;
  };
  std::vector<std::vector<Op>> pending_;
  std::vector<char> delayed_thread_;
  std::size_t delays_ = 0;
  std::size_t reorders_ = 0;
  std::size_t delayed_stores_ = 0;
};

struct ViolationReport {
  Computation computation;
  std::vector<std::size_t> schedule;
  Trace trace;
  std::vector<std::size_t> cycle;
  CostTriple cost;
  std::set<ThreadId> delaying_threads;
  std::size_t delayed_store_count = 0;
  /// Minimal among the violations inside the explored bounds.
  bool bounded_minimal = false;
};

struct NotFoundWithinBounds {
  bool truncated = false;
  std::size_t nodes = 0;
};

using ViolationResult = std::variant<ViolationReport, NotFoundWithinBounds>;

struct EnumerationStats {
  std::size_t computations = 0;
  std::size_t nodes = 0;
  /// Some path was cut by max_actions or the node budget.
  bool truncated = false;
};

/// Calls `visit` once per distinct completed computation (no transition
/// enabled, all buffers empty) reachable within the bounds, in DFS order.
/// `visit` returns false to stop early.
EnumerationStats enumerate_computations(const Program& p, const ExplorationConfig& cfg,
                                        const std::function<bool(const Computation&)>& visit);

std::vector<Computation> collect_computations(const Program& p, const ExplorationConfig& cfg,
                                              EnumerationStats* stats = nullptr);

/// A violation is a computation (any prefix that ends with all buffers
/// empty) whose trace is cyclic. Returns the first one in DFS order.
ViolationResult find_violation(const Program& p, const ExplorationConfig& cfg);

/// A violation of least cost (delays, reorders, length); ties go to the
/// first one in DFS order.
ViolationResult find_minimal_violation(const Program& p, const ExplorationConfig& cfg);

/// The first minimal-cost violation that passes is_witness, or the first
/// minimal-cost violation if none does.
ViolationResult find_minimal_witness(const Program& p, const ExplorationConfig& cfg);

struct PropertyVerdict {
  bool holds = false;
  /// No violation at all within bounds.
  bool vacuous = false;
  bool truncated = false;
  std::optional<ViolationReport> witness;
  std::string detail;
};

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Holds iff there is no violation, or some violation delays exactly one store.
/// Throws PreconditionViolated for programs with fence instructions.
PropertyVerdict check_singularity(const Program& p, const ExplorationConfig& cfg);

/// Holds iff there is no violation, or some violation where exactly one
/// thread delays actions.
PropertyVerdict check_locality(const Program& p, const ExplorationConfig& cfg);

struct WitnessVerdict {
  bool w1 = false;  ///< only the attacker delays
  bool w2 = false;  ///< no attacker action between a and st
  bool w3 = false;  ///< no other delayed retirement before st
  bool w4 = false;  ///< a happens before everything up to st through the gap
  bool w5 = false;  ///< only delayed attacker retirements follow st
  ThreadId attacker = 0;
  std::size_t issue_st = 0;  ///< positions in the computation
  std::size_t last = 0;      ///< position of a
  std::size_t st = 0;

  bool all() const { return w1 && w2 && w3 && w4 && w5; }
};

class NoDecomposition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Decomposes c as t1 . isu(st) . t2 . a . t3 . st . t4 and checks the five
/// witness conditions. Tries each delayed store in issue order and returns
/// the first decomposition where all hold, else the first one tried.
WitnessVerdict is_witness(const Computation& c);

struct TraceSetResult {
  TraceSet traces;
  EnumerationStats stats;
};

TraceSetResult sc_trace_set(const Program& p, const ExplorationConfig& cfg);

}  // namespace robust
