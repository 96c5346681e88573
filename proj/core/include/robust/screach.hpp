#pragma once

#include <stdexcept>

#include "robust/semantics.hpp"

namespace robust {

struct ReachLimits {
  std::size_t max_states = 5'000'000;
};

/// Is there an SC computation reaching a state with mem[goal_address] != 0?
struct ReachQuery {
  Program program;
  Value goal_address = 0;
  ReachLimits limits;
  /// Keep exploring after the goal is found, so the statistics cover the
  /// whole reachable state space.
  bool exhaustive = false;
};

struct ReachStats {
  std::size_t states_visited = 0;
  std::size_t transitions = 0;
  std::size_t peak_frontier = 0;
};

struct ReachResult {
  bool reachable = false;
  /// Choice indices into Machine::sc_enabled, shortest under BFS.
  std::vector<std::size_t> schedule;
  Computation witness;
  ReachStats stats;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, ReachStats stats) : std::runtime_error(what), stats_(stats) {}
  const ReachStats& stats() const { return stats_; }

 private:
  ReachStats stats_;
};

/// Breadth-first search over SC states.
ReachResult reachable(const ReachQuery& q);

/// Same answer as reachable(), expanding only the transitions of one thread
/// whenever some thread is about to execute purely local instructions.
ReachResult por_reduce(const ReachQuery& q);

}  // namespace robust
