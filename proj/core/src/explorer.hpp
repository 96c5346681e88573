#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>

#include "robust/oracle.hpp"

namespace robust::detail {

struct SearchNode {
  const MachineState& state;
  const Computation& prefix;
  const std::vector<std::size_t>& schedule;
  const CostTracker& cost;
  std::uint64_t prefix_hash;
  bool terminal;  ///< no transition enabled at all
};

enum class Step { Descend, Prune, Stop };

/// Depth-first walk over the transition system, bounded by max_actions.
/// Nodes reached twice with the same state and the same action prefix are
/// expanded once.
class Explorer {
 public:
  Explorer(const Program& p, const ExplorationConfig& cfg);

  EnumerationStats run(const std::function<Step(const SearchNode&)>& on_node);

  const Machine& machine() const { return machine_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
      return static_cast<std::size_t>(k.first ^ (k.second * 0x9e3779b97f4a7c15ULL));
    }
  };

  bool dfs(const MachineState& s, std::uint64_t prefix_hash, const CostTracker& tracker);

  Machine machine_;
  ExplorationConfig cfg_;
  const std::function<Step(const SearchNode&)>* on_node_ = nullptr;
  Computation prefix_;
  std::vector<std::size_t> schedule_;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, KeyHash> seen_;
  EnumerationStats stats_;
};

std::uint64_t extend_hash(std::uint64_t h, const Action& a, const BufferEntry* issued);

}  // namespace robust::detail
