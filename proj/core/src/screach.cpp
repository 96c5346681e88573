#include <algorithm>
#include <deque>
#include <unordered_map>

#include "robust/screach.hpp"

namespace robust {

namespace {

using Packed = std::vector<Value>;

struct PackedHash {
  std::size_t operator()(const Packed& p) const {
    std::size_t h = p.size();
    for (Value v : p) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// pcs, then registers per thread (zeroed once the thread has terminated),
/// then memory. Buffers are always empty under SC.
Packed pack(const Machine& m, const MachineState& s) {
  Packed p;
  for (const auto& t : s.threads) p.push_back(t.pc);
  for (ThreadId t = 0; t < s.threads.size(); ++t) {
    bool done = m.terminated(s, t);
    for (Value v : s.threads[t].registers) p.push_back(done ? 0 : v);
  }
  p.insert(p.end(), s.memory.begin(), s.memory.end());
  return p;
}

struct Node {
  MachineState state;
  std::size_t parent;
  std::size_t choice;
};

ReachResult search(const ReachQuery& q, bool reduce) {
  if (q.goal_address >= q.program.domain_size)
    throw std::invalid_argument("goal address " + std::to_string(q.goal_address) + " is outside the domain");
  Machine m(q.program, MachineOptions{0});
  ReachResult r;
  std::vector<Node> nodes;
  std::unordered_map<Packed, std::size_t, PackedHash> seen;
  std::deque<std::size_t> frontier;

  auto visit = [&](MachineState s, std::size_t parent, std::size_t choice) -> std::optional<std::size_t> {
    auto [it, fresh] = seen.try_emplace(pack(m, s), nodes.size());
    if (!fresh) return std::nullopt;
    if (nodes.size() >= q.limits.max_states)
      throw BudgetExhausted("state budget of " + std::to_string(q.limits.max_states) + " exhausted", r.stats);
    nodes.push_back({std::move(s), parent, choice});
    ++r.stats.states_visited;
    frontier.push_back(it->second);
    r.stats.peak_frontier = std::max(r.stats.peak_frontier, frontier.size());
    return it->second;
  };

  std::optional<std::size_t> goal;
  auto check_goal = [&](std::size_t id) {
    if (!goal && nodes[id].state.memory[q.goal_address] != 0) goal = id;
  };

  if (auto id = visit(m.initial_state(), SIZE_MAX, 0)) check_goal(*id);
  while (!frontier.empty() && (q.exhaustive || !goal)) {
    std::size_t id = frontier.front();
    frontier.pop_front();
    auto ts = m.sc_enabled(nodes[id].state);

    std::vector<std::size_t> chosen;
    if (reduce) {
      for (ThreadId t = 0; t < m.thread_count() && chosen.empty(); ++t) {
        if (!m.at_local_instructions(nodes[id].state, t)) continue;
        for (std::size_t c = 0; c < ts.size(); ++c)
          if (ts[c].thread == t) chosen.push_back(c);
      }
      // Expand fully if the reduced set would close a cycle onto known states.
      for (std::size_t c : chosen)
        if (seen.count(pack(m, ts[c].next))) {
          chosen.clear();
          break;
        }
    }
    if (chosen.empty())
      for (std::size_t c = 0; c < ts.size(); ++c) chosen.push_back(c);

    for (std::size_t c : chosen) {
      ++r.stats.transitions;
      if (auto child = visit(std::move(ts[c].next), id, c)) check_goal(*child);
    }
  }

  if (!goal) return r;
  r.reachable = true;
  for (std::size_t id = *goal; nodes[id].parent != SIZE_MAX; id = nodes[id].parent)
    r.schedule.push_back(nodes[id].choice);
  std::reverse(r.schedule.begin(), r.schedule.end());
  auto replay = run(m, r.schedule, SemanticsMode::Sc);
  r.witness = std::get<Computation>(std::move(replay));
  return r;
}

}  // namespace

ReachResult reachable(const ReachQuery& q) { return search(q, false); }

ReachResult por_reduce(const ReachQuery& q) { return search(q, true); }

}  // namespace robust
