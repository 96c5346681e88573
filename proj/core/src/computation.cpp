#include <deque>
#include <map>
#include <unordered_set>

#include "robust/semantics.hpp"

namespace robust {

std::vector<std::optional<std::size_t>> Computation::issue_index() const {
  std::vector<std::optional<std::size_t>> out(actions.size());
  // Open issues per (thread, address) for stores and per thread for fences.
  std::map<std::pair<ThreadId, Value>, std::deque<std::size_t>> open_stores;
  std::map<ThreadId, std::deque<std::size_t>> open_fences;
  std::size_t k = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Action& a = actions[i];
    if (a.kind == ActionKind::Issue) {
      if (k >= issued.size()) throw std::logic_error("issue action without a recorded buffer entry");
      const BufferEntry& e = issued[k++];
      if (e.is_fence())
        open_fences[a.thread].push_back(i);
      else
        open_stores[{a.thread, e.address}].push_back(i);
    } else if (a.kind == ActionKind::Store) {
      auto& q = open_stores[{a.thread, a.address}];
      if (q.empty()) continue;
      out[i] = q.front();
      q.pop_front();
    } else if (a.kind == ActionKind::Fence) {
      auto& q = open_fences[a.thread];
      if (q.empty()) continue;
      out[i] = q.front();
      q.pop_front();
    }
  }
  return out;
}

std::vector<std::optional<std::size_t>> Computation::retire_index() const {
  std::vector<std::optional<std::size_t>> out(actions.size());
  auto iss = issue_index();
  for (std::size_t i = 0; i < iss.size(); ++i)
    if (iss[i]) out[*iss[i]] = i;
  return out;
}

bool Computation::pairing_complete() const {
  auto iss = issue_index();
  auto ret = retire_index();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].is_retirement() && !iss[i]) return false;
    if (actions[i].kind == ActionKind::Issue && !ret[i]) return false;
  }
  return true;
}

RunResult run(const Machine& m, const std::vector<std::size_t>& schedule, SemanticsMode mode,
              MachineState* final_state) {
  MachineState s = m.initial_state();
  Computation c;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    auto ts = m.successors(s, mode);
    if (schedule[i] >= ts.size()) {
      StuckReport r;
      r.prefix = std::move(c);
      r.index = i;
      r.enabled_count = ts.size();
      r.reasons = m.explain_blocked(s, mode);
      r.state = std::move(s);
      return r;
    }
    Transition& t = ts[schedule[i]];
    for (auto& a : t.actions) c.actions.push_back(std::move(a));
    if (t.issued) c.issued.push_back(std::move(*t.issued));
    s = std::move(t.next);
  }
  if (final_state) *final_state = s;
  return c;
}

namespace {

bool matches(const Action& want, const Action& got) {
  if (want.kind == ActionKind::Issue) return got.kind == ActionKind::Issue && got.thread == want.thread;
  return want == got;
}

struct Visit {
  MachineState state;
  std::size_t pos;
  bool operator==(const Visit&) const = default;
};

struct VisitHash {
  std::size_t operator()(const Visit& v) const { return v.state.hash() * 1000003u + v.pos; }
};

struct Realizer {
  const Machine& m;
  const Computation& target;
  SemanticsMode mode;
  std::vector<std::size_t> schedule;
  std::unordered_set<Visit, VisitHash> dead;

  bool search(const MachineState& s, std::size_t pos, std::size_t issue_pos) {
    if (pos == target.actions.size()) return true;
    Visit key{s, pos};
    if (dead.count(key)) return false;
    auto ts = m.successors(s, mode);
    for (std::size_t c = 0; c < ts.size(); ++c) {
      const Transition& t = ts[c];
      std::size_t p = pos;
      bool ok = true;
      for (const Action& a : t.actions) {
        if (p >= target.actions.size() || !matches(target.actions[p], a)) {
          ok = false;
          break;
        }
        ++p;
      }
      if (!ok) continue;
      std::size_t ip = issue_pos;
      if (t.issued) {
        if (!target.issued.empty() && (ip >= target.issued.size() || !(target.issued[ip] == *t.issued))) continue;
        ++ip;
      }
      schedule.push_back(c);
      if (search(t.next, p, ip)) return true;
      schedule.pop_back();
    }
    dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

std::optional<std::vector<std::size_t>> realize(const Machine& m, const Computation& target, SemanticsMode mode) {
  Realizer r{m, target, mode, {}, {}};
  if (!r.search(m.initial_state(), 0, 0)) return std::nullopt;
  return std::move(r.schedule);
}

}  // namespace robust
