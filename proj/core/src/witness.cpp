#include <algorithm>

#include "robust/oracle.hpp"

namespace robust {

namespace {

WitnessVerdict check_candidate(const Computation& c, const Trace& t,
                               const std::vector<std::optional<std::size_t>>& iss,
                               const std::vector<char>& delayed, std::size_t st) {
  WitnessVerdict v;
  const ThreadId att = c.actions[st].thread;
  v.attacker = att;
  v.st = st;
  v.issue_st = *iss[st];
  v.last = v.issue_st;
  for (std::size_t k = st; k-- > v.issue_st + 1;)
    if (c.actions[k].thread == att) {
      v.last = k;
      break;
    }

  v.w1 = true;
  for (std::size_t k = 0; k < c.actions.size(); ++k)
    if (delayed[k] && c.actions[k].thread != att) v.w1 = false;

  v.w2 = true;
  for (std::size_t k = v.last + 1; k < st; ++k)
    if (c.actions[k].thread == att) v.w2 = false;

  v.w3 = true;
  for (std::size_t k = 0; k < st; ++k)
    if (delayed[k] && k != st) v.w3 = false;

  v.w4 = v.last > v.issue_st;
  for (std::size_t k = v.last + 1; k <= st && v.w4; ++k) {
    if (c.actions[k].kind == ActionKind::Issue) continue;
    v.w4 = hb_through(c, t, v.last, k);
  }

  v.w5 = true;
  for (std::size_t k = st + 1; k < c.actions.size(); ++k)
    if (c.actions[k].thread != att || !delayed[k]) v.w5 = false;
  return v;
}

}  // namespace

WitnessVerdict is_witness(const Computation& c) {
  auto iss = c.issue_index();
  std::vector<char> delayed(c.actions.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (issue, retirement)
  for (std::size_t k = 0; k < c.actions.size(); ++k) {
    if (!c.actions[k].is_retirement() || !iss[k]) continue;
    delayed[k] = delays_of(c, k) > 0;
    if (delayed[k] && c.actions[k].kind == ActionKind::Store) candidates.push_back({*iss[k], k});
  }
  if (candidates.empty()) throw NoDecomposition("computation delays no store");
  std::sort(candidates.begin(), candidates.end());

  Trace t = build_trace(c);
  std::optional<WitnessVerdict> first;
  for (auto [issue, st] : candidates) {
    WitnessVerdict v = check_candidate(c, t, iss, delayed, st);
    if (v.all()) return v;
    if (!first) first = v;
  }
  return *first;
}

}  // namespace robust
