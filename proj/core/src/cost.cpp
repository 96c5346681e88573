#include "robust/trace.hpp"

namespace robust {

std::string to_string(const CostTriple& c) {
  return "(" + std::to_string(c.delays) + ", " + std::to_string(c.reorders) + ", " + std::to_string(c.length) + ")";
}

namespace {

std::optional<std::size_t> issue_of(const Computation& c, const std::vector<std::optional<std::size_t>>& iss,
                                    std::size_t index) {
  if (index >= c.actions.size() || !c.actions[index].is_retirement()) return std::nullopt;
  return iss[index];
}

std::size_t delays_with(const Computation& c, const std::vector<std::optional<std::size_t>>& iss, std::size_t index) {
  auto from = issue_of(c, iss, index);
  if (!from) return 0;
  const ThreadId t = c.actions[index].thread;
  std::size_t n = 0;
  for (std::size_t k = *from + 1; k < index; ++k) n += c.actions[k].thread == t;
  return n;
}

std::size_t reorders_with(const Computation& c, const std::vector<std::optional<std::size_t>>& iss,
                          std::size_t index) {
  auto from = issue_of(c, iss, index);
  if (!from) return 0;
  const ThreadId t = c.actions[index].thread;
  std::size_t n = 0;
  for (std::size_t k = *from + 1; k < index; ++k)
    if (c.actions[k].thread == t && c.actions[k].is_retirement() && iss[k] && *iss[k] > *from) ++n;
  return n;
}

}  // namespace

std::size_t delays_of(const Computation& c, std::size_t index) { return delays_with(c, c.issue_index(), index); }

std::size_t reorders_of(const Computation& c, std::size_t index) { return reorders_with(c, c.issue_index(), index); }

CostTriple cost(const Computation& c) {
  CostTriple out;
  auto iss = c.issue_index();
  for (std::size_t i = 0; i < c.actions.size(); ++i) {
    if (!c.actions[i].is_retirement()) continue;
    out.delays += delays_with(c, iss, i);
    out.reorders += reorders_with(c, iss, i);
  }
  out.length = c.actions.size();
  return out;
}

}  // namespace robust
