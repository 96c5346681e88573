#include "explorer.hpp"

namespace robust {

using detail::Explorer;
using detail::SearchNode;
using detail::Step;

EnumerationStats enumerate_computations(const Program& p, const ExplorationConfig& cfg,
                                        const std::function<bool(const Computation&)>& visit) {
  Explorer ex(p, cfg);
  std::unordered_set<std::uint64_t> emitted;
  std::size_t count = 0;
  auto stats = ex.run([&](const SearchNode& n) {
    if (!n.terminal) return Step::Descend;
    if (!emitted.insert(n.prefix_hash).second) return Step::Prune;
    ++count;
    return visit(n.prefix) ? Step::Prune : Step::Stop;
  });
  stats.computations = count;
  return stats;
}

std::vector<Computation> collect_computations(const Program& p, const ExplorationConfig& cfg,
                                              EnumerationStats* stats) {
  std::vector<Computation> out;
  auto s = enumerate_computations(p, cfg, [&](const Computation& c) {
    out.push_back(c);
    return true;
  });
  if (stats) *stats = s;
  return out;
}

namespace {

/// Checks whether the node ends a violation; fills `out` if so.
bool violation_at(const SearchNode& n, std::optional<ViolationReport>& out) {
  if (n.prefix.empty() || !n.state.buffers_empty() || n.cost.delays() == 0) return false;
  Trace t = build_trace(n.prefix);
  auto cycle = find_cycle(t);
  if (!cycle) return false;
  ViolationReport r;
  r.computation = n.prefix;
  r.schedule = n.schedule;
  r.trace = std::move(t);
  r.cycle = std::move(*cycle);
  r.cost = n.cost.lower_bound(n.prefix.size());
  r.delaying_threads = n.cost.delaying_threads();
  r.delayed_store_count = n.cost.delayed_store_count();
  out = std::move(r);
  return true;
}

ViolationResult first_violation(const Program& p, const ExplorationConfig& cfg,
                                const std::function<bool(const CostTracker&)>& prune) {
  Explorer ex(p, cfg);
  std::optional<ViolationReport> found;
  auto stats = ex.run([&](const SearchNode& n) {
    if (prune && prune(n.cost)) return Step::Prune;
    return violation_at(n, found) ? Step::Stop : Step::Descend;
  });
  if (found) return std::move(*found);
  return NotFoundWithinBounds{stats.truncated, stats.nodes};
}

}  // namespace

ViolationResult find_violation(const Program& p, const ExplorationConfig& cfg) {
  return first_violation(p, cfg, nullptr);
}

ViolationResult find_minimal_violation(const Program& p, const ExplorationConfig& cfg) {
  Explorer ex(p, cfg);
  std::optional<ViolationReport> best;
  auto stats = ex.run([&](const SearchNode& n) {
    if (best && n.cost.lower_bound(n.prefix.size()) >= best->cost) return Step::Prune;
    std::optional<ViolationReport> found;
    if (!violation_at(n, found)) return Step::Descend;
    best = std::move(found);
    return Step::Prune;
  });
  if (!best) return NotFoundWithinBounds{stats.truncated, stats.nodes};
  best->bounded_minimal = true;
  return std::move(*best);
}

ViolationResult find_minimal_witness(const Program& p, const ExplorationConfig& cfg) {
  Explorer ex(p, cfg);
  std::optional<ViolationReport> first;
  std::optional<ViolationReport> witness;
  auto stats = ex.run([&](const SearchNode& n) {
    if (first && n.cost.lower_bound(n.prefix.size()) > first->cost) return Step::Prune;
    std::optional<ViolationReport> found;
    if (!violation_at(n, found)) return Step::Descend;
    if (!first || found->cost < first->cost) {
      first = found;
      witness.reset();
    }
    if (!witness && is_witness(found->computation).all()) witness = std::move(found);
    return Step::Prune;
  });
  if (!first) return NotFoundWithinBounds{stats.truncated, stats.nodes};
  ViolationReport r = witness ? std::move(*witness) : std::move(*first);
  r.bounded_minimal = true;
  return r;
}

namespace {

PropertyVerdict restricted_check(const Program& p, const ExplorationConfig& cfg,
                                 const std::function<bool(const CostTracker&)>& prune, const char* what) {
  PropertyVerdict v;
  auto any = find_violation(p, cfg);
  if (auto* nf = std::get_if<NotFoundWithinBounds>(&any)) {
    v.holds = true;
    v.vacuous = true;
    v.truncated = nf->truncated;
    v.detail = "no violation within bounds";
    return v;
  }
  auto restricted = first_violation(p, cfg, prune);
  if (auto* r = std::get_if<ViolationReport>(&restricted)) {
    v.holds = true;
    v.witness = std::move(*r);
    v.detail = std::string("found a violation with ") + what;
  } else {
    v.truncated = std::get<NotFoundWithinBounds>(restricted).truncated;
    v.witness = std::move(std::get<ViolationReport>(any));
    v.detail = std::string("every violation within bounds has more than ") + what;
  }
  return v;
}

}  // namespace

PropertyVerdict check_singularity(const Program& p, const ExplorationConfig& cfg) {
  if (p.has_fence()) throw PreconditionViolated("singularity requires a program without fence instructions");
  return restricted_check(p, cfg, [](const CostTracker& c) { return c.delayed_store_count() > 1; },
                          "one delayed store");
}

PropertyVerdict check_locality(const Program& p, const ExplorationConfig& cfg) {
  return restricted_check(p, cfg, [](const CostTracker& c) { return c.delaying_threads().size() > 1; },
                          "one delaying thread");
}

TraceSetResult sc_trace_set(const Program& p, const ExplorationConfig& cfg) {
  ExplorationConfig sc = cfg;
  sc.mode = SemanticsMode::Sc;
  TraceSetResult out;
  out.stats = enumerate_computations(p, sc, [&](const Computation& c) {
    out.traces.insert(build_trace(c));
    return true;
  });
  return out;
}

}  // namespace robust
