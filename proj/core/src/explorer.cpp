#include "explorer.hpp"

namespace robust {

CostTracker::CostTracker(std::size_t threads) : pending_(threads), delayed_thread_(threads, 0) {}

void CostTracker::record(const Action& a, const BufferEntry* issued) {
  auto& ops = pending_.at(a.thread);
  if (a.kind == ActionKind::Issue) {
    for (auto& op : ops) ++op.delays;
    Op op;
    op.fence = issued && issued->is_fence();
    op.address = issued ? issued->address : 0;
    ops.push_back(op);
    return;
  }
  if (!a.is_retirement()) {
    for (auto& op : ops) ++op.delays;
    return;
  }
  const bool fence = a.kind == ActionKind::Fence;
  std::size_t q = 0;
  while (q < ops.size() && !(ops[q].fence == fence && (fence || ops[q].address == a.address))) ++q;
  if (q == ops.size()) return;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (k == q) continue;
    ++ops[k].delays;
    if (k < q) ++ops[k].reorders;
  }
  const Op done = ops[q];
  ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(q));
  delays_ += done.delays;
  reorders_ += done.reorders;
  if (done.delays > 0) {
    delayed_thread_[a.thread] = 1;
    if (!done.fence) ++delayed_stores_;
  }
}

CostTriple CostTracker::lower_bound(std::size_t length) const {
  CostTriple c{delays_, reorders_, length};
  for (const auto& ops : pending_)
    for (const auto& op : ops) {
      c.delays += op.delays;
      c.reorders += op.reorders;
    }
  return c;
}

std::size_t CostTracker::delays() const { return lower_bound(0).delays; }

std::size_t CostTracker::delayed_store_count() const {
  std::size_t n = delayed_stores_;
  for (const auto& ops : pending_)
    for (const auto& op : ops) n += !op.fence && op.delays > 0;
  return n;
}

std::set<ThreadId> CostTracker::delaying_threads() const {
  std::set<ThreadId> out;
  for (ThreadId t = 0; t < pending_.size(); ++t) {
    bool d = delayed_thread_[t];
    for (const auto& op : pending_[t]) d = d || op.delays > 0;
    if (d) out.insert(t);
  }
  return out;
}

namespace detail {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t extend_hash(std::uint64_t h, const Action& a, const BufferEntry* issued) {
  h = splitmix(h ^ (static_cast<std::uint64_t>(a.thread) << 8 | static_cast<std::uint64_t>(a.kind)));
  h = splitmix(h ^ (static_cast<std::uint64_t>(a.address) << 32 | a.value));
  for (Value v : a.addresses) h = splitmix(h ^ v);
  if (issued) {
    h = splitmix(h ^ (0x100 | static_cast<std::uint64_t>(issued->kind)));
    h = splitmix(h ^ (static_cast<std::uint64_t>(issued->address) << 32 | issued->value));
    for (Value v : issued->fence_addresses) h = splitmix(h ^ v);
  }
  return h;
}

Explorer::Explorer(const Program& p, const ExplorationConfig& cfg)
    : machine_(p, MachineOptions{cfg.buffer_bound}), cfg_(cfg) {}

EnumerationStats Explorer::run(const std::function<Step(const SearchNode&)>& on_node) {
  on_node_ = &on_node;
  prefix_ = {};
  schedule_.clear();
  seen_.clear();
  stats_ = {};
  dfs(machine_.initial_state(), 0, CostTracker(machine_.thread_count()));
  return stats_;
}

bool Explorer::dfs(const MachineState& s, std::uint64_t prefix_hash, const CostTracker& tracker) {
  if (!seen_.insert({s.hash(), prefix_hash}).second) return true;
  if (++stats_.nodes > cfg_.max_nodes) {
    stats_.truncated = true;
    return false;
  }
  auto ts = machine_.successors(s, cfg_.mode);
  Step step = (*on_node_)(SearchNode{s, prefix_, schedule_, tracker, prefix_hash, ts.empty()});
  if (step == Step::Stop) return false;
  if (step == Step::Prune) return true;

  for (std::size_t c = 0; c < ts.size(); ++c) {
    Transition& t = ts[c];
    if (prefix_.actions.size() + t.actions.size() > cfg_.max_actions) {
      stats_.truncated = true;
      continue;
    }
    CostTracker next_tracker = tracker;
    std::uint64_t h = prefix_hash;
    const std::size_t mark = prefix_.actions.size();
    for (const Action& a : t.actions) {
      const BufferEntry* e = a.kind == ActionKind::Issue && t.issued ? &*t.issued : nullptr;
      next_tracker.record(a, e);
      h = extend_hash(h, a, e);
      prefix_.actions.push_back(a);
    }
    if (t.issued) prefix_.issued.push_back(*t.issued);
    schedule_.push_back(c);
    bool go_on = dfs(t.next, h, next_tracker);
    schedule_.pop_back();
    if (t.issued) prefix_.issued.pop_back();
    prefix_.actions.resize(mark);
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail
}  // namespace robust
