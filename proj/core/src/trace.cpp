#include <algorithm>
#include <map>
#include <numeric>

#include "robust/trace.hpp"

namespace robust {

std::string_view to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Po: return "po";
    case EdgeLabel::St: return "st";
    case EdgeLabel::Src: return "src";
    case EdgeLabel::Cf: return "cf";
  }
  return "?";
}

std::string Trace::node_name(std::size_t n, const Program& p) const {
  const TraceNode& x = nodes.at(n);
  Action a{x.thread, x.kind, x.address, x.value, x.addresses};
  return describe(a, p) + "#" + std::to_string(x.index);
}

std::vector<std::vector<std::size_t>> program_order(const Trace& t) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    ThreadId th = t.nodes[n].thread;
    if (out.size() <= th) out.resize(th + 1);
    out[th].push_back(n);
  }
  return out;
}

std::vector<std::optional<std::size_t>> source_function(const Computation& c) {
  std::vector<std::optional<std::size_t>> out(c.actions.size());
  auto retire = c.retire_index();
  std::vector<BufferEntry> entry_of(c.actions.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < c.actions.size(); ++i)
    if (c.actions[i].kind == ActionKind::Issue) entry_of[i] = c.issued.at(k++);

  for (std::size_t i = 0; i < c.actions.size(); ++i) {
    const Action& ld = c.actions[i];
    if (ld.kind != ActionKind::Load) continue;
    // Early read: a store of the same thread issued before and retired after.
    for (std::size_t j = i; j-- > 0;) {
      const Action& a = c.actions[j];
      if (a.kind != ActionKind::Issue || a.thread != ld.thread) continue;
      const BufferEntry& e = entry_of[j];
      if (e.is_fence() || e.address != ld.address) continue;
      if (!retire[j] || *retire[j] > i) {
        out[i] = retire[j] ? *retire[j] : j;
        break;
      }
    }
    if (out[i]) continue;
    for (std::size_t j = i; j-- > 0;) {
      const Action& a = c.actions[j];
      if (a.kind == ActionKind::Store && a.address == ld.address) {
        out[i] = j;
        break;
      }
    }
  }
  return out;
}

Trace build_trace(const Computation& c) {
  Trace t;
  const std::size_t n_act = c.actions.size();
  auto iss = c.issue_index();
  auto ret = c.retire_index();

  // Collect nodes in action order, then sort into (thread, index) order.
  std::vector<TraceNode> raw;
  std::vector<std::size_t> raw_of_action(n_act, SIZE_MAX);
  std::map<ThreadId, std::size_t> next_index;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_act; ++i) {
    const Action& a = c.actions[i];
    if (a.is_retirement() && iss[i]) continue;
    TraceNode node;
    node.thread = a.thread;
    node.index = next_index[a.thread]++;
    node.issue_position = i;
    if (a.kind == ActionKind::Issue) {
      const BufferEntry& e = c.issued.at(k++);
      node.kind = e.is_fence() ? ActionKind::Fence : ActionKind::Store;
      node.address = e.address;
      node.value = e.value;
      node.addresses = e.fence_addresses;
      node.retire_position = ret[i];
    } else {
      node.kind = a.kind;
      node.address = a.address;
      node.value = a.value;
      node.addresses = a.addresses;
      if (a.is_retirement()) node.retire_position = i;
    }
    raw_of_action[i] = raw.size();
    raw.push_back(std::move(node));
  }
  for (std::size_t i = 0; i < n_act; ++i)
    if (raw_of_action[i] == SIZE_MAX && iss[i]) raw_of_action[i] = raw_of_action[*iss[i]];

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::pair(raw[x].thread, raw[x].index) < std::pair(raw[y].thread, raw[y].index);
  });
  std::vector<std::size_t> rank(raw.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  for (std::size_t r : order) t.nodes.push_back(raw[r]);
  t.node_of_action.resize(n_act);
  for (std::size_t i = 0; i < n_act; ++i) t.node_of_action[i] = rank[raw_of_action[i]];

  const std::size_t n = t.nodes.size();
  t.source.assign(n, std::nullopt);
  t.store_rank.assign(n, 0);

  for (std::size_t x = 0; x + 1 < n; ++x)
    if (t.nodes[x].thread == t.nodes[x + 1].thread) t.edges.insert({x, x + 1, EdgeLabel::Po});

  // Store order per address follows retirement; unretired stores come last.
  std::map<Value, std::vector<std::size_t>> stores;
  for (std::size_t x = 0; x < n; ++x)
    if (t.nodes[x].is_store()) stores[t.nodes[x].address].push_back(x);
  for (auto& [addr, list] : stores) {
    std::stable_sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
      return t.nodes[x].retire_position.value_or(SIZE_MAX) < t.nodes[y].retire_position.value_or(SIZE_MAX);
    });
    for (std::size_t r = 0; r < list.size(); ++r) {
      t.store_rank[list[r]] = r;
      if (r + 1 < list.size()) t.edges.insert({list[r], list[r + 1], EdgeLabel::St});
    }
  }

  auto src = source_function(c);
  for (std::size_t i = 0; i < n_act; ++i) {
    if (c.actions[i].kind != ActionKind::Load) continue;
    std::size_t ld = t.node_of_action[i];
    const auto& list = stores[c.actions[i].address];
    std::optional<std::size_t> next;
    if (src[i]) {
      std::size_t s = t.node_of_action[*src[i]];
      t.source[ld] = s;
      t.edges.insert({s, ld, EdgeLabel::Src});
      if (t.store_rank[s] + 1 < list.size()) next = list[t.store_rank[s] + 1];
    } else if (!list.empty()) {
      next = list.front();
    }
    if (next) t.edges.insert({ld, *next, EdgeLabel::Cf});
  }
  return t;
}

std::optional<std::vector<std::size_t>> find_cycle(const Trace& t) {
  const std::size_t n = t.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : t.edges) adj[e.from].push_back(e.to);

  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(n, White);
  std::vector<std::size_t> parent(n, SIZE_MAX);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next edge)
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != White) continue;
    stack.push_back({root, 0});
    color[root] = Grey;
    while (!stack.empty()) {
      auto& [u, e] = stack.back();
      if (e == adj[u].size()) {
        color[u] = Black;
        stack.pop_back();
        continue;
      }
      std::size_t v = adj[u][e++];
      if (color[v] == Grey) {
        std::vector<std::size_t> cycle{u};
        for (std::size_t w = u; w != v;) {
          w = parent[w];
          cycle.push_back(w);
        }
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[v] == White) {
        color[v] = Grey;
        parent[v] = u;
        stack.push_back({v, 0});
      }
    }
  }
  return std::nullopt;
}

namespace {

int compare_keys(const Trace& a, const Trace& b) {
  if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[i];
    auto kx = std::tie(x.thread, x.index, x.kind, x.address, x.value, x.addresses);
    auto ky = std::tie(y.thread, y.index, y.kind, y.address, y.value, y.addresses);
    if (kx != ky) return kx < ky ? -1 : 1;
  }
  return 0;
}

}  // namespace

bool traces_equal(const Trace& a, const Trace& b) {
  if (compare_keys(a, b) != 0) throw IncomparableTraces("traces are over different node sets");
  return a.edges == b.edges;
}

bool trace_less(const Trace& a, const Trace& b) {
  int k = compare_keys(a, b);
  if (k != 0) return k < 0;
  return a.edges < b.edges;
}

bool hb_step(const Trace& t, std::size_t from, std::size_t to) {
  if (from == to) return false;
  const TraceNode& x = t.nodes[from];
  const TraceNode& y = t.nodes[to];
  if (x.thread == y.thread && x.index < y.index) return true;
  if (y.is_load() && t.source[to] == from) return true;
  if (x.is_store() && y.is_store() && x.address == y.address) return t.store_rank[from] < t.store_rank[to];
  if (x.is_load() && y.is_store() && x.address == y.address) {
    if (auto s = t.source[from]) return t.store_rank[*s] < t.store_rank[to];
    return t.store_rank[to] == 0;
  }
  return false;
}

bool hb_through(const Computation& c, const Trace& t, std::size_t i, std::size_t j) {
  if (i >= j || j >= c.actions.size()) return false;
  const std::size_t x = t.node_of_action[i];
  const std::size_t y = t.node_of_action[j];
  if (hb_step(t, x, y)) return true;
  // reach[k]: some chain from x ends at the action at position k.
  std::vector<char> reach(j, 0);
  for (std::size_t k = i + 1; k < j; ++k) {
    if (c.actions[k].kind == ActionKind::Issue) continue;
    std::size_t nk = t.node_of_action[k];
    bool r = hb_step(t, x, nk);
    for (std::size_t m = i + 1; m < k && !r; ++m)
      r = reach[m] && hb_step(t, t.node_of_action[m], nk);
    reach[k] = r;
    if (r && hb_step(t, nk, y)) return true;
  }
  return false;
}

bool hb_through(const Computation& c, std::size_t i, std::size_t j) { return hb_through(c, build_trace(c), i, j); }

}  // namespace robust
