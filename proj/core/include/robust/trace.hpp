#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "robust/semantics.hpp"

namespace robust {

enum class EdgeLabel : std::uint8_t { Po, St, Src, Cf };

std::string_view to_string(EdgeLabel l);

/// One node per non-issue action of a thread. A store or fence and its issue
/// share a node dated at the issue.
struct TraceNode {
  ThreadId thread = 0;
  std::size_t index = 0;  ///< position in the thread's program order
  ActionKind kind = ActionKind::Local;
  Value address = 0;
  Value value = 0;
  std::vector<Value> addresses;

  // Placement in the computation. Not part of node identity.
  std::size_t issue_position = 0;
  std::optional<std::size_t> retire_position;

  bool is_store() const { return kind == ActionKind::Store; }
  bool is_load() const { return kind == ActionKind::Load; }
  bool same_key(const TraceNode& o) const {
    return thread == o.thread && index == o.index && kind == o.kind && address == o.address && value == o.value &&
           addresses == o.addresses;
  }
};

struct TraceEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeLabel label = EdgeLabel::Po;
  auto operator<=>(const TraceEdge&) const = default;
};

/// Happens-before trace. Nodes are sorted by (thread, index), so traces of
/// computations of the same program can be compared node by node.
///
/// Edges are stored as covering relations: po between consecutive nodes of a
/// thread, st between consecutive stores to an address, src from the source
/// store of each load, and cf from a load to the store that immediately
/// follows its source (or to the first store when the load reads 0).
struct Trace {
  std::vector<TraceNode> nodes;
  std::set<TraceEdge> edges;
  /// Node of every action of the computation (Issue maps to its store/fence).
  std::vector<std::size_t> node_of_action;
  /// Source store of each load node, if any.
  std::vector<std::optional<std::size_t>> source;
  /// For store nodes, the rank in the retirement order of its address.
  std::vector<std::size_t> store_rank;

  bool has_edge(std::size_t from, std::size_t to, EdgeLabel label) const {
    return edges.count(TraceEdge{from, to, label}) > 0;
  }
  std::string node_name(std::size_t n, const Program& p) const;
};

/// Per-thread node sequences in issue order (the program order).
std::vector<std::vector<std::size_t>> program_order(const Trace& t);

/// For each action index of a load, the action index of the store it reads
/// from (its retirement, or its issue if it has not retired). nullopt for
/// non-loads and for loads of the initial value.
std::vector<std::optional<std::size_t>> source_function(const Computation& c);

Trace build_trace(const Computation& c);

/// A directed cycle as a node list, first node not repeated.
std::optional<std::vector<std::size_t>> find_cycle(const Trace& t);
inline bool is_cyclic(const Trace& t) { return find_cycle(t).has_value(); }

class IncomparableTraces : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Labeled graph equality. Throws IncomparableTraces when the node sets differ.
bool traces_equal(const Trace& a, const Trace& b);

/// Total order on traces used to collect trace sets. Consistent with
/// traces_equal on traces with equal node sets.
bool trace_less(const Trace& a, const Trace& b);

struct TraceLess {
  bool operator()(const Trace& a, const Trace& b) const { return trace_less(a, b); }
};

using TraceSet = std::set<Trace, TraceLess>;

/// Literal happens-before step between two nodes: po+, src, st (as the total
/// retirement order of an address) or cf.
bool hb_step(const Trace& t, std::size_t from, std::size_t to);

/// True iff the action at i happens before the action at j through the
/// actions strictly between them: a chain i, k1, ..., kn, j with increasing
/// positions and hb_step between neighbours. Issue actions are not used as
/// intermediate links.
bool hb_through(const Computation& c, const Trace& t, std::size_t i, std::size_t j);
bool hb_through(const Computation& c, std::size_t i, std::size_t j);

struct CostTriple {
  std::size_t delays = 0;
  std::size_t reorders = 0;
  std::size_t length = 0;
  auto operator<=>(const CostTriple&) const = default;
};

std::string to_string(const CostTriple& c);

/// Number of actions of the same thread strictly between the issue of the
/// retirement at `index` and the retirement itself.
std::size_t delays_of(const Computation& c, std::size_t index);
std::size_t reorders_of(const Computation& c, std::size_t index);

CostTriple cost(const Computation& c);

}  // namespace robust
