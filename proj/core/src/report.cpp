#include <algorithm>
#include <cstdio>
#include <sstream>

#include "robust/report.hpp"

namespace robust {

namespace {

const std::string& thread_name(const Program& p, ThreadId t) { return p.threads.at(t).name; }

}  // namespace

Json to_json(const Diagnostic& d) {
  return Json{{"thread", d.thread}, {"label", d.label}, {"rule", d.rule}, {"message", d.message}};
}

Json to_json(const Action& a, const Program& p) {
  Json j{{"thread", thread_name(p, a.thread)}, {"kind", to_string(a.kind)}};
  if (a.kind == ActionKind::Store || a.kind == ActionKind::Load) {
    j["addr"] = a.address;
    j["value"] = a.value;
  }
  if (a.kind == ActionKind::Fence) j["addrs"] = a.addresses;
  return j;
}

Json to_json(const Computation& c, const Program& p) {
  Json actions = Json::array();
  for (const auto& a : c.actions) actions.push_back(to_json(a, p));
  Json index = Json::array();
  for (const auto& i : c.issue_index()) index.push_back(i ? Json(*i) : Json(nullptr));
  return Json{{"actions", std::move(actions)}, {"issue_index", std::move(index)}};
}

Json to_json(const Trace& t, const Program& p) {
  Json nodes = Json::array();
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    const auto& x = t.nodes[n];
    Json j{{"id", n}, {"thread", thread_name(p, x.thread)}, {"index", x.index}, {"kind", to_string(x.kind)}};
    if (x.kind == ActionKind::Store || x.kind == ActionKind::Load) {
      j["addr"] = x.address;
      j["value"] = x.value;
    }
    if (x.kind == ActionKind::Fence) j["addrs"] = x.addresses;
    nodes.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (const auto& e : t.edges) edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"label", to_string(e.label)}});
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

Json to_json(const CostTriple& c) {
  return Json{{"delays", c.delays}, {"reorders", c.reorders}, {"length", c.length}};
}

Json to_json(const ViolationReport& r, const Program& p) {
  Json threads = Json::array();
  for (ThreadId t : r.delaying_threads) threads.push_back(thread_name(p, t));
  return Json{{"cost", to_json(r.cost)},
              {"bounded_minimal", r.bounded_minimal},
              {"delaying_threads", std::move(threads)},
              {"delayed_store_count", r.delayed_store_count},
              {"schedule", r.schedule},
              {"computation", to_json(r.computation, p)},
              {"trace", to_json(r.trace, p)},
              {"cycle", r.cycle}};
}

Json to_json(const PropertyVerdict& v, const Program& p) {
  Json j{{"holds", v.holds}, {"vacuous", v.vacuous}, {"truncated", v.truncated}, {"detail", v.detail}};
  if (v.witness) j["witness"] = to_json(*v.witness, p);
  return j;
}

Json to_json(const WitnessVerdict& w) {
  return Json{{"W1", w.w1}, {"W2", w.w2}, {"W3", w.w3}, {"W4", w.w4}, {"W5", w.w5},
              {"issue_st", w.issue_st}, {"last", w.last}, {"st", w.st}};
}

Json to_json(const Attack& a, const Program& p) {
  const Thread& t = p.threads.at(a.thread);
  return Json{{"thread", t.name},
              {"stinst", {{"index", a.stinst}, {"label", t.instructions.at(a.stinst).label},
                          {"text", to_string(t.instructions.at(a.stinst).instruction)}}},
              {"lastinst", {{"index", a.lastinst}, {"label", t.instructions.at(a.lastinst).label},
                            {"text", to_string(t.instructions.at(a.lastinst).instruction)}}}};
}

Json to_json(const ReachStats& s) {
  return Json{{"states_visited", s.states_visited}, {"transitions", s.transitions},
              {"peak_frontier", s.peak_frontier}};
}

Json to_json(const AttackResult& r, const Program& p) {
  Json j{{"attack", to_json(r.attack, p)},
         {"reachable", r.reachable},
         {"budget_exhausted", r.budget_exhausted},
         {"instrumented_instructions", r.instrumented_instructions},
         {"stats", to_json(r.reach.stats)}};
  if (r.reachable) j["witness_schedule"] = r.reach.schedule;
  return j;
}

Json to_json(const RobustnessVerdict& v, const Program& p) {
  Json j{{"verdict", to_string(v.verdict)}, {"mode", to_string(v.mode)}, {"message", v.message}};
  if (v.mode == CheckMode::Oracle) {
    j["truncated"] = v.truncated;
    if (v.violation) j["violation"] = to_json(*v.violation, p);
    return j;
  }
  j["feasible_attack"] = v.feasible ? Json(*v.feasible) : Json(nullptr);
  Json attacks = Json::array();
  for (const auto& a : v.attacks) attacks.push_back(to_json(a, p));
  j["attacks"] = std::move(attacks);
  return j;
}

Json manifest(const InstrumentedProgram& ip, const Program& source) {
  const AddressLayout& l = ip.layout;
  Json map{{"base", {0, l.base_size}},
           {"delayed", {l.base_size, 2 * l.base_size}},
           {"access_level", {2 * l.base_size, 3 * l.base_size}},
           {"hb", l.hb()},
           {"suc", l.suc()},
           {"domain_size", l.domain_size}};
  if (ip.mode == InstrumentMode::Singularity) map.erase("delayed");
  return Json{{"attack", to_json(ip.attack, source)},
              {"mode", to_string(ip.mode)},
              {"address_map", std::move(map)},
              {"source_instructions", ip.source_instructions},
              {"instructions", ip.instructions},
              {"size_ratio", ip.size_ratio()}};
}

std::string to_dot(const Trace& t, const Program& p, const std::vector<std::size_t>& cycle) {
  std::ostringstream os;
  os << "digraph trace {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  auto on_cycle = [&](std::size_t n) { return std::find(cycle.begin(), cycle.end(), n) != cycle.end(); };
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    os << "  n" << n << " [label=\"" << t.node_name(n, p) << "\"";
    if (on_cycle(n)) os << ", color=red, penwidth=2";
    os << "];\n";
  }
  for (const auto& e : t.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << to_string(e.label) << "\"";
    if (e.label != EdgeLabel::Po) os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace robust
