#pragma once

#include <nlohmann/json.hpp>

#include "robust/robustness.hpp"

namespace robust {

using Json = nlohmann::ordered_json;

Json to_json(const Diagnostic& d);
Json to_json(const Action& a, const Program& p);
/// Actions plus the issue index of every store/fence retirement.
Json to_json(const Computation& c, const Program& p);
Json to_json(const Trace& t, const Program& p);
Json to_json(const CostTriple& c);
Json to_json(const ViolationReport& r, const Program& p);
Json to_json(const PropertyVerdict& v, const Program& p);
Json to_json(const WitnessVerdict& w);
Json to_json(const Attack& a, const Program& p);
Json to_json(const ReachStats& s);
Json to_json(const AttackResult& r, const Program& p);
Json to_json(const RobustnessVerdict& v, const Program& p);
Json manifest(const InstrumentedProgram& ip, const Program& source);

/// Graphviz rendering; nodes on `cycle` are highlighted.
std::string to_dot(const Trace& t, const Program& p, const std::vector<std::size_t>& cycle = {});

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

}  // namespace robust
