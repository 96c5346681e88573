// Acceptance checks AC1..AC10. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "robust/report.hpp"
#include "support.hpp"

using namespace robust;
using test::corpus;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

bool is_violation(const ViolationResult& r) { return std::holds_alternative<ViolationReport>(r); }

std::vector<std::string> fence_free_corpus() {
  std::vector<std::string> out;
  for (const char* n : test::kCorpus)
    if (!corpus(n).has_fence()) out.push_back(n);
  return out;
}

const ExplorationConfig kOracle{3, 24, SemanticsMode::Relaxed};

// ---------------------------------------------------------------------------

void ac1(Outcome& o) {
  auto start = Clock::now();
  Program p = corpus("mp");
  for (CheckMode m : {CheckMode::Locality, CheckMode::Singularity}) {
    CheckOptions opt;
    opt.mode = m;
    o.require(check_robustness(p, opt).verdict == Verdict::NotRobust, std::string(to_string(m)) + " verdict");
  }
  CheckOptions opt;
  opt.mode = CheckMode::Oracle;
  opt.oracle = ExplorationConfig{2, 14, SemanticsMode::Relaxed};
  RobustnessVerdict v = check_robustness(p, opt);
  o.require(v.verdict == Verdict::NotRobust, "oracle verdict");
  if (v.violation) {
    const Trace& t = v.violation->trace;
    enum { A, B, C, D, E, F };
    std::set<TraceEdge> expected{{A, B, EdgeLabel::Po}, {B, C, EdgeLabel::Po}, {D, E, EdgeLabel::Po},
                             {E, F, EdgeLabel::Po}, {C, D, EdgeLabel::Src}, {F, A, EdgeLabel::Cf}};
    o.require(t.nodes.size() == 6, "trace has " + std::to_string(t.nodes.size()) + " nodes");
    o.require(t.edges == expected, "trace edges differ from the expected six");
  }
  double s = seconds_since(start);
  o.require(s < 5.0, "runtime " + std::to_string(s) + "s");
  o.detail << (o.pass ? "" : "; ") << "all modes not-robust in " << s << "s";
}

void ac2(Outcome& o) {
  Machine m(corpus("mp"));
  std::vector<Computation> replayed;
  for (const Computation& target : {test::mp_tau(), test::mp_tau_prime()}) {
    auto schedule = realize(m, target);
    o.require(schedule.has_value(), "schedule not realizable");
    if (!schedule) return;
    RunResult r = run(m, *schedule);
    o.require(std::holds_alternative<Computation>(r), "replay got stuck");
    if (!std::holds_alternative<Computation>(r)) return;
    replayed.push_back(std::get<Computation>(r));
  }
  CostTriple a = cost(replayed[0]), b = cost(replayed[1]);
  o.require(a == CostTriple{6, 3, 9}, "tau cost " + to_string(a));
  o.require(b == CostTriple{4, 2, 9}, "tau' cost " + to_string(b));
  o.require(traces_equal(build_trace(replayed[0]), build_trace(replayed[1])), "traces differ");
  o.detail << (o.pass ? "" : "; ") << "tau " << to_string(a) << ", tau' " << to_string(b);
}

void ac3(Outcome& o) {
  auto start = Clock::now();
  Program p = corpus("mp_fenced");
  CheckOptions opt;
  opt.mode = CheckMode::Locality;
  opt.all_attacks = true;
  RobustnessVerdict v = check_robustness(p, opt);
  o.require(v.verdict == Verdict::Robust, "locality verdict " + std::string(to_string(v.verdict)));
  for (const auto& a : v.attacks) o.require(!a.reachable && !a.budget_exhausted, "attack " + describe(a.attack, p));
  auto r = find_violation(p, ExplorationConfig{3, 20, SemanticsMode::Relaxed});
  o.require(!is_violation(r), "oracle found a violation");
  double s = seconds_since(start);
  o.require(s < 30.0, "runtime " + std::to_string(s) + "s");
  o.detail << (o.pass ? "" : "; ") << v.attacks.size() << " attacks unreachable, oracle clean at B=3/20, " << s
           << "s";
}

void ac4(Outcome& o) {
  const ExplorationConfig relaxed{2, 14, SemanticsMode::Relaxed};
  const ExplorationConfig sc{0, 14, SemanticsMode::Sc};
  std::size_t programs = 0, checked = 0, mismatches = 0;
  for (const char* name : test::kCorpus) {
    Program p = corpus(name);
    if (p.threads.size() > 2 || p.instruction_count() > 8) continue;
    ++programs;
    TraceSetResult sc_set = sc_trace_set(p, sc);
    o.require(!sc_set.stats.truncated, std::string(name) + " SC enumeration truncated");
    enumerate_computations(p, relaxed, [&](const Computation& c) {
      Trace t = build_trace(c);
      bool cyclic = is_cyclic(t);
      bool outside = sc_set.traces.count(t) == 0;
      ++checked;
      if (cyclic != outside) ++mismatches;
      return true;
    });
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.detail << (o.pass ? "" : "; ") << checked << " computations over " << programs << " programs, " << mismatches
           << " mismatches";
}

void property(Outcome& o, const std::vector<std::string>& programs,
              const std::function<PropertyVerdict(const Program&)>& check) {
  std::size_t nonrobust = 0;
  for (const auto& name : programs) {
    Program p = corpus(name);
    PropertyVerdict v = check(p);
    o.require(!v.truncated, name + " truncated");
    if (v.vacuous) continue;
    ++nonrobust;
    o.require(v.holds, name + ": " + v.detail);
  }
  o.detail << (o.pass ? "" : "; ") << nonrobust << " non-robust programs, all with a restricted violation";
}

void ac5(Outcome& o) {
  property(o, fence_free_corpus(), [](const Program& p) {
    PropertyVerdict v = check_singularity(p, kOracle);
    if (v.witness && v.witness->delayed_store_count != 1) v.holds = false;
    return v;
  });
}

void ac6(Outcome& o) {
  std::vector<std::string> all(std::begin(test::kCorpus), std::end(test::kCorpus));
  property(o, all, [](const Program& p) {
    PropertyVerdict v = check_locality(p, kOracle);
    if (v.witness && v.witness->delaying_threads.size() != 1) v.holds = false;
    return v;
  });
}

void ac7(Outcome& o) {
  std::size_t agree = 0;
  for (const char* name : test::kCorpus) {
    Program p = corpus(name);
    bool oracle = is_violation(find_violation(p, kOracle));
    for (CheckMode m : {CheckMode::Auto, CheckMode::Locality}) {
      CheckOptions opt;
      opt.mode = m;
      RobustnessVerdict v = check_robustness(p, opt);
      o.require(v.verdict != Verdict::Unknown, std::string(name) + " unknown");
      bool instrumented = v.verdict == Verdict::NotRobust;
      if (instrumented == oracle)
        ++agree;
      else
        o.require(false, std::string(name) + " " + std::string(to_string(v.mode)) + " says " +
                             std::string(to_string(v.verdict)));
    }
  }
  o.detail << (o.pass ? "" : "; ") << agree << " agreeing verdicts";
}

bool passes_witness(const Computation& c) {
  try {
    return is_witness(c).all();
  } catch (const NoDecomposition&) {
    return false;
  }
}

// Minimal violations are not unique; ties may differ in where independent
// actions of other threads sit. Require a witness among the minimal ones.
void ac8(Outcome& o) {
  std::size_t programs = 0, first_is_witness = 0;
  for (const auto& name : fence_free_corpus()) {
    Program p = corpus(name);
    auto r = find_minimal_violation(p, kOracle);
    if (!is_violation(r)) continue;
    ++programs;
    const auto& minimal = std::get<ViolationReport>(r);
    if (passes_witness(minimal.computation)) ++first_is_witness;
    auto w = find_minimal_witness(p, kOracle);
    o.require(is_violation(w), name + ": no violation from the witness search");
    if (!is_violation(w)) continue;
    const auto& witness = std::get<ViolationReport>(w);
    o.require(witness.cost == minimal.cost, name + ": witness cost " + to_string(witness.cost) + " vs minimal " +
                                                to_string(minimal.cost));
    o.require(passes_witness(witness.computation), name + ": no minimal violation passes W1-W5");
  }
  o.detail << (o.pass ? "" : "; ") << programs << " programs have a minimal violation in witness form; "
           << first_is_witness << " of them already on the first minimal violation found";
}

void ac9(Outcome& o) {
  std::size_t outputs = 0;
  double worst = 0;
  for (const char* name : test::kCorpus) {
    Program p = corpus(name);
    AddressLayout l = AddressLayout::for_domain(p.domain_size);
    for (const Attack& a : enumerate_attacks(p)) {
      for (InstrumentMode m : {InstrumentMode::Locality, InstrumentMode::Singularity}) {
        if (m == InstrumentMode::Singularity && p.has_fence()) continue;
        InstrumentedProgram ip = instrument_program(p, a, m);
        ++outputs;
        worst = std::max(worst, ip.size_ratio());
        o.require(ip.instructions <= 6 * p.instruction_count() + 40,
                  std::string(name) + " " + std::to_string(ip.instructions) + " instructions");
        if (m == InstrumentMode::Singularity) {
          o.require(!test::may_access(ip.program, l.delayed(0), l.delayed(p.domain_size), p.domain_size),
                    std::string(name) + " singularity output touches delayed cells");
          o.require(!manifest(ip, p)["address_map"].contains("delayed"), "manifest lists delayed cells");
        }
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << outputs << " outputs, largest ratio " << worst;
}

void ac10(Outcome& o) {
  std::size_t queries = 0, plain_states = 0, por_states = 0;
  for (const char* name : test::kCorpus) {
    Program p = corpus(name);
    for (const Attack& a : enumerate_attacks(p)) {
      for (InstrumentMode m : {InstrumentMode::Locality, InstrumentMode::Singularity}) {
        if (m == InstrumentMode::Singularity && p.has_fence()) continue;
        InstrumentedProgram ip = instrument_program(p, a, m);
        ReachQuery q;
        q.program = ip.program;
        q.goal_address = ip.layout.suc();
        q.exhaustive = true;
        ReachResult plain = reachable(q);
        ReachResult reduced = por_reduce(q);
        ++queries;
        plain_states += plain.stats.states_visited;
        por_states += reduced.stats.states_visited;
        o.require(plain.reachable == reduced.reachable, std::string(name) + " reachability differs");
        o.require(reduced.stats.states_visited <= plain.stats.states_visited,
                  std::string(name) + " reduction visits more states");
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << queries << " queries, states " << plain_states << " plain vs " << por_states
           << " reduced";
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    void (*run)(Outcome&);
  };
  const Criterion criteria[] = {
      {"AC1", "message passing is not robust", ac1},
      {"AC2", "cost of the two reorderings", ac2},
      {"AC3", "fenced message passing is robust", ac3},
      {"AC4", "cyclic traces are exactly the non-SC traces", ac4},
      {"AC5", "singularity", ac5},
      {"AC6", "locality", ac6},
      {"AC7", "instrumentation agrees with the oracle", ac7},
      {"AC8", "minimal violations are witnesses", ac8},
      {"AC9", "instrumentation size is linear", ac9},
      {"AC10", "partial-order reduction is sound", ac10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << " (" << o.detail.str() << ")"
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
