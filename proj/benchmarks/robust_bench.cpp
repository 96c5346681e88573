#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "robust/robustness.hpp"

using namespace robust;

namespace {

const char* const kPrograms[] = {"mp",           "mp_fenced",      "dekker_nofence", "dekker_fenced",
                                 "lamport_nofence", "lockfree_stack", "clh_lock",    "nonsingular"};

std::string path(const char* name) { return std::string(ROBUST_CORPUS_DIR) + "/" + name + ".prog"; }

std::string read(const char* name) {
  std::ifstream in(path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void BM_Parse(benchmark::State& state) {
  std::string text = read(kPrograms[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(load_program(text));
  state.SetLabel(kPrograms[state.range(0)]);
}
BENCHMARK(BM_Parse)->DenseRange(0, 7);

void BM_Successors(benchmark::State& state) {
  Machine m(load_program_file(path("lamport_nofence")));
  MachineState s = m.initial_state();
  for (auto _ : state) benchmark::DoNotOptimize(m.enabled(s));
}
BENCHMARK(BM_Successors);

void BM_BuildTrace(benchmark::State& state) {
  Program p = load_program_file(path("lamport_nofence"));
  auto r = std::get<ViolationReport>(find_violation(p, ExplorationConfig{}));
  for (auto _ : state) benchmark::DoNotOptimize(build_trace(r.computation));
}
BENCHMARK(BM_BuildTrace);

void BM_MinimalViolation(benchmark::State& state) {
  Program p = load_program_file(path(kPrograms[state.range(0)]));
  ExplorationConfig cfg{2, 14, SemanticsMode::Relaxed};
  for (auto _ : state) benchmark::DoNotOptimize(find_minimal_violation(p, cfg));
  state.SetLabel(kPrograms[state.range(0)]);
}
BENCHMARK(BM_MinimalViolation)->Arg(0)->Arg(1)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Instrument(benchmark::State& state) {
  Program p = load_program_file(path("lamport_nofence"));
  auto attacks = enumerate_attacks(p);
  for (auto _ : state)
    for (const auto& a : attacks) benchmark::DoNotOptimize(instrument_program(p, a, InstrumentMode::Locality));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * attacks.size()));
}
BENCHMARK(BM_Instrument);

void reach(benchmark::State& state, bool reduce) {
  Program p = load_program_file(path(kPrograms[state.range(0)]));
  ReachQuery q;
  q.program = instrument_program(p, enumerate_attacks(p)[0], InstrumentMode::Locality).program;
  q.goal_address = AddressLayout::for_domain(p.domain_size).suc();
  q.exhaustive = true;
  std::size_t states = 0;
  for (auto _ : state) states = (reduce ? por_reduce(q) : reachable(q)).stats.states_visited;
  state.counters["states"] = static_cast<double>(states);
  state.SetLabel(kPrograms[state.range(0)]);
}

void BM_Reach(benchmark::State& state) { reach(state, false); }
void BM_ReachPor(benchmark::State& state) { reach(state, true); }
BENCHMARK(BM_Reach)->DenseRange(0, 7)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ReachPor)->DenseRange(0, 7)->Unit(benchmark::kMicrosecond);

void BM_CheckRobustness(benchmark::State& state) {
  Program p = load_program_file(path(kPrograms[state.range(0)]));
  CheckOptions o;
  o.all_attacks = true;
  for (auto _ : state) benchmark::DoNotOptimize(check_robustness(p, o));
  state.SetLabel(kPrograms[state.range(0)]);
}
BENCHMARK(BM_CheckRobustness)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
