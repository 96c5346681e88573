#include <gtest/gtest.h>

#include "robust/robustness.hpp"
#include "support.hpp"

using namespace robust;
using test::corpus;

namespace {

const char* kCounter = R"(program Counter
domain 4
thread a
regs r
init l0
begin
  l0: r <- mem[0]; goto l1;
  l1: mem[0] <- r + 1; goto l2;
end

thread b
regs r
init k0
begin
  k0: r <- mem[0]; goto k1;
  k1: assert r = 2; goto k2;
  k2: mem[1] <- 1; goto k3;
end
)";

ReachQuery query(Program p, Value goal) {
  ReachQuery q;
  q.program = std::move(p);
  q.goal_address = goal;
  return q;
}

}  // namespace

TEST(Reach, FindsShortestSchedule) {
  // a can only add one, so b never sees 2.
  auto r = reachable(query(load_program(kCounter), 1));
  EXPECT_FALSE(r.reachable);
  auto w = reachable(query(load_program(kCounter), 0));
  ASSERT_TRUE(w.reachable);
  EXPECT_EQ(w.schedule.size(), 2u);
  EXPECT_EQ(w.witness.actions.back().kind, ActionKind::Store);
}

TEST(Reach, WitnessReplaysUnderSc) {
  Program p = corpus("mp");
  auto ip = instrument_program(p, enumerate_attacks(p)[2], InstrumentMode::Singularity);
  auto r = reachable(query(ip.program, ip.layout.suc()));
  ASSERT_TRUE(r.reachable);
  Machine m(ip.program, MachineOptions{0});
  MachineState end;
  RunResult replay = run(m, r.schedule, SemanticsMode::Sc, &end);
  ASSERT_TRUE(std::holds_alternative<Computation>(replay));
  EXPECT_NE(end.memory[ip.layout.suc()], 0u);
}

TEST(Reach, BudgetIsEnforced) {
  Program p = corpus("lamport_nofence");
  auto ip = instrument_program(p, enumerate_attacks(p)[0], InstrumentMode::Locality);
  ReachQuery q = query(ip.program, ip.layout.suc());
  q.limits.max_states = 5;
  q.exhaustive = true;
  EXPECT_THROW(reachable(q), BudgetExhausted);
}

TEST(Reach, GoalOutsideDomainRejected) {
  EXPECT_THROW(reachable(query(corpus("mp"), 99)), std::invalid_argument);
}

TEST(Reach, ReductionAgreesAndShrinks) {
  for (const char* name : {"mp", "dekker_nofence", "clh_lock"}) {
    Program p = corpus(name);
    for (const Attack& a : enumerate_attacks(p)) {
      auto ip = instrument_program(p, a, InstrumentMode::Locality);
      ReachQuery q = query(ip.program, ip.layout.suc());
      q.exhaustive = true;
      auto full = reachable(q);
      auto reduced = por_reduce(q);
      EXPECT_EQ(full.reachable, reduced.reachable) << name;
      EXPECT_LE(reduced.stats.states_visited, full.stats.states_visited) << name;
    }
  }
}

TEST(Robustness, VerdictsPerMode) {
  CheckOptions o;
  EXPECT_EQ(check_robustness(corpus("mp"), o).verdict, Verdict::NotRobust);
  EXPECT_EQ(check_robustness(corpus("mp_fenced"), o).verdict, Verdict::Robust);
  o.mode = CheckMode::Oracle;
  o.oracle = ExplorationConfig{2, 14, SemanticsMode::Relaxed};
  auto v = check_robustness(corpus("mp"), o);
  EXPECT_EQ(v.verdict, Verdict::NotRobust);
  ASSERT_TRUE(v.violation.has_value());
  EXPECT_EQ(v.mode, CheckMode::Oracle);
}

TEST(Robustness, AutoResolvesMode) {
  EXPECT_EQ(check_robustness(corpus("mp")).mode, CheckMode::Singularity);
  EXPECT_EQ(check_robustness(corpus("mp_fenced")).mode, CheckMode::Locality);
}

TEST(Robustness, AllAttacksAndJobs) {
  CheckOptions o;
  o.all_attacks = true;
  o.jobs = 3;
  auto v = check_robustness(corpus("mp"), o);
  EXPECT_EQ(v.attacks.size(), enumerate_attacks(corpus("mp")).size());
  ASSERT_TRUE(v.feasible.has_value());
  EXPECT_TRUE(v.attacks[*v.feasible].reachable);
  o.jobs = 1;
  auto serial = check_robustness(corpus("mp"), o);
  ASSERT_EQ(serial.attacks.size(), v.attacks.size());
  for (std::size_t i = 0; i < v.attacks.size(); ++i) EXPECT_EQ(serial.attacks[i].reachable, v.attacks[i].reachable);
}

TEST(Robustness, BudgetGivesUnknown) {
  CheckOptions o;
  o.limits.max_states = 3;
  EXPECT_EQ(check_robustness(corpus("mp_fenced"), o).verdict, Verdict::Unknown);
  EXPECT_EQ(exit_code(Verdict::Unknown), 2);
}

TEST(Robustness, ParseMode) {
  EXPECT_EQ(parse_check_mode("oracle"), CheckMode::Oracle);
  EXPECT_EQ(parse_check_mode("locality"), CheckMode::Locality);
  EXPECT_FALSE(parse_check_mode("bogus").has_value());
}
