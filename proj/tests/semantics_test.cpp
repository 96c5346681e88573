#include <gtest/gtest.h>

#include "support.hpp"

using namespace robust;
using test::corpus;

namespace {

const char* kTwoStores = R"(program TwoStores
domain 3
thread t
regs r
init l0
begin
  l0: mem[0] <- 1; goto l1;
  l1: mem[0] <- 2; goto l2;
  l2: r <- mem[0]; goto l3;
end
)";

std::vector<Rule> rules_of(const std::vector<Transition>& ts) {
  std::vector<Rule> out;
  for (const auto& t : ts) out.push_back(t.rule);
  return out;
}

std::size_t pick(const std::vector<Transition>& ts, Rule r) {
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i].rule == r) return i;
  ADD_FAILURE() << "rule not enabled: " << to_string(r);
  return 0;
}

}  // namespace

TEST(Semantics, InitialStateIsZeroed) {
  Machine m(corpus("mp"));
  MachineState s = m.initial_state();
  EXPECT_TRUE(s.buffers_empty());
  EXPECT_EQ(s.memory, (std::vector<Value>{0, 0, 0}));
  EXPECT_EQ(m.label_name(0, s.threads[0].pc), "l_0");
  EXPECT_FALSE(m.terminated(s, 0));
}

TEST(Semantics, EarlyReadSeesOwnNewestStore) {
  Machine m(load_program(kTwoStores));
  MachineState s = m.initial_state();
  s = apply(m, s, 0);  // issue 1
  s = apply(m, s, 0);  // issue 2
  auto ts = m.enabled(s);
  std::size_t i = pick(ts, Rule::EarlyRead1);
  ASSERT_EQ(ts[i].actions.size(), 1u);
  EXPECT_EQ(ts[i].actions[0].kind, ActionKind::Load);
  EXPECT_EQ(ts[i].actions[0].value, 2u);
  EXPECT_EQ(s.threads[0].pending_for(0), 2u);
}

TEST(Semantics, BufferBoundBlocksIssue) {
  Machine m(load_program(kTwoStores), MachineOptions{1});
  MachineState s = apply(m, m.initial_state(), 0);
  auto rs = rules_of(m.enabled(s));
  EXPECT_EQ(std::count(rs.begin(), rs.end(), Rule::IssueStore), 0);
}

TEST(Semantics, PerAddressBuffersRetireOutOfOrderAcrossAddresses) {
  Machine m(corpus("mp"));
  // Issue all three writer stores, then retire the flag store first.
  std::vector<std::size_t> schedule;
  MachineState s = m.initial_state();
  for (int k = 0; k < 3; ++k) {
    auto ts = m.enabled(s);
    std::size_t i = pick(ts, Rule::IssueStore);
    schedule.push_back(i);
    s = ts[i].next;
  }
  auto ts = m.enabled(s);
  bool flag_first = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].thread != 0 || ts[i].rule != Rule::AdvanceBuffer) continue;
    auto nt = m.enabled(ts[i].next);
    for (const auto& n : nt)
      if (n.rule == Rule::StoreToMemory && n.actions[0].address == 2) flag_first = true;
  }
  EXPECT_TRUE(flag_first);
}

TEST(Semantics, ZeroBoundCoincidesWithSc) {
  Machine relaxed(corpus("dekker_nofence"), MachineOptions{0});
  Machine sc(corpus("dekker_nofence"));
  MachineState s = relaxed.initial_state();
  auto a = relaxed.enabled(s);
  auto b = sc.sc_enabled(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].actions, b[i].actions);
}

TEST(Semantics, ScStoreIsIssueThenStore) {
  Machine m(corpus("mp"));
  auto ts = m.sc_enabled(m.initial_state());
  std::size_t i = pick(ts, Rule::IssueStore);
  ASSERT_EQ(ts[i].actions.size(), 2u);
  EXPECT_EQ(ts[i].actions[0].kind, ActionKind::Issue);
  EXPECT_EQ(ts[i].actions[1], (Action{0, ActionKind::Store, 0, 1, {}}));
  EXPECT_EQ(ts[i].next.memory[0], 1u);
}

TEST(Semantics, FenceWaitsForListedAddresses) {
  Machine m(corpus("mp_fenced"));
  MachineState s = m.initial_state();
  auto step = [&](Rule r) {
    for (const auto& t : m.enabled(s))
      if (t.thread == 0 && t.rule == r) {
        s = t.next;
        return true;
      }
    return false;
  };
  ASSERT_TRUE(step(Rule::IssueStore));
  ASSERT_TRUE(step(Rule::IssueStore));
  // d1 and d2 still sit in their per-address queues.
  auto rs = rules_of(m.enabled(s));
  EXPECT_EQ(std::count(rs.begin(), rs.end(), Rule::IssueFence), 0);
  ASSERT_TRUE(step(Rule::AdvanceBuffer));
  ASSERT_TRUE(step(Rule::AdvanceBuffer));
  ASSERT_TRUE(step(Rule::IssueFence));
  EXPECT_EQ(s.threads[0].all_addresses.size(), 3u);
  // The fence retires only after both stores reach memory.
  EXPECT_FALSE(step(Rule::Fence));
  ASSERT_TRUE(step(Rule::StoreToMemory));
  EXPECT_FALSE(step(Rule::Fence));
  ASSERT_TRUE(step(Rule::StoreToMemory));
  EXPECT_TRUE(step(Rule::Fence));
  EXPECT_EQ(m.label_name(0, s.threads[0].pc), "l_3");
}

TEST(Semantics, ScFenceRequiresEmptyBuffers) {
  Machine m(corpus("dekker_fenced"));
  MachineState s = apply(m, m.initial_state(), pick(m.enabled(m.initial_state()), Rule::IssueStore));
  for (const auto& t : m.enabled(s))
    if (t.thread == 0) EXPECT_NE(t.rule, Rule::ScFence);
}

TEST(Semantics, ApplyRejectsBadChoice) {
  Machine m(corpus("mp"));
  EXPECT_THROW(apply(m, m.initial_state(), 999), InvalidChoice);
}

TEST(Semantics, RunReportsStuckSchedule) {
  Machine m(corpus("mp"));
  RunResult r = run(m, {0, 999});
  ASSERT_TRUE(std::holds_alternative<StuckReport>(r));
  const auto& stuck = std::get<StuckReport>(r);
  EXPECT_EQ(stuck.index, 1u);
  EXPECT_EQ(stuck.prefix.actions.size(), 1u);
}

TEST(Semantics, IssueIndexPairsFifoPerAddress) {
  Computation c = test::mp_tau();
  auto ii = c.issue_index();
  EXPECT_EQ(ii[3], 2u);  // c
  EXPECT_EQ(ii[7], 1u);  // b
  EXPECT_EQ(ii[8], 0u);  // a
  EXPECT_FALSE(ii[4].has_value());
  EXPECT_TRUE(c.pairing_complete());
  auto ri = c.retire_index();
  EXPECT_EQ(ri[0], 8u);
}

TEST(Semantics, RealizeRoundTrips) {
  Machine m(corpus("mp"));
  for (const Computation& target : {test::mp_tau(), test::mp_tau_prime()}) {
    auto sched = realize(m, target);
    ASSERT_TRUE(sched.has_value());
    RunResult r = run(m, *sched);
    ASSERT_TRUE(std::holds_alternative<Computation>(r));
    EXPECT_EQ(std::get<Computation>(r).actions, target.actions);
    EXPECT_EQ(std::get<Computation>(r).issued, target.issued);
  }
}

TEST(Semantics, StateHashDistinguishesMemory) {
  Machine m(corpus("mp"));
  MachineState a = m.initial_state();
  MachineState b = a;
  b.memory[1] = 1;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash(), m.initial_state().hash());
}
