#include <thread>

#include "robust/robustness.hpp"

namespace robust {

std::string_view to_string(CheckMode m) {
  switch (m) {
    case CheckMode::Auto: return "auto";
    case CheckMode::Locality: return "locality";
    case CheckMode::Singularity: return "singularity";
    case CheckMode::Oracle: return "oracle";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Robust: return "robust";
    case Verdict::NotRobust: return "not-robust";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

std::optional<CheckMode> parse_check_mode(std::string_view s) {
  for (CheckMode m : {CheckMode::Auto, CheckMode::Locality, CheckMode::Singularity, CheckMode::Oracle})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Robust: return 0;
    case Verdict::NotRobust: return 1;
    case Verdict::Unknown: return 2;
  }
  return 2;
}

namespace {

AttackResult check_attack(const Program& p, const Attack& a, InstrumentMode mode, const CheckOptions& o) {
  AttackResult r;
  r.attack = a;
  InstrumentedProgram ip = instrument_program(p, a, mode);
  r.instrumented_instructions = ip.instructions;
  ReachQuery q{std::move(ip.program), ip.layout.suc(), o.limits, false};
  try {
    r.reach = o.use_por ? por_reduce(q) : reachable(q);
    r.reachable = r.reach.reachable;
  } catch (const BudgetExhausted& e) {
    r.budget_exhausted = true;
    r.reach.stats = e.stats();
  }
  return r;
}

RobustnessVerdict check_with_oracle(const Program& p, const CheckOptions& o) {
  RobustnessVerdict v;
  v.mode = CheckMode::Oracle;
  auto res = find_minimal_violation(p, o.oracle);
  if (auto* r = std::get_if<ViolationReport>(&res)) {
    v.verdict = Verdict::NotRobust;
    v.message = "violation of cost " + to_string(r->cost) + " within bounds";
    v.violation = std::move(*r);
  } else {
    v.verdict = Verdict::Robust;
    v.truncated = std::get<NotFoundWithinBounds>(res).truncated;
    v.message = "no violation within buffer bound " + std::to_string(o.oracle.buffer_bound) + " and " +
                std::to_string(o.oracle.max_actions) + " actions";
  }
  return v;
}

}  // namespace

RobustnessVerdict check_robustness(const Program& p, const CheckOptions& o) {
  if (o.mode == CheckMode::Oracle) return check_with_oracle(p, o);

  RobustnessVerdict v;
  v.mode = o.mode == CheckMode::Auto ? (p.has_fence() ? CheckMode::Locality : CheckMode::Singularity) : o.mode;
  const InstrumentMode im = v.mode == CheckMode::Locality ? InstrumentMode::Locality : InstrumentMode::Singularity;
  const auto attacks = enumerate_attacks(p);
  const std::size_t jobs = std::max(1u, o.jobs);

  for (std::size_t begin = 0; begin < attacks.size(); begin += jobs) {
    const std::size_t end = std::min(attacks.size(), begin + jobs);
    std::vector<AttackResult> batch(end - begin);
    std::vector<std::exception_ptr> errors(batch.size());
    auto work = [&](std::size_t k) {
      try {
        batch[k] = check_attack(p, attacks[begin + k], im, o);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (batch.size() == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < batch.size(); ++k) pool.emplace_back(work, k);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& r : batch) {
      if (r.reachable && !v.feasible) v.feasible = v.attacks.size();
      v.attacks.push_back(std::move(r));
    }
    if (v.feasible && !o.all_attacks) break;
  }

  bool exhausted = false;
  for (const auto& r : v.attacks) exhausted = exhausted || r.budget_exhausted;
  if (v.feasible) {
    v.verdict = Verdict::NotRobust;
    v.message = "feasible attack: " + describe(v.attacks[*v.feasible].attack, p);
  } else if (exhausted) {
    v.verdict = Verdict::Unknown;
    v.message = "state budget exhausted before all attacks were decided";
  } else {
    v.verdict = Verdict::Robust;
    v.message = "none of " + std::to_string(attacks.size()) + " attacks is feasible";
  }
  return v;
}

}  // namespace robust
