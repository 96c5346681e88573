#pragma once

#include <optional>
#include <string>

#include "robust/instrument.hpp"
#include "robust/oracle.hpp"
#include "robust/screach.hpp"

namespace robust {

enum class CheckMode : std::uint8_t { Auto, Locality, Singularity, Oracle };
enum class Verdict : std::uint8_t { Robust, NotRobust, Unknown };

std::string_view to_string(CheckMode m);
std::string_view to_string(Verdict v);
std::optional<CheckMode> parse_check_mode(std::string_view s);

/// 0 robust, 1 not robust, 2 unknown.
int exit_code(Verdict v);

struct CheckOptions {
  CheckMode mode = CheckMode::Auto;
  /// Check every attack instead of stopping at the first feasible one.
  bool all_attacks = false;
  unsigned jobs = 1;
  bool use_por = false;
  ReachLimits limits;
  /// Bounds for oracle mode.
  ExplorationConfig oracle;
};

struct AttackResult {
  Attack attack;
  bool reachable = false;
  bool budget_exhausted = false;
  ReachResult reach;
  std::size_t instrumented_instructions = 0;
};

struct RobustnessVerdict {
  Verdict verdict = Verdict::Unknown;
  /// The mode actually used (Auto is resolved).
  CheckMode mode = CheckMode::Auto;
  std::vector<AttackResult> attacks;
  /// Index into `attacks` of the first feasible attack.
  std::optional<std::size_t> feasible;
  /// Oracle mode only.
  std::optional<ViolationReport> violation;
  bool truncated = false;
  std::string message;
};

RobustnessVerdict check_robustness(const Program& p, const CheckOptions& options = {});

}  // namespace robust
