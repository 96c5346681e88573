#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robust/report.hpp"

namespace robust::cli {

struct CommonArgs {
  std::string file;
  unsigned buffer_bound = 3;
  std::size_t max_actions = 24;
  bool json = false;
  unsigned jobs = 1;
};

struct CheckArgs : CommonArgs {
  std::string mode = "auto";
  bool all_attacks = false;
  bool por = false;
  std::string emit_dot;  ///< directory, empty for none
};

struct SimulateArgs : CommonArgs {
  std::vector<std::size_t> schedule;
  bool sc = false;
};

struct InstrumentArgs : CommonArgs {
  std::string attack = "0";  ///< index, or thread:stinst:lastinst
  std::string mode = "auto";
  std::string output;        ///< empty writes the program to `out`
};

struct PropertiesArgs : CommonArgs {};

/// Each command writes its report to `out`, problems to `err`, and returns
/// the process exit code: 0 robust / success, 1 not robust / property or
/// replay failure, 2 errors and unknown verdicts.
int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err);
int cmd_instrument(const InstrumentArgs& a, std::ostream& out, std::ostream& err);
int cmd_properties(const PropertiesArgs& a, std::ostream& out, std::ostream& err);

std::vector<std::size_t> parse_schedule(const std::string& text);

/// Accepts an attack index or "thread:stinst:lastinst" (thread name or index,
/// instruction indices or labels).
Attack parse_attack(const std::string& text, const Program& p);

std::string_view tool_version();

}  // namespace robust::cli
