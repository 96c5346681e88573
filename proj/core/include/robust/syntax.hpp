#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robust/expr.hpp"

namespace robust {

// ---------------------------------------------------------------------------
// Abstract syntax

/// `r <- mem[address]`
struct Load {
  std::string dest;
  Expr address;
  bool operator==(const Load&) const = default;
};

/// `mem[address] <- value`
struct Store {
  Expr address;
  Expr value;
  bool operator==(const Store&) const = default;
};

/// `r <- value`
struct LocalAssign {
  std::string dest;
  Expr value;
  bool operator==(const LocalAssign&) const = default;
};

/// `assert condition`; blocks while the condition evaluates to 0.
struct Assert {
  Expr condition;
  bool operator==(const Assert&) const = default;
};

/// `scfence`; enabled only when every buffer of the thread is empty.
struct ScFence {
  bool operator==(const ScFence&) const = default;
};

/// `fence a1, a2, ...`; waits for the per-address buffers of the listed addresses.
struct Fence {
  std::vector<Expr> addresses;
  bool operator==(const Fence&) const = default;
};

using Instruction = std::variant<Load, Store, LocalAssign, Assert, ScFence, Fence>;

struct LabeledInstruction {
  std::string label;
  Instruction instruction;
  std::string next;
  bool operator==(const LabeledInstruction&) const = default;
};

struct Thread {
  std::string name;
  std::vector<std::string> registers;
  std::string init_label;
  /// Optional explicit list of terminal labels. When present, a goto target
  /// that is neither declared by an instruction nor listed here is an error.
  std::optional<std::vector<std::string>> final_labels;
  std::vector<LabeledInstruction> instructions;

  bool operator==(const Thread&) const = default;
};

/// Named domain value declared in the program header (`const flag = 2`).
struct Constant {
  std::string name;
  Value value = 0;
  bool operator==(const Constant&) const = default;
};

struct Program {
  std::string name;
  Value domain_size = 1;
  std::vector<Constant> constants;
  std::vector<Thread> threads;

  std::size_t instruction_count() const;
  const Thread* find_thread(std::string_view thread_name) const;
  bool has_fence() const;

  bool operator==(const Program&) const = default;
};

bool is_memory_access(const Instruction& inst);

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
             const std::string& found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Parses program text. Only syntax is checked; call validate() for the
/// well-formedness rules.
Program parse_program(std::string_view text);

Expr parse_expr(std::string_view text);

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::string thread;
  std::string label;
  std::string rule;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::vector<Diagnostic> validate(const Program& p);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// parse_program followed by validate; throws ValidationError on diagnostics.
Program load_program(std::string_view text);
Program load_program_file(const std::string& path);

// ---------------------------------------------------------------------------
// Printing

std::string pretty_print(const Program& p);
std::string to_string(const Instruction& inst);

}  // namespace robust
