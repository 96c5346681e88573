#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robust {

/// An element of the program domain. Addresses and data values share it.
using Value = std::uint32_t;

enum class ExprOp : std::uint8_t {
  Const,
  Reg,
  Add,
  Sub,
  Mul,
  Mod,
  Eq,
  Ne,
  Lt,
  Le,
  Not,
};

/// Expression tree over registers and constants.
///
/// Arithmetic wraps modulo the domain size of the enclosing program and
/// comparisons yield 1 or 0, so evaluation is total. A constant may carry
/// the symbolic name it was written with; the name is only used when
/// printing.
struct Expr {
  ExprOp op = ExprOp::Const;
  Value value = 0;
  std::string name;
  std::vector<Expr> operands;

  static Expr constant(Value v, std::string symbol = {});
  static Expr reg(std::string register_name);
  static Expr unary(ExprOp op, Expr operand);
  static Expr binary(ExprOp op, Expr lhs, Expr rhs);

  bool is_leaf() const { return op == ExprOp::Const || op == ExprOp::Reg; }

  bool operator==(const Expr&) const = default;
};

// Convenience builders used by the instrumentation.
Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);
Expr eq(Expr lhs, Expr rhs);
Expr ne(Expr lhs, Expr rhs);
Expr le(Expr lhs, Expr rhs);

bool is_binary(ExprOp op);
bool is_arithmetic(ExprOp op);
bool is_comparison(ExprOp op);
std::string_view op_symbol(ExprOp op);

/// Binding strength used by the parser and the printer (higher binds tighter).
int precedence(ExprOp op);

/// Applies a binary or unary operator with wrap-around modulo `modulus`.
Value apply_op(ExprOp op, Value lhs, Value rhs, Value modulus);

void for_each_register(const Expr& e, const std::function<void(const std::string&)>& fn);
bool mentions_register(const Expr& e, std::string_view register_name);

/// Renders with the minimal parenthesization that re-parses to the same tree.
std::string to_string(const Expr& e);

/// Flattened postfix form of an Expr with registers resolved to indices.
class CompiledExpr {
 public:
  CompiledExpr() = default;

  /// `resolve` maps a register name to its slot; it must accept every name in `e`.
  static CompiledExpr compile(const Expr& e,
                              const std::function<std::size_t(const std::string&)>& resolve);

  Value eval(std::span<const Value> registers, Value modulus) const;

  bool empty() const { return code_.empty(); }

 private:
  struct Step {
    ExprOp op;
    Value operand;
  };
  std::vector<Step> code_;
  std::size_t max_depth_ = 0;
};

}  // namespace robust
