#include "robust/expr.hpp"

#include <cassert>
#include <stdexcept>

namespace robust {

Expr Expr::constant(Value v, std::string symbol) {
  Expr e;
  e.op = ExprOp::Const;
  e.value = v;
  e.name = std::move(symbol);
  return e;
}

Expr Expr::reg(std::string register_name) {
  Expr e;
  e.op = ExprOp::Reg;
  e.name = std::move(register_name);
  return e;
}

Expr Expr::unary(ExprOp op, Expr operand) {
  Expr e;
  e.op = op;
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

Expr operator+(Expr lhs, Expr rhs) { return Expr::binary(ExprOp::Add, std::move(lhs), std::move(rhs)); }
Expr operator-(Expr lhs, Expr rhs) { return Expr::binary(ExprOp::Sub, std::move(lhs), std::move(rhs)); }
Expr eq(Expr lhs, Expr rhs) { return Expr::binary(ExprOp::Eq, std::move(lhs), std::move(rhs)); }
Expr ne(Expr lhs, Expr rhs) { return Expr::binary(ExprOp::Ne, std::move(lhs), std::move(rhs)); }
Expr le(Expr lhs, Expr rhs) { return Expr::binary(ExprOp::Le, std::move(lhs), std::move(rhs)); }

bool is_binary(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Mod:
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
      return true;
    default:
      return false;
  }
}

bool is_arithmetic(ExprOp op) {
  return op == ExprOp::Add || op == ExprOp::Sub || op == ExprOp::Mul || op == ExprOp::Mod;
}

bool is_comparison(ExprOp op) {
  return op == ExprOp::Eq || op == ExprOp::Ne || op == ExprOp::Lt || op == ExprOp::Le;
}

std::string_view op_symbol(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Mod: return "%";
    case ExprOp::Eq: return "=";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Not: return "!";
    default: return "";
  }
}

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
      return 1;
    case ExprOp::Add:
    case ExprOp::Sub:
      return 2;
    case ExprOp::Mul:
    case ExprOp::Mod:
      return 3;
    case ExprOp::Not:
      return 4;
    case ExprOp::Const:
    case ExprOp::Reg:
      return 5;
  }
  return 5;
}

Value apply_op(ExprOp op, Value lhs, Value rhs, Value modulus) {
  const std::uint64_t m = modulus;
  const std::uint64_t a = lhs % m;
  const std::uint64_t b = rhs % m;
  switch (op) {
    case ExprOp::Add: return static_cast<Value>((a + b) % m);
    case ExprOp::Sub: return static_cast<Value>((a + m - b) % m);
    case ExprOp::Mul: return static_cast<Value>((a * b) % m);
    // x % 0 is defined as x to keep evaluation total.
    case ExprOp::Mod: return static_cast<Value>(b == 0 ? a : a % b);
    case ExprOp::Eq: return static_cast<Value>((a == b ? 1u : 0u) % m);
    case ExprOp::Ne: return static_cast<Value>((a != b ? 1u : 0u) % m);
    case ExprOp::Lt: return static_cast<Value>((a < b ? 1u : 0u) % m);
    case ExprOp::Le: return static_cast<Value>((a <= b ? 1u : 0u) % m);
    case ExprOp::Not: return static_cast<Value>((a == 0 ? 1u : 0u) % m);
    default: throw std::logic_error("apply_op: not an operator");
  }
}

void for_each_register(const Expr& e, const std::function<void(const std::string&)>& fn) {
  if (e.op == ExprOp::Reg) fn(e.name);
  for (const auto& sub : e.operands) for_each_register(sub, fn);
}

bool mentions_register(const Expr& e, std::string_view register_name) {
  if (e.op == ExprOp::Reg && e.name == register_name) return true;
  for (const auto& sub : e.operands)
    if (mentions_register(sub, register_name)) return true;
  return false;
}

namespace {

void render(const Expr& e, std::string& out) {
  switch (e.op) {
    case ExprOp::Const:
      out += e.name.empty() ? std::to_string(e.value) : e.name;
      return;
    case ExprOp::Reg:
      out += e.name;
      return;
    case ExprOp::Not: {
      out += '!';
      const Expr& sub = e.operands.at(0);
      const bool paren = precedence(sub.op) < precedence(ExprOp::Not);
      if (paren) out += '(';
      render(sub, out);
      if (paren) out += ')';
      return;
    }
    default: {
      const int p = precedence(e.op);
      const Expr& lhs = e.operands.at(0);
      const Expr& rhs = e.operands.at(1);
      // Comparisons do not chain, so an equal-precedence left operand needs parens too.
      const bool lparen = is_comparison(e.op) ? precedence(lhs.op) <= p : precedence(lhs.op) < p;
      const bool rparen = precedence(rhs.op) <= p;
      if (lparen) out += '(';
      render(lhs, out);
      if (lparen) out += ')';
      out += ' ';
      out += op_symbol(e.op);
      out += ' ';
      if (rparen) out += '(';
      render(rhs, out);
      if (rparen) out += ')';
      return;
    }
  }
}

void emit(const Expr& e, const std::function<std::size_t(const std::string&)>& resolve,
          std::vector<std::pair<ExprOp, Value>>& code, std::size_t depth, std::size_t& max_depth) {
  if (depth + 1 > max_depth) max_depth = depth + 1;
  switch (e.op) {
    case ExprOp::Const:
      code.emplace_back(ExprOp::Const, e.value);
      return;
    case ExprOp::Reg:
      code.emplace_back(ExprOp::Reg, static_cast<Value>(resolve(e.name)));
      return;
    default:
      for (std::size_t i = 0; i < e.operands.size(); ++i)
        emit(e.operands[i], resolve, code, depth + i, max_depth);
      code.emplace_back(e.op, 0);
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  render(e, out);
  return out;
}

CompiledExpr CompiledExpr::compile(const Expr& e,
                                   const std::function<std::size_t(const std::string&)>& resolve) {
  std::vector<std::pair<ExprOp, Value>> code;
  CompiledExpr out;
  emit(e, resolve, code, 0, out.max_depth_);
  out.code_.reserve(code.size());
  for (auto [op, operand] : code) out.code_.push_back({op, operand});
  return out;
}

Value CompiledExpr::eval(std::span<const Value> registers, Value modulus) const {
  constexpr std::size_t kInline = 32;
  Value inline_stack[kInline];
  std::vector<Value> heap_stack;
  Value* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Step& s : code_) {
    switch (s.op) {
      case ExprOp::Const:
        stack[top++] = s.operand % modulus;
        break;
      case ExprOp::Reg:
        stack[top++] = registers[s.operand] % modulus;
        break;
      case ExprOp::Not:
        stack[top - 1] = apply_op(ExprOp::Not, stack[top - 1], 0, modulus);
        break;
      default: {
        const Value rhs = stack[--top];
        stack[top - 1] = apply_op(s.op, stack[top - 1], rhs, modulus);
      }
    }
  }
  assert(top == 1);
  return stack[0];
}

}  // namespace robust
