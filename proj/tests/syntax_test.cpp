#include <gtest/gtest.h>

#include "support.hpp"

using namespace robust;

namespace {

const char* kTiny = R"(program Tiny
domain 4
const x = 1

thread t
regs r s
init l0
begin
  l0: r <- mem[x]; goto l1;
  l1: s <- r * 3 + 1; goto l2;
  l2: assert s != 0; goto l3;
  l2: mem[s % 2] <- r - 1; goto l3;
  l3: fence x, 0; goto l4;
  l4: scfence; goto done;
end
)";

std::vector<std::string> rules(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.rule);
  return out;
}

}  // namespace

TEST(Expr, ArithmeticWrapsModuloDomain) {
  EXPECT_EQ(apply_op(ExprOp::Add, 3, 2, 4), 1u);
  EXPECT_EQ(apply_op(ExprOp::Sub, 0, 1, 3), 2u);
  EXPECT_EQ(apply_op(ExprOp::Mul, 3, 3, 4), 1u);
  EXPECT_EQ(apply_op(ExprOp::Mod, 3, 2, 4), 1u);
  EXPECT_EQ(apply_op(ExprOp::Mod, 3, 0, 4), 3u);
}

TEST(Expr, ComparisonsYieldBits) {
  EXPECT_EQ(apply_op(ExprOp::Eq, 2, 2, 5), 1u);
  EXPECT_EQ(apply_op(ExprOp::Ne, 2, 2, 5), 0u);
  EXPECT_EQ(apply_op(ExprOp::Lt, 1, 2, 5), 1u);
  EXPECT_EQ(apply_op(ExprOp::Le, 3, 2, 5), 0u);
  EXPECT_EQ(apply_op(ExprOp::Not, 0, 0, 5), 1u);
}

TEST(Expr, PrecedenceAndPrinting) {
  Expr e = parse_expr("1 + 2 * r = 3");
  ASSERT_EQ(e.op, ExprOp::Eq);
  EXPECT_EQ(e.operands[0].op, ExprOp::Add);
  EXPECT_EQ(e.operands[0].operands[1].op, ExprOp::Mul);
  EXPECT_EQ(to_string(e), "1 + 2 * r = 3");
  Expr g = parse_expr("(1 + 2) * r");
  EXPECT_EQ(to_string(g), "(1 + 2) * r");
  EXPECT_EQ(parse_expr(to_string(parse_expr("a - (b - c)"))), parse_expr("a - (b - c)"));
}

TEST(Expr, CompiledEvaluation) {
  Expr e = parse_expr("(r + 3) * s % 5");
  auto slot = [](const std::string& n) -> std::size_t { return n == "r" ? 0 : 1; };
  CompiledExpr c = CompiledExpr::compile(e, slot);
  std::vector<Value> regs{2, 4};
  // ((2 + 3) mod 7 * 4) mod 7 = 6, 6 % 5 = 1
  EXPECT_EQ(c.eval(regs, 7), 1u);
}

TEST(Parser, ParsesAllInstructionForms) {
  Program p = load_program(kTiny);
  EXPECT_EQ(p.name, "Tiny");
  EXPECT_EQ(p.domain_size, 4u);
  ASSERT_EQ(p.threads.size(), 1u);
  const auto& insts = p.threads[0].instructions;
  ASSERT_EQ(insts.size(), 6u);
  EXPECT_TRUE(std::holds_alternative<Load>(insts[0].instruction));
  EXPECT_TRUE(std::holds_alternative<LocalAssign>(insts[1].instruction));
  EXPECT_TRUE(std::holds_alternative<Assert>(insts[2].instruction));
  EXPECT_TRUE(std::holds_alternative<Store>(insts[3].instruction));
  EXPECT_EQ(std::get<Fence>(insts[4].instruction).addresses.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<ScFence>(insts[5].instruction));
  EXPECT_TRUE(p.has_fence());
  EXPECT_EQ(p.instruction_count(), 6u);
}

TEST(Parser, RoundTripsThroughPrinter) {
  for (const char* name : test::kCorpus) {
    Program p = test::corpus(name);
    EXPECT_EQ(load_program(pretty_print(p)), p) << name;
  }
  Program t = load_program(kTiny);
  EXPECT_EQ(load_program(pretty_print(t)), t);
}

TEST(Parser, ReportsPositionAndExpectation) {
  try {
    parse_program("program P\ndomain 2\nthread t\nregs\ninit l\nbegin\n  l: mem[0] <- ; goto m;\nend\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_GT(e.column(), 1u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Validate, FlagsUndeclaredRegistersAndLabels) {
  Program p = parse_program(R"(program Bad
domain 2
thread t
regs r r
init nowhere
begin
  l: q <- mem[0]; goto m;
end
)");
  auto rs = rules(validate(p));
  EXPECT_NE(std::find(rs.begin(), rs.end(), "duplicate-register"), rs.end());
  EXPECT_NE(std::find(rs.begin(), rs.end(), "undeclared-register"), rs.end());
  EXPECT_NE(std::find(rs.begin(), rs.end(), "undefined-init"), rs.end());
  EXPECT_THROW(load_program(pretty_print(p)), ValidationError);
}

TEST(Validate, ConstantsMustFitDomain) {
  Program p = parse_program("program C\ndomain 2\nconst big = 5\nthread t\nregs\ninit l\nbegin\n  l: mem[0] <- 1; goto m;\nend\n");
  auto rs = rules(validate(p));
  EXPECT_NE(std::find(rs.begin(), rs.end(), "constant-range"), rs.end());
}

TEST(Validate, CorpusIsClean) {
  for (const char* name : test::kCorpus) EXPECT_TRUE(validate(test::corpus(name)).empty()) << name;
}
