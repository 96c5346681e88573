#include <algorithm>
#include <set>
#include <sstream>

#include "robust/syntax.hpp"

namespace robust {

namespace {

class Checker {
 public:
  explicit Checker(const Program& p) : p_(p) {}

  std::vector<Diagnostic> run() {
    if (p_.domain_size < 1) report("", "", "domain-size", "domain size must be at least 1");

    std::set<std::string, std::less<>> const_names;
    for (const auto& c : p_.constants) {
      if (!const_names.insert(c.name).second)
        report("", "", "duplicate-constant", "constant '" + c.name + "' declared twice");
      if (c.value >= p_.domain_size)
        report("", "", "constant-range",
               "constant '" + c.name + "' = " + std::to_string(c.value) + " is outside the domain");
    }

    std::set<std::string, std::less<>> thread_names;
    for (const auto& t : p_.threads) {
      if (!thread_names.insert(t.name).second)
        report(t.name, "", "duplicate-thread", "thread name '" + t.name + "' is not unique");
      check_thread(t, const_names);
    }
    return std::move(out_);
  }

 private:
  void check_thread(const Thread& t, const std::set<std::string, std::less<>>& const_names) {
    std::set<std::string, std::less<>> regs;
    for (const auto& r : t.registers) {
      if (!regs.insert(r).second)
        report(t.name, "", "duplicate-register", "register '" + r + "' declared twice");
      if (const_names.count(r))
        report(t.name, "", "name-clash", "register '" + r + "' shadows a constant");
    }

    std::set<std::string, std::less<>> declared;
    for (const auto& li : t.instructions) declared.insert(li.label);

    if (!t.instructions.empty() && !declared.count(t.init_label))
      report(t.name, t.init_label, "undefined-init",
             "initial label '" + t.init_label + "' labels no instruction");

    std::set<std::string, std::less<>> finals;
    if (t.final_labels) finals.insert(t.final_labels->begin(), t.final_labels->end());
    std::set<std::string, std::less<>> reported_targets;

    for (const auto& li : t.instructions) {
      if (t.final_labels && !declared.count(li.next) && !finals.count(li.next) &&
          reported_targets.insert(li.next).second)
        report(t.name, li.label, "undefined-label",
               "goto target '" + li.next + "' is neither declared nor final");

      auto check_expr = [&](const Expr& e) { check_expression(t, li.label, e, regs); };
      auto check_dest = [&](const std::string& r) {
        if (!regs.count(r))
          report(t.name, li.label, "undeclared-register", "register '" + r + "' is not declared");
      };

      std::visit(
          [&](const auto& inst) {
            using T = std::decay_t<decltype(inst)>;
            if constexpr (std::is_same_v<T, Load>) {
              check_dest(inst.dest);
              check_expr(inst.address);
            } else if constexpr (std::is_same_v<T, Store>) {
              check_expr(inst.address);
              check_expr(inst.value);
            } else if constexpr (std::is_same_v<T, LocalAssign>) {
              check_dest(inst.dest);
              check_expr(inst.value);
            } else if constexpr (std::is_same_v<T, Assert>) {
              check_expr(inst.condition);
            } else if constexpr (std::is_same_v<T, Fence>) {
              if (inst.addresses.empty())
                report(t.name, li.label, "empty-fence", "fence lists no address");
              for (const auto& a : inst.addresses) check_expr(a);
            }
          },
          li.instruction);
    }
  }

  void check_expression(const Thread& t, const std::string& label, const Expr& e,
                        const std::set<std::string, std::less<>>& regs) {
    if (e.op == ExprOp::Reg && !regs.count(e.name))
      report(t.name, label, "undeclared-register", "register '" + e.name + "' is not declared");
    if (e.op == ExprOp::Const && e.value >= p_.domain_size)
      report(t.name, label, "constant-range",
             "literal " + std::to_string(e.value) + " is outside the domain");
    for (const auto& sub : e.operands) check_expression(t, label, sub, regs);
  }

  void report(std::string thread, std::string label, std::string rule, std::string message) {
    out_.push_back({std::move(thread), std::move(label), std::move(rule), std::move(message)});
  }

  const Program& p_;
  std::vector<Diagnostic> out_;
};

std::string summarize(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  os << diags.size() << " validation error(s)";
  for (const auto& d : diags) {
    os << "\n  ";
    if (!d.thread.empty()) os << d.thread << (d.label.empty() ? "" : ":" + d.label) << ": ";
    os << "[" << d.rule << "] " << d.message;
  }
  return os.str();
}

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return Checker(p).run(); }

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace robust
