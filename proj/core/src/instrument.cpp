#include "robust/instrument.hpp"

#include "robust/oracle.hpp"

namespace robust {

namespace {

Expr num(Value v) { return Expr::constant(v); }
Expr reg(const char* name) { return Expr::reg(name); }
Expr offset(Value base, Expr e) { return Expr::binary(ExprOp::Add, num(base), std::move(e)); }

/// Re-expresses a source expression over the larger instrumented domain:
/// every arithmetic result is reduced modulo the source domain again.
Expr wrap(const Expr& e, Value n) {
  if (e.is_leaf()) return e;
  Expr out = e;
  for (auto& sub : out.operands) sub = wrap(sub, n);
  bool reduce = out.op == ExprOp::Add || out.op == ExprOp::Sub || out.op == ExprOp::Mul;
  if (n == 1 && (is_comparison(out.op) || out.op == ExprOp::Not)) reduce = true;
  if (reduce) return Expr::binary(ExprOp::Mod, std::move(out), num(n));
  return out;
}

Instruction wrap(const Instruction& inst, Value n) {
  return std::visit(
      [n](const auto& i) -> Instruction {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Load>) {
          return Load{i.dest, wrap(i.address, n)};
        } else if constexpr (std::is_same_v<T, Store>) {
          return Store{wrap(i.address, n), wrap(i.value, n)};
        } else if constexpr (std::is_same_v<T, LocalAssign>) {
          return LocalAssign{i.dest, wrap(i.value, n)};
        } else if constexpr (std::is_same_v<T, Assert>) {
          return Assert{wrap(i.condition, n)};
        } else if constexpr (std::is_same_v<T, Fence>) {
          Fence f;
          for (const auto& a : i.addresses) f.addresses.push_back(wrap(a, n));
          return f;
        } else {
          return i;
        }
      },
      inst);
}

std::string copy_label(const std::string& l) { return "~" + l; }

const char* const kWait = "~~wait";
const char* const kDone = "~~done";

class Emitter {
 public:
  Emitter(Thread& out, const AddressLayout& layout) : out_(out), l_(layout) {}

  std::string fresh() { return "~~" + std::to_string(next_++); }

  void emit(std::string label, Instruction inst, std::string next) {
    out_.instructions.push_back({std::move(label), std::move(inst), std::move(next)});
  }

  /// Emits `label: ~tmp <- mem[address]` followed by `assert condition` and
  /// returns the label after the assert (fresh unless `next` is given).
  std::string test_memory(const std::string& label, Expr address, Expr condition, std::string next = {}) {
    std::string a = fresh(), b = next.empty() ? fresh() : std::move(next);
    emit(label, Load{"~tmp", std::move(address)}, a);
    emit(a, Assert{std::move(condition)}, b);
    return b;
  }

  Expr delayed(Expr e) const { return offset(l_.base_size, std::move(e)); }
  Expr level(Expr e) const { return offset(2 * l_.base_size, std::move(e)); }
  Expr hb() const { return Expr::constant(l_.hb(), "~hb"); }
  Expr suc() const { return Expr::constant(l_.suc(), "~suc"); }

  void wait() {
    std::string next = test_memory(kWait, level(reg("~attack")), ne(reg("~tmp"), num(0)));
    emit(next, Store{suc(), num(1)}, kDone);
  }

 private:
  Thread& out_;
  const AddressLayout& l_;
  unsigned next_ = 1;
};

void check_attack(const Thread& t, const Attack& a) {
  if (a.stinst >= t.instructions.size() || !std::holds_alternative<Store>(t.instructions[a.stinst].instruction))
    throw InvalidAttack("attack must delay a store instruction of thread " + t.name);
  if (a.lastinst >= t.instructions.size())
    throw InvalidAttack("attack names no instruction of thread " + t.name);
  const auto& last = t.instructions[a.lastinst].instruction;
  if (!std::holds_alternative<Store>(last) && !std::holds_alternative<Load>(last))
    throw InvalidAttack("last instruction of an attack must be a store or a load");
}

void check_reserved(const Program& p) {
  auto reserved = [](const std::string& s) { return !s.empty() && s[0] == '~'; };
  for (const auto& c : p.constants)
    if (reserved(c.name)) throw std::invalid_argument("name '" + c.name + "' is reserved");
  for (const auto& t : p.threads) {
    for (const auto& r : t.registers)
      if (reserved(r)) throw std::invalid_argument("register '" + r + "' is reserved");
    if (reserved(t.init_label)) throw std::invalid_argument("label '" + t.init_label + "' is reserved");
    for (const auto& li : t.instructions)
      if (reserved(li.label) || reserved(li.next))
        throw std::invalid_argument("labels starting with '~' are reserved (thread " + t.name + ")");
  }
}

Thread attacker_prologue(const Thread& t, Value n, std::initializer_list<const char*> extra) {
  Thread out;
  out.name = t.name;
  out.registers = t.registers;
  for (const char* r : extra) out.registers.emplace_back(r);
  out.init_label = t.init_label;
  for (const auto& li : t.instructions) out.instructions.push_back({li.label, wrap(li.instruction, n), li.next});
  return out;
}

}  // namespace

std::string_view to_string(InstrumentMode m) { return m == InstrumentMode::Locality ? "locality" : "singularity"; }

AddressLayout AddressLayout::for_domain(Value n) {
  AddressLayout l;
  l.base_size = n;
  l.domain_size = n * ((3 * n + 2 + n - 1) / n);
  return l;
}

std::string describe(const Attack& a, const Program& p) {
  const Thread& t = p.threads.at(a.thread);
  auto at = [&](std::size_t i) { return t.instructions.at(i).label + ": " + to_string(t.instructions.at(i).instruction); };
  return t.name + " [" + at(a.stinst) + "] .. [" + at(a.lastinst) + "]";
}

std::vector<Attack> enumerate_attacks(const Program& p) {
  std::vector<Attack> out;
  for (std::size_t t = 0; t < p.threads.size(); ++t) {
    const auto& insts = p.threads[t].instructions;
    for (std::size_t s = 0; s < insts.size(); ++s) {
      if (!std::holds_alternative<Store>(insts[s].instruction)) continue;
      for (std::size_t l = 0; l < insts.size(); ++l)
        if (is_memory_access(insts[l].instruction)) out.push_back({t, s, l});
    }
  }
  return out;
}

Thread instrument_attacker_locality(const Thread& t, const Attack& a, const AddressLayout& layout) {
  check_attack(t, a);
  const Value n = layout.base_size;
  Thread out = attacker_prologue(t, n, {"~attack", "~fence", "~tmp"});
  Emitter em(out, layout);

  {
    const auto& li = t.instructions[a.stinst];
    const auto& st = std::get<Store>(li.instruction);
    std::string x = em.fresh();
    em.emit(li.label, Store{em.delayed(wrap(st.address, n)), wrap(st.value, n) + num(1)}, x);
    em.emit(x, LocalAssign{"~attack", wrap(st.address, n)}, copy_label(li.next));
  }

  {
    const auto& li = t.instructions[a.lastinst];
    const std::string l1 = copy_label(li.label);
    if (const auto* ld = std::get_if<Load>(&li.instruction)) {
      Expr e = wrap(ld->address, n);
      std::string x = em.test_memory(l1, em.delayed(e), eq(reg("~tmp"), num(0)));
      std::string y = em.fresh();
      em.emit(x, Store{em.hb(), num(1)}, y);
      em.emit(y, Store{em.level(e), num(AddressLayout::kLoadAccess)}, kWait);
    } else {
      const auto& st = std::get<Store>(li.instruction);
      Expr e1 = wrap(st.address, n);
      std::string x = em.fresh();
      em.emit(l1, Assert{eq(reg("~fence"), num(0))}, x);
      std::string y = em.test_memory(x, em.delayed(e1), eq(reg("~tmp"), num(0)));
      std::string z = em.fresh(), w = em.fresh();
      em.emit(y, Store{e1, wrap(st.value, n)}, z);
      em.emit(z, Store{em.hb(), num(1)}, w);
      em.emit(w, Store{em.level(e1), num(AddressLayout::kStoreAccess)}, kWait);
    }
  }

  for (const auto& li : t.instructions) {
    const std::string l1 = copy_label(li.label), l2 = copy_label(li.next);
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, Store>) {
            Expr e1 = wrap(i.address, n), e2 = wrap(i.value, n);
            std::string x = em.fresh();
            em.emit(l1, Assert{eq(reg("~fence"), num(0))}, x);
            std::string y = em.test_memory(x, em.delayed(e1), eq(reg("~tmp"), num(0)));
            em.emit(y, Store{e1, e2}, l2);
            em.emit(l1, Store{em.delayed(e1), e2 + num(1)}, l2);
          } else if constexpr (std::is_same_v<T, Load>) {
            Expr e = wrap(i.address, n);
            std::string x = em.fresh(), y = em.fresh(), z = em.fresh();
            em.emit(l1, Load{"~tmp", em.delayed(e)}, x);
            em.emit(x, Assert{eq(reg("~tmp"), num(0))}, y);
            em.emit(y, Load{i.dest, e}, l2);
            em.emit(x, Assert{ne(reg("~tmp"), num(0))}, z);
            em.emit(z, LocalAssign{i.dest, reg("~tmp") - num(1)}, l2);
          } else if constexpr (std::is_same_v<T, Fence>) {
            em.emit(l1, LocalAssign{"~fence", num(1)}, l2);
            std::string at = l1;
            for (std::size_t k = 0; k < i.addresses.size(); ++k) {
              std::string x = em.fresh();
              em.emit(at, Load{"~tmp", em.delayed(wrap(i.addresses[k], n))}, x);
              at = k + 1 == i.addresses.size() ? l2 : em.fresh();
              em.emit(x, Assert{eq(reg("~tmp"), num(0))}, at);
            }
          } else if constexpr (std::is_same_v<T, ScFence>) {
            // No translation: the attacker cannot pass an scfence while delaying.
          } else {
            em.emit(l1, wrap(li.instruction, n), l2);
          }
        },
        li.instruction);
  }

  em.wait();
  return out;
}

Thread instrument_attacker_singularity(const Thread& t, const Attack& a, const AddressLayout& layout) {
  check_attack(t, a);
  const Value n = layout.base_size;
  Thread out = attacker_prologue(t, n, {"~attack", "~delayval", "~tmp"});
  Emitter em(out, layout);

  {
    const auto& li = t.instructions[a.stinst];
    const auto& st = std::get<Store>(li.instruction);
    std::string x = em.fresh();
    em.emit(li.label, LocalAssign{"~delayval", wrap(st.value, n)}, x);
    em.emit(x, LocalAssign{"~attack", wrap(st.address, n)}, copy_label(li.next));
  }

  {
    const auto& li = t.instructions[a.lastinst];
    const std::string l1 = copy_label(li.label);
    std::string x = em.fresh(), y = em.fresh();
    if (const auto* ld = std::get_if<Load>(&li.instruction)) {
      Expr e = wrap(ld->address, n);
      em.emit(l1, Assert{ne(reg("~attack"), e)}, x);
      em.emit(x, Store{em.hb(), num(1)}, y);
      em.emit(y, Store{em.level(e), num(AddressLayout::kLoadAccess)}, kWait);
    } else {
      const auto& st = std::get<Store>(li.instruction);
      Expr e1 = wrap(st.address, n);
      std::string z = em.fresh();
      em.emit(l1, Assert{ne(reg("~attack"), e1)}, x);
      em.emit(x, Store{e1, wrap(st.value, n)}, y);
      em.emit(y, Store{em.hb(), num(1)}, z);
      em.emit(z, Store{em.level(e1), num(AddressLayout::kStoreAccess)}, kWait);
    }
  }

  for (const auto& li : t.instructions) {
    const std::string l1 = copy_label(li.label), l2 = copy_label(li.next);
    if (const auto* st = std::get_if<Store>(&li.instruction)) {
      Expr e1 = wrap(st->address, n);
      std::string x = em.fresh();
      em.emit(l1, Assert{ne(reg("~attack"), e1)}, x);
      em.emit(x, Store{e1, wrap(st->value, n)}, l2);
    } else if (const auto* ld = std::get_if<Load>(&li.instruction)) {
      Expr e = wrap(ld->address, n);
      std::string x = em.fresh(), y = em.fresh();
      em.emit(l1, Assert{ne(reg("~attack"), e)}, x);
      em.emit(x, Load{ld->dest, e}, l2);
      em.emit(l1, Assert{eq(reg("~attack"), e)}, y);
      em.emit(y, LocalAssign{ld->dest, reg("~delayval")}, l2);
    } else if (std::holds_alternative<Fence>(li.instruction)) {
      throw PreconditionViolated("singularity instrumentation does not support fence instructions");
    } else if (!std::holds_alternative<ScFence>(li.instruction)) {
      em.emit(l1, wrap(li.instruction, n), l2);
    }
  }

  em.wait();
  return out;
}

Thread instrument_helper(const Thread& t, const AddressLayout& layout) {
  const Value n = layout.base_size;
  Thread out;
  out.name = t.name;
  out.registers = t.registers;
  out.registers.emplace_back("~tmp");
  out.init_label = t.init_label;
  Emitter em(out, layout);

  bool needs_addr = false;
  for (const auto& li : t.instructions) {
    Instruction inst = wrap(li.instruction, n);
    if (is_memory_access(inst)) {
      std::string x = em.test_memory(li.label, em.hb(), eq(reg("~tmp"), num(0)));
      em.emit(x, std::move(inst), li.next);
    } else {
      em.emit(li.label, std::move(inst), li.next);
    }
  }

  for (const auto& li : t.instructions) {
    if (const auto* ld = std::get_if<Load>(&li.instruction)) {
      em.test_memory(li.label, em.level(wrap(ld->address, n)), eq(reg("~tmp"), num(AddressLayout::kStoreAccess)),
                     copy_label(li.label));
      needs_addr = needs_addr || mentions_register(ld->address, ld->dest);
    } else if (const auto* st = std::get_if<Store>(&li.instruction)) {
      em.test_memory(li.label, em.level(wrap(st->address, n)), le(num(AddressLayout::kLoadAccess), reg("~tmp")),
                     copy_label(li.label));
    }
  }

  for (const auto& li : t.instructions) {
    const std::string l1 = copy_label(li.label), l2 = copy_label(li.next);
    if (const auto* st = std::get_if<Store>(&li.instruction)) {
      Expr e1 = wrap(st->address, n);
      std::string x = em.fresh();
      em.emit(l1, Store{e1, wrap(st->value, n)}, x);
      em.emit(x, Store{em.level(e1), num(AddressLayout::kStoreAccess)}, l2);
    } else if (const auto* ld = std::get_if<Load>(&li.instruction)) {
      Expr e = wrap(ld->address, n);
      std::string at = l1;
      if (mentions_register(ld->address, ld->dest)) {
        at = em.fresh();
        em.emit(l1, LocalAssign{"~addr", e}, at);
        e = reg("~addr");
      }
      std::string x = em.fresh(), y = em.fresh();
      em.emit(at, Load{ld->dest, e}, x);
      em.emit(x, Load{"~tmp", em.level(e)}, y);
      em.emit(y, Store{em.level(e), reg("~tmp") + eq(reg("~tmp"), num(0))}, l2);
    } else {
      em.emit(l1, wrap(li.instruction, n), l2);
    }
  }
  if (needs_addr) out.registers.emplace_back("~addr");
  return out;
}

InstrumentedProgram instrument_program(const Program& p, const Attack& a, InstrumentMode mode) {
  check_reserved(p);
  if (a.thread >= p.threads.size()) throw InvalidAttack("attack names no thread");
  if (mode == InstrumentMode::Singularity && p.has_fence())
    throw PreconditionViolated("singularity instrumentation requires a program without fence instructions");

  InstrumentedProgram ip;
  ip.attack = a;
  ip.mode = mode;
  ip.layout = AddressLayout::for_domain(p.domain_size);
  ip.source_instructions = p.instruction_count();

  Program& q = ip.program;
  q.name = p.name;
  q.domain_size = ip.layout.domain_size;
  q.constants = p.constants;
  q.constants.push_back({"~hb", ip.layout.hb()});
  q.constants.push_back({"~suc", ip.layout.suc()});
  for (std::size_t t = 0; t < p.threads.size(); ++t) {
    if (t == a.thread)
      q.threads.push_back(mode == InstrumentMode::Locality
                              ? instrument_attacker_locality(p.threads[t], a, ip.layout)
                              : instrument_attacker_singularity(p.threads[t], a, ip.layout));
    else
      q.threads.push_back(instrument_helper(p.threads[t], ip.layout));
  }
  ip.instructions = q.instruction_count();
  return ip;
}

}  // namespace robust
