#pragma once

#include <algorithm>
#include <string>

#include "robust/oracle.hpp"
#include "robust/syntax.hpp"

#ifndef ROBUST_CORPUS_DIR
#error "ROBUST_CORPUS_DIR must be defined"
#endif

namespace robust::test {

inline const char* const kCorpus[] = {"mp",           "mp_fenced",       "dekker_nofence", "dekker_fenced",
                                      "lamport_nofence", "lockfree_stack", "clh_lock",       "nonsingular"};

inline std::string corpus_path(const std::string& name) {
  return std::string(ROBUST_CORPUS_DIR) + "/" + name + ".prog";
}

inline Program corpus(const std::string& name) { return load_program_file(corpus_path(name)); }

inline Action issue(ThreadId t) { return Action{t, ActionKind::Issue, 0, 0, {}}; }
inline Action st(ThreadId t, Value a, Value v) { return Action{t, ActionKind::Store, a, v, {}}; }
inline Action ld(ThreadId t, Value a, Value v) { return Action{t, ActionKind::Load, a, v, {}}; }
inline Action local(ThreadId t) { return Action{t, ActionKind::Local, 0, 0, {}}; }

// Message passing, writer 0 stores a=d1, b=d2, c=flag; reader 1 does
// d=load flag, e=assert, f=load d1.
//   tau  = isu_a isu_b isu_c c d e f b a
//   tau' = isu_a isu_b b isu_c c d e f a
inline Computation mp_tau() {
  Computation c;
  c.actions = {issue(0), issue(0), issue(0), st(0, 2, 1), ld(1, 2, 1), local(1), ld(1, 0, 0), st(0, 1, 1), st(0, 0, 1)};
  c.issued = {BufferEntry::store(0, 1), BufferEntry::store(1, 1), BufferEntry::store(2, 1)};
  return c;
}

inline Computation mp_tau_prime() {
  Computation c;
  c.actions = {issue(0), issue(0), st(0, 1, 1), issue(0), st(0, 2, 1), ld(1, 2, 1), local(1), ld(1, 0, 0), st(0, 0, 1)};
  c.issued = {BufferEntry::store(0, 1), BufferEntry::store(1, 1), BufferEntry::store(2, 1)};
  return c;
}

}  // namespace robust::test


namespace robust::test {

/// True if some load or store of `p`, under some register valuation, accesses
/// an address in [lo, hi). Registers used in addresses (source registers and
/// ~attack) only ever hold source-domain values, so valuations range over
/// [0, source_domain).
inline bool may_access(const Program& p, Value lo, Value hi, Value source_domain) {
  auto hits = [&](const Expr& e) {
    std::vector<std::string> regs;
    for_each_register(e, [&](const std::string& r) {
      if (std::find(regs.begin(), regs.end(), r) == regs.end()) regs.push_back(r);
    });
    auto slot = [&](const std::string& r) -> std::size_t {
      return static_cast<std::size_t>(std::find(regs.begin(), regs.end(), r) - regs.begin());
    };
    CompiledExpr c = CompiledExpr::compile(e, slot);
    std::vector<Value> vals(regs.size(), 0);
    while (true) {
      Value a = c.eval(vals, p.domain_size);
      if (a >= lo && a < hi) return true;
      std::size_t k = 0;
      while (k < vals.size() && ++vals[k] == source_domain) vals[k++] = 0;
      if (k == vals.size()) return false;
    }
  };
  for (const auto& t : p.threads)
    for (const auto& li : t.instructions) {
      if (const auto* l = std::get_if<Load>(&li.instruction); l && hits(l->address)) return true;
      if (const auto* s = std::get_if<Store>(&li.instruction); s && hits(s->address)) return true;
    }
  return false;
}

}  // namespace robust::test
