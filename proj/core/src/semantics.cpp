#include <algorithm>
#include <unordered_map>

#include "robust/semantics.hpp"

namespace robust {

namespace {

inline void mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace

std::size_t ThreadState::pending_for(Value address) const {
  return static_cast<std::size_t>(std::count_if(per_address.begin(), per_address.end(),
                                                [&](const PendingStore& p) { return p.address == address; }));
}

bool MachineState::buffers_empty() const {
  return std::all_of(threads.begin(), threads.end(), [](const ThreadState& t) { return t.buffers_empty(); });
}

std::size_t MachineState::hash() const {
  std::size_t h = memory.size();
  for (Value v : memory) mix(h, v);
  for (const auto& t : threads) {
    mix(h, 0xabcdef + t.pc);
    for (Value v : t.registers) mix(h, v);
    mix(h, t.per_address.size());
    for (const auto& p : t.per_address) {
      mix(h, p.address);
      mix(h, p.value);
    }
    mix(h, t.all_addresses.size());
    for (const auto& e : t.all_addresses) {
      mix(h, static_cast<std::size_t>(e.kind));
      mix(h, e.address);
      mix(h, e.value);
      for (Value a : e.fence_addresses) mix(h, a);
    }
  }
  return h;
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Store: return "st";
    case ActionKind::Load: return "ld";
    case ActionKind::Issue: return "isu";
    case ActionKind::Local: return "loc";
    case ActionKind::ScFence: return "scfence";
    case ActionKind::Fence: return "fence";
  }
  return "?";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::EarlyRead1: return "early-read-1";
    case Rule::EarlyRead2: return "early-read-2";
    case Rule::ReadMemory: return "read-memory";
    case Rule::IssueStore: return "issue-store";
    case Rule::AdvanceBuffer: return "advance-buffer";
    case Rule::StoreToMemory: return "store-to-memory";
    case Rule::ScFence: return "scfence";
    case Rule::IssueFence: return "issue-fence";
    case Rule::Fence: return "fence";
    case Rule::LocalAssignment: return "local-assignment";
    case Rule::LocalAssertion: return "local-assertion";
  }
  return "?";
}

std::string describe(const Action& a, const Program& p) {
  std::string s = a.thread < p.threads.size() ? p.threads[a.thread].name : "t" + std::to_string(a.thread);
  s += " ";
  s += to_string(a.kind);
  if (a.kind == ActionKind::Store || a.kind == ActionKind::Load)
    s += "(" + std::to_string(a.address) + "," + std::to_string(a.value) + ")";
  if (a.kind == ActionKind::Fence) {
    s += "(";
    for (std::size_t i = 0; i < a.addresses.size(); ++i) s += (i ? "," : "") + std::to_string(a.addresses[i]);
    s += ")";
  }
  return s;
}

// ---------------------------------------------------------------------------

Machine::Machine(Program p, MachineOptions options) : program_(std::move(p)), options_(options) {
  for (const auto& t : program_.threads) {
    CompiledThread ct;
    ct.register_count = t.registers.size();
    std::unordered_map<std::string, std::uint32_t> index;
    auto label_of = [&](const std::string& l) {
      auto [it, fresh] = index.try_emplace(l, static_cast<std::uint32_t>(ct.labels.size()));
      if (fresh) {
        ct.labels.push_back(l);
        ct.at_label.emplace_back();
      }
      return it->second;
    };
    ct.init = label_of(t.init_label);
    std::unordered_map<std::string, std::size_t> regs;
    for (std::size_t i = 0; i < t.registers.size(); ++i) regs.emplace(t.registers[i], i);
    auto resolve = [&](const std::string& r) -> std::size_t {
      auto it = regs.find(r);
      if (it == regs.end()) throw std::invalid_argument("undeclared register '" + r + "' in thread " + t.name);
      return it->second;
    };
    for (std::size_t k = 0; k < t.instructions.size(); ++k) {
      const auto& li = t.instructions[k];
      CompiledInstruction ci;
      ci.source = &li.instruction;
      ci.source_index = k;
      std::uint32_t at = label_of(li.label);
      ci.next = label_of(li.next);
      std::visit(
          [&](const auto& inst) {
            using T = std::decay_t<decltype(inst)>;
            if constexpr (std::is_same_v<T, Load>) {
              ci.dest = resolve(inst.dest);
              ci.address = CompiledExpr::compile(inst.address, resolve);
            } else if constexpr (std::is_same_v<T, Store>) {
              ci.address = CompiledExpr::compile(inst.address, resolve);
              ci.value = CompiledExpr::compile(inst.value, resolve);
            } else if constexpr (std::is_same_v<T, LocalAssign>) {
              ci.dest = resolve(inst.dest);
              ci.value = CompiledExpr::compile(inst.value, resolve);
            } else if constexpr (std::is_same_v<T, Assert>) {
              ci.value = CompiledExpr::compile(inst.condition, resolve);
            } else if constexpr (std::is_same_v<T, Fence>) {
              for (const auto& a : inst.addresses) ci.fence_addresses.push_back(CompiledExpr::compile(a, resolve));
            }
          },
          li.instruction);
      ct.at_label[at].push_back(std::move(ci));
    }
    threads_.push_back(std::move(ct));
  }
}

MachineState Machine::initial_state() const {
  MachineState s;
  s.memory.assign(program_.domain_size, 0);
  for (const auto& ct : threads_) {
    ThreadState ts;
    ts.pc = ct.init;
    ts.registers.assign(ct.register_count, 0);
    s.threads.push_back(std::move(ts));
  }
  return s;
}

bool Machine::terminated(const MachineState& s, ThreadId t) const {
  return threads_[t].at_label[s.threads[t].pc].empty();
}

bool Machine::at_local_instructions(const MachineState& s, ThreadId t) const {
  const auto& insts = threads_[t].at_label[s.threads[t].pc];
  return !insts.empty() && std::all_of(insts.begin(), insts.end(), [](const CompiledInstruction& ci) {
    return std::holds_alternative<LocalAssign>(*ci.source) || std::holds_alternative<Assert>(*ci.source) ||
           std::holds_alternative<ScFence>(*ci.source);
  });
}

const std::string& Machine::label_name(ThreadId t, std::uint32_t label) const { return threads_[t].labels.at(label); }

std::optional<std::uint32_t> Machine::label_index(ThreadId t, std::string_view name) const {
  const auto& labels = threads_.at(t).labels;
  auto it = std::find(labels.begin(), labels.end(), name);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - labels.begin());
}

Value Machine::load_value(const ThreadState& ts, const MachineState& s, Value address, Rule& rule) const {
  for (auto it = ts.per_address.rbegin(); it != ts.per_address.rend(); ++it)
    if (it->address == address) {
      rule = Rule::EarlyRead1;
      return it->value;
    }
  for (auto it = ts.all_addresses.rbegin(); it != ts.all_addresses.rend(); ++it)
    if (!it->is_fence() && it->address == address) {
      rule = Rule::EarlyRead2;
      return it->value;
    }
  rule = Rule::ReadMemory;
  return s.memory[address];
}

void Machine::thread_successors(const MachineState& s, ThreadId t, bool sc, std::vector<Transition>& out) const {
  const Value n = program_.domain_size;
  const ThreadState& ts = s.threads[t];
  const auto& insts = threads_[t].at_label[ts.pc];
  const std::size_t bound = options_.buffer_bound;
  std::span<const Value> regs(ts.registers);

  auto emit = [&](Rule rule, std::vector<Action> actions, MachineState next, std::optional<BufferEntry> issued = {}) {
    out.push_back(Transition{t, rule, std::move(actions), std::move(issued), std::move(next)});
  };
  auto with_pc = [&](std::uint32_t pc) {
    MachineState next = s;
    next.threads[t].pc = pc;
    return next;
  };

  // Loads, whichever of the three read rules applies.
  for (const auto& ci : insts) {
    if (!std::holds_alternative<Load>(*ci.source)) continue;
    Value a = ci.address.eval(regs, n);
    Rule rule{};
    Value v = load_value(ts, s, a, rule);
    MachineState next = with_pc(ci.next);
    next.threads[t].registers[ci.dest] = v;
    emit(rule, {Action{t, ActionKind::Load, a, v, {}}}, std::move(next));
  }

  for (const auto& ci : insts) {
    if (!std::holds_alternative<Store>(*ci.source)) continue;
    Value a = ci.address.eval(regs, n);
    Value v = ci.value.eval(regs, n);
    MachineState next = with_pc(ci.next);
    if (sc) {
      next.memory[a] = v;
      emit(Rule::IssueStore, {Action{t, ActionKind::Issue, 0, 0, {}}, Action{t, ActionKind::Store, a, v, {}}},
           std::move(next), BufferEntry::store(a, v));
      continue;
    }
    if (ts.pending_for(a) >= bound) continue;
    next.threads[t].per_address.push_back({a, v});
    emit(Rule::IssueStore, {Action{t, ActionKind::Issue, 0, 0, {}}}, std::move(next), BufferEntry::store(a, v));
  }

  if (!sc) {
    // One advance per buffered address, ordered by the age of its oldest entry.
    if (ts.all_addresses.size() < bound) {
      std::vector<Value> seen;
      for (std::size_t i = 0; i < ts.per_address.size(); ++i) {
        const PendingStore p = ts.per_address[i];
        if (std::find(seen.begin(), seen.end(), p.address) != seen.end()) continue;
        seen.push_back(p.address);
        MachineState next = s;
        auto& nt = next.threads[t];
        nt.per_address.erase(nt.per_address.begin() + static_cast<std::ptrdiff_t>(i));
        nt.all_addresses.push_back(BufferEntry::store(p.address, p.value));
        emit(Rule::AdvanceBuffer, {}, std::move(next));
      }
    }
    if (!ts.all_addresses.empty() && !ts.all_addresses.front().is_fence()) {
      const BufferEntry& e = ts.all_addresses.front();
      MachineState next = s;
      next.memory[e.address] = e.value;
      next.threads[t].all_addresses.erase(next.threads[t].all_addresses.begin());
      emit(Rule::StoreToMemory, {Action{t, ActionKind::Store, e.address, e.value, {}}}, std::move(next));
    }
  }

  for (const auto& ci : insts) {
    if (!std::holds_alternative<ScFence>(*ci.source) || !ts.buffers_empty()) continue;
    emit(Rule::ScFence, {Action{t, ActionKind::ScFence, 0, 0, {}}}, with_pc(ci.next));
  }

  for (const auto& ci : insts) {
    if (!std::holds_alternative<Fence>(*ci.source)) continue;
    std::vector<Value> addrs;
    for (const auto& fa : ci.fence_addresses) addrs.push_back(fa.eval(regs, n));
    bool clear = std::all_of(addrs.begin(), addrs.end(), [&](Value a) { return ts.pending_for(a) == 0; });
    if (!clear) continue;
    MachineState next = with_pc(ci.next);
    if (sc) {
      emit(Rule::IssueFence, {Action{t, ActionKind::Issue, 0, 0, {}}, Action{t, ActionKind::Fence, 0, 0, addrs}},
           std::move(next), BufferEntry::fence(addrs));
      continue;
    }
    if (ts.all_addresses.size() >= bound) continue;
    next.threads[t].all_addresses.push_back(BufferEntry::fence(addrs));
    emit(Rule::IssueFence, {Action{t, ActionKind::Issue, 0, 0, {}}}, std::move(next), BufferEntry::fence(addrs));
  }

  // Retiring a fence leaves the program counter where it is.
  if (!sc && !ts.all_addresses.empty() && ts.all_addresses.front().is_fence()) {
    MachineState next = s;
    auto& buf = next.threads[t].all_addresses;
    std::vector<Value> addrs = buf.front().fence_addresses;
    buf.erase(buf.begin());
    emit(Rule::Fence, {Action{t, ActionKind::Fence, 0, 0, std::move(addrs)}}, std::move(next));
  }

  for (const auto& ci : insts) {
    if (!std::holds_alternative<LocalAssign>(*ci.source)) continue;
    MachineState next = with_pc(ci.next);
    next.threads[t].registers[ci.dest] = ci.value.eval(regs, n);
    emit(Rule::LocalAssignment, {Action{t, ActionKind::Local, 0, 0, {}}}, std::move(next));
  }

  for (const auto& ci : insts) {
    if (!std::holds_alternative<Assert>(*ci.source) || ci.value.eval(regs, n) == 0) continue;
    emit(Rule::LocalAssertion, {Action{t, ActionKind::Local, 0, 0, {}}}, with_pc(ci.next));
  }
}

std::vector<Transition> Machine::enabled(const MachineState& s) const {
  if (options_.buffer_bound == 0) return sc_enabled(s);
  std::vector<Transition> out;
  for (ThreadId t = 0; t < threads_.size(); ++t) thread_successors(s, t, false, out);
  return out;
}

std::vector<Transition> Machine::sc_enabled(const MachineState& s) const {
  std::vector<Transition> out;
  for (ThreadId t = 0; t < threads_.size(); ++t) thread_successors(s, t, true, out);
  return out;
}

std::vector<std::string> Machine::explain_blocked(const MachineState& s, SemanticsMode mode) const {
  std::vector<std::string> reasons;
  const Value n = program_.domain_size;
  const bool sc = mode == SemanticsMode::Sc || options_.buffer_bound == 0;
  for (ThreadId t = 0; t < threads_.size(); ++t) {
    const auto& name = program_.threads[t].name;
    const ThreadState& ts = s.threads[t];
    const auto& insts = threads_[t].at_label[ts.pc];
    const std::string where = name + " at " + threads_[t].labels[ts.pc] + ": ";
    if (insts.empty()) {
      if (ts.buffers_empty())
        reasons.push_back(where + "terminated");
      else
        reasons.push_back(where + "terminated, buffers still draining");
      continue;
    }
    std::span<const Value> regs(ts.registers);
    for (const auto& ci : insts) {
      const std::string text = to_string(*ci.source);
      if (std::holds_alternative<Assert>(*ci.source)) {
        if (ci.value.eval(regs, n) == 0) reasons.push_back(where + "'" + text + "' evaluates to 0");
      } else if (std::holds_alternative<ScFence>(*ci.source)) {
        if (!ts.buffers_empty()) reasons.push_back(where + "'scfence' waits for non-empty buffers");
      } else if (std::holds_alternative<Fence>(*ci.source)) {
        for (const auto& fa : ci.fence_addresses) {
          Value a = fa.eval(regs, n);
          if (ts.pending_for(a) > 0)
            reasons.push_back(where + "'" + text + "' waits for the buffer of address " + std::to_string(a));
        }
        if (!sc && ts.all_addresses.size() >= options_.buffer_bound)
          reasons.push_back(where + "'" + text + "' blocked by the buffer bound");
      } else if (std::holds_alternative<Store>(*ci.source)) {
        Value a = ci.address.eval(regs, n);
        if (!sc && ts.pending_for(a) >= options_.buffer_bound)
          reasons.push_back(where + "'" + text + "' blocked by the buffer bound");
      }
    }
  }
  return reasons;
}

MachineState apply(const Machine& m, const MachineState& s, std::size_t choice, SemanticsMode mode) {
  auto ts = m.successors(s, mode);
  if (choice >= ts.size())
    throw InvalidChoice("choice " + std::to_string(choice) + " is not enabled (" + std::to_string(ts.size()) +
                        " transitions)");
  return std::move(ts[choice].next);
}

}  // namespace robust
