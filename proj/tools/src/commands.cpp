#include "robust/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef ROBUST_VERSION
#define ROBUST_VERSION "0.0.0"
#endif

namespace robust::cli {

namespace fs = std::filesystem;

std::string_view tool_version() { return ROBUST_VERSION; }

namespace {

struct Input {
  std::string text;
  Program program;
};

Input load(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  Input i{ss.str(), {}};
  i.program = load_program(i.text);
  return i;
}

Json config_of(const CommonArgs& a) {
  return Json{{"file", a.file}, {"buffer_bound", a.buffer_bound}, {"max_actions", a.max_actions}, {"jobs", a.jobs}};
}

class Report {
 public:
  Report(std::string subcommand, const CommonArgs& a, Json config)
      : start_(std::chrono::steady_clock::now()), subcommand_(std::move(subcommand)), json_(a.json) {
    body_ = Json{{"tool_version", tool_version()}, {"input_hash", nullptr}, {"subcommand", subcommand_},
                 {"config", std::move(config)}, {"result", nullptr}};
  }

  void input(const std::string& text) { body_["input_hash"] = fnv1a_hex(text); }

  int finish(Json result, const std::string& text, int code, std::ostream& out) {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    body_["result"] = std::move(result);
    body_["timing"] = Json{{"elapsed_ms", ms}};
    if (json_)
      out << body_.dump(2) << "\n";
    else
      out << text;
    return code;
  }

  /// Parse and validation problems, I/O failures, bad arguments.
  int fail(const std::exception& e, std::ostream& out, std::ostream& err) {
    Json result{{"error", e.what()}};
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
      Json diags = Json::array();
      for (const auto& d : v->diagnostics()) diags.push_back(to_json(d));
      result["diagnostics"] = std::move(diags);
    }
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      result["line"] = pe->line();
      result["column"] = pe->column();
      result["expected"] = pe->expected();
    }
    err << "error: " << e.what() << "\n";
    if (json_) return finish(std::move(result), "", 2, out);
    return 2;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string subcommand_;
  bool json_;
  Json body_;
};

std::string actions_text(const Computation& c, const Program& p) {
  std::ostringstream os;
  std::size_t issue = 0;
  for (std::size_t i = 0; i < c.actions.size(); ++i) {
    os << "  " << i << ": " << describe(c.actions[i], p);
    if (c.actions[i].kind == ActionKind::Issue && issue < c.issued.size()) {
      const BufferEntry& e = c.issued[issue++];
      if (e.is_fence())
        os << " fence";
      else
        os << " st(" << e.address << "," << e.value << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string trace_text(const Trace& t, const Program& p) {
  std::ostringstream os;
  for (const auto& e : t.edges)
    os << "  " << t.node_name(e.from, p) << " -" << to_string(e.label) << "-> " << t.node_name(e.to, p) << "\n";
  return os.str();
}

Json state_json(const MachineState& s, const Machine& m) {
  Json threads = Json::array();
  const Program& p = m.program();
  for (ThreadId t = 0; t < s.threads.size(); ++t) {
    Json regs = Json::object();
    for (std::size_t r = 0; r < p.threads[t].registers.size(); ++r)
      regs[p.threads[t].registers[r]] = s.threads[t].registers[r];
    threads.push_back(Json{{"thread", p.threads[t].name},
                           {"pc", m.label_name(t, s.threads[t].pc)},
                           {"registers", std::move(regs)},
                           {"buffered", s.threads[t].per_address.size() + s.threads[t].all_addresses.size()}});
  }
  return Json{{"threads", std::move(threads)}, {"memory", s.memory}};
}

std::optional<std::size_t> find_index(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  return std::stoul(s);
}

InstrumentMode instrument_mode(const std::string& mode, const Program& p) {
  if (mode == "locality") return InstrumentMode::Locality;
  if (mode == "singularity") return InstrumentMode::Singularity;
  if (mode == "auto") return p.has_fence() ? InstrumentMode::Locality : InstrumentMode::Singularity;
  throw std::invalid_argument("unknown mode '" + mode + "' (expected auto, locality or singularity)");
}

}  // namespace

std::vector<std::size_t> parse_schedule(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    auto idx = find_index(item.substr(b, e - b + 1));
    if (!idx) throw std::invalid_argument("schedule entry '" + item + "' is not a number");
    out.push_back(*idx);
  }
  return out;
}

Attack parse_attack(const std::string& text, const Program& p) {
  if (auto idx = find_index(text)) {
    auto attacks = enumerate_attacks(p);
    if (*idx >= attacks.size())
      throw std::invalid_argument("attack index " + text + " out of range (" + std::to_string(attacks.size()) +
                                  " attacks)");
    return attacks[*idx];
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("attack must be an index or thread:stinst:lastinst");
  Attack a;
  if (auto t = find_index(parts[0])) {
    a.thread = *t;
  } else {
    const Thread* th = p.find_thread(parts[0]);
    if (!th) throw std::invalid_argument("no thread named '" + parts[0] + "'");
    a.thread = static_cast<std::size_t>(th - p.threads.data());
  }
  if (a.thread >= p.threads.size()) throw std::invalid_argument("thread index out of range");
  const auto& insts = p.threads[a.thread].instructions;
  auto instruction = [&](const std::string& s) -> std::size_t {
    if (auto i = find_index(s)) return *i;
    for (std::size_t i = 0; i < insts.size(); ++i)
      if (insts[i].label == s) return i;
    throw std::invalid_argument("no instruction labelled '" + s + "'");
  };
  a.stinst = instruction(parts[1]);
  a.lastinst = instruction(parts[2]);
  return a;
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  Json config = config_of(a);
  config["mode"] = a.mode;
  config["all_attacks"] = a.all_attacks;
  config["por"] = a.por;
  Report report("check", a, config);
  try {
    Input in = load(a.file);
    report.input(in.text);
    auto mode = parse_check_mode(a.mode);
    if (!mode) throw std::invalid_argument("unknown mode '" + a.mode + "'");
    CheckOptions o;
    o.mode = *mode;
    o.all_attacks = a.all_attacks;
    o.jobs = a.jobs;
    o.use_por = a.por;
    o.oracle.buffer_bound = a.buffer_bound;
    o.oracle.max_actions = a.max_actions;
    RobustnessVerdict v = check_robustness(in.program, o);
    Json result = to_json(v, in.program);

    std::ostringstream text;
    text << in.program.name << ": " << to_string(v.verdict) << " (" << to_string(v.mode) << ")\n";
    text << "  " << v.message << "\n";
    if (v.violation) {
      text << "  cost " << to_string(v.violation->cost) << "\n" << actions_text(v.violation->computation, in.program);
      text << "trace:\n" << trace_text(v.violation->trace, in.program);
    } else if (v.feasible) {
      const auto& r = v.attacks[*v.feasible];
      text << "  witness of " << r.reach.witness.size() << " SC actions, " << r.reach.stats.states_visited
           << " states visited\n";
    }

    if (!a.emit_dot.empty() && v.verdict == Verdict::NotRobust) {
      std::optional<ViolationReport> vr = v.violation;
      if (!vr) {
        ExplorationConfig cfg{a.buffer_bound, a.max_actions, SemanticsMode::Relaxed};
        auto found = find_minimal_violation(in.program, cfg);
        if (auto* r = std::get_if<ViolationReport>(&found)) vr = std::move(*r);
      }
      if (vr) {
        fs::create_directories(a.emit_dot);
        fs::path path = fs::path(a.emit_dot) / (in.program.name + ".dot");
        std::ofstream(path) << to_dot(vr->trace, in.program, vr->cycle);
        result["dot"] = path.string();
        text << "trace written to " << path.string() << "\n";
      } else {
        text << "no violating computation within the oracle bounds to draw\n";
      }
    }
    return report.finish(std::move(result), text.str(), exit_code(v.verdict), out);
  } catch (const std::exception& e) {
    return report.fail(e, out, err);
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  Json config = config_of(a);
  config["schedule"] = a.schedule;
  config["sc"] = a.sc;
  Report report("simulate", a, config);
  try {
    Input in = load(a.file);
    report.input(in.text);
    Machine m(in.program, MachineOptions{a.buffer_bound});
    const SemanticsMode mode = a.sc ? SemanticsMode::Sc : SemanticsMode::Relaxed;
    MachineState final_state;
    RunResult r = run(m, a.schedule, mode, &final_state);
    std::ostringstream text;
    if (auto* stuck = std::get_if<StuckReport>(&r)) {
      Json result{{"stuck", true},
                  {"index", stuck->index},
                  {"enabled", stuck->enabled_count},
                  {"reasons", stuck->reasons},
                  {"prefix", to_json(stuck->prefix, in.program)},
                  {"state", state_json(stuck->state, m)}};
      text << "stuck at schedule position " << stuck->index << " (" << stuck->enabled_count
           << " transitions enabled)\n";
      for (const auto& why : stuck->reasons) text << "  " << why << "\n";
      text << "prefix:\n" << actions_text(stuck->prefix, in.program);
      return report.finish(std::move(result), text.str(), 1, out);
    }
    const Computation& c = std::get<Computation>(r);
    Trace t = build_trace(c);
    auto cycle = find_cycle(t);
    CostTriple k = cost(c);
    Json result{{"stuck", false},
                {"computation", to_json(c, in.program)},
                {"state", state_json(final_state, m)},
                {"completed", final_state.buffers_empty()},
                {"trace", to_json(t, in.program)},
                {"cyclic", cycle.has_value()},
                {"cost", to_json(k)}};
    text << "actions:\n" << actions_text(c, in.program);
    text << "memory:";
    for (Value v : final_state.memory) text << " " << v;
    text << "\ncost " << to_string(k) << (cycle ? ", trace is cyclic" : ", trace is acyclic") << "\n";
    text << "trace:\n" << trace_text(t, in.program);
    return report.finish(std::move(result), text.str(), 0, out);
  } catch (const std::exception& e) {
    return report.fail(e, out, err);
  }
}

int cmd_instrument(const InstrumentArgs& a, std::ostream& out, std::ostream& err) {
  Json config = config_of(a);
  config["attack"] = a.attack;
  config["mode"] = a.mode;
  Report report("instrument", a, config);
  try {
    Input in = load(a.file);
    report.input(in.text);
    Attack attack = parse_attack(a.attack, in.program);
    InstrumentedProgram ip = instrument_program(in.program, attack, instrument_mode(a.mode, in.program));
    std::string text = pretty_print(ip.program);
    Json result = manifest(ip, in.program);
    if (!a.output.empty()) {
      std::ofstream(a.output) << text;
      std::ofstream(a.output + ".json") << result.dump(2) << "\n";
      result["output"] = a.output;
      text = "wrote " + a.output + " (" + std::to_string(ip.instructions) + " instructions)\n";
    }
    return report.finish(std::move(result), text, 0, out);
  } catch (const std::exception& e) {
    return report.fail(e, out, err);
  }
}

int cmd_properties(const PropertiesArgs& a, std::ostream& out, std::ostream& err) {
  Report report("properties", a, config_of(a));
  try {
    Input in = load(a.file);
    report.input(in.text);
    const Program& p = in.program;
    ExplorationConfig cfg{a.buffer_bound, a.max_actions, SemanticsMode::Relaxed};
    std::ostringstream text;
    bool ok = true;

    PropertyVerdict loc = check_locality(p, cfg);
    ok = ok && loc.holds;
    Json result{{"locality", to_json(loc, p)}};
    text << "locality: " << (loc.holds ? "holds" : "fails") << (loc.vacuous ? " (vacuous)" : "") << "\n";

    if (p.has_fence()) {
      result["singularity"] = nullptr;
      text << "singularity: not applicable (program has fences)\n";
    } else {
      PropertyVerdict sing = check_singularity(p, cfg);
      ok = ok && sing.holds;
      result["singularity"] = to_json(sing, p);
      text << "singularity: " << (sing.holds ? "holds" : "fails") << (sing.vacuous ? " (vacuous)" : "") << "\n";
    }

    auto minimal = find_minimal_witness(p, cfg);
    if (auto* r = std::get_if<ViolationReport>(&minimal)) {
      WitnessVerdict w = is_witness(r->computation);
      ok = ok && w.all();
      result["witness"] = to_json(w);
      result["minimal_violation"] = to_json(*r, p);
      text << "minimal violation cost " << to_string(r->cost) << "; witness " << (w.all() ? "W1-W5 hold" : "fails")
           << " (W1 " << w.w1 << ", W2 " << w.w2 << ", W3 " << w.w3 << ", W4 " << w.w4 << ", W5 " << w.w5 << ")\n";
    } else {
      result["witness"] = nullptr;
      text << "witness: vacuous (no violation within bounds)\n";
    }
    return report.finish(std::move(result), text.str(), ok ? 0 : 1, out);
  } catch (const std::exception& e) {
    return report.fail(e, out, err);
  }
}

}  // namespace robust::cli
