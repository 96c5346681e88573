#include <iostream>

#include <CLI11.hpp>

#include "robust/commands.hpp"

using namespace robust::cli;

namespace {

void common(CLI::App* app, CommonArgs& a) {
  app->add_option("file", a.file, "program file")->required()->check(CLI::ExistingFile);
  app->add_option("--buffer-bound,-B", a.buffer_bound, "buffer bound for the relaxed semantics")
      ->capture_default_str();
  app->add_option("--max-actions", a.max_actions, "maximum computation length explored by the oracle")
      ->capture_default_str();
  app->add_flag("--json", a.json, "print a JSON report");
  app->add_option("--jobs,-j", a.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness checker for programs under store-buffering memory models"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "decide robustness");
  common(c, check);
  c->add_option("--mode", check.mode, "auto, locality, singularity or oracle")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "locality", "singularity", "oracle"}));
  c->add_flag("--all-attacks", check.all_attacks, "check every attack instead of stopping at the first feasible one");
  c->add_flag("--por", check.por, "use partial-order reduction in the SC search");
  c->add_option("--emit-dot", check.emit_dot, "write the violating trace as DOT into this directory");

  SimulateArgs sim;
  std::string schedule;
  auto* s = app.add_subcommand("simulate", "replay a schedule of transition choices");
  common(s, sim);
  s->add_option("--schedule", schedule, "comma-separated choice indices");
  s->add_flag("--sc", sim.sc, "use SC semantics");

  InstrumentArgs ins;
  auto* i = app.add_subcommand("instrument", "emit the instrumented program for one attack");
  common(i, ins);
  i->add_option("--attack", ins.attack, "attack index or thread:stinst:lastinst")->capture_default_str();
  i->add_option("--mode", ins.mode, "auto, locality or singularity")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "locality", "singularity"}));
  i->add_option("-o,--output", ins.output, "output file; a JSON manifest is written next to it");

  PropertiesArgs props;
  auto* pr = app.add_subcommand("properties", "check locality, singularity and witness form");
  common(pr, props);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the exit code of bad input.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (c->parsed()) return cmd_check(check, std::cout, std::cerr);
    if (s->parsed()) {
      sim.schedule = parse_schedule(schedule);
      return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (i->parsed()) return cmd_instrument(ins, std::cout, std::cerr);
    if (pr->parsed()) return cmd_properties(props, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
