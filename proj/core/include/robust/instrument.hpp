#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "robust/syntax.hpp"

namespace robust {

/// (attacker thread, delayed store, last instruction before the delayed
/// store lands). Instructions are indices into the thread's instruction list.
struct Attack {
  std::size_t thread = 0;
  std::size_t stinst = 0;
  std::size_t lastinst = 0;
  bool operator==(const Attack&) const = default;
};

std::string describe(const Attack& a, const Program& p);

/// Store instructions times store-or-load instructions, per thread, in
/// declaration order.
std::vector<Attack> enumerate_attacks(const Program& p);

enum class InstrumentMode : std::uint8_t { Locality, Singularity };

std::string_view to_string(InstrumentMode m);

class InvalidAttack : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Memory layout of an instrumented program over a source domain of size N:
/// [0, N) original addresses, [N, 2N) delayed values (stored as v + 1, so 0
/// means empty), [2N, 3N) access levels, then the hb and suc flags.
struct AddressLayout {
  Value base_size = 0;
  Value domain_size = 0;
  Value delayed(Value x) const { return base_size + x; }
  Value access_level(Value x) const { return 2 * base_size + x; }
  Value hb() const { return 3 * base_size; }
  Value suc() const { return 3 * base_size + 1; }

  static constexpr Value kLoadAccess = 1;
  static constexpr Value kStoreAccess = 2;

  static AddressLayout for_domain(Value n);
};

struct InstrumentedProgram {
  Program program;
  Attack attack;
  InstrumentMode mode = InstrumentMode::Locality;
  AddressLayout layout;
  std::size_t source_instructions = 0;
  std::size_t instructions = 0;

  double size_ratio() const {
    return source_instructions ? static_cast<double>(instructions) / static_cast<double>(source_instructions) : 0.0;
  }
};

/// Replaces the attacker by its attack instrumentation and every other thread
/// by the helper instrumentation. Throws PreconditionViolated (see oracle.hpp)
/// for singularity mode on programs with fences, InvalidAttack for attacks
/// that do not name a store and a store/load of one thread, and
/// std::invalid_argument when the program already uses names starting with
/// '~', which are reserved for the instrumentation.
InstrumentedProgram instrument_program(const Program& p, const Attack& a, InstrumentMode mode);

/// Single-thread pieces, exposed for testing.
Thread instrument_attacker_locality(const Thread& t, const Attack& a, const AddressLayout& layout);
Thread instrument_attacker_singularity(const Thread& t, const Attack& a, const AddressLayout& layout);
Thread instrument_helper(const Thread& t, const AddressLayout& layout);

}  // namespace robust
