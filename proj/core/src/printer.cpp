#include <sstream>

#include "robust/syntax.hpp"

namespace robust {

std::string to_string(const Instruction& inst) {
  return std::visit(
      [](const auto& i) -> std::string {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Load>) {
          return i.dest + " <- mem[" + to_string(i.address) + "]";
        } else if constexpr (std::is_same_v<T, Store>) {
          return "mem[" + to_string(i.address) + "] <- " + to_string(i.value);
        } else if constexpr (std::is_same_v<T, LocalAssign>) {
          return i.dest + " <- " + to_string(i.value);
        } else if constexpr (std::is_same_v<T, Assert>) {
          return "assert " + to_string(i.condition);
        } else if constexpr (std::is_same_v<T, ScFence>) {
          return "scfence";
        } else {
          std::string s = "fence";
          for (std::size_t k = 0; k < i.addresses.size(); ++k)
            s += (k ? ", " : " ") + to_string(i.addresses[k]);
          return s;
        }
      },
      inst);
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "program " << p.name << "\n";
  os << "domain " << p.domain_size << "\n";
  for (const auto& c : p.constants) os << "const " << c.name << " = " << c.value << "\n";
  for (const auto& t : p.threads) {
    os << "\nthread " << t.name << "\nregs";
    for (const auto& r : t.registers) os << " " << r;
    os << "\ninit " << t.init_label << "\n";
    if (t.final_labels) {
      os << "final";
      for (const auto& l : *t.final_labels) os << " " << l;
      os << "\n";
    }
    os << "begin\n";
    for (const auto& li : t.instructions)
      os << "  " << li.label << ": " << to_string(li.instruction) << "; goto " << li.next << ";\n";
    os << "end\n";
  }
  return os.str();
}

}  // namespace robust
