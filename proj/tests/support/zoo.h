#pragma once

#include <string>
#include <vector>

#include "turingtest/codec.h"

namespace reftest {

inline std::string zoo_path(const std::string& name) { return std::string(TURINGTEST_ZOO_DIR) + "/" + name + ".tm"; }

inline turingtest::MachineDescription zoo(const std::string& name) {
  return turingtest::parse_runnable(turingtest::read_text_file(zoo_path(name))).machine;
}

inline const std::vector<std::string>& zoo_machines() {
  static const std::vector<std::string> names = {"halt",    "silent", "const0", "const1", "echo",
                                                 "counter", "parrot", "loop",   "spinner", "right_marcher",
                                                 "slow",    "self_recognizer", "echo_t5"};
  return names;
}

inline const std::vector<std::string>& zoo_interrogators() {
  static const std::vector<std::string> names = {"dumbi", "asker", "picky"};
  return names;
}

// Machines that answer every question.
inline const std::vector<std::string>& zoo_communicable() {
  static const std::vector<std::string> names = {"halt", "silent", "const0", "const1",
                                                 "echo", "counter", "parrot", "slow"};
  return names;
}

}  // namespace reftest
