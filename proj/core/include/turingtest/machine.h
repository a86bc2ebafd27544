#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "turingtest/alphabet.h"

namespace turingtest {

enum class Move : std::uint8_t { Stay = 0, Right = 1, Left = 2 };

// Mark carried by a final state. A halt in a marked state ends a test.
enum class Mark : std::uint8_t { None = 0, Left = 1, Right = 2 };

char move_char(Move m);
std::optional<Move> parse_move(char c);
const char* mark_name(Mark m);

struct TransitionKey {
  int state = 0;
  char work = '_';
  char input = '_';
  char oracle = '_';

  friend bool operator==(const TransitionKey&, const TransitionKey&) = default;
};

struct Action {
  int next = 0;
  char write = '_';
  Move work_move = Move::Stay;
  Move input_move = Move::Stay;
  Move oracle_move = Move::Stay;
  std::optional<char> emit;  // symbol of B appended to the output, if any

  friend bool operator==(const Action&, const Action&) = default;
};

struct Transition {
  TransitionKey key;
  Action action;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct FinalState {
  int state = 0;
  Mark mark = Mark::None;

  friend bool operator==(const FinalState&, const FinalState&) = default;
};

// A machine with a two-way work tape and one-sided input, oracle and output
// tapes. States are indices into `states`; the names are labels only.
//
// The struct may hold invalid data (that is what validate() reports on);
// everything downstream of parsing or decoding assumes validate() passed.
struct MachineDescription {
  std::string name;
  Alphabet alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<FinalState> finals;
  // Extra work-tape symbols beyond B; must be a prefix of alphabet.extra_pool().
  std::string extra_symbols;
  std::string initial_work;
  std::vector<Transition> transitions;

  std::size_t state_count() const { return states.size(); }
  std::string work_alphabet() const;  // B in code order, then extras
  bool in_work_alphabet(char c) const;
  // Mark of `state` if it is final.
  std::optional<Mark> final_mark(int state) const;

  // Transitions sorted by key code order and finals by state. Labels kept.
  MachineDescription canonical() const;
};

// Structural equality: alphabet, state count, initial state, final marks,
// extra symbols, initial work and the transition function. Machine and state
// names are presentation and do not take part.
bool same_machine(const MachineDescription& a, const MachineDescription& b);

struct Violation {
  std::string field;
  std::string rule;
  std::string detail;
};

// Every broken invariant, in a stable order. Empty means valid.
std::vector<Violation> validate(const MachineDescription& desc);

// Throws InvalidMachine listing the violations when validate() is nonempty.
void require_valid(const MachineDescription& desc);

class InvalidMachine : public std::runtime_error {
 public:
  InvalidMachine(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace turingtest
