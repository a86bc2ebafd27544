#include "turingtest/machine.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace turingtest {

char move_char(Move m) {
  switch (m) {
    case Move::Stay: return 'S';
    case Move::Right: return 'R';
    case Move::Left: return 'L';
  }
  return '?';
}

std::optional<Move> parse_move(char c) {
  switch (c) {
    case 'S': return Move::Stay;
    case 'R': return Move::Right;
    case 'L': return Move::Left;
    default: return std::nullopt;
  }
}

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::None: return "none";
    case Mark::Left: return "Left";
    case Mark::Right: return "Right";
  }
  return "?";
}

std::string MachineDescription::work_alphabet() const {
  std::string out;
  out.push_back(alphabet.blank());
  out.append(alphabet.symbols());
  out.append(extra_symbols);
  return out;
}

bool MachineDescription::in_work_alphabet(char c) const {
  return alphabet.in_b(c) || extra_symbols.find(c) != std::string::npos;
}

std::optional<Mark> MachineDescription::final_mark(int state) const {
  for (const auto& f : finals) {
    if (f.state == state) return f.mark;
  }
  return std::nullopt;
}

namespace {

int work_code(const MachineDescription& d, char c) {
  const int code = d.alphabet.code(c);
  if (code >= 0) return code;
  const auto pos = d.extra_symbols.find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(d.alphabet.size() + 1 + pos);
}

}  // namespace

MachineDescription MachineDescription::canonical() const {
  MachineDescription out = *this;
  std::stable_sort(out.transitions.begin(), out.transitions.end(),
                   [this](const Transition& a, const Transition& b) {
                     if (a.key.state != b.key.state) return a.key.state < b.key.state;
                     const int wa = work_code(*this, a.key.work), wb = work_code(*this, b.key.work);
                     if (wa != wb) return wa < wb;
                     if (a.key.input != b.key.input)
                       return alphabet.code(a.key.input) < alphabet.code(b.key.input);
                     return alphabet.code(a.key.oracle) < alphabet.code(b.key.oracle);
                   });
  std::stable_sort(out.finals.begin(), out.finals.end(),
                   [](const FinalState& a, const FinalState& b) { return a.state < b.state; });
  return out;
}

bool same_machine(const MachineDescription& a, const MachineDescription& b) {
  if (!(a.alphabet == b.alphabet) || a.states.size() != b.states.size() || a.initial != b.initial ||
      a.extra_symbols != b.extra_symbols || a.initial_work != b.initial_work) {
    return false;
  }
  const auto ca = a.canonical(), cb = b.canonical();
  return ca.finals == cb.finals && ca.transitions == cb.transitions;
}

std::vector<Violation> validate(const MachineDescription& d) {
  std::vector<Violation> out;
  auto report = [&out](std::string field, std::string rule, std::string detail) {
    out.push_back({std::move(field), std::move(rule), std::move(detail)});
  };
  const int n = static_cast<int>(d.states.size());
  auto declared = [n](int s) { return s >= 0 && s < n; };

  if (d.states.empty()) report("states", "states-empty", "a machine needs at least one state");
  {
    std::set<std::string> seen;
    for (const auto& s : d.states) {
      if (s.empty()) report("states", "state-name-empty", "state names must be nonempty");
      if (!seen.insert(s).second) report("states", "state-name-duplicate", s);
    }
  }
  if (!declared(d.initial)) report("initial", "initial-undeclared", std::to_string(d.initial));

  std::vector<int> final_seen(std::max(n, 0), 0);
  for (const auto& f : d.finals) {
    if (!declared(f.state)) {
      report("finals", "final-undeclared", std::to_string(f.state));
      continue;
    }
    if (final_seen[f.state]++ == 1) report("finals", "final-duplicate", d.states[f.state]);
  }

  const auto& pool = d.alphabet.extra_pool();
  if (d.extra_symbols.size() > pool.size() || pool.compare(0, d.extra_symbols.size(), d.extra_symbols) != 0) {
    report("extra_symbols", "extra-symbols-noncanonical",
           "extra work symbols must be the first " + std::to_string(d.extra_symbols.size()) +
               " of '" + pool + "'");
  }

  for (char c : d.initial_work) {
    if (!d.in_work_alphabet(c))
      report("initial_work", "initial-work-symbol-undeclared", std::string(1, c));
  }

  std::vector<const Transition*> sorted;
  for (std::size_t i = 0; i < d.transitions.size(); ++i) {
    const auto& t = d.transitions[i];
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!declared(t.key.state)) report(where, "transition-state-undeclared", std::to_string(t.key.state));
    if (!declared(t.action.next)) report(where, "transition-state-undeclared", std::to_string(t.action.next));
    if (!d.in_work_alphabet(t.key.work))
      report(where, "transition-symbol-undeclared", std::string("work ") + t.key.work);
    if (!d.alphabet.in_b(t.key.input))
      report(where, "transition-symbol-undeclared", std::string("input ") + t.key.input);
    if (!d.alphabet.in_b(t.key.oracle))
      report(where, "transition-symbol-undeclared", std::string("oracle ") + t.key.oracle);
    if (!d.in_work_alphabet(t.action.write))
      report(where, "transition-symbol-undeclared", std::string("write ") + t.action.write);
    if (t.action.emit && !d.alphabet.in_b(*t.action.emit))
      report(where, "transition-symbol-undeclared", std::string("emit ") + *t.action.emit);
    if (declared(t.key.state) && d.final_mark(t.key.state))
      report(where, "transition-from-final", d.states[t.key.state]);
    sorted.push_back(&t);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Transition* a, const Transition* b) {
    return std::tie(a->key.state, a->key.work, a->key.input, a->key.oracle) <
           std::tie(b->key.state, b->key.work, b->key.input, b->key.oracle);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1]->key == sorted[i]->key) {
      const auto& k = sorted[i]->key;
      std::ostringstream os;
      os << "state " << k.state << " on (" << k.work << ',' << k.input << ',' << k.oracle << ')';
      report("transitions", "nondeterministic", os.str());
    }
  }
  return out;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string msg = "invalid machine:";
  for (const auto& v : violations) msg += " [" + v.field + ": " + v.rule + " " + v.detail + "]";
  return msg;
}

}  // namespace

InvalidMachine::InvalidMachine(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

void require_valid(const MachineDescription& desc) {
  auto violations = validate(desc);
  if (!violations.empty()) throw InvalidMachine(std::move(violations));
}

}  // namespace turingtest
