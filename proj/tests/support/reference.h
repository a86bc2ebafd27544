#pragma once
// Independent, deliberately naive interpreter used as a test oracle. It works
// on characters and std::map tapes and shares no code with the library VM.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turingtest/machine.h"
#include "turingtest/oracle.h"

namespace reftest {

struct RefOutcome {
  bool halted = false;
  std::string answer;
  std::uint64_t cycles = 0;
};

class RefMachine {
 public:
  explicit RefMachine(const turingtest::MachineDescription& d, turingtest::OraclePtr oracle = nullptr)
      : d_(d), oracle_(std::move(oracle)) {
    for (std::size_t i = 0; i < d.initial_work.size(); ++i) tape_[static_cast<long>(i)] = d.initial_work[i];
    lo_ = hi_ = 0;
  }

  // Runs one question for at most `budget` cycles.
  RefOutcome ask(const std::string& question, std::uint64_t budget) {
    int state = d_.initial;
    std::size_t in = 0, orc = 0;
    std::string out;
    RefOutcome r;
    const char blank = d_.alphabet.blank();
    while (!is_final(state)) {
      if (r.cycles == budget) return r;
      const char w = tape_.count(head_) ? tape_[head_] : blank;
      const char i = in < question.size() ? question[in] : blank;
      const char o = oracle_ ? oracle_->read(orc) : blank;
      const turingtest::Transition* t = nullptr;
      for (const auto& cand : d_.transitions) {
        if (cand.key.state == state && cand.key.work == w && cand.key.input == i && cand.key.oracle == o) t = &cand;
      }
      if (!t) return r;
      tape_[head_] = t->action.write;
      head_ += t->action.work_move == turingtest::Move::Right ? 1 : t->action.work_move == turingtest::Move::Left ? -1 : 0;
      lo_ = std::min(lo_, head_);
      hi_ = std::max(hi_, head_);
      if (t->action.input_move == turingtest::Move::Right) ++in;
      if (t->action.input_move == turingtest::Move::Left && in > 0) --in;
      if (t->action.oracle_move == turingtest::Move::Right) ++orc;
      if (t->action.oracle_move == turingtest::Move::Left && orc > 0) --orc;
      if (t->action.emit) out.push_back(*t->action.emit);
      state = t->action.next;
      ++r.cycles;
    }
    r.halted = true;
    for (char c : out) {
      if (!d_.alphabet.contains(c)) break;
      r.answer.push_back(c);
    }
    return r;
  }

  long segment() const { return hi_ - lo_ + 1; }

 private:
  bool is_final(int s) const {
    for (const auto& f : d_.finals)
      if (f.state == s) return true;
    return false;
  }

  turingtest::MachineDescription d_;
  turingtest::OraclePtr oracle_;
  std::map<long, char> tape_;
  long head_ = 0, lo_ = 0, hi_ = 0;
};

// All words over `symbols` of length <= max_len in shortlex order.
inline std::vector<std::string> shortlex_words(const std::string& symbols, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (char c : symbols) next.push_back(w + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace reftest
