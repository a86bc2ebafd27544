#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "turingtest/vm.h"

namespace turingtest {

// Answers of one machine to the session of empty questions on the blank
// oracle, computed incrementally.
//
// At every question start the machine is in its initial state, so the whole
// future of the session is fixed by the work head and work tape. When that
// pair recurs the answer stream is periodic from there on and every later
// answer is known without simulation.
class LambdaStream {
 public:
  struct Options {
    // Stop when a configuration repeats inside one question (a proof of divergence).
    bool detect_config_repeat = false;
    // Stop when the scanned work segment grows beyond this many cells.
    std::optional<std::uint64_t> segment_limit;
    bool detect_period = true;
    // Compare question starts up to a shift of the whole tape. Off when the
    // absolute scanned segment matters.
    bool shift_invariant_period = true;
  };

  enum class End { Open, Stuck, Repeated, SegmentExceeded };

  explicit LambdaStream(CompiledPtr machine);
  LambdaStream(CompiledPtr machine, Options options);

  static constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

  // Simulates until `questions` answers are available, the stream ends, or
  // the session has consumed `cycle_cap` cycles in total. Resumable.
  void advance(std::uint64_t questions, std::uint64_t cycle_cap = kNoCap);

  // True when answer j (1-based) is known.
  bool has(std::uint64_t j) const { return j >= 1 && (j <= computed() || periodic()); }
  const Word& answer(std::uint64_t j) const { return answers_[map(j)]; }
  std::uint64_t cycles(std::uint64_t j) const { return cycles_[map(j)]; }
  // Total cycles of questions 1..j; saturates at kNoCap.
  std::uint64_t cumulative(std::uint64_t j) const;
  // Largest j <= limit with cumulative(j) <= total, over known answers.
  std::uint64_t answers_within(std::uint64_t total, std::uint64_t limit) const;

  std::uint64_t computed() const { return answers_.size(); }
  bool periodic() const { return period_ > 0; }
  std::uint64_t period_start() const { return period_start_; }  // 0-based
  std::uint64_t period() const { return period_; }
  End end() const { return end_; }
  // 1-based question at which the stream ended.
  std::uint64_t end_question() const { return computed() + 1; }
  std::uint64_t cycles_spent() const { return spent_; }
  // Cycles consumed so far by the question currently in progress.
  std::uint64_t pending_cycles() const { return in_progress_ ? inst_.cycles_this_question() : 0; }
  std::uint64_t max_segment() const { return inst_.scanned_segment_length(); }

 private:
  std::size_t map(std::uint64_t j) const;

  MachineInstance inst_;
  Options opt_;
  std::vector<Word> answers_;
  std::vector<std::uint64_t> cycles_;
  std::vector<std::uint64_t> prefix_;  // prefix_[j] = cycles of questions 1..j
  std::unordered_map<std::string, std::uint64_t> starts_;
  // Brent's cycle finder over configurations of the current question.
  ConfigSnapshot saved_;
  std::uint64_t power_ = 1, lam_ = 0;
  std::uint64_t period_start_ = 0, period_ = 0;
  std::uint64_t spent_ = 0;
  bool in_progress_ = false;
  End end_ = End::Open;
};

const char* end_name(LambdaStream::End e);

}  // namespace turingtest
