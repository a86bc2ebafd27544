#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "turingtest/machine.h"
#include "turingtest/oracle.h"

namespace turingtest {

// Finite stand-in for divergence: a cap on cycles per question.
class RunBudget {
 public:
  static RunBudget unlimited() { return RunBudget(); }
  static RunBudget cycles(std::uint64_t max_cycles);

  bool bounded() const { return max_.has_value(); }
  std::uint64_t max_cycles() const;  // precondition: bounded()
  std::optional<std::uint64_t> limit() const { return max_; }

  friend bool operator==(const RunBudget&, const RunBudget&) = default;

 private:
  std::optional<std::uint64_t> max_;
};

enum class DivergeReason { BudgetExhausted, Stuck };
const char* diverge_reason_name(DivergeReason r);

struct Answered {
  Word answer;
  std::uint64_t cycles = 0;
  Mark mark = Mark::None;  // mark of the final state the machine halted in

  friend bool operator==(const Answered&, const Answered&) = default;
};

struct Diverged {
  DivergeReason reason = DivergeReason::Stuck;
  std::uint64_t cycles = 0;

  friend bool operator==(const Diverged&, const Diverged&) = default;
};

using QuestionOutcome = std::variant<Answered, Diverged>;

inline bool answered(const QuestionOutcome& o) { return std::holds_alternative<Answered>(o); }

// Dense form of a validated description. Symbols become codes: blank 0,
// alphabet letters 1..|A|, extras after that.
class CompiledMachine {
 public:
  explicit CompiledMachine(const MachineDescription& desc);

  struct Step {
    std::int32_t next;
    std::uint8_t write;
    Move work_move;
    Move input_move;
    Move oracle_move;
    std::int16_t emit;  // B code, or -1 for no output
  };

  const MachineDescription& description() const { return desc_; }
  const Alphabet& alphabet() const { return desc_.alphabet; }
  int state_count() const { return states_; }
  int work_symbols() const { return work_; }
  int b_symbols() const { return b_; }
  int initial() const { return desc_.initial; }
  // -1 for non-final states, otherwise the Mark value.
  int final_code(int state) const { return final_[state]; }
  bool is_final(int state) const { return final_[state] >= 0; }

  const Step* lookup(int state, int work, int input, int oracle) const {
    const auto idx = table_[((static_cast<std::size_t>(state) * work_ + work) * b_ + input) * b_ + oracle];
    return idx < 0 ? nullptr : &steps_[idx];
  }

  const std::vector<std::uint8_t>& initial_work() const { return initial_work_; }
  char work_char(int code) const { return work_chars_[code]; }

 private:
  MachineDescription desc_;
  int states_, work_, b_;
  std::vector<std::int32_t> table_;
  std::vector<Step> steps_;
  std::vector<int> final_;
  std::vector<std::uint8_t> initial_work_;
  std::string work_chars_;
};

using CompiledPtr = std::shared_ptr<const CompiledMachine>;
CompiledPtr compile(const MachineDescription& desc);

// State, head offset within the scanned segment, and the segment's content.
// Input-head position and output length are not part of a configuration.
struct ConfigSnapshot {
  int state = 0;
  std::int64_t head_offset = 0;
  std::basic_string<std::uint8_t> segment;

  friend bool operator==(const ConfigSnapshot&, const ConfigSnapshot&) = default;
};

struct ConfigSnapshotHash {
  std::size_t operator()(const ConfigSnapshot& s) const;
};

// One running machine: work tape persists across questions, input and output
// are replaced for every question.
class MachineInstance {
 public:
  explicit MachineInstance(const MachineDescription& desc, OraclePtr oracle = nullptr);
  explicit MachineInstance(CompiledPtr machine, OraclePtr oracle = nullptr);

  // Runs one question to a final state or until the budget is spent.
  // Throws PreconditionViolation if the instance is mid-question.
  QuestionOutcome pose_question(const BWord& question, const RunBudget& budget);

  // Lower-level stepping used by supervisors and observers.
  enum class Status { Halted, Stuck, Running };
  void begin_question(const BWord& question);
  // Executes at most `max_steps` cycles of the current question.
  Status run(std::uint64_t max_steps);
  Status step();
  Status status() const { return status_; }
  // Answer on the output tape right now (meaningful after Halted).
  Word current_answer() const;

  bool at_rest() const { return status_ == Status::Halted || !started_; }
  int state() const { return state_; }
  std::uint64_t cycles_this_question() const { return cycles_question_; }
  std::uint64_t total_cycles() const { return cycles_total_; }
  std::uint64_t questions_begun() const { return questions_; }
  std::int64_t work_head() const { return head_; }
  std::uint64_t input_head() const { return input_head_; }
  std::uint64_t oracle_head() const { return oracle_head_; }
  std::int64_t scanned_min() const { return scanned_min_; }
  std::int64_t scanned_max() const { return scanned_max_; }
  std::uint64_t scanned_segment_length() const {
    return static_cast<std::uint64_t>(scanned_max_ - scanned_min_ + 1);
  }
  const std::vector<std::uint8_t>& output_codes() const { return output_; }

  ConfigSnapshot config_snapshot() const;
  // config_snapshot() == s, without building a snapshot.
  bool matches(const ConfigSnapshot& s) const;
  // Identity of (head position, work tape content); equal keys at two
  // question starts mean the session repeats from there on a blank oracle.
  // The work tape has no ends, so the position may be taken relative to the
  // written content.
  std::string rest_key(bool translation_invariant) const;
  // Work tape as text over the work alphabet, trimmed of blanks.
  std::string work_tape_text() const;

  const CompiledMachine& machine() const { return *machine_; }
  const CompiledPtr& compiled() const { return machine_; }

 private:
  std::uint8_t work_at(std::int64_t cell) const {
    const std::int64_t i = cell - origin_;
    return i >= 0 && i < static_cast<std::int64_t>(tape_.size()) ? tape_[i] : 0;
  }
  void write_at(std::int64_t cell, std::uint8_t code);

  CompiledPtr machine_;
  OraclePtr oracle_;
  bool blank_oracle_;
  std::vector<std::uint8_t> tape_;
  std::int64_t origin_ = 0;
  std::int64_t head_ = 0;
  std::int64_t scanned_min_ = 0, scanned_max_ = 0;
  std::vector<std::uint8_t> input_;
  std::uint64_t input_head_ = 0;
  std::uint64_t oracle_head_ = 0;
  std::vector<std::uint8_t> output_;
  int state_;
  Status status_ = Status::Halted;
  bool started_ = false;
  std::uint64_t cycles_question_ = 0, cycles_total_ = 0;
  std::uint64_t questions_ = 0;
};

// Answers to a sequence of questions posed on one persistent instance.
struct SessionResult {
  std::vector<Word> answers;
  std::vector<std::uint64_t> cycles;
  std::optional<std::size_t> diverged_at;  // 1-based index of the first divergence
  std::optional<DivergeReason> reason;

  bool complete() const { return !diverged_at.has_value(); }
};

SessionResult answers(const MachineDescription& desc, const std::vector<BWord>& questions,
                      const RunBudget& budget, OraclePtr oracle = nullptr);

// Budget-relative recognition: the machine answers the question `encoding`.
bool recognizes(const MachineDescription& machine, const Word& encoding, const RunBudget& budget,
                OraclePtr oracle = nullptr);

}  // namespace turingtest
