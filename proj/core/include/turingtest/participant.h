#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "turingtest/vm.h"

namespace turingtest {

// One answer of a participant, or the record that it did not answer.
struct Reply {
  std::optional<Word> answer;  // nullopt: no answer (divergence)
  std::uint64_t cycles = 0;
  DivergeReason reason = DivergeReason::BudgetExhausted;  // meaningful when diverged

  static Reply of(Word w, std::uint64_t cycles = 0) { return Reply{std::move(w), cycles, {}}; }
  static Reply diverge(DivergeReason r, std::uint64_t cycles = 0) { return Reply{std::nullopt, cycles, r}; }
  bool diverged() const { return !answer.has_value(); }

  friend bool operator==(const Reply& a, const Reply& b) {
    return a.answer == b.answer && a.cycles == b.cycles && (a.answer || a.reason == b.reason);
  }
};

Reply to_reply(const QuestionOutcome& outcome);

// Whether a participant is known to be a plain machine.
enum class TmType { Yes, No, Unknown };
const char* tm_type_name(TmType t);

// A session-stateful answerer. Once a participant diverges it keeps
// diverging: its machine never returned from the question.
class Participant {
 public:
  virtual ~Participant() = default;
  virtual Reply next(const BWord& question, const RunBudget& budget) = 0;
  virtual std::string describe() const = 0;
  virtual TmType type() const { return TmType::Unknown; }

  // For sessions of empty questions only: how many of the next replies are
  // known to equal the last one, at most `max`. Zero when unknown.
  virtual std::uint64_t steady_for(std::uint64_t /*max*/) { return 0; }
  // Moves past k empty questions that steady_for vouched for.
  virtual void skip(std::uint64_t k);
};

using ParticipantPtr = std::unique_ptr<Participant>;
// Produces fresh participants in their initial session state.
using ParticipantFactory = std::function<ParticipantPtr()>;

// Detects that a machine on the blank oracle came back to its previous rest
// configuration, up to a shift of the tape, within one empty question.
// Compares against the configuration seen by the previous call.
class RestWatch {
 public:
  bool check(const MachineInstance& inst);

 private:
  std::string key_;
  std::uint64_t at_ = 0;
  bool valid_ = false;
};

// A machine on one persistent instance.
class MachineParticipant final : public Participant {
 public:
  MachineParticipant(CompiledPtr machine, std::string label, OraclePtr oracle = nullptr);
  Reply next(const BWord& question, const RunBudget& budget) override;
  std::string describe() const override { return label_; }
  TmType type() const override { return TmType::Yes; }
  std::uint64_t steady_for(std::uint64_t max) override;
  void skip(std::uint64_t) override {}

 private:
  MachineInstance inst_;
  std::string label_;
  bool blank_;
  std::optional<Reply> dead_;
  bool repeat_dead_ = false;
  RestWatch watch_;
};

ParticipantFactory machine_factory(const MachineDescription& desc, std::string label = {},
                                   OraclePtr oracle = nullptr);

// M|t: M under a supervisor that stops it once a question needs more than t
// cycles and then answers the empty word forever.
class TimeLimitedParticipant final : public Participant {
 public:
  TimeLimitedParticipant(CompiledPtr machine, std::uint64_t t, std::string label);
  Reply next(const BWord& question, const RunBudget& budget) override;
  std::string describe() const override { return label_; }
  TmType type() const override { return TmType::Yes; }
  std::uint64_t steady_for(std::uint64_t max) override;
  void skip(std::uint64_t) override {}
  bool fired() const { return fired_; }

 private:
  MachineInstance inst_;
  std::uint64_t t_;
  std::string label_;
  bool fired_ = false;
  std::uint64_t since_fire_ = 0;
  RestWatch watch_;
};

// Answers from a fixed function of the question number, ignoring questions.
class ScriptedParticipant final : public Participant {
 public:
  using Script = std::function<Reply(std::uint64_t n)>;
  ScriptedParticipant(Script script, std::string label, TmType type = TmType::Unknown)
      : script_(std::move(script)), label_(std::move(label)), type_(type) {}
  Reply next(const BWord&, const RunBudget&) override { return script_(++n_); }
  std::string describe() const override { return label_; }
  TmType type() const override { return type_; }

 private:
  Script script_;
  std::string label_;
  TmType type_;
  std::uint64_t n_ = 0;
};

}  // namespace turingtest
