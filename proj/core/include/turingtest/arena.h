#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "turingtest/enumerate.h"
#include "turingtest/participant.h"
#include "turingtest/pi.h"

namespace turingtest {

enum class Side { Left, Right };
const char* side_name(Side s);
inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

// Left test: the second participant sits on the left, the subject on the right.
using Orientation = Side;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Continue {
  BWord question;
};
struct Finish {
  Side named;  // the side the interrogator names as the second participant
};
// The interrogator itself did not produce a decision.
struct Stalled {
  DivergeReason reason = DivergeReason::BudgetExhausted;
};
using Decision = std::variant<Continue, Finish, Stalled>;

class Interrogator {
 public:
  virtual ~Interrogator() = default;
  // Reaction to the initial empty question: the first test question.
  virtual Decision start() = 0;
  // Both participants answered the current question.
  virtual Decision on_answers(const Word& left, const Word& right) = 0;
  virtual std::string describe() const = 0;
  virtual TmType type() const { return TmType::Yes; }
  // True when every test question is empty and equal answers always lead
  // to Continue without changing the interrogator's state, so runs of
  // identical steps may be skipped.
  virtual bool skippable() const { return false; }
  virtual void skip(std::uint64_t /*k*/) {}
};

using InterrogatorPtr = std::unique_ptr<Interrogator>;

struct Tester {
  std::string id;
  std::function<InterrogatorPtr()> interrogator;
  ParticipantFactory sp;
  TmType interrogator_type = TmType::Yes;
  TmType sp_type = TmType::Yes;
};

struct TestOptions {
  RunBudget budget = RunBudget::cycles(100'000);  // per question, per participant
  std::uint64_t step_cap = 1'000;
  std::uint64_t seed = 0;  // metadata; randomness lives in the participants
  std::string oracle = "blank";
};

struct TranscriptStep {
  std::uint64_t n = 0;
  // Number of consecutive identical steps this record stands for.
  std::uint64_t repeat = 1;
  BWord question;
  Reply sp;
  Reply subject;

  friend bool operator==(const TranscriptStep&, const TranscriptStep&) = default;
};

enum class Termination { Finished, SpDiverged, SubjectDiverged, StepCapReached, InterrogatorStalled };
const char* termination_name(Termination t);

struct Transcript {
  std::string tester_id;
  std::string subject_id;
  Orientation orientation = Orientation::Left;
  TestOptions options;
  std::vector<TranscriptStep> steps;
  Termination termination = Termination::StepCapReached;
  std::uint64_t terminated_at = 0;  // step number
  std::optional<Side> named;        // for Finished

  std::uint64_t step_count() const;
  // Side on which the subject sits.
  Side subject_side() const { return other(orientation); }
};

// Runs one orientation of the test. The subject is consumed.
Transcript run_test(const Tester& tester, Participant& subject, Orientation orientation, const TestOptions& options);

struct OrientationVerdict {
  bool failed_ordinary = false;
  bool failed_strict = false;
  std::string reason;
};

struct Verdict {
  OrientationVerdict left, right;
  bool fails_ordinary() const { return left.failed_ordinary && right.failed_ordinary; }
  bool fails_strict() const { return left.failed_strict && right.failed_strict; }
};

OrientationVerdict evaluate_orientation(const Transcript& t);
// Both rules are computed; the two names select which one a caller means.
Verdict evaluate(const Transcript& left, const Transcript& right);
inline Verdict evaluate_ordinary(const Transcript& left, const Transcript& right) { return evaluate(left, right); }
inline Verdict evaluate_strict(const Transcript& left, const Transcript& right) { return evaluate(left, right); }

struct TestRun {
  Transcript left, right;
  Verdict verdict;
};

// Both orientations on fresh subjects from the factory.
TestRun run_both(const Tester& tester, const ParticipantFactory& subject, const TestOptions& options);

// Interrogators.

// I_Q: asks only the empty question; on the first differing answers it
// computes alpha = Q's n-th answer and names the side that gave alpha.
class DumbInterrogator final : public Interrogator {
 public:
  using Alpha = std::function<Reply(std::uint64_t n)>;
  DumbInterrogator(Alpha alpha, std::string label);
  Decision start() override { return Continue{""}; }
  Decision on_answers(const Word& left, const Word& right) override;
  std::string describe() const override { return label_; }
  bool skippable() const override { return true; }
  void skip(std::uint64_t k) override { n_ += k; }

 private:
  Alpha alpha_;
  std::string label_;
  std::uint64_t n_ = 0;
};

// Q's n-th answer in a fresh session of empty questions.
DumbInterrogator::Alpha fresh_alpha(ParticipantFactory q, RunBudget budget);

InterrogatorPtr dumb_interrogator(const MachineDescription& q, const RunBudget& budget);

// A DSL machine as interrogator: its answer to the empty question is the
// first test question; afterwards it is asked "left blank right". Halting
// in a final state marked Left or Right ends the test naming that side.
class MachineInterrogator final : public Interrogator {
 public:
  MachineInterrogator(const MachineDescription& m, RunBudget budget);
  Decision start() override;
  Decision on_answers(const Word& left, const Word& right) override;
  std::string describe() const override { return label_; }

 private:
  Decision ask(const BWord& q);
  MachineInstance inst_;
  RunBudget budget_;
  std::string label_;
  bool stalled_ = false;
};

// Testers.

// Dumb interrogator I_q with second participant q.
Tester dumb_tester(const MachineDescription& q, const RunBudget& budget);
// Dumb interrogator with the diagonal generator of `e` as second participant.
Tester diagonal_tester(EnumeratorPtr e, const RunBudget& budget);
// DSL interrogator i with DSL second participant q.
Tester machine_tester(const MachineDescription& i, const MachineDescription& q, const RunBudget& budget);

// The oracle tester: the second participant answers the cycle count of A_n on
// its own encoding when the oracle says A_n recognizes itself, and the word of
// zero otherwise. `machine_at(n)` supplies A_n (default: the universal enumerator).
using MachineSource = std::function<MachineDescription(std::uint64_t n)>;
// The given machines as A_1..A_p, then the universal enumeration from its start.
MachineSource prefixed_source(std::vector<MachineDescription> prefix);
Tester pi_tester(std::shared_ptr<const BoundedPi> pi, MachineSource machine_at = {});

// The communication tester. The interrogator searches k_n > k_{n-1} with A_k
// answering mu_1..mu_{n-1}, enc(A_k) and asks mu_n = enc(A_{k_n}); the second
// participant answers bar of A_{k_n}'s answer to mu_1..mu_n.
struct CommOptions {
  std::uint64_t search_cap = 2'000;  // largest k examined
  RunBudget budget = RunBudget::cycles(10'000);
  MachineSource machine_at;  // default: the universal enumerator
};
Tester comm_tester(std::shared_ptr<const BoundedPi> pi, CommOptions options);
// The interrogator's question sequence mu_1..mu_n (independent of answers).
std::vector<Word> comm_questions(const BoundedPi& pi, const CommOptions& options, std::uint64_t n);

// A generator replaying the SP's answers from the test of the SP itself
// against the tester, then the empty word once that internal test ends.
ParticipantPtr echo_generator(const Tester& tester, const RunBudget& budget, std::uint64_t internal_cap = 1'000);
ParticipantPtr echo_generator(const MachineDescription& i, const MachineDescription& q, const RunBudget& budget,
                              std::uint64_t internal_cap = 1'000);

// Equal replies (answers or divergence) on the first n empty questions.
bool similar_on_lambda(Participant& u, Participant& v, std::uint64_t n, const RunBudget& budget);

}  // namespace turingtest
