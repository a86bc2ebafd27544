#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "turingtest/codec.h"
#include "turingtest/lambda_stream.h"
#include "turingtest/participant.h"

namespace turingtest {

// A construction was used outside its precondition at run time.
class AssertionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The k-th valid encoding in shortlex order, decoded (k >= 1).
MachineDescription universal_enum(std::uint64_t k);

// Something an enumerator produces: a machine, a machine under a time-limit
// supervisor, or a generator replaying a machine's answers to empty questions.
class RunnableItem {
 public:
  enum class Kind { Plain, TimeLimited, Generator };

  static RunnableItem plain(MachineDescription m, std::string label = {});
  static RunnableItem time_limited(MachineDescription m, std::uint64_t t, std::string label = {});
  // Answers like `m` to empty questions 1..horizon and the empty word after.
  // `stream` must already know those answers; it is shared, not copied.
  static RunnableItem generator(MachineDescription m, std::uint64_t horizon,
                                std::shared_ptr<const LambdaStream> stream, std::string label = {});

  Kind kind() const { return kind_; }
  const MachineDescription& base() const { return *base_; }
  std::uint64_t time_limit() const { return param_; }  // TimeLimited only
  std::uint64_t horizon() const { return param_; }     // Generator only
  // Canonical encoding of the base machine.
  const Word& encoding() const { return encoding_; }
  const std::string& label() const { return label_; }

  ParticipantPtr instantiate(OraclePtr oracle = nullptr) const;

  // Same kind, same base machine, same parameter.
  friend bool operator==(const RunnableItem& a, const RunnableItem& b) {
    return a.kind_ == b.kind_ && a.encoding_ == b.encoding_ && a.param_ == b.param_;
  }

 private:
  RunnableItem() = default;

  Kind kind_ = Kind::Plain;
  std::shared_ptr<const MachineDescription> base_;
  CompiledPtr compiled_;
  std::uint64_t param_ = 0;
  std::shared_ptr<const LambdaStream> stream_;
  Word encoding_;
  std::string label_;
};

// Total map n -> item for n >= 1. Implementations are deterministic and
// safe to query from several threads.
class Enumerator {
 public:
  virtual ~Enumerator() = default;
  virtual RunnableItem item(std::uint64_t n) const = 0;
  virtual std::string name() const = 0;

  // Item n's answer to the n-th question of a fresh session of empty
  // questions. The default runs the item.
  virtual Reply diagonal_answer(std::uint64_t n, const RunBudget& budget) const;
  // How many indices after n are known to share n's diagonal answer,
  // at most `max`. Zero when unknown.
  virtual std::uint64_t diagonal_run(std::uint64_t n, std::uint64_t max, const RunBudget& budget) const;
};

using EnumeratorPtr = std::shared_ptr<const Enumerator>;

// The first N items, duplicates removed, in order of first appearance.
std::vector<RunnableItem> enum_prefix(const Enumerator& e, std::uint64_t n);

// Diagonal pairing (1,1) (1,2) (2,1) (1,3) (2,2) (3,1) ...
std::uint64_t pair_index(std::uint64_t i, std::uint64_t j);
std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t n);

class UniversalEnumerator final : public Enumerator {
 public:
  RunnableItem item(std::uint64_t n) const override;
  std::string name() const override { return "universal"; }
};

RunnableItem time_limit(const MachineDescription& m, std::uint64_t t);

// n -> A_i|j with (i, j) = unpair(n).
class TimeLimitedEnumerator final : public Enumerator {
 public:
  // Bounds the simulation spent on one machine while answering diagonal
  // questions; exceeding it raises std::runtime_error.
  explicit TimeLimitedEnumerator(std::uint64_t work_limit = 50'000'000);
  ~TimeLimitedEnumerator() override;

  RunnableItem item(std::uint64_t n) const override;
  std::string name() const override { return "time-limited"; }
  Reply diagonal_answer(std::uint64_t n, const RunBudget& budget) const override;
  std::uint64_t diagonal_run(std::uint64_t n, std::uint64_t max, const RunBudget& budget) const override;

  // Answer of A_i|t to the q-th empty question.
  Word limited_answer(std::uint64_t i, std::uint64_t t, std::uint64_t q) const;
  // Smallest n in [from, limit] whose diagonal answer is non-empty.
  std::optional<std::uint64_t> first_nonempty_diagonal(std::uint64_t from, std::uint64_t limit) const;

 private:
  struct Analysis;
  Analysis& analysis(std::uint64_t i) const;
  // First question in 1..q that A_i does not answer within t cycles.
  std::optional<std::uint64_t> first_overrun(Analysis& a, std::uint64_t t, std::uint64_t q) const;
  // True when A_i|t answers the empty word to every question whenever t <= max_t.
  bool silent_up_to(Analysis& a, std::uint64_t max_t) const;
  std::optional<std::uint64_t> search_nonempty(std::uint64_t from, std::uint64_t limit) const;

  std::uint64_t work_limit_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::uint64_t, std::unique_ptr<Analysis>> cache_;
};

// The tilde-generator: answers m's n-th answer in the session of empty
// questions, or the empty word when that question exceeds the budget.
// Question content is ignored.
ParticipantPtr tilde_generator(const MachineDescription& m, const RunBudget& budget);

// The diagonal generator: n-th answer is bar of E(n)'s n-th answer.
// Throws AssertionFailure when E(n) does not answer within budget.
class DiagonalGenerator final : public Participant {
 public:
  DiagonalGenerator(EnumeratorPtr e, RunBudget budget);
  Reply next(const BWord& question, const RunBudget& budget) override;
  std::string describe() const override { return "diagonal(" + e_->name() + ")"; }
  TmType type() const override { return TmType::Yes; }
  std::uint64_t steady_for(std::uint64_t max) override;
  void skip(std::uint64_t k) override { n_ += k; }
  // The answer at step n without touching the session.
  Word answer_at(std::uint64_t n) const;

 private:
  EnumeratorPtr e_;
  RunBudget budget_;
  std::uint64_t n_ = 0;
};

ParticipantPtr diagonal_generator(EnumeratorPtr e, const RunBudget& budget);

// The memory-bounded class: at most `max_states` states, initial work tape
// at most `max_initial_work` cells, encodings at most `max_encoding_length`
// letters; members whose scanned segment exceeds `max_segment` are rejected.
struct MemoryClassParams {
  std::size_t max_states = 2;
  std::size_t max_initial_work = 1;
  std::uint64_t max_segment = 3;
  std::size_t max_encoding_length = 24;
  std::uint64_t size_cap = 200'000;
};

enum class Screening { Survived, SegmentExceeded, Repeated, Stuck };
const char* screening_name(Screening s);

struct ScreenedMachine {
  Word encoding;
  Screening outcome = Screening::Survived;
  // Question during which the machine was rejected (0 for survivors).
  std::uint64_t question = 0;
  std::uint64_t max_segment = 0;
};

class MemoryClass {
 public:
  std::uint64_t n() const { return n_; }
  const MemoryClassParams& params() const { return params_; }
  // Every member of the class, in shortlex order of encodings.
  const std::vector<ScreenedMachine>& screened() const { return screened_; }
  std::uint64_t survivors() const { return survivors_.size(); }
  // Encodings of survivor r (1-based), in screening order.
  const Word& survivor_encoding(std::uint64_t r) const { return screened_[survivors_.at(r - 1)].encoding; }

  // R: survivors, padded with the halting machine.
  EnumeratorPtr r() const { return r_; }
  // Egen: generators replaying R(n)'s first N answers.
  EnumeratorPtr egen() const { return egen_; }

 private:
  friend MemoryClass memory_class_enum(const MemoryClassParams& params);

  MemoryClassParams params_;
  std::uint64_t n_ = 0;
  std::vector<ScreenedMachine> screened_;
  std::vector<std::size_t> survivors_;
  EnumeratorPtr r_, egen_;
};

MemoryClass memory_class_enum(const MemoryClassParams& params);

}  // namespace turingtest
