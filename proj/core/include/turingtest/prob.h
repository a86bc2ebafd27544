#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "turingtest/arena.h"

namespace turingtest {

// 0 for the empty word and the word of zero, 1 for every other answer.
int binarize(const Word& answer, const Alphabet& alphabet = default_alphabet());

// Answers of A_1, A_2, ... in sessions of empty questions under a total
// budget, computed incrementally and shared between assistants.
class SessionCache {
 public:
  explicit SessionCache(MachineSource source);
  ~SessionCache();

  // Number of answers A_k gives within n cycles in total and at most n questions.
  std::uint64_t answers_within(std::uint64_t k, std::uint64_t n);
  // Binarized answer j (0-based) of A_k; requires j < answers_within(k, n) for some n.
  int bit(std::uint64_t k, std::uint64_t j);

 private:
  struct Session;
  Session& session(std::uint64_t k);

  MachineSource source_;
  std::mutex mu_;
  std::vector<std::unique_ptr<Session>> sessions_;
};

// The straightforward form of one assistant step: start A_k on n empty
// questions with n cycles in total for every k <= n, and flag when some A_k
// gave at least m + k - 1 answers and they agree with the received ones.
int assistant_step(const std::vector<int>& received, std::uint64_t m, const MachineSource& source);

// Incremental assistant: same flags as assistant_step, step after step.
class Assistant {
 public:
  Assistant(std::uint64_t m, std::shared_ptr<SessionCache> cache);
  // Receives the binarized answer of step n = received().size() + 1 and flags.
  int step(int bit);
  const std::vector<int>& received() const { return received_; }

 private:
  struct Candidate {
    std::uint64_t k = 0;
    std::uint64_t matched = 0;
  };
  std::uint64_t m_;
  std::shared_ptr<SessionCache> cache_;
  std::vector<int> received_;
  std::vector<Candidate> alive_;
};

// The supervisor table: (0,0) continues, (0,1) names left, (1,*) names right.
std::optional<Side> prob_supervisor(int left_flag, int right_flag);

// Z: answer n is the word of xi_n with P{xi_n = 0} = p0.
class RandomSp final : public Participant {
 public:
  RandomSp(double p0, std::uint64_t seed);
  Reply next(const BWord& question, const RunBudget& budget) override;
  std::string describe() const override { return "random-sp"; }
  TmType type() const override { return TmType::No; }

 private:
  double p0_;
  std::uint64_t state_;
};

// The i-th output of SplitMix64 started at `seed`.
std::uint64_t split_mix(std::uint64_t seed, std::uint64_t i);

struct ProbConfig {
  std::uint64_t m = 5;
  double p0 = 0.5;
  MachineSource source;  // default: the universal enumeration
  RunBudget budget = RunBudget::cycles(100'000);
  std::uint64_t step_cap = 100'000;
};

struct FlagPair {
  int left = 0, right = 0;
  friend bool operator==(const FlagPair&, const FlagPair&) = default;
};

struct ProbTrial {
  std::uint64_t seed = 0;
  bool passed = false;
  bool cap_reached = false;
  Transcript left, right;
  std::vector<FlagPair> left_flags, right_flags;  // per step, per orientation
};

// The assistant tester for one seed.
Tester prob_tester(const ProbConfig& config, std::uint64_t seed, std::shared_ptr<SessionCache> cache,
                   std::shared_ptr<std::vector<FlagPair>> flags = nullptr);

ProbTrial prob_test(const ParticipantFactory& subject, const ProbConfig& config, std::uint64_t seed,
                    std::shared_ptr<SessionCache> cache = nullptr);

struct ProbOutcome {
  std::string subject;
  std::uint64_t m = 0;
  double p0 = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  std::uint64_t capped = 0;
  double estimate = 0;
  double ci_upper = 0;  // one-sided 95% Clopper-Pearson
  double bound = 0;
  double margin = 0;  // three standard errors of a rate equal to the bound
  std::vector<std::uint64_t> seeds;
  bool within_bound() const { return estimate <= bound + margin; }
};

// p^m / (1 - p) with p = max(p0, 1 - p0).
double prob_bound(double p0, std::uint64_t m);
double clopper_pearson_upper(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

ProbOutcome monte_carlo(const ParticipantFactory& subject, const ProbConfig& config, std::uint64_t trials,
                        std::uint64_t master_seed);

}  // namespace turingtest
