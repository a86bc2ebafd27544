#include "turingtest/prob.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/special_functions/beta.hpp>

#include "turingtest/codec.h"

namespace turingtest {

int binarize(const Word& answer, const Alphabet& alphabet) {
  return answer.empty() || answer == num_to_word(alphabet, 0) ? 0 : 1;
}

// Sessions.

struct SessionCache::Session {
  explicit Session(const MachineDescription& m) : inst(m), alphabet(m.alphabet) {}

  void advance(std::uint64_t n) {
    while (!stuck && bits.size() < n) {
      if (!in_question) {
        inst.begin_question("");
        in_question = true;
      }
      if (inst.status() == MachineInstance::Status::Running) {
        if (inst.total_cycles() >= n) return;
        inst.run(n - inst.total_cycles());
      }
      switch (inst.status()) {
        case MachineInstance::Status::Halted:
          bits.push_back(static_cast<std::uint8_t>(binarize(inst.current_answer(), alphabet)));
          done_at.push_back(inst.total_cycles());
          in_question = false;
          break;
        case MachineInstance::Status::Stuck:
          stuck = true;
          break;
        case MachineInstance::Status::Running:
          return;
      }
    }
  }

  MachineInstance inst;
  Alphabet alphabet;
  bool in_question = false;
  bool stuck = false;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint64_t> done_at;  // total cycles when each answer was given
};

SessionCache::SessionCache(MachineSource source) : source_(std::move(source)) {
  if (!source_) source_ = [](std::uint64_t k) { return universal_enum(k); };
}

SessionCache::~SessionCache() = default;

SessionCache::Session& SessionCache::session(std::uint64_t k) {
  while (sessions_.size() < k) sessions_.push_back(std::make_unique<Session>(source_(sessions_.size() + 1)));
  return *sessions_[k - 1];
}

std::uint64_t SessionCache::answers_within(std::uint64_t k, std::uint64_t n) {
  std::lock_guard lock(mu_);
  auto& s = session(k);
  s.advance(n);
  const auto within = std::upper_bound(s.done_at.begin(), s.done_at.end(), n) - s.done_at.begin();
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(within), n);
}

int SessionCache::bit(std::uint64_t k, std::uint64_t j) {
  std::lock_guard lock(mu_);
  return session(k).bits.at(j);
}

// Assistants.

int assistant_step(const std::vector<int>& received, std::uint64_t m, const MachineSource& source) {
  const std::uint64_t n = received.size();
  for (std::uint64_t k = 1; k <= n; ++k) {
    const auto desc = source ? source(k) : universal_enum(k);
    MachineInstance inst(desc);
    std::uint64_t left = n;
    std::vector<int> got;
    while (got.size() < n) {
      // A question may be answered in zero cycles, so the budget can reach zero.
      inst.begin_question("");
      if (inst.run(left) != MachineInstance::Status::Halted) break;
      left -= inst.cycles_this_question();
      got.push_back(binarize(inst.current_answer(), desc.alphabet));
    }
    if (got.size() >= m + k - 1 && std::equal(got.begin(), got.end(), received.begin())) return 1;
  }
  return 0;
}

Assistant::Assistant(std::uint64_t m, std::shared_ptr<SessionCache> cache) : m_(m), cache_(std::move(cache)) {
  if (m_ == 0) throw PreconditionViolation("sensitivity m must be at least 1");
}

int Assistant::step(int bit) {
  received_.push_back(bit);
  const std::uint64_t n = received_.size();
  alive_.push_back({n, 0});
  int flag = 0;
  // A machine that once disagreed with the received answers never agrees again.
  std::erase_if(alive_, [&](Candidate& c) {
    const std::uint64_t j = cache_->answers_within(c.k, n);
    for (; c.matched < j; ++c.matched)
      if (cache_->bit(c.k, c.matched) != received_[c.matched]) return true;
    if (j >= m_ + c.k - 1) flag = 1;
    return false;
  });
  return flag;
}

std::optional<Side> prob_supervisor(int left_flag, int right_flag) {
  if (left_flag) return Side::Right;
  if (right_flag) return Side::Left;
  return std::nullopt;
}

// Randomness.

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t split_mix(std::uint64_t seed, std::uint64_t i) { return mix(seed + (i + 1) * kGolden); }

RandomSp::RandomSp(double p0, std::uint64_t seed) : p0_(p0), state_(seed) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw PreconditionViolation("p0 must lie in [0, 1]");
}

Reply RandomSp::next(const BWord&, const RunBudget&) {
  state_ += kGolden;
  const double u = static_cast<double>(mix(state_) >> 11) * 0x1.0p-53;
  return Reply::of(num_to_word(default_alphabet(), u < p0_ ? 0 : 1));
}

// Tests.

namespace {

class ProbInterrogator final : public Interrogator {
 public:
  ProbInterrogator(std::uint64_t m, const std::shared_ptr<SessionCache>& cache,
                   std::shared_ptr<std::vector<FlagPair>> flags)
      : left_(m, cache), right_(m, cache), flags_(std::move(flags)) {}
  Decision start() override { return Continue{""}; }
  Decision on_answers(const Word& l, const Word& r) override {
    const FlagPair f{left_.step(binarize(l)), right_.step(binarize(r))};
    if (flags_) flags_->push_back(f);
    if (auto side = prob_supervisor(f.left, f.right)) return Finish{*side};
    return Continue{""};
  }
  std::string describe() const override { return "I_assist"; }

 private:
  Assistant left_, right_;
  std::shared_ptr<std::vector<FlagPair>> flags_;
};

std::string tester_id(const ProbConfig& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "prob:%llu,%g", static_cast<unsigned long long>(c.m), c.p0);
  return buf;
}

}  // namespace

Tester prob_tester(const ProbConfig& config, std::uint64_t seed, std::shared_ptr<SessionCache> cache,
                   std::shared_ptr<std::vector<FlagPair>> flags) {
  if (!cache) cache = std::make_shared<SessionCache>(config.source);
  Tester t;
  t.id = tester_id(config);
  t.interrogator = [m = config.m, cache, flags] { return std::make_unique<ProbInterrogator>(m, cache, flags); };
  t.sp = [p0 = config.p0, seed] { return std::make_unique<RandomSp>(p0, seed); };
  t.sp_type = TmType::No;
  return t;
}

ProbTrial prob_test(const ParticipantFactory& subject, const ProbConfig& config, std::uint64_t seed,
                    std::shared_ptr<SessionCache> cache) {
  if (!cache) cache = std::make_shared<SessionCache>(config.source);
  TestOptions o;
  o.budget = config.budget;
  o.step_cap = config.step_cap;
  o.seed = seed;
  auto lf = std::make_shared<std::vector<FlagPair>>();
  auto rf = std::make_shared<std::vector<FlagPair>>();
  ProbTrial t;
  t.seed = seed;
  auto ls = subject();
  t.left = run_test(prob_tester(config, seed, cache, lf), *ls, Side::Left, o);
  auto rs = subject();
  t.right = run_test(prob_tester(config, seed, cache, rf), *rs, Side::Right, o);
  t.left_flags = std::move(*lf);
  t.right_flags = std::move(*rf);
  t.passed = !evaluate(t.left, t.right).fails_ordinary();
  t.cap_reached =
      t.left.termination == Termination::StepCapReached || t.right.termination == Termination::StepCapReached;
  return t;
}

double prob_bound(double p0, std::uint64_t m) {
  const double p = std::max(p0, 1.0 - p0);
  if (p >= 1.0) throw PreconditionViolation("the bound needs max(p0, 1 - p0) < 1");
  return std::pow(p, static_cast<double>(m)) / (1.0 - p);
}

double clopper_pearson_upper(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw PreconditionViolation("no trials");
  if (successes >= trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(successes + 1), static_cast<double>(trials - successes),
                                confidence);
}

ProbOutcome monte_carlo(const ParticipantFactory& subject, const ProbConfig& config, std::uint64_t trials,
                        std::uint64_t master_seed) {
  if (trials == 0) throw PreconditionViolation("trials must be at least 1");
  ProbOutcome out;
  out.subject = subject()->describe();
  out.m = config.m;
  out.p0 = config.p0;
  out.master_seed = master_seed;
  out.trials = trials;
  out.bound = prob_bound(config.p0, config.m);
  auto cache = std::make_shared<SessionCache>(config.source);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t seed = split_mix(master_seed, i);
    out.seeds.push_back(seed);
    const auto t = prob_test(subject, config, seed, cache);
    out.passes += t.passed;
    out.capped += t.cap_reached;
  }
  out.estimate = static_cast<double>(out.passes) / static_cast<double>(trials);
  out.ci_upper = clopper_pearson_upper(out.passes, trials);
  // A bound of one or more holds for any rate.
  out.margin = out.bound < 1.0 ? 3.0 * std::sqrt(out.bound * (1.0 - out.bound) / static_cast<double>(trials)) : 0.0;
  return out;
}

}  // namespace turingtest
