#include <cmath>
#include <random>

#include "doctest.h"
#include "support/reference.h"
#include "support/zoo.h"
#include "turingtest/codec.h"
#include "turingtest/prob.h"

using namespace turingtest;
using reftest::RefMachine;
using reftest::zoo;

namespace {

std::vector<MachineDescription> communicable() {
  std::vector<MachineDescription> out;
  for (const auto& name : reftest::zoo_communicable()) out.push_back(zoo(name));
  return out;
}

// Flag of the assistant after receiving `received`, from the reference interpreter.
int ref_flag(const std::vector<int>& received, std::uint64_t m, const MachineSource& at) {
  const std::uint64_t n = received.size();
  for (std::uint64_t k = 1; k <= n; ++k) {
    RefMachine ref(at(k));
    std::uint64_t left = n;
    std::vector<int> got;
    while (got.size() < n) {
      const auto r = ref.ask("", left);
      if (!r.halted) break;
      left -= r.cycles;
      got.push_back(r.answer.empty() || r.answer == "a" ? 0 : 1);
    }
    if (got.size() < m + k - 1) continue;
    bool same = true;
    for (std::size_t i = 0; i < got.size(); ++i) same = same && got[i] == received[i];
    if (same) return 1;
  }
  return 0;
}

// Binarized answers of a machine to empty questions, one per question.
std::vector<int> own_bits(const MachineDescription& m, std::size_t n) {
  RefMachine ref(m);
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = ref.ask("", 1'000'000);
    out.push_back(r.answer.empty() || r.answer == "a" ? 0 : 1);
  }
  return out;
}

// Upper p with P{X <= x} = 1 - confidence for X ~ Bin(n, p), by bisection.
double bisect_upper(std::uint64_t x, std::uint64_t n, double confidence) {
  auto cdf = [&](double p) {
    double s = 0;
    for (std::uint64_t i = 0; i <= x; ++i)
      s += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                    (n - i) * std::log1p(-p));
    return s;
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    (cdf(mid) > 1 - confidence ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("binarization") {
  CHECK(binarize("") == 0);
  CHECK(binarize("a") == 0);
  CHECK(binarize("b") == 1);
  CHECK(binarize("ab") == 1);
  CHECK(binarize("aa") == 1);
  for (const Word w : {"a", "b"}) CHECK(binarize(num_to_word(default_alphabet(), binarize(w))) == binarize(w));
}

TEST_CASE("supervisor table") {
  CHECK_FALSE(prob_supervisor(0, 0).has_value());
  CHECK(prob_supervisor(0, 1) == Side::Left);
  CHECK(prob_supervisor(1, 0) == Side::Right);
  CHECK(prob_supervisor(1, 1) == Side::Right);
}

TEST_CASE("bound arithmetic and confidence interval") {
  CHECK(prob_bound(0.5, 5) == doctest::Approx(0.0625));
  CHECK(prob_bound(0.5, 10) == doctest::Approx(0.001953125));
  CHECK(prob_bound(0.7, 3) == doctest::Approx(0.343 / 0.3));
  CHECK(prob_bound(0.3, 3) == doctest::Approx(0.343 / 0.3));
  CHECK_THROWS_AS(prob_bound(1.0, 3), PreconditionViolation);
  for (std::uint64_t x : {0, 1, 7, 60, 199})
    CHECK(clopper_pearson_upper(x, 200) == doctest::Approx(bisect_upper(x, 200, 0.95)).epsilon(1e-6));
  CHECK(clopper_pearson_upper(5, 5) == 1.0);
}

TEST_CASE("random second participant") {
  RandomSp a(0.3, 42), b(0.3, 42), c(0.3, 43);
  int zeros = 0, differ = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const auto x = *a.next("ab", RunBudget::cycles(1)).answer;
    CHECK(x == *b.next("", RunBudget::cycles(1)).answer);
    differ += x != *c.next("", RunBudget::cycles(1)).answer;
    zeros += x == "a";
    REQUIRE((x == "a" || x == "b"));
  }
  CHECK(std::abs(zeros - 0.3 * n) < 4 * std::sqrt(n * 0.21));
  CHECK(differ > 0);
  CHECK(split_mix(7, 0) != split_mix(7, 1));
  CHECK(split_mix(7, 3) == split_mix(7, 3));
}

TEST_CASE("assistant step examples") {
  const MachineSource universal = [](std::uint64_t k) { return universal_enum(k); };
  // A_1 answers the empty word at no cost, so its own answers are all zero.
  CHECK(assistant_step(std::vector<int>(5, 0), 5, universal) == 1);
  CHECK(assistant_step(std::vector<int>(4, 0), 5, universal) == 0);
  CHECK(assistant_step({0}, 2, universal) == 0);
  // No early machine answers with a nonzero word.
  CHECK(assistant_step(std::vector<int>(30, 1), 1, universal) == 0);
}

TEST_CASE("incremental assistant agrees with both straightforward forms") {
  std::mt19937_64 rng(5);
  const auto prefixed = prefixed_source(communicable());
  const MachineSource universal = [](std::uint64_t k) { return universal_enum(k); };
  for (const auto* src : {&prefixed, &universal}) {
    auto cache = std::make_shared<SessionCache>(*src);
    std::vector<std::vector<int>> streams;
    for (int r = 0; r < 6; ++r) {
      std::vector<int> s;
      for (int i = 0; i < 40; ++i) s.push_back(static_cast<int>(rng() % 4 == 0));
      streams.push_back(s);
    }
    for (const auto& m : communicable()) streams.push_back(own_bits(m, 40));
    for (const auto& s : streams)
      for (std::uint64_t m : {1, 3, 5}) {
        Assistant a(m, cache);
        for (std::size_t n = 1; n <= s.size(); ++n) {
          const std::vector<int> prefix(s.begin(), s.begin() + static_cast<long>(n));
          const int fast = a.step(s[n - 1]);
          CAPTURE(n);
          CAPTURE(m);
          REQUIRE(fast == ref_flag(prefix, m, *src));
          if (n % 7 == 0) CHECK(fast == assistant_step(prefix, m, *src));
        }
      }
  }
}

TEST_CASE("flags are monotone for a machine's own answers") {
  const auto front = communicable();
  auto cache = std::make_shared<SessionCache>(prefixed_source(front));
  for (std::size_t k = 1; k <= front.size(); ++k) {
    const auto bits = own_bits(front[k - 1], 400);
    for (std::uint64_t m : {1, 3, 5, 10}) {
      Assistant a(m, cache);
      bool fired = false;
      for (std::size_t n = 1; n <= bits.size(); ++n) {
        const int f = a.step(bits[n - 1]);
        if (fired) CHECK(f == 1);
        fired = fired || f;
      }
      CAPTURE(k);
      CAPTURE(m);
      CHECK(fired);
    }
  }
}

TEST_CASE("single trials") {
  ProbConfig cfg;
  cfg.m = 3;
  cfg.source = prefixed_source(communicable());
  cfg.step_cap = 5'000;
  auto cache = std::make_shared<SessionCache>(cfg.source);

  SUBCASE("a machine that never answers fails every trial") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto t = prob_test(machine_factory(zoo("loop")), cfg, s, cache);
      CHECK_FALSE(t.passed);
      CHECK(t.left.termination == Termination::SubjectDiverged);
    }
  }
  SUBCASE("communicable machines are named on their own side") {
    for (const auto& name : reftest::zoo_communicable()) {
      int passes = 0;
      for (std::uint64_t s = 0; s < 50; ++s) {
        const auto t = prob_test(machine_factory(zoo(name)), cfg, split_mix(1, s), cache);
        passes += t.passed;
        CHECK_FALSE(t.cap_reached);
        CHECK(t.left_flags.size() == t.left.step_count());
      }
      CAPTURE(name);
      CHECK(passes <= 20);
    }
  }
  SUBCASE("same seed, same trial") {
    const auto a = prob_test(machine_factory(zoo("counter")), cfg, 99, cache);
    const auto b = prob_test(machine_factory(zoo("counter")), cfg, 99);
    CHECK(a.left.steps == b.left.steps);
    CHECK(a.right.steps == b.right.steps);
    CHECK(a.left_flags == b.left_flags);
    CHECK(a.passed == b.passed);
  }
  SUBCASE("a degenerate oracle lets an all-ones machine pass") {
    ProbConfig one = cfg;
    one.p0 = 1.0;
    // Z matches A_1 (the empty-word machine) from step m on, before const1 is matched.
    for (std::uint64_t s = 0; s < 10; ++s) CHECK(prob_test(machine_factory(zoo("const1")), one, s, cache).passed);
  }
}

TEST_CASE("Monte Carlo harness") {
  ProbConfig cfg;
  cfg.m = 5;
  cfg.source = prefixed_source(communicable());
  const auto a = monte_carlo(machine_factory(zoo("const1")), cfg, 300, 7);
  const auto b = monte_carlo(machine_factory(zoo("const1")), cfg, 300, 7);
  CHECK(a.passes == b.passes);
  CHECK(a.seeds == b.seeds);
  CHECK(a.seeds[4] == split_mix(7, 4));
  CHECK(a.passes <= a.trials);
  CHECK(a.estimate == doctest::Approx(static_cast<double>(a.passes) / 300));
  CHECK(a.bound == doctest::Approx(0.0625));
  CHECK(a.ci_upper >= a.estimate);
  CHECK(a.within_bound());
  CHECK_THROWS_AS(monte_carlo(machine_factory(zoo("const1")), cfg, 0, 7), PreconditionViolation);
}
