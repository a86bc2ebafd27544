#include <set>

#include "doctest.h"
#include "support/reference.h"
#include "support/zoo.h"
#include "turingtest/arena.h"
#include "turingtest/codec.h"

using namespace turingtest;
using reftest::RefMachine;
using reftest::zoo;

namespace {

const RunBudget kBudget = RunBudget::cycles(5'000);

TestOptions opts(std::uint64_t cap = 60) {
  TestOptions o;
  o.budget = kBudget;
  o.step_cap = cap;
  return o;
}

ParticipantFactory subject(const std::string& name) { return machine_factory(zoo(name), name); }

// Every tester whose second participant is a zoo machine.
std::vector<Tester> zoo_testers() {
  std::vector<Tester> out;
  for (const auto& q : reftest::zoo_communicable()) {
    out.push_back(dumb_tester(zoo(q), kBudget));
    for (const auto& i : reftest::zoo_interrogators()) out.push_back(machine_tester(zoo(i), zoo(q), kBudget));
  }
  for (const auto& q : {"loop", "slow"}) out.push_back(dumb_tester(zoo(q), kBudget));
  return out;
}

// Steps expanded to one entry per question.
std::vector<std::pair<Reply, Reply>> expand(const Transcript& t) {
  std::vector<std::pair<Reply, Reply>> out;
  for (const auto& s : t.steps)
    for (std::uint64_t i = 0; i < s.repeat; ++i) out.emplace_back(s.sp, s.subject);
  return out;
}

Transcript fabricated(Orientation o, Termination term, bool sp_answered, std::optional<Side> named = {}) {
  Transcript t;
  t.tester_id = "t";
  t.subject_id = "s";
  t.orientation = o;
  t.termination = term;
  t.named = named;
  t.terminated_at = 1;
  t.steps.push_back({1, 1, "", sp_answered ? Reply::of("a") : Reply::diverge(DivergeReason::BudgetExhausted),
                     term == Termination::SubjectDiverged ? Reply::diverge(DivergeReason::Stuck) : Reply::of("b")});
  return t;
}

}  // namespace

TEST_CASE("dumb interrogator decisions") {
  DumbInterrogator i([](std::uint64_t) { return Reply::of("x"); }, "I");
  CHECK(std::get<Continue>(i.start()).question.empty());
  CHECK(std::get<Continue>(i.on_answers("ab", "ab")).question.empty());
  CHECK(std::get<Finish>(i.on_answers("x", "y")).named == Side::Left);
  CHECK(std::get<Finish>(i.on_answers("y", "x")).named == Side::Right);
  DumbInterrogator z([](std::uint64_t) { return Reply::of("z"); }, "I");
  CHECK_THROWS_AS(z.on_answers("x", "y"), ProtocolError);
  DumbInterrogator d([](std::uint64_t) { return Reply::diverge(DivergeReason::Stuck); }, "I");
  CHECK(std::holds_alternative<Stalled>(d.on_answers("x", "y")));
}

TEST_CASE("fresh alpha is the n-th answer of a new empty-question session") {
  for (const auto& name : {"counter", "slow", "parrot", "const1"}) {
    const auto m = zoo(name);
    const auto alpha = fresh_alpha(machine_factory(m), kBudget);
    RefMachine ref(m);
    for (std::uint64_t n = 1; n <= 25; ++n) {
      const auto r = ref.ask("", 5'000);
      CAPTURE(name);
      CAPTURE(n);
      CHECK(*alpha(n).answer == r.answer);
    }
  }
  const auto slow = fresh_alpha(machine_factory(zoo("slow")), RunBudget::cycles(6));
  CHECK(slow(2).answer == Word("b"));
  CHECK(slow(3).diverged());
  CHECK(slow(9).diverged());
}

TEST_CASE("ordinary and strict evaluation") {
  using T = Termination;
  auto both = [](T term, bool sp_answered, std::optional<Side> named_l = {}, std::optional<Side> named_r = {}) {
    return evaluate(fabricated(Side::Left, term, sp_answered, named_l),
                    fabricated(Side::Right, term, sp_answered, named_r));
  };
  auto v = both(T::SubjectDiverged, true);
  CHECK(v.fails_ordinary());
  CHECK(v.fails_strict());
  v = both(T::SubjectDiverged, false);
  CHECK_FALSE(v.fails_ordinary());
  CHECK(v.fails_strict());
  v = both(T::SpDiverged, false);
  CHECK_FALSE(v.fails_strict());
  v = both(T::StepCapReached, true);
  CHECK_FALSE(v.fails_strict());
  v = both(T::Finished, true, Side::Left, Side::Right);
  CHECK(v.fails_ordinary());
  v = both(T::Finished, true, Side::Left, Side::Left);
  CHECK(v.left.failed_ordinary);
  CHECK_FALSE(v.right.failed_ordinary);
  CHECK_FALSE(v.fails_ordinary());

  auto l = fabricated(Side::Left, T::StepCapReached, true);
  CHECK_THROWS_AS(evaluate(l, l), std::invalid_argument);
  auto r = fabricated(Side::Right, T::StepCapReached, true);
  r.subject_id = "other";
  CHECK_THROWS_AS(evaluate(l, r), std::invalid_argument);
}

TEST_CASE("run_test loop") {
  SUBCASE("dumb interrogator asks only the empty question") {
    const auto run = run_both(dumb_tester(zoo("counter"), kBudget), subject("parrot"), opts());
    for (const auto* t : {&run.left, &run.right})
      for (const auto& s : t->steps) CHECK(s.question.empty());
  }
  SUBCASE("the second participant's own machine never gets named") {
    const auto run = run_both(dumb_tester(zoo("counter"), kBudget), subject("counter"), opts(40));
    CHECK(run.left.termination == Termination::StepCapReached);
    CHECK(run.left.step_count() == 40u);
    CHECK(run.left.steps.size() == 40u);  // counter never repeats an answer
    CHECK_FALSE(run.verdict.fails_strict());
  }
  SUBCASE("first difference ends the test naming the second participant") {
    const auto run = run_both(dumb_tester(zoo("const0"), kBudget), subject("counter"), opts());
    // counter answers the word of 1 first
    CHECK(run.left.terminated_at == 1u);
    CHECK(run.left.named == Side::Left);
    CHECK(run.right.named == Side::Right);
    CHECK(run.verdict.fails_ordinary());
  }
  SUBCASE("a subject that never halts fails at step one") {
    const auto run = run_both(dumb_tester(zoo("const1"), kBudget), subject("loop"), opts());
    CHECK(run.left.termination == Termination::SubjectDiverged);
    CHECK(run.left.terminated_at == 1u);
    CHECK(run.verdict.fails_ordinary());
  }
  SUBCASE("a diverging second participant lets the subject pass") {
    const auto run = run_both(dumb_tester(zoo("loop"), kBudget), subject("const1"), opts());
    CHECK(run.left.termination == Termination::SpDiverged);
    CHECK_FALSE(run.verdict.fails_strict());
    const auto both = run_both(dumb_tester(zoo("loop"), kBudget), subject("spinner"), opts());
    CHECK(both.left.termination == Termination::SubjectDiverged);
    CHECK_FALSE(both.verdict.fails_ordinary());
    CHECK(both.verdict.fails_strict());
  }
  SUBCASE("steady runs are recorded once with a repeat count") {
    const auto run = run_both(dumb_tester(zoo("const0"), kBudget), subject("const0"), opts(1'000'000'000));
    CHECK(run.left.termination == Termination::StepCapReached);
    CHECK(run.left.step_count() == 1'000'000'000u);
    CHECK(run.left.steps.size() <= 3u);
  }
  SUBCASE("a DSL interrogator sees left blank right") {
    const auto run = run_both(machine_tester(zoo("picky"), zoo("const1"), kBudget), subject("const1"), opts());
    CHECK(run.left.named == Side::Left);
    CHECK(run.right.named == Side::Left);
    CHECK(run.left.terminated_at == 1u);
    CHECK(run.verdict.left.failed_ordinary);
    CHECK_FALSE(run.verdict.right.failed_ordinary);
    const auto quiet = run_both(machine_tester(zoo("asker"), zoo("echo"), kBudget), subject("parrot"), opts());
    // asker asks "ab"; echo answers "ab", parrot the previous question
    CHECK(quiet.left.steps[0].question == "ab");
    CHECK(quiet.left.termination == Termination::StepCapReached);
  }
  SUBCASE("run_test requires a positive step cap") {
    auto s = subject("halt")();
    CHECK_THROWS_AS(run_test(dumb_tester(zoo("halt"), kBudget), *s, Side::Left, opts(0)), PreconditionViolation);
  }
}

TEST_CASE("zoo matrix properties") {
  std::vector<std::string> subjects = reftest::zoo_machines();
  for (const auto& tester : zoo_testers()) {
    for (const auto& name : subjects) {
      CAPTURE(tester.id);
      CAPTURE(name);
      const auto run = run_both(tester, subject(name), opts());
      const auto again = run_both(tester, subject(name), opts());
      CHECK(run.left.steps == again.left.steps);
      CHECK(run.right.steps == again.right.steps);
      // failing the ordinary test implies failing the strict one
      if (run.verdict.left.failed_ordinary) CHECK(run.verdict.left.failed_strict);
      if (run.verdict.right.failed_ordinary) CHECK(run.verdict.right.failed_strict);
      // step indices are contiguous from 1
      std::uint64_t next = 1;
      for (const auto& s : run.left.steps) {
        CHECK(s.n == next);
        next += s.repeat;
      }
      // the dumb I_q treats both sides alike
      if (tester.id.rfind("dumb:", 0) == 0) {
        CHECK(run.left.step_count() == run.right.step_count());
        CHECK(expand(run.left) == expand(run.right));
        CHECK(run.left.termination == run.right.termination);
      }
    }
  }
}

TEST_CASE("the second participant's machine passes its own tester") {
  for (const auto& tester : zoo_testers()) {
    const std::string q = tester.id.substr(tester.id.find(':') + 1);
    CAPTURE(tester.id);
    const auto run = run_both(tester, subject(q), opts());
    CHECK_FALSE(run.verdict.fails_ordinary());
  }
}

TEST_CASE("echo generator") {
  SUBCASE("replays a communicable second participant") {
    for (const auto& q : reftest::zoo_communicable()) {
      auto e = echo_generator(zoo("dumbi"), zoo(q), kBudget, 30);
      RefMachine ref(zoo(q));
      for (int n = 1; n <= 30; ++n) CHECK(*e->next("", kBudget).answer == ref.ask("", 5'000).answer);
      CHECK(e->next("", kBudget).answer == Word(""));
    }
  }
  SUBCASE("after the second participant diverges the answers are empty") {
    const RunBudget tight = RunBudget::cycles(6);  // slow needs 7 cycles at question 3
    auto e = echo_generator(dumb_tester(zoo("slow"), tight), tight, 100);
    std::vector<Word> got;
    for (int n = 0; n < 6; ++n) got.push_back(*e->next("", tight).answer);
    CHECK(got == std::vector<Word>{"b", "b", "", "", "", ""});
  }
  SUBCASE("passes both rules against every zoo tester") {
    std::vector<Tester> testers = zoo_testers();
    for (const RunBudget b : {RunBudget::cycles(6), RunBudget::cycles(20)})
      for (const auto& q : {"slow", "counter", "parrot"}) testers.push_back(dumb_tester(zoo(q), b));
    for (const auto& tester : testers) {
      CAPTURE(tester.id);
      for (const RunBudget b : {kBudget, RunBudget::cycles(6), RunBudget::cycles(20)}) {
        const auto run = run_both(tester, [&] { return echo_generator(tester, b, 100); }, [&] {
          auto o = opts(100);
          o.budget = b;
          return o;
        }());
        CHECK_FALSE(run.verdict.fails_ordinary());
        CHECK_FALSE(run.verdict.fails_strict());
      }
    }
  }
}

TEST_CASE("similarity on empty-question sessions") {
  auto a = subject("counter")(), b = subject("counter")();
  CHECK(similar_on_lambda(*a, *b, 30, kBudget));
  auto c = time_limit(zoo("const0"), 5).instantiate();
  auto d = subject("const0")();
  CHECK(similar_on_lambda(*c, *d, 30, kBudget));
  auto e = time_limit(zoo("loop"), 3).instantiate();
  auto f = subject("loop")();
  CHECK_FALSE(similar_on_lambda(*f, *e, 1, kBudget));
  auto g = subject("counter")(), h = subject("silent")();
  CHECK_FALSE(similar_on_lambda(*g, *h, 30, kBudget));
  CHECK_THROWS_AS(similar_on_lambda(*g, *h, 0, kBudget), PreconditionViolation);
}

TEST_CASE("diagonal tester names the generator at or before step n") {
  auto e = std::make_shared<TimeLimitedEnumerator>();
  const auto tester = diagonal_tester(e, kBudget);
  for (std::uint64_t n = 1; n <= 30; ++n) {
    CAPTURE(n);
    const auto run = run_both(tester, [&] { return e->item(n).instantiate(); }, opts(n));
    REQUIRE(run.left.termination == Termination::Finished);
    CHECK(run.left.terminated_at <= n);
    CHECK(run.left.named == Side::Left);
    CHECK(run.right.named == Side::Right);
  }
}

TEST_CASE("oracle tester") {
  std::vector<MachineDescription> front;
  for (const auto& name : {"echo", "self_recognizer", "counter", "halt", "slow", "loop", "const1"})
    front.push_back(zoo(name));
  const auto at = prefixed_source(front);
  std::vector<MachineDescription> u;
  for (std::uint64_t k = 1; k <= 40; ++k) u.push_back(at(k));
  auto pi = std::make_shared<const BoundedPi>(certified_universe(u, 10'000, RunBudget::cycles(10'000)));
  REQUIRE(pi->closed());
  const auto tester = pi_tester(pi, at);
  const Alphabet& alpha = default_alphabet();

  SUBCASE("second participant answers self-recognition cycle counts") {
    auto sp = tester.sp();
    for (std::uint64_t n = 1; n <= 40; ++n) {
      RefMachine ref(u[n - 1]);
      const auto r = ref.ask(encode(u[n - 1]), 100'000);
      CHECK(*sp->next("", kBudget).answer == num_to_word(alpha, r.halted ? r.cycles : 0));
    }
  }
  SUBCASE("every universe machine fails") {
    for (std::uint64_t k = 1; k <= 40; ++k) {
      CAPTURE(k);
      const auto run = run_both(tester, machine_factory(u[k - 1], "A" + std::to_string(k)), opts(40));
      CHECK(run.verdict.fails_ordinary());
    }
  }
  SUBCASE("a subject lying about one cycle count is caught there") {
    auto truth = tester.sp();
    std::vector<Word> answers;
    for (int n = 0; n < 40; ++n) answers.push_back(*truth->next("", kBudget).answer);
    std::size_t at = 0;
    while (at < answers.size() && answers[at] == num_to_word(alpha, 0)) ++at;
    REQUIRE(at < answers.size());
    answers[at] = num_to_word(alpha, word_to_num(alpha, answers[at]) + 1);
    const auto liar = [&] {
      return std::make_unique<ScriptedParticipant>([answers](std::uint64_t n) { return Reply::of(answers[n - 1]); },
                                                   "liar");
    };
    const auto run = run_both(tester, liar, opts(40));
    CHECK(run.left.terminated_at == at + 1);
    CHECK(run.verdict.fails_ordinary());
  }
  SUBCASE("an always-zero subject is named by the verified side") {
    const auto zero = [&] {
      return std::make_unique<ScriptedParticipant>([&](std::uint64_t) { return Reply::of(num_to_word(alpha, 0)); },
                                                   "zero");
    };
    CHECK(run_both(tester, zero, opts(40)).verdict.fails_ordinary());
  }
}

TEST_CASE("communication tester") {
  std::vector<MachineDescription> u;
  for (std::uint64_t k = 1; k <= 30; ++k) u.push_back(universal_enum(k));
  auto pi = std::make_shared<const BoundedPi>(certified_universe(u, 10'000, RunBudget::cycles(10'000)));
  CommOptions co;
  co.search_cap = 400;
  co.budget = RunBudget::cycles(2'000);
  const auto tester = comm_tester(pi, co);
  const std::uint64_t steps = 8;
  const auto mus = comm_questions(*pi, co, steps);

  SUBCASE("questions do not depend on the answers") {
    for (const auto& name : {"halt", "echo", "counter"}) {
      const auto run = run_both(tester, subject(name), opts(steps));
      std::size_t i = 0;
      for (const auto& s : run.left.steps)
        for (std::uint64_t r = 0; r < s.repeat; ++r) CHECK(s.question == mus[i++]);
    }
  }
  SUBCASE("answers carry the designated letter") {
    auto sp = tester.sp();
    for (std::uint64_t n = 0; n < steps; ++n) CHECK(sp->next("", kBudget).answer->front() == 'a');
  }
  SUBCASE("no universe machine reproduces the second participant") {
    std::vector<Word> sp_answers;
    auto sp = tester.sp();
    for (std::uint64_t n = 0; n < steps; ++n) sp_answers.push_back(*sp->next("", kBudget).answer);
    for (std::uint64_t k = 1; k <= 400; ++k) {
      RefMachine ref(universal_enum(k));
      bool same = true;
      for (std::uint64_t n = 0; n < steps && same; ++n) {
        const auto r = ref.ask(mus[n], 2'000);
        same = r.halted && r.answer == sp_answers[n];
      }
      CHECK_FALSE(same);
    }
  }
  SUBCASE("machines met by the search fail") {
    const auto run = run_both(tester, machine_factory(u[0], "A1"), opts(steps));
    CHECK(run.verdict.fails_ordinary());
  }
  SUBCASE("search cap") {
    CommOptions tiny = co;
    tiny.search_cap = 1;
    CHECK_THROWS_AS(comm_questions(*pi, tiny, 2), SearchCapExceeded);
  }
}
