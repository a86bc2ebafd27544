#include <benchmark/benchmark.h>

#include "turingtest/arena.h"
#include "turingtest/codec.h"
#include "turingtest/enumerate.h"
#include "turingtest/lambda_stream.h"
#include "turingtest/prob.h"
#include "turingtest/vm.h"

using namespace turingtest;

namespace {

MachineDescription load(const char* name) {
  return parse_dsl(read_text_file(std::string(TURINGTEST_ZOO_DIR) + "/" + name + ".tm"));
}

void BM_CounterSession(benchmark::State& state) {
  const auto machine = compile(load("counter"));
  for (auto _ : state) {
    MachineInstance inst(machine);
    for (int i = 0; i < state.range(0); ++i) benchmark::DoNotOptimize(inst.pose_question("", RunBudget::unlimited()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CounterSession)->Arg(100)->Arg(1000);

void BM_RawSteps(benchmark::State& state) {
  const auto machine = compile(load("spinner"));
  for (auto _ : state) {
    MachineInstance inst(machine);
    inst.begin_question("");
    inst.run(static_cast<std::uint64_t>(state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RawSteps)->Arg(1 << 16);

void BM_EncodingsOfLength(benchmark::State& state) {
  for (auto _ : state) {
    std::size_t n = 0;
    for_each_encoding_of_length(static_cast<std::size_t>(state.range(0)), {}, [&n](const Word&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EncodingsOfLength)->Arg(16)->Arg(20);

void BM_LambdaStreamPeriodic(benchmark::State& state) {
  const auto machine = compile(load("const1"));
  for (auto _ : state) {
    LambdaStream s(machine);
    s.advance(1000);
    benchmark::DoNotOptimize(s.answer(1000000));
  }
}
BENCHMARK(BM_LambdaStreamPeriodic);

void BM_DumbTest(benchmark::State& state) {
  const auto counter = load("counter");
  const auto tester = dumb_tester(counter, RunBudget::cycles(100'000));
  TestOptions o;
  o.step_cap = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_both(tester, machine_factory(counter, "counter"), o));
}
BENCHMARK(BM_DumbTest)->Arg(100)->Arg(1000);

// const0|1 agrees with the time-limited diagonal for about 1.5e9 steps.
void BM_DiagonalFastForward(benchmark::State& state) {
  auto e = std::make_shared<TimeLimitedEnumerator>();
  const auto tester = diagonal_tester(e, RunBudget::cycles(100'000));
  const auto item = time_limit(load("const0"), 1);
  TestOptions o;
  o.step_cap = 2'000'000'000;
  for (auto _ : state) {
    auto s = item.instantiate();
    benchmark::DoNotOptimize(run_test(tester, *s, Side::Left, o));
  }
}
BENCHMARK(BM_DiagonalFastForward)->Unit(benchmark::kMillisecond);

void BM_MemoryClass(benchmark::State& state) {
  MemoryClassParams p;
  p.max_encoding_length = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(memory_class_enum(p).n());
}
BENCHMARK(BM_MemoryClass)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto subject = load("counter");
  ProbConfig c;
  std::vector<MachineDescription> front;
  for (const char* name : {"halt", "silent", "const0", "const1", "echo", "counter", "parrot", "slow"})
    front.push_back(load(name));
  c.source = prefixed_source(front);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        monte_carlo(machine_factory(subject, "counter"), c, static_cast<std::uint64_t>(state.range(0)), 7));
}
BENCHMARK(BM_MonteCarlo)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
