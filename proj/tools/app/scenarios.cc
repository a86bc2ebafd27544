#include <map>
#include <sstream>

#include "app.h"
#include "json.hpp"
#include "turingtest/report.h"

namespace turingtest::app {

using Json = nlohmann::ordered_json;

namespace {

TestOptions options_with(const Config& cfg, std::uint64_t step_cap, std::optional<RunBudget> budget = {}) {
  auto o = cfg.options();
  o.step_cap = step_cap;
  if (budget) o.budget = *budget;
  return o;
}

Json side_json(const Transcript& t) {
  Json j;
  j["termination"] = termination_name(t.termination);
  j["step"] = t.terminated_at;
  j["named"] = t.named ? Json(side_name(*t.named)) : Json(nullptr);
  return j;
}

Json run_json(const TestRun& run) {
  Json j;
  j["tester"] = run.left.tester_id;
  j["subject"] = run.left.subject_id;
  j["left"] = side_json(run.left);
  j["right"] = side_json(run.right);
  j["fails_ordinary"] = run.verdict.fails_ordinary();
  j["fails_strict"] = run.verdict.fails_strict();
  return j;
}

std::vector<std::pair<Reply, Reply>> expand(const Transcript& t) {
  std::vector<std::pair<Reply, Reply>> out;
  for (const auto& s : t.steps)
    for (std::uint64_t i = 0; i < s.repeat; ++i) out.emplace_back(s.sp, s.subject);
  return out;
}

std::vector<std::string> plain_machines(const Zoo& zoo) {
  std::vector<std::string> out;
  for (const auto& e : zoo.entries())
    if (e.role == "machine" && !e.time_limit) out.push_back(e.name);
  return out;
}

ParticipantFactory zoo_subject(const Zoo& zoo, const std::string& name) {
  return runnable_factory(zoo.runnable(name), name);
}

// Testers whose interrogator and second participant are zoo machines: the
// dumb interrogator over every plain machine, and each DSL interrogator over
// every communicable machine.
std::vector<Tester> zoo_testers(const Zoo& zoo, const RunBudget& budget) {
  std::vector<Tester> out;
  for (const auto& q : plain_machines(zoo)) out.push_back(dumb_tester(zoo.machine(q), budget));
  for (const auto& i : zoo.names("interrogator"))
    for (const auto& q : zoo.communicable()) out.push_back(machine_tester(zoo.machine(i), zoo.machine(q), budget));
  return out;
}

std::string sp_name(const Tester& t) { return t.id.substr(t.id.find(':') + 1); }

ScenarioResult make(int id, std::string title, bool pass, std::string summary, Json detail, const Config& cfg) {
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "scenario";
  j["config_hash"] = cfg.hash();
  j["scenario"] = id;
  j["title"] = title;
  j["pass"] = pass;
  j["summary"] = summary;
  j["detail"] = std::move(detail);
  return {id, std::move(title), pass, std::move(summary), j.dump(2)};
}

// Diagonal tester against the first items of the time-limited enumeration.
ScenarioResult diagonal_success(const Config& cfg, const Zoo&) {
  auto e = std::make_shared<TimeLimitedEnumerator>();
  const auto tester = diagonal_tester(e, cfg.budget());
  const std::uint64_t count = 50;
  std::uint64_t bad = 0;
  Json items = Json::array();
  for (std::uint64_t n = 1; n <= count; ++n) {
    const auto item = e->item(n);
    const auto run = run_both(tester, [&] { return item.instantiate(); }, options_with(cfg, cfg.step_cap));
    const bool ok = run.left.termination == Termination::Finished && run.left.terminated_at <= n &&
                    run.left.named == Side::Left && run.right.termination == Termination::Finished &&
                    run.right.terminated_at <= n && run.right.named == Side::Right;
    bad += !ok;
    auto j = run_json(run);
    j["n"] = n;
    j["ok"] = ok;
    items.push_back(std::move(j));
  }
  return make(1, "diagonal tester names the second participant by step n", bad == 0,
              std::to_string(count - bad) + "/" + std::to_string(count) + " items named correctly by step n",
              Json{{"items", std::move(items)}}, cfg);
}

// Communicable machines under a time limit against the time-limited diagonal tester.
ScenarioResult time_limited_fail(const Config& cfg, const Zoo& zoo) {
  auto e = std::make_shared<TimeLimitedEnumerator>();
  const auto tester = diagonal_tester(e, cfg.budget());
  std::uint64_t cases = 0, bad = 0, latest = 0;
  Json runs = Json::array();
  for (const auto& name : zoo.communicable()) {
    for (const std::uint64_t t : {1, 5, 50}) {
      const auto item = RunnableItem::time_limited(zoo.machine(name), t, name + "|" + std::to_string(t));
      const auto run = run_both(tester, [&] { return item.instantiate(); }, options_with(cfg, cfg.diag_step_cap));
      ++cases;
      const bool ok = run.verdict.fails_ordinary() && run.verdict.fails_strict();
      bad += !ok;
      latest = std::max({latest, run.left.terminated_at, run.right.terminated_at});
      runs.push_back(run_json(run));
    }
  }
  return make(2, "time-limited communicable machines fail the diagonal test", bad == 0,
              std::to_string(cases - bad) + "/" + std::to_string(cases) +
                  " fail both rules; latest decision at step " + std::to_string(latest),
              Json{{"runs", std::move(runs)}}, cfg);
}

// The memory-bounded class and its diagonal tester.
ScenarioResult memory_class_fail(const Config& cfg, const Zoo&) {
  const auto mc = memory_class_enum(cfg.memory);
  std::map<std::string, std::uint64_t> counts;
  for (const auto& s : mc.screened()) ++counts[screening_name(s.outcome)];
  const bool all_screened = mc.screened().size() == mc.n();
  const auto tester = diagonal_tester(mc.egen(), cfg.budget());
  const auto opts = options_with(cfg, mc.n());
  std::uint64_t bad = 0, latest = 0;
  Json steps = Json::array();
  for (std::uint64_t r = 1; r <= mc.survivors(); ++r) {
    const auto item = mc.r()->item(r);
    const auto run = run_both(tester, [&] { return item.instantiate(); }, opts);
    const bool ok = run.verdict.fails_ordinary() && run.left.terminated_at <= mc.n() &&
                    run.right.terminated_at <= mc.n();
    bad += !ok;
    latest = std::max({latest, run.left.terminated_at, run.right.terminated_at});
    steps.push_back(std::max(run.left.terminated_at, run.right.terminated_at));
  }
  Json detail;
  detail["s"] = cfg.memory.max_states;
  detail["d"] = cfg.memory.max_initial_work;
  detail["w"] = cfg.memory.max_segment;
  detail["max_encoding_length"] = cfg.memory.max_encoding_length;
  detail["N"] = mc.n();
  detail["survivors"] = mc.survivors();
  detail["screening"] = counts;
  detail["failures"] = bad;
  detail["decision_steps"] = std::move(steps);
  std::ostringstream summary;
  summary << "N=" << mc.n() << ", " << mc.survivors() << " survivors";
  for (const auto& [k, v] : counts) summary << ", " << k << "=" << v;
  summary << "; " << (mc.survivors() - bad) << " fail by step " << latest;
  return make(3, "memory-bounded survivors fail the diagonal test by step N", all_screened && bad == 0, summary.str(),
              std::move(detail), cfg);
}

// Monte Carlo against the random second participant.
ScenarioResult prob_bound_check(const Config& cfg, const Zoo& zoo) {
  const auto source = prefixed(zoo, zoo.communicable());
  std::uint64_t cases = 0, bad = 0;
  double worst = -1;
  Json outcomes = Json::array();
  for (const auto& [p0, m] : std::vector<std::pair<double, std::uint64_t>>{{0.5, 5}, {0.5, 10}, {0.7, 3}}) {
    ProbConfig pc;
    pc.m = m;
    pc.p0 = p0;
    pc.source = source;
    pc.budget = cfg.budget();
    pc.step_cap = cfg.prob_step_cap;
    for (const auto& name : zoo.communicable()) {
      const auto o = monte_carlo(zoo_subject(zoo, name), pc, cfg.prob_trials, cfg.seed);
      ++cases;
      bad += !o.within_bound();
      worst = std::max(worst, o.estimate - o.bound);
      std::string seeds;
      for (auto s : o.seeds) seeds += std::to_string(s) + ",";
      outcomes.push_back(Json{{"subject", o.subject},
                              {"m", o.m},
                              {"p0", o.p0},
                              {"trials", o.trials},
                              {"passes", o.passes},
                              {"capped", o.capped},
                              {"estimate", o.estimate},
                              {"ci_upper", o.ci_upper},
                              {"bound", o.bound},
                              {"margin", o.margin},
                              {"within_bound", o.within_bound()},
                              {"seeds_fnv1a", fnv1a_hex(seeds)}});
    }
  }
  std::ostringstream summary;
  summary << (cases - bad) << "/" << cases << " pass rates within bound plus margin over " << cfg.prob_trials
          << " trials; largest estimate minus bound " << worst;
  return make(4, "pass rate against the random second participant obeys the bound", bad == 0, summary.str(),
              Json{{"master_seed", cfg.seed}, {"outcomes", std::move(outcomes)}}, cfg);
}

// The second participant's own machine as subject.
ScenarioResult sp_passes(const Config& cfg, const Zoo& zoo) {
  std::uint64_t cases = 0, bad = 0;
  Json runs = Json::array();
  for (const auto& tester : zoo_testers(zoo, cfg.budget())) {
    const auto run = run_both(tester, zoo_subject(zoo, sp_name(tester)), cfg.options());
    ++cases;
    bad += run.verdict.fails_ordinary();
    runs.push_back(run_json(run));
  }
  return make(5, "a tester's own second participant passes", bad == 0,
              std::to_string(cases - bad) + "/" + std::to_string(cases) + " testers passed by their own machine",
              Json{{"runs", std::move(runs)}}, cfg);
}

// Echo generators, including budgets under which the second participant diverges mid-test.
ScenarioResult echo_passes(const Config& cfg, const Zoo& zoo) {
  std::uint64_t cases = 0, bad = 0, mid_test = 0;
  Json runs = Json::array();
  for (const auto budget : {cfg.budget(), RunBudget::cycles(6), RunBudget::cycles(20)}) {
    for (const auto& tester : zoo_testers(zoo, budget)) {
      const auto cap = cfg.step_cap;
      const auto run =
          run_both(tester, [&] { return echo_generator(tester, budget, cap); }, options_with(cfg, cap, budget));
      ++cases;
      const bool ok = !run.verdict.fails_ordinary() && !run.verdict.fails_strict();
      bad += !ok;
      const bool mid = run.left.termination == Termination::SpDiverged && run.left.terminated_at > 1;
      mid_test += mid;
      auto j = run_json(run);
      j["budget_cycles"] = budget.max_cycles();
      j["sp_diverged_mid_test"] = mid;
      runs.push_back(std::move(j));
    }
  }
  return make(6, "echo generators pass the ordinary and strict tests", bad == 0 && mid_test > 0,
              std::to_string(cases - bad) + "/" + std::to_string(cases) + " pass both rules; " +
                  std::to_string(mid_test) + " with the second participant diverging mid-test",
              Json{{"runs", std::move(runs)}}, cfg);
}

struct MatrixTester {
  Tester tester;
  std::uint64_t step_cap;
};

// Every tester the tool can build from the zoo and configuration.
std::vector<MatrixTester> matrix_testers(const Config& cfg, const Zoo& zoo) {
  std::vector<MatrixTester> out;
  for (auto& t : zoo_testers(zoo, cfg.budget())) out.push_back({std::move(t), cfg.step_cap});
  out.push_back({make_tester("diag:time", cfg, zoo), cfg.step_cap});
  out.push_back({make_tester("diag:mem", cfg, zoo), cfg.step_cap});
  out.push_back({make_tester("pi", cfg, zoo), cfg.pi_universe});
  out.push_back({make_tester("comm", cfg, zoo), cfg.comm_steps});
  out.push_back({make_tester("prob:5,0.5", cfg, zoo), cfg.step_cap});
  return out;
}

ScenarioResult strict_dominance(const Config& cfg, const Zoo& zoo) {
  std::vector<std::string> subjects = zoo.names("machine");
  std::uint64_t cases = 0, violations = 0, fails_o = 0, fails_s = 0;
  Json runs = Json::array();
  for (const auto& [tester, cap] : matrix_testers(cfg, zoo)) {
    for (const auto& name : subjects) {
      const auto run = run_both(tester, zoo_subject(zoo, name), options_with(cfg, cap));
      ++cases;
      const bool o = run.verdict.fails_ordinary(), s = run.verdict.fails_strict();
      fails_o += o;
      fails_s += s;
      const bool per_side = (!run.verdict.left.failed_ordinary || run.verdict.left.failed_strict) &&
                            (!run.verdict.right.failed_ordinary || run.verdict.right.failed_strict);
      violations += (o && !s) || !per_side;
      runs.push_back(run_json(run));
    }
  }
  return make(7, "failing the ordinary test implies failing the strict test", violations == 0,
              std::to_string(cases) + " tester/subject pairs; " + std::to_string(fails_o) + " fail ordinary, " +
                  std::to_string(fails_s) + " fail strict, " + std::to_string(violations) + " violations",
              Json{{"runs", std::move(runs)}}, cfg);
}

// Dumb interrogators treat both orientations alike.
ScenarioResult dumb_symmetry(const Config& cfg, const Zoo& zoo) {
  std::vector<Tester> testers;
  for (const auto& q : plain_machines(zoo)) testers.push_back(dumb_tester(zoo.machine(q), cfg.budget()));
  testers.push_back(make_tester("diag:time", cfg, zoo));
  testers.push_back(make_tester("diag:mem", cfg, zoo));
  std::uint64_t cases = 0, bad = 0;
  Json runs = Json::array();
  for (const auto& tester : testers) {
    for (const auto& name : zoo.names("machine")) {
      const auto run = run_both(tester, zoo_subject(zoo, name), cfg.options());
      ++cases;
      const bool ok = run.left.step_count() == run.right.step_count() && expand(run.left) == expand(run.right) &&
                      run.left.termination == run.right.termination;
      // The named side, seen from the subject, is the same in both orientations.
      const bool mirrored = run.left.named.has_value() == run.right.named.has_value() &&
                            (!run.left.named || (*run.left.named == run.left.subject_side()) ==
                                                    (*run.right.named == run.right.subject_side()));
      bad += !(ok && mirrored);
      auto j = run_json(run);
      j["steps"] = run.left.step_count();
      j["symmetric"] = ok && mirrored;
      runs.push_back(std::move(j));
    }
  }
  return make(8, "dumb-interrogator tests are symmetric under mirroring", bad == 0,
              std::to_string(cases - bad) + "/" + std::to_string(cases) + " test pairs symmetric",
              Json{{"runs", std::move(runs)}}, cfg);
}

// The oracle tester over a certified universe.
ScenarioResult pi_universe(const Config& cfg, const Zoo& zoo) {
  const auto pi = make_pi(cfg, zoo);
  const auto at = prefixed(zoo, cfg.pi_prefix);
  const auto tester = pi_tester(pi, at);
  const auto opts = options_with(cfg, cfg.pi_universe);
  const Alphabet& alpha = default_alphabet();

  // Second participant against the certified facts.
  std::uint64_t sp_mismatch = 0;
  Json sp_answers = Json::array();
  auto sp = tester.sp();
  for (std::uint64_t n = 1; n <= cfg.pi_universe; ++n) {
    const auto m = at(n);
    const auto fact = certify(m, encode(m), cfg.pi_certify_cycles);
    const Word expect = num_to_word(alpha, fact && fact->halts ? *fact->cycles : 0);
    const auto got = sp->next("", cfg.budget());
    sp_mismatch += !got.answer || *got.answer != expect;
    sp_answers.push_back(got.answer ? Json(*got.answer) : Json(nullptr));
  }

  std::uint64_t bad = 0;
  Json runs = Json::array();
  for (std::uint64_t k = 1; k <= cfg.pi_universe; ++k) {
    const auto run = run_both(tester, machine_factory(at(k), "A" + std::to_string(k)), opts);
    bad += !run.verdict.fails_ordinary();
    runs.push_back(run_json(run));
  }
  Json detail;
  detail["universe"] = cfg.pi_universe;
  detail["prefix"] = cfg.pi_prefix;
  detail["certify_cycles"] = cfg.pi_certify_cycles;
  detail["budget_cycles"] = cfg.pi_budget_cycles;
  detail["facts"] = pi->facts().size();
  detail["closed"] = pi->closed();
  detail["budget_relative_negatives"] = pi->budget_relative_negatives();
  detail["sp_answers"] = std::move(sp_answers);
  detail["sp_mismatches"] = sp_mismatch;
  detail["runs"] = std::move(runs);
  return make(9, "every universe machine fails the oracle tester", pi->closed() && bad == 0 && sp_mismatch == 0,
              std::to_string(cfg.pi_universe - bad) + "/" + std::to_string(cfg.pi_universe) +
                  " universe machines fail; universe " + (pi->closed() ? "closed" : "not closed") + ", " +
                  std::to_string(pi->budget_relative_negatives()) + " budget-relative negatives",
              std::move(detail), cfg);
}

// Re-runs the other scenarios and compares their reports byte for byte.
ScenarioResult determinism(const Config& cfg, const Zoo& zoo) {
  std::uint64_t same = 0;
  Json checks = Json::array();
  for (int id = 1; id < 10; ++id) {
    const auto a = run_scenario(id, cfg, zoo).json;
    const auto b = run_scenario(id, cfg, zoo).json;
    same += a == b;
    checks.push_back(Json{{"scenario", id}, {"identical", a == b}, {"fnv1a", fnv1a_hex(a)}});
  }
  const auto tester = dumb_tester(zoo.machine("counter"), cfg.budget());
  const auto t1 = test_report_json(run_both(tester, zoo_subject(zoo, "counter"), cfg.options()), cfg.hash());
  const auto t2 = test_report_json(run_both(tester, zoo_subject(zoo, "counter"), cfg.options()), cfg.hash());
  same += t1 == t2;
  checks.push_back(Json{{"test_report", "dumb:counter vs counter"}, {"identical", t1 == t2}, {"fnv1a", fnv1a_hex(t1)}});
  const std::uint64_t total = 10;
  return make(10, "repeated runs give byte-identical reports", same == total,
              std::to_string(same) + "/" + std::to_string(total) + " reports identical on re-run",
              Json{{"checks", std::move(checks)}}, cfg);
}

}  // namespace

ScenarioResult run_scenario(int id, const Config& cfg, const Zoo& zoo) {
  switch (id) {
    case 1: return diagonal_success(cfg, zoo);
    case 2: return time_limited_fail(cfg, zoo);
    case 3: return memory_class_fail(cfg, zoo);
    case 4: return prob_bound_check(cfg, zoo);
    case 5: return sp_passes(cfg, zoo);
    case 6: return echo_passes(cfg, zoo);
    case 7: return strict_dominance(cfg, zoo);
    case 8: return dumb_symmetry(cfg, zoo);
    case 9: return pi_universe(cfg, zoo);
    case 10: return determinism(cfg, zoo);
    default: throw UsageError("scenarios are numbered 1 to " + std::to_string(kScenarioCount));
  }
}

}  // namespace turingtest::app
