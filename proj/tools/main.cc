#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "app/app.h"
#include "json.hpp"
#include "turingtest/report.h"

using namespace turingtest;
using app::Config;
using app::UsageError;
using app::Zoo;
using Json = nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kCap = 3 };

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text << '\n';
}

Json reply_json(const Reply& r) {
  Json j;
  j["answer"] = r.answer ? Json(*r.answer) : Json(nullptr);
  if (!r.answer) j["diverged"] = diverge_reason_name(r.reason);
  j["cycles"] = r.cycles;
  return j;
}

int cmd_validate(const std::string& path) {
  const auto text = read_text_file(path);
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "validate";
  j["file"] = path;
  Json violations = Json::array();
  try {
    parse_runnable(text);
  } catch (const ParseError& e) {
    if (!e.violation()) throw;
    violations.push_back(Json{{"line", e.line()}, {"message", e.message()}});
  }
  j["valid"] = violations.empty();
  j["violations"] = violations;
  std::cout << j.dump(2) << '\n';
  return violations.empty() ? kOk : kNegative;
}

int cmd_run(const Config& cfg, const std::string& path, const std::vector<std::string>& questions,
            std::optional<std::uint64_t> budget) {
  const auto doc = app::load_runnable(path);
  const auto b = RunBudget::cycles(budget.value_or(cfg.budget_cycles));
  auto p = app::runnable_factory(doc, path)();
  Json outcomes = Json::array();
  std::optional<std::size_t> diverged_at;
  for (std::size_t i = 0; i < questions.size() && !diverged_at; ++i) {
    if (!doc.machine.alphabet.is_bword(questions[i]))
      throw UsageError("question '" + questions[i] + "' uses letters outside the alphabet");
    const auto r = p->next(questions[i], b);
    Json o{{"question", questions[i]}};
    o.update(reply_json(r));
    outcomes.push_back(std::move(o));
    if (!r.answer) diverged_at = i + 1;
  }
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "run";
  j["config_hash"] = cfg.hash();
  j["machine"] = path;
  j["budget_cycles"] = b.max_cycles();
  j["outcomes"] = std::move(outcomes);
  j["diverged_at"] = diverged_at ? Json(*diverged_at) : Json(nullptr);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

struct TestFlags {
  std::string tester, subject, orientation = "both", out;
  std::optional<std::uint64_t> step_cap, budget, seed;
};

int cmd_test(Config cfg, const TestFlags& f) {
  if (f.seed) cfg.seed = *f.seed;
  if (f.budget) cfg.budget_cycles = *f.budget;
  const Zoo zoo(cfg.zoo_dir);
  const auto tester = app::make_tester(f.tester, cfg, zoo);
  const auto subject = app::make_subject(f.subject, cfg, zoo);
  auto opts = cfg.options();
  if (f.step_cap) opts.step_cap = *f.step_cap;
  if (f.orientation == "both") {
    emit(test_report_json(run_both(tester, subject, opts), cfg.hash()), f.out);
  } else {
    auto s = subject();
    const auto o = f.orientation == "left" ? Side::Left : Side::Right;
    emit(single_report_json(run_test(tester, *s, o, opts), cfg.hash()), f.out);
  }
  return kOk;
}

int cmd_enumerate(const Config& cfg, const std::string& kind, std::optional<std::uint64_t> count,
                  MemoryClassParams mem) {
  if (count && *count == 0) throw UsageError("-N must be at least 1");
  if (kind == "universal" || kind == "time") {
    if (!count) throw UsageError("-N is required for --kind " + kind);
    TimeLimitedEnumerator time;
    for (std::uint64_t n = 1; n <= *count; ++n) {
      Json j;
      j["index"] = n;
      if (kind == "universal") {
        const auto m = universal_enum(n);
        j["encoding"] = encode(m);
        j["states"] = m.state_count();
      } else {
        const auto [i, t] = unpair(n);
        const auto item = time.item(n);
        j["machine"] = i;
        j["time_limit"] = t;
        j["encoding"] = item.encoding();
      }
      std::cout << j.dump() << '\n';
    }
    return kOk;
  }
  if (kind != "mem") throw UsageError("--kind must be universal, time or mem");
  const auto mc = memory_class_enum(mem);
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t index = 0;
  for (const auto& s : mc.screened()) {
    ++counts[screening_name(s.outcome)];
    if (count && index >= *count) continue;
    Json j;
    j["index"] = ++index;
    j["encoding"] = s.encoding;
    j["outcome"] = screening_name(s.outcome);
    j["question"] = s.question;
    j["max_segment"] = s.max_segment;
    std::cout << j.dump() << '\n';
  }
  Json summary;
  summary["version"] = kReportVersion;
  summary["kind"] = "memory-class";
  summary["config_hash"] = cfg.hash();
  summary["s"] = mem.max_states;
  summary["d"] = mem.max_initial_work;
  summary["w"] = mem.max_segment;
  summary["max_encoding_length"] = mem.max_encoding_length;
  summary["N"] = mc.n();
  summary["survivors"] = mc.survivors();
  summary["screening"] = counts;
  std::cout << summary.dump() << '\n';
  return kOk;
}

int cmd_prob(Config cfg, const std::string& subject, std::uint64_t m, double p0, std::optional<std::uint64_t> trials,
             std::optional<std::uint64_t> seed) {
  if (seed) cfg.seed = *seed;
  if (trials) cfg.prob_trials = *trials;
  if (cfg.prob_trials == 0) throw UsageError("--trials must be at least 1");
  const Zoo zoo(cfg.zoo_dir);
  ProbConfig pc;
  pc.m = m;
  pc.p0 = p0;
  pc.source = app::prefixed(zoo, zoo.communicable());
  pc.budget = cfg.budget();
  pc.step_cap = cfg.prob_step_cap;
  const auto o = monte_carlo(app::make_subject(subject, cfg, zoo), pc, cfg.prob_trials, cfg.seed);
  std::cout << prob_report_json(o, cfg.hash()) << '\n';
  return kOk;
}

int cmd_scenario(const Config& cfg, std::optional<int> id, bool all, const std::string& out) {
  if (all == id.has_value()) throw UsageError("give a scenario number or --all");
  const Zoo zoo(cfg.zoo_dir);
  std::vector<int> ids;
  if (all)
    for (int i = 1; i <= app::kScenarioCount; ++i) ids.push_back(i);
  else
    ids.push_back(*id);
  bool pass = true;
  std::string text;
  for (int i : ids) {
    const auto r = app::run_scenario(i, cfg, zoo);
    std::cerr << "scenario " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << ": " << r.summary << '\n';
    pass = pass && r.pass;
    text += (text.empty() ? "" : "\n") + r.json;
  }
  emit(text, out);
  return pass ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Run imitation-game tests between machines", "turingtest"};
  cli.require_subcommand(1);
  std::optional<std::string> config_path;
  cli.add_option("--config", config_path, "JSON configuration file (default: $TURINGTEST_CONFIG)");

  std::string path;
  auto* validate = cli.add_subcommand("validate", "Check a .tm file");
  validate->add_option("file", path, "Machine file")->required();

  std::vector<std::string> questions;
  std::optional<std::uint64_t> budget;
  auto* run = cli.add_subcommand("run", "Ask a machine questions in one session");
  run->add_option("file", path, "Machine file")->required();
  run->add_option("--q", questions, "Question (repeatable, in order)")->required()->allow_extra_args(false);
  run->add_option("--budget", budget, "Cycle budget per question");

  TestFlags tf;
  auto* test = cli.add_subcommand("test", "Run a tester against a subject");
  test->add_option("--tester", tf.tester, "dumb:<sp.tm> | dsl:<i.tm>,<sp.tm> | diag:time | diag:mem[:s,d,w] | pi | "
                                          "comm | prob:<m>,<p0>")
      ->required();
  test->add_option("--subject", tf.subject,
                   "<file.tm> | item:time:<n> | item:mem:<n> | universal:<k> | echo:<tester spec>")
      ->required();
  auto* orient = test->add_option("--orientation", tf.orientation, "left, right or both")
                     ->check(CLI::IsMember({"left", "right", "both"}));
  test->add_flag_callback("--both", [&] { tf.orientation = "both"; }, "Both orientations (default)")
      ->excludes(orient);
  test->add_option("--step-cap", tf.step_cap, "Largest number of steps");
  test->add_option("--budget", tf.budget, "Cycle budget per question");
  test->add_option("--seed", tf.seed, "Seed for random second participants");
  test->add_option("--out", tf.out, "Write the report here instead of stdout");

  std::string kind;
  std::optional<std::uint64_t> count;
  MemoryClassParams mem;
  auto* enumerate = cli.add_subcommand("enumerate", "List an enumeration as JSON lines");
  enumerate->add_option("--kind", kind, "universal, time or mem")->required();
  enumerate->add_option("-N", count, "Number of items (mem: listed machines)");
  enumerate->add_option("--s", mem.max_states, "States (mem)");
  enumerate->add_option("--d", mem.max_initial_work, "Initial work tape cells (mem)");
  enumerate->add_option("--w", mem.max_segment, "Segment bound (mem)");
  enumerate->add_option("--len", mem.max_encoding_length, "Longest encoding (mem)");
  enumerate->add_option("--size-cap", mem.size_cap, "Largest class size (mem)");

  std::string subject;
  std::uint64_t m = 5;
  double p0 = 0.5;
  std::optional<std::uint64_t> trials, seed;
  auto* prob = cli.add_subcommand("prob", "Monte Carlo against the random second participant");
  prob->add_option("--subject", subject, "Subject specification")->required();
  prob->add_option("--m", m, "Sensitivity");
  prob->add_option("--p0", p0, "Probability of the zero answer");
  prob->add_option("--trials", trials, "Number of trials");
  prob->add_option("--seed", seed, "Master seed");

  std::optional<int> scenario_id;
  bool all = false;
  std::string scenario_out;
  auto* scenario = cli.add_subcommand("scenario", "Run an acceptance scenario");
  scenario->add_option("id", scenario_id, "Scenario number")->check(CLI::Range(1, app::kScenarioCount));
  scenario->add_flag("--all", all, "Every scenario");
  scenario->add_option("--out", scenario_out, "Write the reports here instead of stdout");

  // "--opt=" means an empty value; CLI11 would take the next argument instead.
  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) {
    std::string a = argv[i];
    if (a.size() > 3 && a.starts_with("--") && a.back() == '=') {
      args.emplace_back();
      a.pop_back();
    }
    args.push_back(std::move(a));
  }
  try {
    cli.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path) config_path = Config::env_path();
    const auto cfg = Config::load(config_path);
    if (*validate) return cmd_validate(path);
    if (*run) return cmd_run(cfg, path, questions, budget);
    if (*test) return cmd_test(cfg, tf);
    if (*enumerate) {
      MemoryClassParams params = cfg.memory;
      if (enumerate->count("--s")) params.max_states = mem.max_states;
      if (enumerate->count("--d")) params.max_initial_work = mem.max_initial_work;
      if (enumerate->count("--w")) params.max_segment = mem.max_segment;
      if (enumerate->count("--len")) params.max_encoding_length = mem.max_encoding_length;
      if (enumerate->count("--size-cap")) params.size_cap = mem.size_cap;
      return cmd_enumerate(cfg, kind, count, params);
    }
    if (*prob) return cmd_prob(cfg, subject, m, p0, trials, seed);
    if (*scenario) return cmd_scenario(cfg, scenario_id, all, scenario_out);
  } catch (const SizeCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const SearchCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const ProtocolError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
