// Prints one line per acceptance criterion and exits nonzero if any fails.
// Each line combines the tool's own scenario verdict with checks against
// independent oracles computed here.

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "app/app.h"
#include "json.hpp"
#include "support/oracles.h"
#include "support/zoo.h"
#include "turingtest/codec.h"
#include "turingtest/enumerate.h"

using namespace turingtest;
using Json = nlohmann::json;

namespace {

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "[" << what << "] ";
    pass = pass && ok;
  }
};

// Second participant of the time-limited diagonal tester, steps 1..k:
// "a" followed by item n's n-th answer.
std::vector<std::string> diagonal_answers(std::size_t k) {
  const auto pairs = reftest::listed_pairs(k);
  std::vector<std::string> out;
  for (std::size_t n = 1; n <= k; ++n) {
    const auto [i, t] = pairs[n - 1];
    out.push_back("a" + reftest::ref_lambda_session(universal_enum(i), n, t)[n - 1]);
  }
  return out;
}

// First step at which the subject's answers part from the diagonal answers, or 0.
std::uint64_t first_difference(const std::vector<std::string>& subject, const std::vector<std::string>& sp) {
  for (std::size_t k = 0; k < sp.size(); ++k)
    if (subject[k] != sp[k]) return k + 1;
  return 0;
}

void criterion_1(Line& line, const Json& r) {
  const std::size_t count = 50;
  const auto sp = diagonal_answers(count);
  const auto pairs = reftest::listed_pairs(count);
  const auto& items = r.at("detail").at("items");
  line.require(items.size() == count, "item count");
  for (std::size_t n = 1; n <= count && n <= items.size(); ++n) {
    const auto [i, t] = pairs[n - 1];
    const auto expect = first_difference(reftest::ref_lambda_session(universal_enum(i), count, t), sp);
    const auto& it = items[n - 1];
    line.require(expect >= 1 && expect <= n, "oracle step within n");
    line.require(it.at("left").at("step") == expect && it.at("right").at("step") == expect,
                 "step matches oracle at n=" + std::to_string(n));
    line.require(it.at("left").at("named") == "left" && it.at("right").at("named") == "right", "named side");
  }
  line.detail << "; steps match the reference interpreter for n=1..50";
}

void criterion_2(Line& line, const Json& r, const app::Zoo& zoo) {
  const std::size_t horizon = 300;
  const auto sp = diagonal_answers(horizon);
  std::uint64_t checked = 0;
  for (const auto& run : r.at("detail").at("runs")) {
    const auto label = run.at("subject").get<std::string>();
    const auto bar = label.find('|');
    const auto name = label.substr(0, bar);
    const auto t = std::stoull(label.substr(bar + 1));
    const auto expect = first_difference(reftest::ref_lambda_session(zoo.machine(name), horizon, t), sp);
    const auto step = run.at("left").at("step").get<std::uint64_t>();
    line.require(expect ? step == expect : step > horizon, label + " step against oracle");
    line.require(run.at("right").at("step") == step, label + " symmetric step");
    line.require(run.at("fails_ordinary") == true && run.at("fails_strict") == true, label + " fails");
    ++checked;
  }
  line.require(checked == zoo.communicable().size() * 3, "run count");
  line.detail << "; first " << horizon << " steps match the reference interpreter";
}

void criterion_3(Line& line, const Json& r) {
  const auto& d = r.at("detail");
  const auto n = d.at("N").get<std::uint64_t>();
  std::uint64_t total = 0;
  for (const auto& [k, v] : d.at("screening").items()) total += v.get<std::uint64_t>();
  line.require(total == n, "every member screened");
  line.require(d.at("screening").value("survived", 0ULL) == d.at("survivors").get<std::uint64_t>(), "survivors");
  const auto& steps = d.at("decision_steps");
  line.require(steps.size() == d.at("survivors").get<std::size_t>(), "one run per survivor");
  // Survivor r is the r-th item, so the diagonal parts from it by step r.
  for (std::size_t i = 0; i < steps.size(); ++i) line.require(steps[i].get<std::uint64_t>() <= i + 1, "step <= r");
  line.detail << "; survivor r decided by step r";
}

void criterion_4(Line& line, const Json& r, std::uint64_t trials) {
  bool saw_0625 = false;
  for (const auto& o : r.at("detail").at("outcomes")) {
    const double p0 = o.at("p0"), m = o.at("m");
    const double p = std::max(p0, 1 - p0);
    const double bound = std::pow(p, m) / (1 - p);
    const double margin = bound < 1 ? 3 * std::sqrt(bound * (1 - bound) / static_cast<double>(trials)) : 0;
    const double estimate = o.at("passes").get<double>() / static_cast<double>(trials);
    line.require(o.at("trials") == trials && trials >= 2000, "trials");
    line.require(std::abs(o.at("bound").get<double>() - bound) < 1e-12, "bound arithmetic");
    line.require(estimate <= bound + margin, o.at("subject").get<std::string>() + " within bound");
    if (p0 == 0.5 && m == 5) saw_0625 = saw_0625 || bound == 0.0625;
  }
  line.require(saw_0625, "bound 0.0625 at (0.5, 5)");
  line.detail << "; bounds recomputed";
}

void count_runs(Line& line, const Json& r, std::size_t expect) {
  line.require(r.at("detail").at("runs").size() == expect, "run count");
}

void criterion_7(Line& line, const Json& r) {
  for (const auto& run : r.at("detail").at("runs"))
    line.require(!(run.at("fails_ordinary") == true && run.at("fails_strict") == false), "dominance");
}

void criterion_9(Line& line, const Json& r, const app::Config& cfg) {
  const auto& d = r.at("detail");
  line.require(d.at("closed") == true, "closed universe");
  line.require(d.contains("budget_relative_negatives"), "budget relativity reported");
  const auto& answers = d.at("sp_answers");
  line.require(answers.size() == cfg.pi_universe, "answer count");
  for (std::uint64_t n = 1; n <= cfg.pi_universe && n <= answers.size(); ++n) {
    const auto m = n <= cfg.pi_prefix.size() ? reftest::zoo(cfg.pi_prefix[n - 1])
                                             : universal_enum(n - cfg.pi_prefix.size());
    const auto ref = reftest::RefMachine(m).ask(encode(m), cfg.pi_certify_cycles);
    line.require(answers[n - 1] == reftest::ref_number_word(ref.halted ? ref.cycles : 0),
                 "cycle count of machine " + std::to_string(n));
  }
  for (const auto& run : d.at("runs")) line.require(run.at("fails_ordinary") == true, "universe machine fails");
  line.detail << "; answers match the reference interpreter";
}

}  // namespace

int main() {
  const auto cfg = app::Config::load(app::Config::env_path());
  const app::Zoo zoo(cfg.zoo_dir);
  std::map<int, std::string> reports;
  bool all = true;
  auto finish = [&](int id, Line& line) {
    std::cout << "criterion " << id << ": " << (line.pass ? "PASS" : "FAIL") << ": " << line.detail.str() << '\n';
    std::cout.flush();
    all = all && line.pass;
  };

  std::size_t plain = 0;
  for (const auto& e : zoo.entries()) plain += e.role == "machine" && !e.time_limit;
  const std::size_t zoo_testers = plain + zoo.names("interrogator").size() * zoo.communicable().size();
  for (int id = 1; id <= 9; ++id) {
    Line line;
    try {
      const auto s = app::run_scenario(id, cfg, zoo);
      reports[id] = s.json;
      line.require(s.pass, "scenario verdict");
      line.detail << s.summary;
      const auto r = Json::parse(s.json);
      switch (id) {
        case 1: criterion_1(line, r); break;
        case 2: criterion_2(line, r, zoo); break;
        case 3: criterion_3(line, r); break;
        case 4: criterion_4(line, r, cfg.prob_trials); break;
        case 5: count_runs(line, r, zoo_testers); break;
        case 6: count_runs(line, r, 3 * zoo_testers); break;
        case 7: criterion_7(line, r); break;
        case 8: break;
        case 9: criterion_9(line, r, cfg); break;
      }
    } catch (const std::exception& e) {
      line.require(false, std::string("exception: ") + e.what());
    }
    finish(id, line);
  }

  Line line;
  std::uint64_t same = 0;
  for (const auto& [id, first] : reports) same += app::run_scenario(id, cfg, zoo).json == first;
  line.require(same == reports.size() && reports.size() == 9, "identical re-runs");
  line.detail << same << "/" << reports.size() << " scenario reports byte-identical on re-run";
  finish(10, line);
  return all ? 0 : 1;
}
