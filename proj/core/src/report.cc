#include "turingtest/report.h"

#include <cstdio>

#include "json.hpp"

namespace turingtest {

using Json = nlohmann::ordered_json;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json reply_json(const Reply& r) {
  Json j;
  if (r.answer) {
    j["answer"] = *r.answer;
  } else {
    j["answer"] = nullptr;
    j["diverged"] = diverge_reason_name(r.reason);
  }
  j["cycles"] = r.cycles;
  return j;
}

Json transcript(const Transcript& t) {
  Json j;
  j["version"] = kReportVersion;
  j["tester_id"] = t.tester_id;
  j["subject_id"] = t.subject_id;
  j["orientation"] = side_name(t.orientation);
  Json budgets;
  budgets["per_question_cycles"] = t.options.budget.bounded() ? Json(t.options.budget.max_cycles()) : Json(nullptr);
  j["budgets"] = budgets;
  j["step_cap"] = t.options.step_cap;
  j["seed"] = t.options.seed;
  j["oracle"] = t.options.oracle;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json e;
    e["n"] = s.n;
    e["repeat"] = s.repeat;
    e["question"] = s.question;
    e["sp"] = reply_json(s.sp);
    e["subject"] = reply_json(s.subject);
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  Json term;
  term["kind"] = termination_name(t.termination);
  term["step"] = t.terminated_at;
  if (t.named) term["named"] = side_name(*t.named);
  j["termination"] = term;
  return j;
}

Json orientation_json(const OrientationVerdict& v, bool ordinary) {
  Json j;
  j["failed"] = ordinary ? v.failed_ordinary : v.failed_strict;
  j["reason"] = v.reason;
  return j;
}

Json verdict_json(const Verdict& v, bool ordinary) {
  Json j;
  j["left"] = orientation_json(v.left, ordinary);
  j["right"] = orientation_json(v.right, ordinary);
  j["fails_test"] = ordinary ? v.fails_ordinary() : v.fails_strict();
  return j;
}

}  // namespace

std::string transcript_json(const Transcript& t) { return transcript(t).dump(2); }

std::string test_report_json(const TestRun& run, const std::string& config_hash) {
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "test";
  j["config_hash"] = config_hash;
  j["tester_id"] = run.left.tester_id;
  j["subject_id"] = run.left.subject_id;
  j["left"] = transcript(run.left);
  j["right"] = transcript(run.right);
  j["verdict_ordinary"] = verdict_json(run.verdict, true);
  j["verdict_strict"] = verdict_json(run.verdict, false);
  return j.dump(2);
}

std::string single_report_json(const Transcript& t, const std::string& config_hash) {
  const auto v = evaluate_orientation(t);
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "test";
  j["config_hash"] = config_hash;
  j["tester_id"] = t.tester_id;
  j["subject_id"] = t.subject_id;
  j[side_name(t.orientation)] = transcript(t);
  j["verdict_ordinary"] = Json{{side_name(t.orientation), orientation_json(v, true)}};
  j["verdict_strict"] = Json{{side_name(t.orientation), orientation_json(v, false)}};
  return j.dump(2);
}

std::string prob_report_json(const ProbOutcome& o, const std::string& config_hash) {
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = "prob";
  j["config_hash"] = config_hash;
  j["subject"] = o.subject;
  j["m"] = o.m;
  j["p0"] = o.p0;
  j["trials"] = o.trials;
  j["passes"] = o.passes;
  j["capped"] = o.capped;
  j["estimate"] = o.estimate;
  j["ci_upper"] = o.ci_upper;
  j["bound"] = o.bound;
  j["margin"] = o.margin;
  j["within_bound"] = o.within_bound();
  j["master_seed"] = o.master_seed;
  j["seeds"] = o.seeds;
  return j.dump(2);
}

}  // namespace turingtest
