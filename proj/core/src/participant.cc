#include "turingtest/participant.h"

namespace turingtest {

Reply to_reply(const QuestionOutcome& outcome) {
  if (const auto* a = std::get_if<Answered>(&outcome)) return Reply::of(a->answer, a->cycles);
  const auto& d = std::get<Diverged>(outcome);
  return Reply::diverge(d.reason, d.cycles);
}

const char* tm_type_name(TmType t) {
  switch (t) {
    case TmType::Yes: return "machine";
    case TmType::No: return "not-machine";
    case TmType::Unknown: return "unknown";
  }
  return "?";
}

void Participant::skip(std::uint64_t k) {
  if (k > 0) throw std::logic_error(describe() + ": cannot skip questions");
}

bool RestWatch::check(const MachineInstance& inst) {
  if (!inst.at_rest()) return valid_ = false;
  auto key = inst.rest_key(true);
  const bool same = valid_ && at_ + 1 == inst.questions_begun() && key == key_;
  key_ = std::move(key);
  at_ = inst.questions_begun();
  valid_ = true;
  return same;
}

MachineParticipant::MachineParticipant(CompiledPtr machine, std::string label, OraclePtr oracle)
    : inst_(std::move(machine), oracle), label_(std::move(label)), blank_(oracle == nullptr) {}

std::uint64_t MachineParticipant::steady_for(std::uint64_t max) {
  if (dead_) return repeat_dead_ ? max : 0;
  return blank_ && watch_.check(inst_) ? max : 0;
}

Reply MachineParticipant::next(const BWord& question, const RunBudget& budget) {
  if (dead_) {
    repeat_dead_ = true;
    return *dead_;
  }
  auto r = to_reply(inst_.pose_question(question, budget));
  if (r.diverged()) dead_ = Reply::diverge(r.reason, 0);
  return r;
}

ParticipantFactory machine_factory(const MachineDescription& desc, std::string label, OraclePtr oracle) {
  auto compiled = compile(desc);
  if (label.empty()) label = desc.name.empty() ? "machine" : desc.name;
  return [compiled, label, oracle] { return std::make_unique<MachineParticipant>(compiled, label, oracle); };
}

TimeLimitedParticipant::TimeLimitedParticipant(CompiledPtr machine, std::uint64_t t, std::string label)
    : inst_(std::move(machine)), t_(t), label_(std::move(label)) {
  if (t_ == 0) throw PreconditionViolation("time limit must be positive");
}

Reply TimeLimitedParticipant::next(const BWord& question, const RunBudget&) {
  if (fired_) {
    ++since_fire_;
    return Reply::of("", 0);
  }
  auto out = inst_.pose_question(question, RunBudget::cycles(t_));
  if (const auto* a = std::get_if<Answered>(&out)) return Reply::of(a->answer, a->cycles);
  fired_ = true;
  return Reply::of("", std::get<Diverged>(out).cycles);
}

std::uint64_t TimeLimitedParticipant::steady_for(std::uint64_t max) {
  if (fired_) return since_fire_ > 0 ? max : 0;
  return watch_.check(inst_) ? max : 0;
}

}  // namespace turingtest
