#include "turingtest/vm.h"

#include <algorithm>
#include <string_view>

namespace turingtest {

RunBudget RunBudget::cycles(std::uint64_t max_cycles) {
  if (max_cycles == 0) throw PreconditionViolation("a bounded budget must be positive");
  RunBudget b;
  b.max_ = max_cycles;
  return b;
}

std::uint64_t RunBudget::max_cycles() const {
  if (!max_) throw PreconditionViolation("budget is unlimited");
  return *max_;
}

const char* diverge_reason_name(DivergeReason r) {
  return r == DivergeReason::Stuck ? "stuck" : "budget-exhausted";
}

CompiledMachine::CompiledMachine(const MachineDescription& desc) : desc_(desc) {
  require_valid(desc_);
  states_ = static_cast<int>(desc_.states.size());
  work_chars_ = desc_.work_alphabet();
  work_ = static_cast<int>(work_chars_.size());
  b_ = static_cast<int>(desc_.alphabet.size()) + 1;
  if (work_ > 255) throw PreconditionViolation("work alphabet too large");

  auto wcode = [this](char c) {
    return static_cast<int>(work_chars_.find(c));
  };
  final_.assign(states_, -1);
  for (const auto& f : desc_.finals) final_[f.state] = static_cast<int>(f.mark);

  table_.assign(static_cast<std::size_t>(states_) * work_ * b_ * b_, -1);
  steps_.reserve(desc_.transitions.size());
  for (const auto& t : desc_.transitions) {
    const auto idx = ((static_cast<std::size_t>(t.key.state) * work_ + wcode(t.key.work)) * b_ +
                      desc_.alphabet.code(t.key.input)) * b_ + desc_.alphabet.code(t.key.oracle);
    table_[idx] = static_cast<std::int32_t>(steps_.size());
    steps_.push_back(Step{t.action.next, static_cast<std::uint8_t>(wcode(t.action.write)),
                          t.action.work_move, t.action.input_move, t.action.oracle_move,
                          static_cast<std::int16_t>(t.action.emit ? desc_.alphabet.code(*t.action.emit) : -1)});
  }
  for (char c : desc_.initial_work) initial_work_.push_back(static_cast<std::uint8_t>(wcode(c)));
}

CompiledPtr compile(const MachineDescription& desc) { return std::make_shared<const CompiledMachine>(desc); }

std::size_t ConfigSnapshotHash::operator()(const ConfigSnapshot& s) const {
  std::size_t h = std::hash<std::string_view>{}(
      std::string_view(reinterpret_cast<const char*>(s.segment.data()), s.segment.size()));
  h ^= std::hash<std::int64_t>{}(s.head_offset) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<int>{}(s.state) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

MachineInstance::MachineInstance(const MachineDescription& desc, OraclePtr oracle)
    : MachineInstance(compile(desc), std::move(oracle)) {}

MachineInstance::MachineInstance(CompiledPtr machine, OraclePtr oracle)
    : machine_(std::move(machine)), oracle_(std::move(oracle)) {
  blank_oracle_ = !oracle_ || oracle_->is_blank();
  tape_ = machine_->initial_work();
  state_ = machine_->initial();
}

void MachineInstance::write_at(std::int64_t cell, std::uint8_t code) {
  if (tape_.empty()) {
    if (code == 0) return;
    origin_ = cell;
  }
  std::int64_t i = cell - origin_;
  if (i < 0) {
    if (code == 0) return;
    const std::int64_t grow = std::max<std::int64_t>(-i, static_cast<std::int64_t>(tape_.size()));
    tape_.insert(tape_.begin(), static_cast<std::size_t>(grow), 0);
    origin_ -= grow;
    i += grow;
  } else if (i >= static_cast<std::int64_t>(tape_.size())) {
    if (code == 0) return;
    tape_.resize(static_cast<std::size_t>(i) + 1, 0);
  }
  tape_[static_cast<std::size_t>(i)] = code;
}

void MachineInstance::begin_question(const BWord& question) {
  if (!at_rest()) throw PreconditionViolation("a question is already in progress");
  const auto& alpha = machine_->alphabet();
  input_.clear();
  for (char c : question) {
    const int code = alpha.code(c);
    if (code < 0) throw PreconditionViolation("question is not a word over B");
    input_.push_back(static_cast<std::uint8_t>(code));
  }
  started_ = true;
  state_ = machine_->initial();
  input_head_ = oracle_head_ = 0;
  output_.clear();
  cycles_question_ = 0;
  ++questions_;
  status_ = machine_->is_final(state_) ? Status::Halted : Status::Running;
}

MachineInstance::Status MachineInstance::step() {
  if (status_ != Status::Running) return status_;
  const std::uint8_t in = input_head_ < input_.size() ? input_[input_head_] : 0;
  const int orc = blank_oracle_ ? 0 : machine_->alphabet().code(oracle_->read(oracle_head_));
  const auto* s = machine_->lookup(state_, work_at(head_), in, orc);
  if (!s) return status_ = Status::Stuck;
  write_at(head_, s->write);
  if (s->work_move == Move::Right) {
    if (++head_ > scanned_max_) scanned_max_ = head_;
  } else if (s->work_move == Move::Left) {
    if (--head_ < scanned_min_) scanned_min_ = head_;
  }
  if (s->input_move == Move::Right) ++input_head_;
  else if (s->input_move == Move::Left && input_head_ > 0) --input_head_;
  if (s->oracle_move == Move::Right) ++oracle_head_;
  else if (s->oracle_move == Move::Left && oracle_head_ > 0) --oracle_head_;
  if (s->emit >= 0) output_.push_back(static_cast<std::uint8_t>(s->emit));
  state_ = s->next;
  ++cycles_question_;
  ++cycles_total_;
  if (machine_->is_final(state_)) status_ = Status::Halted;
  return status_;
}

MachineInstance::Status MachineInstance::run(std::uint64_t max_steps) {
  for (std::uint64_t i = 0; i < max_steps && status_ == Status::Running; ++i) step();
  return status_;
}

Word MachineInstance::current_answer() const {
  Word out;
  const auto& alpha = machine_->alphabet();
  for (auto c : output_) {
    if (c == 0) break;
    out.push_back(alpha.symbol(c));
  }
  return out;
}

QuestionOutcome MachineInstance::pose_question(const BWord& question, const RunBudget& budget) {
  begin_question(question);
  if (budget.bounded()) {
    run(budget.max_cycles());
  } else {
    while (status_ == Status::Running) step();
  }
  switch (status_) {
    case Status::Halted:
      return Answered{current_answer(), cycles_question_, static_cast<Mark>(machine_->final_code(state_))};
    case Status::Stuck:
      return Diverged{DivergeReason::Stuck, cycles_question_};
    case Status::Running:
      break;
  }
  return Diverged{DivergeReason::BudgetExhausted, cycles_question_};
}

ConfigSnapshot MachineInstance::config_snapshot() const {
  ConfigSnapshot s;
  s.state = state_;
  s.head_offset = head_ - scanned_min_;
  s.segment.reserve(scanned_segment_length());
  for (std::int64_t c = scanned_min_; c <= scanned_max_; ++c) s.segment.push_back(work_at(c));
  return s;
}

bool MachineInstance::matches(const ConfigSnapshot& s) const {
  if (s.state != state_ || s.head_offset != head_ - scanned_min_ ||
      s.segment.size() != scanned_segment_length())
    return false;
  for (std::size_t i = 0; i < s.segment.size(); ++i) {
    if (s.segment[i] != work_at(scanned_min_ + static_cast<std::int64_t>(i))) return false;
  }
  return true;
}

std::string MachineInstance::rest_key(bool translation_invariant) const {
  std::size_t lo = 0, hi = tape_.size();
  while (lo < hi && tape_[lo] == 0) ++lo;
  while (hi > lo && tape_[hi - 1] == 0) --hi;
  std::string key;
  auto put = [&key](std::int64_t v) {
    key.append(reinterpret_cast<const char*>(&v), sizeof v);
  };
  const std::int64_t first = lo == hi ? head_ : origin_ + static_cast<std::int64_t>(lo);
  if (translation_invariant) {
    put(head_ - first);
  } else {
    put(head_);
    put(first);
  }
  key.append(reinterpret_cast<const char*>(tape_.data()) + lo, hi - lo);
  return key;
}

std::string MachineInstance::work_tape_text() const {
  std::size_t lo = 0, hi = tape_.size();
  while (lo < hi && tape_[lo] == 0) ++lo;
  while (hi > lo && tape_[hi - 1] == 0) --hi;
  std::string out;
  for (std::size_t i = lo; i < hi; ++i) out.push_back(machine_->work_char(tape_[i]));
  return out;
}

SessionResult answers(const MachineDescription& desc, const std::vector<BWord>& questions,
                      const RunBudget& budget, OraclePtr oracle) {
  if (questions.empty()) throw PreconditionViolation("at least one question is required");
  MachineInstance inst(desc, std::move(oracle));
  SessionResult r;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    auto out = inst.pose_question(questions[i], budget);
    if (auto* a = std::get_if<Answered>(&out)) {
      r.answers.push_back(std::move(a->answer));
      r.cycles.push_back(a->cycles);
    } else {
      r.diverged_at = i + 1;
      r.reason = std::get<Diverged>(out).reason;
      break;
    }
  }
  return r;
}

bool recognizes(const MachineDescription& machine, const Word& encoding, const RunBudget& budget,
                OraclePtr oracle) {
  return answers(machine, {encoding}, budget, std::move(oracle)).complete();
}

}  // namespace turingtest
