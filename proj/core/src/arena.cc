#include "turingtest/arena.h"

#include <algorithm>
#include <limits>
#include <mutex>

#include "turingtest/codec.h"

namespace turingtest {

const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Finished: return "finished";
    case Termination::SpDiverged: return "sp-diverged";
    case Termination::SubjectDiverged: return "subject-diverged";
    case Termination::StepCapReached: return "step-cap";
    case Termination::InterrogatorStalled: return "interrogator-stalled";
  }
  return "?";
}

std::uint64_t Transcript::step_count() const {
  std::uint64_t n = 0;
  for (const auto& s : steps) n += s.repeat;
  return n;
}

namespace {

void record(Transcript& tr, TranscriptStep step) {
  if (!tr.steps.empty()) {
    auto& last = tr.steps.back();
    if (last.question == step.question && last.sp == step.sp && last.subject == step.subject) {
      ++last.repeat;
      return;
    }
  }
  tr.steps.push_back(std::move(step));
}

}  // namespace

Transcript run_test(const Tester& tester, Participant& subject, Orientation orientation, const TestOptions& options) {
  if (options.step_cap == 0) throw PreconditionViolation("step cap must be at least 1");
  Transcript tr;
  tr.tester_id = tester.id;
  tr.subject_id = subject.describe();
  tr.orientation = orientation;
  tr.options = options;

  auto interrogator = tester.interrogator();
  auto sp = tester.sp();
  Decision d = interrogator->start();
  std::uint64_t n = 0;
  for (;;) {
    if (const auto* f = std::get_if<Finish>(&d)) {
      tr.termination = Termination::Finished;
      tr.named = f->named;
      break;
    }
    if (std::holds_alternative<Stalled>(d)) {
      tr.termination = Termination::InterrogatorStalled;
      break;
    }
    if (n >= options.step_cap) {
      tr.termination = Termination::StepCapReached;
      break;
    }
    const BWord question = std::get<Continue>(d).question;
    ++n;
    Reply sp_reply = sp->next(question, options.budget);
    Reply subject_reply = subject.next(question, options.budget);
    record(tr, {n, 1, question, sp_reply, subject_reply});

    if (subject_reply.diverged()) {
      tr.termination = Termination::SubjectDiverged;
      break;
    }
    if (sp_reply.diverged()) {
      tr.termination = Termination::SpDiverged;
      break;
    }
    const Word& left = orientation == Side::Left ? *sp_reply.answer : *subject_reply.answer;
    const Word& right = orientation == Side::Left ? *subject_reply.answer : *sp_reply.answer;
    d = interrogator->on_answers(left, right);

    // Runs of identical empty-question steps are skipped when everybody
    // vouches that nothing changes.
    const auto* c = std::get_if<Continue>(&d);
    if (c && c->question.empty() && question.empty() && interrogator->skippable() && left == right &&
        n < options.step_cap) {
      const std::uint64_t room = options.step_cap - n;
      const std::uint64_t a = sp->steady_for(room);
      const std::uint64_t b = subject.steady_for(room);
      if (const std::uint64_t k = std::min(a, b); k > 0) {
        sp->skip(k);
        subject.skip(k);
        interrogator->skip(k);
        tr.steps.back().repeat += k;
        n += k;
      }
    }
  }
  tr.terminated_at = n;
  return tr;
}

OrientationVerdict evaluate_orientation(const Transcript& t) {
  OrientationVerdict v;
  switch (t.termination) {
    case Termination::Finished:
      if (t.named == t.orientation) {
        v.failed_ordinary = v.failed_strict = true;
        v.reason = "named correctly at step " + std::to_string(t.terminated_at);
      } else {
        v.reason = "named incorrectly at step " + std::to_string(t.terminated_at);
      }
      break;
    case Termination::SubjectDiverged: {
      const bool sp_answered = !t.steps.back().sp.diverged();
      v.failed_strict = true;
      v.failed_ordinary = sp_answered;
      v.reason = std::string("subject diverged at step ") + std::to_string(t.terminated_at) +
                 (sp_answered ? " where the second participant answered" : " where the second participant diverged");
      break;
    }
    case Termination::SpDiverged:
      v.reason = "second participant diverged at step " + std::to_string(t.terminated_at);
      break;
    case Termination::StepCapReached:
      v.reason = "step cap " + std::to_string(t.terminated_at) + " reached";
      break;
    case Termination::InterrogatorStalled:
      v.reason = "interrogator stalled at step " + std::to_string(t.terminated_at);
      break;
  }
  return v;
}

Verdict evaluate(const Transcript& left, const Transcript& right) {
  if (left.orientation != Side::Left || right.orientation != Side::Right)
    throw std::invalid_argument("expected a left and a right transcript");
  if (left.tester_id != right.tester_id || left.subject_id != right.subject_id)
    throw std::invalid_argument("transcripts come from different tests");
  return {evaluate_orientation(left), evaluate_orientation(right)};
}

TestRun run_both(const Tester& tester, const ParticipantFactory& subject, const TestOptions& options) {
  auto l = subject();
  auto r = subject();
  TestRun run{run_test(tester, *l, Side::Left, options), run_test(tester, *r, Side::Right, options), {}};
  run.verdict = evaluate(run.left, run.right);
  return run;
}

// Dumb interrogator.

DumbInterrogator::DumbInterrogator(Alpha alpha, std::string label)
    : alpha_(std::move(alpha)), label_(std::move(label)) {}

Decision DumbInterrogator::on_answers(const Word& left, const Word& right) {
  ++n_;
  if (left == right) return Continue{""};
  const Reply alpha = alpha_(n_);
  if (alpha.diverged()) return Stalled{alpha.reason};
  if (*alpha.answer == left) return Finish{Side::Left};
  if (*alpha.answer == right) return Finish{Side::Right};
  throw ProtocolError("neither answer at step " + std::to_string(n_) + " equals the second participant's");
}

DumbInterrogator::Alpha fresh_alpha(ParticipantFactory q, RunBudget budget) {
  return [q = std::move(q), budget](std::uint64_t n) {
    auto p = q();
    Reply r;
    for (std::uint64_t i = 0; i < n;) {
      r = p->next("", budget);
      ++i;
      if (r.diverged()) return r;
      if (i == n) break;
      const std::uint64_t k = p->steady_for(n - i);
      if (k >= n - i) return r;
      p->skip(k);
      i += k;
    }
    return r;
  };
}

InterrogatorPtr dumb_interrogator(const MachineDescription& q, const RunBudget& budget) {
  const std::string name = q.name.empty() ? "q" : q.name;
  return std::make_unique<DumbInterrogator>(fresh_alpha(machine_factory(q), budget), "I_" + name);
}

// DSL interrogator.

MachineInterrogator::MachineInterrogator(const MachineDescription& m, RunBudget budget)
    : inst_(m), budget_(budget), label_(m.name.empty() ? "interrogator" : m.name) {}

Decision MachineInterrogator::ask(const BWord& q) {
  if (stalled_) return Stalled{};
  const auto out = inst_.pose_question(q, budget_);
  if (const auto* dv = std::get_if<Diverged>(&out)) {
    stalled_ = true;
    return Stalled{dv->reason};
  }
  const auto& a = std::get<Answered>(out);
  switch (a.mark) {
    case Mark::Left: return Finish{Side::Left};
    case Mark::Right: return Finish{Side::Right};
    case Mark::None: break;
  }
  return Continue{a.answer};
}

Decision MachineInterrogator::start() { return ask(""); }

Decision MachineInterrogator::on_answers(const Word& left, const Word& right) {
  BWord q = left;
  q += inst_.machine().alphabet().blank();
  q += right;
  return ask(q);
}

// Testers.

Tester dumb_tester(const MachineDescription& q, const RunBudget& budget) {
  const std::string name = q.name.empty() ? "q" : q.name;
  Tester t;
  t.id = "dumb:" + name;
  t.interrogator = [q, budget] { return dumb_interrogator(q, budget); };
  t.sp = machine_factory(q, name);
  return t;
}

Tester diagonal_tester(EnumeratorPtr e, const RunBudget& budget) {
  Tester t;
  t.id = "diag:" + e->name();
  t.interrogator = [e, budget] {
    auto gen = std::make_shared<DiagonalGenerator>(e, budget);
    return std::make_unique<DumbInterrogator>([gen](std::uint64_t n) { return Reply::of(gen->answer_at(n)); },
                                              "I_diag(" + e->name() + ")");
  };
  t.sp = [e, budget] { return diagonal_generator(e, budget); };
  return t;
}

Tester machine_tester(const MachineDescription& i, const MachineDescription& q, const RunBudget& budget) {
  const std::string qname = q.name.empty() ? "q" : q.name;
  Tester t;
  t.id = (i.name.empty() ? std::string("i") : i.name) + ":" + qname;
  t.interrogator = [i, budget] { return std::make_unique<MachineInterrogator>(i, budget); };
  t.sp = machine_factory(q, qname);
  return t;
}

namespace {

MachineSource or_universal(MachineSource s) {
  if (s) return s;
  return [](std::uint64_t n) { return universal_enum(n); };
}

// Word of the cycle count when A_n recognizes itself, the word of zero otherwise.
class PiSp final : public Participant {
 public:
  PiSp(std::shared_ptr<const BoundedPi> pi, MachineSource at) : pi_(std::move(pi)), at_(std::move(at)) {}
  Reply next(const BWord&, const RunBudget&) override {
    const auto m = at_(++n_);
    const auto a = pi_->query(m, encode(m));
    const auto& alpha = m.alphabet;
    if (!a.recognizes) return Reply::of(num_to_word(alpha, 0));
    std::uint64_t t = 0;
    if (a.cycles) {
      t = *a.cycles;
    } else {
      MachineInstance inst(m);
      const auto out = inst.pose_question(encode(m), pi_->budget());
      if (!answered(out)) return Reply::of(num_to_word(alpha, 0));
      t = std::get<Answered>(out).cycles;
    }
    return Reply::of(num_to_word(alpha, t));
  }
  std::string describe() const override { return "pi-sp"; }
  TmType type() const override { return TmType::No; }

 private:
  std::shared_ptr<const BoundedPi> pi_;
  MachineSource at_;
  std::uint64_t n_ = 0;
};

class PiInterrogator final : public Interrogator {
 public:
  explicit PiInterrogator(MachineSource at) : at_(std::move(at)) {}
  Decision start() override { return Continue{""}; }
  Decision on_answers(const Word& left, const Word& right) override {
    ++n_;
    if (left == right) return Continue{""};
    const auto m = at_(n_);
    const Word zero = num_to_word(m.alphabet, 0);
    const Word enc = encode(m);
    // Exact check: A_n answers its own encoding in exactly t cycles. The
    // empty word is no number and always fails.
    auto verified = [&](const Word& w) {
      if (w.empty()) return false;
      const auto t = word_to_num(m.alphabet, w);
      MachineInstance inst(m);
      const auto out = inst.pose_question(enc, RunBudget::cycles(t));
      return answered(out) && std::get<Answered>(out).cycles == t;
    };
    const bool l_checked = left != zero, r_checked = right != zero;
    const bool l_ok = l_checked && verified(left);
    if (l_checked && !l_ok) return Finish{Side::Right};
    const bool r_ok = r_checked && verified(right);
    if (r_checked && !r_ok) return Finish{Side::Left};
    // A verified count beats a zero: the zero side is not the second participant.
    if (l_ok && !r_checked) return Finish{Side::Left};
    if (r_ok && !l_checked) return Finish{Side::Right};
    return Continue{""};
  }
  std::string describe() const override { return "I_pi"; }
  bool skippable() const override { return true; }
  void skip(std::uint64_t k) override { n_ += k; }

 private:
  MachineSource at_;
  std::uint64_t n_ = 0;
};

}  // namespace

MachineSource prefixed_source(std::vector<MachineDescription> prefix) {
  auto p = std::make_shared<const std::vector<MachineDescription>>(std::move(prefix));
  return [p](std::uint64_t n) { return n <= p->size() ? (*p)[n - 1] : universal_enum(n - p->size()); };
}

Tester pi_tester(std::shared_ptr<const BoundedPi> pi, MachineSource machine_at) {
  auto at = or_universal(std::move(machine_at));
  Tester t;
  t.id = "pi";
  t.interrogator = [at] { return std::make_unique<PiInterrogator>(at); };
  t.sp = [pi, at] { return std::make_unique<PiSp>(pi, at); };
  t.sp_type = TmType::No;
  return t;
}

// Communication tester.

namespace {

// The interrogator's question sequence and the second participant's answers,
// computed once and shared by both.
class CommPlan {
 public:
  CommPlan(std::shared_ptr<const BoundedPi> pi, CommOptions o)
      : pi_(std::move(pi)), opt_(std::move(o)), at_(or_universal(opt_.machine_at)) {}

  // mu_n and the second participant's answer at step n.
  std::pair<Word, Word> at(std::uint64_t n) {
    std::lock_guard lock(mu_);
    while (mus_.size() < n) extend();
    return {mus_[n - 1], sp_[n - 1]};
  }

 private:
  // A_k answers mu_1..mu_{n-1} and then enc(A_k); returns its last answer.
  std::optional<Word> probe(const MachineDescription& m, const Word& enc) const {
    MachineInstance inst(m);
    for (const auto& q : mus_)
      if (!answered(inst.pose_question(q, opt_.budget))) return std::nullopt;
    if (mus_.empty()) {
      // The first question is the machine's own encoding: the oracle knows.
      const auto a = pi_->query(m, enc);
      if (!a.recognizes) return std::nullopt;
    }
    const auto out = inst.pose_question(enc, opt_.budget);
    if (!answered(out)) return std::nullopt;
    return std::get<Answered>(out).answer;
  }

  void extend() {
    for (std::uint64_t k = r_ + 1; k <= opt_.search_cap; ++k) {
      const auto m = at_(k);
      const Word enc = encode(m);
      if (auto last = probe(m, enc)) {
        r_ = k;
        mus_.push_back(enc);
        sp_.push_back(bar(m.alphabet, *last));
        return;
      }
    }
    throw SearchCapExceeded("no machine up to index " + std::to_string(opt_.search_cap) + " answers questions 1.." +
                            std::to_string(mus_.size() + 1));
  }

  std::shared_ptr<const BoundedPi> pi_;
  CommOptions opt_;
  MachineSource at_;
  std::mutex mu_;
  std::uint64_t r_ = 0;
  std::vector<Word> mus_, sp_;
};

class CommInterrogator final : public Interrogator {
 public:
  explicit CommInterrogator(std::shared_ptr<CommPlan> plan) : plan_(std::move(plan)) {}
  Decision start() override { return Continue{plan_->at(1).first}; }
  Decision on_answers(const Word& left, const Word& right) override {
    ++n_;
    if (left == right) return Continue{plan_->at(n_ + 1).first};
    const Word sp = plan_->at(n_).second;
    if (left == sp) return Finish{Side::Left};
    if (right == sp) return Finish{Side::Right};
    throw ProtocolError("neither answer at step " + std::to_string(n_) + " is the second participant's");
  }
  std::string describe() const override { return "I_comm"; }
  TmType type() const override { return TmType::No; }

 private:
  std::shared_ptr<CommPlan> plan_;
  std::uint64_t n_ = 0;
};

class CommSp final : public Participant {
 public:
  explicit CommSp(std::shared_ptr<CommPlan> plan) : plan_(std::move(plan)) {}
  Reply next(const BWord&, const RunBudget&) override { return Reply::of(plan_->at(++n_).second); }
  std::string describe() const override { return "comm-sp"; }
  TmType type() const override { return TmType::Yes; }

 private:
  std::shared_ptr<CommPlan> plan_;
  std::uint64_t n_ = 0;
};

}  // namespace

Tester comm_tester(std::shared_ptr<const BoundedPi> pi, CommOptions options) {
  auto plan = std::make_shared<CommPlan>(std::move(pi), std::move(options));
  Tester t;
  t.id = "comm";
  t.interrogator = [plan] { return std::make_unique<CommInterrogator>(plan); };
  t.sp = [plan] { return std::make_unique<CommSp>(plan); };
  t.interrogator_type = TmType::No;
  return t;
}

std::vector<Word> comm_questions(const BoundedPi& pi, const CommOptions& options, std::uint64_t n) {
  // The plan never outlives this call, so a non-owning pointer suffices.
  CommPlan plan(std::shared_ptr<const BoundedPi>(&pi, [](const BoundedPi*) {}), options);
  std::vector<Word> out;
  for (std::uint64_t i = 1; i <= n; ++i) out.push_back(plan.at(i).first);
  return out;
}

// Echo generator.

namespace {

class EchoParticipant final : public Participant {
 public:
  EchoParticipant(std::vector<std::pair<Word, std::uint64_t>> runs, std::string label)
      : runs_(std::move(runs)), label_(std::move(label)) {}

  Reply next(const BWord&, const RunBudget&) override {
    while (run_ < runs_.size() && used_ == runs_[run_].second) {
      ++run_;
      used_ = 0;
    }
    if (run_ == runs_.size()) return Reply::of("");
    ++used_;
    return Reply::of(runs_[run_].first);
  }
  std::string describe() const override { return label_; }
  TmType type() const override { return TmType::Yes; }
  std::uint64_t steady_for(std::uint64_t max) override {
    if (run_ == runs_.size()) return max;
    const std::uint64_t left = runs_[run_].second - used_;
    if (left > 0) return std::min(left, max);
    // The next run starts with a different answer, unless everything after is empty.
    if (run_ + 1 == runs_.size() && runs_[run_].first.empty()) return max;
    return 0;
  }
  void skip(std::uint64_t k) override {
    while (k > 0 && run_ < runs_.size()) {
      const std::uint64_t take = std::min(k, runs_[run_].second - used_);
      used_ += take;
      k -= take;
      if (used_ == runs_[run_].second) {
        ++run_;
        used_ = 0;
      }
    }
  }

 private:
  std::vector<std::pair<Word, std::uint64_t>> runs_;
  std::string label_;
  std::size_t run_ = 0;
  std::uint64_t used_ = 0;
};

}  // namespace

ParticipantPtr echo_generator(const Tester& tester, const RunBudget& budget, std::uint64_t internal_cap) {
  auto q = tester.sp();
  TestOptions o;
  o.budget = budget;
  o.step_cap = internal_cap;
  const auto tr = run_test(tester, *q, Side::Left, o);
  std::vector<std::pair<Word, std::uint64_t>> runs;
  for (const auto& s : tr.steps)
    if (s.subject.answer) runs.emplace_back(*s.subject.answer, s.repeat);
  return std::make_unique<EchoParticipant>(std::move(runs), "echo(" + tester.id + ")");
}

ParticipantPtr echo_generator(const MachineDescription& i, const MachineDescription& q, const RunBudget& budget,
                              std::uint64_t internal_cap) {
  return echo_generator(machine_tester(i, q, budget), budget, internal_cap);
}

bool similar_on_lambda(Participant& u, Participant& v, std::uint64_t n, const RunBudget& budget) {
  if (n == 0) throw PreconditionViolation("similarity needs N >= 1");
  for (std::uint64_t i = 0; i < n;) {
    const Reply a = u.next("", budget), b = v.next("", budget);
    ++i;
    if (a.answer != b.answer) return false;
    if (a.diverged()) return true;  // both keep diverging
    if (i == n) break;
    const std::uint64_t k = std::min(u.steady_for(n - i), v.steady_for(n - i));
    if (k >= n - i) return true;
    u.skip(k);
    v.skip(k);
    i += k;
  }
  return true;
}

}  // namespace turingtest
