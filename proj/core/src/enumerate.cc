#include "turingtest/enumerate.h"

#include <algorithm>
#include <cmath>

namespace turingtest {

namespace {

bool emits_letter(const MachineDescription& m) {
  return std::any_of(m.transitions.begin(), m.transitions.end(), [&](const Transition& t) {
    return t.action.emit && m.alphabet.contains(*t.action.emit);
  });
}

// Keeps a generator item's stream alive for the participant.
class GeneratorParticipant final : public Participant {
 public:
  GeneratorParticipant(std::shared_ptr<const LambdaStream> s, std::uint64_t horizon, std::string label)
      : s_(std::move(s)), horizon_(horizon), label_(std::move(label)) {}

  Reply next(const BWord&, const RunBudget&) override {
    ++k_;
    if (k_ > horizon_) return Reply::of("", 0);
    if (!s_->has(k_)) throw AssertionFailure(label_ + ": answer " + std::to_string(k_) + " unknown");
    return Reply::of(s_->answer(k_), s_->cycles(k_));
  }
  std::string describe() const override { return label_; }
  TmType type() const override { return TmType::Yes; }
  std::uint64_t steady_for(std::uint64_t max) override { return k_ > horizon_ ? max : 0; }
  void skip(std::uint64_t k) override { k_ += k; }

 private:
  std::shared_ptr<const LambdaStream> s_;
  std::uint64_t horizon_;
  std::string label_;
  std::uint64_t k_ = 0;
};

class TildeParticipant final : public Participant {
 public:
  TildeParticipant(CompiledPtr m, RunBudget budget, std::string label)
      : inst_(std::move(m)), budget_(budget), label_(std::move(label)) {}

  Reply next(const BWord&, const RunBudget&) override {
    MachineInstance fork = inst_;
    auto r = to_reply(inst_.pose_question("", budget_));
    if (!r.diverged()) return r;
    inst_ = std::move(fork);
    return Reply::of("", r.cycles);
  }
  std::string describe() const override { return label_; }

 private:
  MachineInstance inst_;
  RunBudget budget_;
  std::string label_;
};

}  // namespace

MachineDescription universal_enum(std::uint64_t k) {
  if (k == 0) throw PreconditionViolation("enumeration starts at 1");
  auto d = decode(default_catalog().at(k));
  if (!d) throw std::logic_error("catalog holds an invalid encoding");
  return std::move(*d);
}

RunnableItem RunnableItem::plain(MachineDescription m, std::string label) {
  RunnableItem it;
  it.kind_ = Kind::Plain;
  it.encoding_ = encode(m);
  it.compiled_ = compile(m);
  it.base_ = std::make_shared<const MachineDescription>(std::move(m));
  it.label_ = label.empty() ? it.base_->name : std::move(label);
  return it;
}

RunnableItem RunnableItem::time_limited(MachineDescription m, std::uint64_t t, std::string label) {
  if (t == 0) throw PreconditionViolation("time limit must be positive");
  auto it = plain(std::move(m), std::move(label));
  it.kind_ = Kind::TimeLimited;
  it.param_ = t;
  if (it.label_.empty()) it.label_ = "machine";
  it.label_ += "|" + std::to_string(t);
  return it;
}

RunnableItem RunnableItem::generator(MachineDescription m, std::uint64_t horizon,
                                     std::shared_ptr<const LambdaStream> stream, std::string label) {
  if (horizon > 0 && (!stream || !stream->has(horizon)))
    throw PreconditionViolation("generator stream must cover its horizon");
  auto it = plain(std::move(m), std::move(label));
  it.kind_ = Kind::Generator;
  it.param_ = horizon;
  it.stream_ = std::move(stream);
  return it;
}

ParticipantPtr RunnableItem::instantiate(OraclePtr oracle) const {
  const std::string label = label_.empty() ? "item" : label_;
  switch (kind_) {
    case Kind::Plain: return std::make_unique<MachineParticipant>(compiled_, label, std::move(oracle));
    case Kind::TimeLimited: return std::make_unique<TimeLimitedParticipant>(compiled_, param_, label);
    case Kind::Generator: return std::make_unique<GeneratorParticipant>(stream_, param_, label);
  }
  throw std::logic_error("unknown item kind");
}

Reply Enumerator::diagonal_answer(std::uint64_t n, const RunBudget& budget) const {
  if (n == 0) throw PreconditionViolation("enumeration starts at 1");
  auto p = item(n).instantiate();
  Reply r;
  for (std::uint64_t q = 1; q <= n; ++q) {
    r = p->next("", budget);
    if (r.diverged()) return r;
  }
  return r;
}

std::uint64_t Enumerator::diagonal_run(std::uint64_t, std::uint64_t, const RunBudget&) const { return 0; }

std::vector<RunnableItem> enum_prefix(const Enumerator& e, std::uint64_t n) {
  if (n == 0) throw PreconditionViolation("prefix length must be positive");
  std::vector<RunnableItem> out;
  for (std::uint64_t k = 1; k <= n; ++k) {
    auto it = e.item(k);
    if (std::find(out.begin(), out.end(), it) == out.end()) out.push_back(std::move(it));
  }
  return out;
}

std::uint64_t pair_index(std::uint64_t i, std::uint64_t j) {
  if (i == 0 || j == 0) throw PreconditionViolation("pair components start at 1");
  const std::uint64_t s = i + j;
  return (s - 1) * (s - 2) / 2 + i;
}

std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t n) {
  if (n == 0) throw PreconditionViolation("enumeration starts at 1");
  // Largest d with d(d-1)/2 < n, where d = s - 1.
  auto d = static_cast<std::uint64_t>((1.0 + std::sqrt(8.0 * static_cast<double>(n))) / 2.0);
  while (d > 1 && d * (d - 1) / 2 >= n) --d;
  while ((d + 1) * d / 2 < n) ++d;
  const std::uint64_t i = n - d * (d - 1) / 2;
  return {i, d + 1 - i};
}

RunnableItem UniversalEnumerator::item(std::uint64_t n) const {
  return RunnableItem::plain(universal_enum(n), "A_" + std::to_string(n));
}

RunnableItem time_limit(const MachineDescription& m, std::uint64_t t) { return RunnableItem::time_limited(m, t); }

// Per-machine state for diagonal questions: the session of empty questions,
// resumed on demand, and whether the machine can emit a letter at all.
struct TimeLimitedEnumerator::Analysis {
  explicit Analysis(const MachineDescription& m)
      : emits(emits_letter(m)), stream(compile(m), LambdaStream::Options{true, std::nullopt, true, true}) {}
  bool emits;
  LambdaStream stream;
};

TimeLimitedEnumerator::TimeLimitedEnumerator(std::uint64_t work_limit) : work_limit_(work_limit) {}
TimeLimitedEnumerator::~TimeLimitedEnumerator() = default;

RunnableItem TimeLimitedEnumerator::item(std::uint64_t n) const {
  const auto [i, j] = unpair(n);
  return RunnableItem::time_limited(universal_enum(i), j, "A_" + std::to_string(i));
}

TimeLimitedEnumerator::Analysis& TimeLimitedEnumerator::analysis(std::uint64_t i) const {
  auto& slot = cache_[i];
  if (!slot) slot = std::make_unique<Analysis>(universal_enum(i));
  return *slot;
}

std::optional<std::uint64_t> TimeLimitedEnumerator::first_overrun(Analysis& a, std::uint64_t t,
                                                                  std::uint64_t q_max) const {
  auto& s = a.stream;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    if (!s.has(q)) {
      if (s.end() != LambdaStream::End::Open) return q;
      if (s.cycles_spent() > work_limit_)
        throw std::runtime_error("time-limited diagonal: simulation limit reached");
      s.advance(q, s.cumulative(q - 1) + t + 1);
      if (!s.has(q)) return q;  // ended, or still running after t cycles
    }
    if (s.cycles(q) > t) return q;
    // Every later answer repeats one already checked.
    if (s.periodic() && q >= s.period_start() + s.period()) return std::nullopt;
  }
  return std::nullopt;
}

bool TimeLimitedEnumerator::silent_up_to(Analysis& a, std::uint64_t max_t) const {
  if (!a.emits) return true;
  auto& s = a.stream;
  // Simulate in growing slices until the stream settles or provably latches.
  for (std::uint64_t slice = 1024;; slice *= 2) {
    for (std::uint64_t q = 1; q <= s.computed(); ++q)
      if (!s.answer(q).empty()) return false;
    if (s.periodic() || s.end() != LambdaStream::End::Open) return true;
    // A question already running longer than any limit of interest is never answered in time.
    if (s.pending_cycles() > max_t) return true;
    if (s.cycles_spent() > work_limit_) return false;
    s.advance(s.computed() + slice, s.cycles_spent() + 64 * slice);
  }
}

Word TimeLimitedEnumerator::limited_answer(std::uint64_t i, std::uint64_t t, std::uint64_t q) const {
  std::lock_guard lock(mu_);
  auto& a = analysis(i);
  if (first_overrun(a, t, q)) return "";
  return a.stream.answer(q);
}

Reply TimeLimitedEnumerator::diagonal_answer(std::uint64_t n, const RunBudget&) const {
  const auto [i, j] = unpair(n);
  return Reply::of(limited_answer(i, j, n), 0);
}

namespace {

// Largest t with pair_index(i, t) <= bound, or 0.
std::uint64_t max_second(std::uint64_t i, std::uint64_t bound) {
  if (bound < pair_index(i, 1)) return 0;
  // (s-1)(s-2)/2 <= bound - i with s = i + t.
  const std::uint64_t room = bound - i;
  auto d = static_cast<std::uint64_t>(std::sqrt(2.0 * static_cast<double>(room))) + 2;
  while (d > 1 && (d - 1) * (d - 2) / 2 > room) --d;
  while (d * (d - 1) / 2 <= room) ++d;
  return d - i;
}

}  // namespace

std::optional<std::uint64_t> TimeLimitedEnumerator::search_nonempty(std::uint64_t from, std::uint64_t limit) const {
  std::optional<std::uint64_t> best;
  auto bound = [&] { return best ? *best - 1 : limit; };
  // Machine i first appears at index pair_index(i, 1) = i(i+1)/2.
  for (std::uint64_t i = 1; i * (i + 1) / 2 <= bound(); ++i) {
    auto& a = analysis(i);
    if (!a.emits) {
      cache_.erase(i);
      continue;
    }
    const std::uint64_t t_max = max_second(i, bound());
    if (silent_up_to(a, t_max)) continue;
    for (std::uint64_t t = 1; t <= t_max; ++t) {
      const std::uint64_t n = pair_index(i, t);
      if (n < from) continue;
      if (n > bound()) break;
      if (!first_overrun(a, t, n) && !a.stream.answer(n).empty()) {
        best = n;
        break;
      }
    }
  }
  return best;
}

std::optional<std::uint64_t> TimeLimitedEnumerator::first_nonempty_diagonal(std::uint64_t from,
                                                                            std::uint64_t limit) const {
  if (from == 0) from = 1;
  if (from > limit) return std::nullopt;
  std::lock_guard lock(mu_);
  // Widen the window gradually: a far limit would otherwise make every early
  // machine look relevant for huge time limits.
  std::uint64_t window = std::max<std::uint64_t>(from, 1024);
  for (;;) {
    const std::uint64_t hi = window >= limit / 2 ? limit : window * 2;
    if (auto r = search_nonempty(from, hi)) return r;
    if (hi == limit) return std::nullopt;
    window = hi;
  }
}

std::uint64_t TimeLimitedEnumerator::diagonal_run(std::uint64_t n, std::uint64_t max, const RunBudget& budget) const {
  if (max == 0 || !diagonal_answer(n, budget).answer->empty()) return 0;
  const std::uint64_t limit = max > UINT64_MAX - n ? UINT64_MAX : n + max;
  const auto next = first_nonempty_diagonal(n + 1, limit);
  return next ? *next - n - 1 : max;
}

ParticipantPtr tilde_generator(const MachineDescription& m, const RunBudget& budget) {
  if (!budget.bounded()) throw PreconditionViolation("tilde-generator needs a bounded budget");
  return std::make_unique<TildeParticipant>(compile(m), budget, "tilde(" + (m.name.empty() ? "machine" : m.name) + ")");
}

DiagonalGenerator::DiagonalGenerator(EnumeratorPtr e, RunBudget budget) : e_(std::move(e)), budget_(budget) {
  if (!e_) throw PreconditionViolation("diagonal generator needs an enumerator");
}

Word DiagonalGenerator::answer_at(std::uint64_t n) const {
  auto r = e_->diagonal_answer(n, budget_);
  if (r.diverged())
    throw AssertionFailure("diagonal generator: item " + std::to_string(n) + " of " + e_->name() +
                           " does not answer within budget");
  return bar(default_alphabet(), *r.answer);
}

Reply DiagonalGenerator::next(const BWord&, const RunBudget&) { return Reply::of(answer_at(++n_), 0); }

std::uint64_t DiagonalGenerator::steady_for(std::uint64_t max) {
  return n_ == 0 ? 0 : e_->diagonal_run(n_, max, budget_);
}

ParticipantPtr diagonal_generator(EnumeratorPtr e, const RunBudget& budget) {
  return std::make_unique<DiagonalGenerator>(std::move(e), budget);
}

// Memory-bounded class.

const char* screening_name(Screening s) {
  switch (s) {
    case Screening::Survived: return "survived";
    case Screening::SegmentExceeded: return "segment";
    case Screening::Repeated: return "repetition";
    case Screening::Stuck: return "stuck";
  }
  return "?";
}

namespace {

struct Survivor {
  MachineDescription machine;
  std::shared_ptr<const LambdaStream> stream;
};

struct Survivors {
  std::uint64_t n = 0;
  std::vector<Survivor> list;
  Survivor halt;

  const Survivor& at(std::uint64_t k) const { return k >= 1 && k <= list.size() ? list[k - 1] : halt; }
};

class ReducedEnumerator final : public Enumerator {
 public:
  explicit ReducedEnumerator(std::shared_ptr<const Survivors> s) : s_(std::move(s)) {}
  RunnableItem item(std::uint64_t n) const override {
    return RunnableItem::plain(s_->at(n).machine, "R_" + std::to_string(n));
  }
  std::string name() const override { return "reduced"; }
  Reply diagonal_answer(std::uint64_t n, const RunBudget& budget) const override {
    const auto& sv = s_->at(n);
    if (sv.stream->has(n)) return Reply::of(sv.stream->answer(n), sv.stream->cycles(n));
    return Enumerator::diagonal_answer(n, budget);
  }

 private:
  std::shared_ptr<const Survivors> s_;
};

class GeneratorEnumerator final : public Enumerator {
 public:
  explicit GeneratorEnumerator(std::shared_ptr<const Survivors> s) : s_(std::move(s)) {}
  RunnableItem item(std::uint64_t n) const override {
    const auto& sv = s_->at(n);
    return RunnableItem::generator(sv.machine, n <= s_->n ? s_->n : 0, sv.stream, "Egen_" + std::to_string(n));
  }
  std::string name() const override { return "memory-generators"; }
  Reply diagonal_answer(std::uint64_t n, const RunBudget&) const override {
    if (n > s_->n) return Reply::of("", 0);
    const auto& st = *s_->at(n).stream;
    return Reply::of(st.answer(n), st.cycles(n));
  }

 private:
  std::shared_ptr<const Survivors> s_;
};

Survivor halting_survivor(std::uint64_t horizon) {
  auto m = universal_enum(1);
  auto st = std::make_shared<LambdaStream>(compile(m));
  st->advance(std::max<std::uint64_t>(horizon, 1));
  return {std::move(m), std::move(st)};
}

}  // namespace

MemoryClass memory_class_enum(const MemoryClassParams& p) {
  if (p.max_states == 0 || p.max_segment == 0)
    throw PreconditionViolation("memory class bounds must be positive");
  MemoryClass mc;
  mc.params_ = p;
  const EncodingLimits limits{p.max_states, p.max_initial_work};
  for (std::size_t len = kMinEncodingLength; len <= p.max_encoding_length; ++len) {
    for_each_encoding_of_length(len, limits, [&](const Word& w) {
      if (mc.screened_.size() >= p.size_cap)
        throw SizeCapExceeded("memory class has more than " + std::to_string(p.size_cap) + " machines");
      mc.screened_.push_back(ScreenedMachine{w, Screening::Survived, 0, 0});
    });
  }
  mc.n_ = mc.screened_.size();

  auto sv = std::make_shared<Survivors>();
  sv->n = mc.n_;
  sv->halt = halting_survivor(mc.n_);
  LambdaStream::Options opt;
  opt.detect_config_repeat = true;
  opt.segment_limit = p.max_segment;
  opt.shift_invariant_period = false;
  for (std::size_t k = 0; k < mc.screened_.size(); ++k) {
    auto& entry = mc.screened_[k];
    auto m = *decode(entry.encoding);
    auto st = std::make_shared<LambdaStream>(compile(m), opt);
    st->advance(mc.n_);
    entry.max_segment = st->max_segment();
    switch (st->end()) {
      case LambdaStream::End::Open:
        entry.outcome = Screening::Survived;
        mc.survivors_.push_back(k);
        sv->list.push_back({std::move(m), std::move(st)});
        continue;
      case LambdaStream::End::SegmentExceeded: entry.outcome = Screening::SegmentExceeded; break;
      case LambdaStream::End::Repeated: entry.outcome = Screening::Repeated; break;
      case LambdaStream::End::Stuck: entry.outcome = Screening::Stuck; break;
    }
    entry.question = st->end_question();
  }
  mc.r_ = std::make_shared<ReducedEnumerator>(sv);
  mc.egen_ = std::make_shared<GeneratorEnumerator>(sv);
  return mc;
}

}  // namespace turingtest
