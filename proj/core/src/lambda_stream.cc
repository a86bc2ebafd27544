#include "turingtest/lambda_stream.h"

#include <algorithm>

namespace turingtest {

const char* end_name(LambdaStream::End e) {
  switch (e) {
    case LambdaStream::End::Open: return "open";
    case LambdaStream::End::Stuck: return "stuck";
    case LambdaStream::End::Repeated: return "repetition";
    case LambdaStream::End::SegmentExceeded: return "segment";
  }
  return "?";
}

LambdaStream::LambdaStream(CompiledPtr machine) : LambdaStream(std::move(machine), Options{}) {}

LambdaStream::LambdaStream(CompiledPtr machine, Options options)
    : inst_(std::move(machine)), opt_(options) {
  prefix_.push_back(0);
}

std::size_t LambdaStream::map(std::uint64_t j) const {
  if (j == 0) throw PreconditionViolation("answers are numbered from 1");
  const std::uint64_t i = j - 1;
  if (i < answers_.size()) return static_cast<std::size_t>(i);
  if (!periodic()) throw PreconditionViolation("answer not computed yet");
  return static_cast<std::size_t>(period_start_ + (i - period_start_) % period_);
}

std::uint64_t LambdaStream::cumulative(std::uint64_t j) const {
  if (j <= computed()) return prefix_[j];
  if (!periodic()) throw PreconditionViolation("answer not computed yet");
  const std::uint64_t base = prefix_[period_start_];
  const std::uint64_t per = prefix_[period_start_ + period_] - base;
  const std::uint64_t k = j - period_start_;
  const std::uint64_t full = k / period_, rest = k % period_;
  if (per > 0 && full > (kNoCap - base) / per) return kNoCap;
  return base + full * per + (prefix_[period_start_ + rest] - prefix_[period_start_]);
}

std::uint64_t LambdaStream::answers_within(std::uint64_t total, std::uint64_t limit) const {
  // Largest j in [0, limit] with cumulative(j) <= total; cumulative is monotone.
  std::uint64_t hi = periodic() ? limit : std::min<std::uint64_t>(limit, computed());
  std::uint64_t lo = 0;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (cumulative(mid) <= total) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

void LambdaStream::advance(std::uint64_t questions, std::uint64_t cycle_cap) {
  while (end_ == End::Open && !periodic() && computed() < questions && spent_ < cycle_cap) {
    if (!in_progress_) {
      if (opt_.detect_period) {
        auto [it, fresh] = starts_.try_emplace(inst_.rest_key(opt_.shift_invariant_period), computed());
        if (!fresh) {
          period_start_ = it->second;
          period_ = computed() - it->second;
          if (period_ == 0) throw std::logic_error("zero period");
          starts_.clear();
          return;
        }
      }
      inst_.begin_question("");
      in_progress_ = true;
      saved_ = inst_.config_snapshot();
      power_ = 1;
      lam_ = 0;
    }
    while (inst_.status() == MachineInstance::Status::Running && spent_ < cycle_cap) {
      inst_.step();
      if (opt_.detect_config_repeat && inst_.status() == MachineInstance::Status::Running) {
        if (inst_.matches(saved_)) {
          end_ = End::Repeated;
          return;
        }
        if (++lam_ == power_) {
          saved_ = inst_.config_snapshot();
          power_ *= 2;
          lam_ = 0;
        }
      }
      if (inst_.status() != MachineInstance::Status::Stuck) ++spent_;
      if (opt_.segment_limit && inst_.scanned_segment_length() > *opt_.segment_limit) {
        end_ = End::SegmentExceeded;
        return;
      }
    }
    switch (inst_.status()) {
      case MachineInstance::Status::Halted:
        answers_.push_back(inst_.current_answer());
        cycles_.push_back(inst_.cycles_this_question());
        prefix_.push_back(prefix_.back() + inst_.cycles_this_question());
        in_progress_ = false;
        break;
      case MachineInstance::Status::Stuck:
        end_ = End::Stuck;
        return;
      case MachineInstance::Status::Running:
        return;
    }
  }
}

}  // namespace turingtest
