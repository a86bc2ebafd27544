#include "turingtest/oracle.h"

#include <sstream>

namespace turingtest {

OraclePtr blank_oracle(const Alphabet& alphabet) {
  return std::make_shared<BlankOracle>(alphabet);
}

TapeOracle::TapeOracle(const Alphabet& alphabet, BWord prefix, std::string description)
    : blank_(alphabet.blank()), prefix_(std::move(prefix)), description_(std::move(description)) {
  if (!alphabet.is_bword(prefix_)) throw PreconditionViolation("oracle tape must be a word over B");
}

RandomOracle::RandomOracle(const Alphabet& alphabet, double p0, std::uint64_t seed)
    : blank_(alphabet.blank()), one_(alphabet.letter()), p0_(p0), seed_(seed), rng_(seed) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw PreconditionViolation("p0 must lie in [0, 1]");
}

int RandomOracle::bit(std::uint64_t cell) const {
  std::lock_guard lock(mu_);
  while (cells_.size() <= cell) {
    cells_.push_back(unit_interval(rng_) < p0_ ? 0 : 1);
  }
  return cells_[cell];
}

char RandomOracle::read(std::uint64_t cell) const { return bit(cell) == 0 ? blank_ : one_; }

int RandomOracle::symbol(std::uint64_t n) const {
  if (n == 0) throw PreconditionViolation("oracle symbols are numbered from 1");
  return bit(n - 1);
}

std::string RandomOracle::describe() const {
  std::ostringstream os;
  os << "random(p0=" << p0_ << ",seed=" << seed_ << ")";
  return os.str();
}

}  // namespace turingtest
