#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "turingtest/alphabet.h"

namespace turingtest {

// Content of the oracle interface tape: a read-only one-sided tape over B.
// Implementations are deterministic per instance and safe to read from
// several threads.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual char read(std::uint64_t cell) const = 0;
  virtual std::string describe() const = 0;
  virtual bool is_blank() const { return false; }
};

using OraclePtr = std::shared_ptr<const Oracle>;

// Theta: every cell blank.
class BlankOracle final : public Oracle {
 public:
  explicit BlankOracle(const Alphabet& alphabet) : blank_(alphabet.blank()) {}
  char read(std::uint64_t) const override { return blank_; }
  std::string describe() const override { return "blank"; }
  bool is_blank() const override { return true; }

 private:
  char blank_;
};

OraclePtr blank_oracle(const Alphabet& alphabet = default_alphabet());

// A finite prefix followed by blanks.
class TapeOracle final : public Oracle {
 public:
  TapeOracle(const Alphabet& alphabet, BWord prefix, std::string description);
  char read(std::uint64_t cell) const override {
    return cell < prefix_.size() ? prefix_[cell] : blank_;
  }
  std::string describe() const override { return description_; }

 private:
  char blank_;
  BWord prefix_;
  std::string description_;
};

// Xi: cells i.i.d., symbol 0 with probability p0 and 1 otherwise. On the tape
// 0 is the blank and 1 the designated letter. Cells are drawn in index order
// from a 64-bit Mersenne twister, so a cell's value does not depend on the
// order in which cells are read.
class RandomOracle final : public Oracle {
 public:
  RandomOracle(const Alphabet& alphabet, double p0, std::uint64_t seed);

  char read(std::uint64_t cell) const override;
  std::string describe() const override;

  // xi_n for n >= 1, i.e. the bit stored in cell n - 1.
  int symbol(std::uint64_t n) const;
  double p0() const { return p0_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int bit(std::uint64_t cell) const;

  char blank_;
  char one_;
  double p0_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::mt19937_64 rng_;
  mutable std::vector<std::uint8_t> cells_;
};

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace turingtest
