#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace turingtest {

// A word over the alphabet A. The empty string is the empty word.
using Word = std::string;
// A word over B = A + {blank}; questions may contain the blank.
using BWord = std::string;

// Raised when a value violates a documented precondition.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The finite alphabet A together with the blank symbol.
//
// Symbols are single printable ASCII characters. The first symbol is the
// designated letter used by bar(). Every symbol of B has a dense code: the
// blank is 0 and symbols()[i] is i + 1. Machine encodings and the VM use these
// codes.
class Alphabet {
 public:
  // Throws std::invalid_argument unless `symbols` holds >= 2 distinct
  // printable characters and `blank` is not one of them.
  Alphabet() : Alphabet("ab", '_') {}
  explicit Alphabet(std::string symbols, char blank = '_');

  std::string_view symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  char letter() const { return symbols_.front(); }
  char blank() const { return blank_; }

  bool contains(char c) const { return code_of_[static_cast<unsigned char>(c)] > 0; }
  bool in_b(char c) const { return code_of_[static_cast<unsigned char>(c)] >= 0; }
  bool is_word(std::string_view w) const;
  bool is_bword(std::string_view w) const;

  // Code in [0, size()] for a symbol of B, -1 otherwise.
  int code(char c) const { return code_of_[static_cast<unsigned char>(c)]; }
  // Inverse of code() on [0, size()].
  char symbol(int code) const { return code == 0 ? blank_ : symbols_[code - 1]; }

  // Characters available for extra work-tape symbols, in canonical order.
  // A machine with k extra symbols uses exactly the first k of these.
  const std::string& extra_pool() const { return extra_pool_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_ && a.blank_ == b.blank_;
  }

 private:
  std::string symbols_;
  char blank_;
  std::string extra_pool_;
  std::array<int, 256> code_of_{};
};

// The default alphabet {a, b} with blank '_'.
const Alphabet& default_alphabet();

// a.w for the designated letter a.
Word bar(const Alphabet& alphabet, std::string_view w);

// Shortlex bijection between N0 and nonempty words: 0 -> "a", 1 -> "b",
// 2 -> "aa", ... (for A = {a, b}).
Word num_to_word(const Alphabet& alphabet, std::uint64_t n);
// Throws PreconditionViolation on the empty word or on a non-word, and
// std::overflow_error when the value does not fit in 64 bits.
std::uint64_t word_to_num(const Alphabet& alphabet, std::string_view w);

// True iff the first word precedes the second in shortlex order.
bool shortlex_less(const Alphabet& alphabet, std::string_view x, std::string_view y);

// The relation "eta is a proper beginning of mu" on finite sequences of
// words: either eta is empty and mu is not, or eta is a strict prefix of mu.
bool prefix_rel(std::span<const Word> eta, std::span<const Word> mu);

}  // namespace turingtest
