#include "turingtest/alphabet.h"

#include <algorithm>
#include <limits>

namespace turingtest {

namespace {

constexpr std::string_view kExtraCandidates =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZcdefghijklmnopqrstuvwxyz";

bool printable(char c) { return c > ' ' && c < 127; }

}  // namespace

Alphabet::Alphabet(std::string symbols, char blank)
    : symbols_(std::move(symbols)), blank_(blank) {
  code_of_.fill(-1);
  if (symbols_.size() < 2) throw std::invalid_argument("alphabet needs at least two symbols");
  if (!printable(blank_)) throw std::invalid_argument("blank must be a printable character");
  code_of_[static_cast<unsigned char>(blank_)] = 0;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const char c = symbols_[i];
    if (!printable(c)) throw std::invalid_argument("alphabet symbols must be printable");
    auto& slot = code_of_[static_cast<unsigned char>(c)];
    if (slot != -1) throw std::invalid_argument(std::string("duplicate or blank symbol '") + c + "'");
    slot = static_cast<int>(i) + 1;
  }
  // DSL punctuation is never a symbol.
  for (char c : std::string_view("#*=-")) {
    if (code_of_[static_cast<unsigned char>(c)] != -1)
      throw std::invalid_argument(std::string("reserved character '") + c + "' used as a symbol");
  }
  for (char c : kExtraCandidates) {
    if (code_of_[static_cast<unsigned char>(c)] == -1) extra_pool_.push_back(c);
  }
}

bool Alphabet::is_word(std::string_view w) const {
  return std::all_of(w.begin(), w.end(), [this](char c) { return contains(c); });
}

bool Alphabet::is_bword(std::string_view w) const {
  return std::all_of(w.begin(), w.end(), [this](char c) { return in_b(c); });
}

const Alphabet& default_alphabet() {
  static const Alphabet kDefault;
  return kDefault;
}

Word bar(const Alphabet& alphabet, std::string_view w) {
  Word out;
  out.reserve(w.size() + 1);
  out.push_back(alphabet.letter());
  out.append(w);
  return out;
}

// With k = |A|, the words of length L occupy the index range
// [(k^L - k)/(k - 1), (k^(L+1) - k)/(k - 1)). Equivalently this is bijective
// base-k numeration of n + 1 with digits 1..k.
Word num_to_word(const Alphabet& alphabet, std::uint64_t n) {
  const std::uint64_t k = alphabet.size();
  Word out;
  // Bijective numeration of m = n + 1; n + 1 may overflow only for n = max.
  unsigned __int128 m = static_cast<unsigned __int128>(n) + 1;
  while (m > 0) {
    const auto digit = static_cast<std::uint64_t>((m - 1) % k);
    out.push_back(alphabet.symbols()[digit]);
    m = (m - 1) / k;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t word_to_num(const Alphabet& alphabet, std::string_view w) {
  if (w.empty()) throw PreconditionViolation("the empty word is not a number notation");
  const unsigned __int128 k = alphabet.size();
  unsigned __int128 m = 0;
  for (char c : w) {
    const int code = alphabet.code(c);
    if (code <= 0) throw PreconditionViolation("not a word over the alphabet");
    m = m * k + static_cast<unsigned>(code);
    if (m - 1 > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("word denotes a number beyond 64 bits");
  }
  return static_cast<std::uint64_t>(m - 1);
}

bool shortlex_less(const Alphabet& alphabet, std::string_view x, std::string_view y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return alphabet.code(x[i]) < alphabet.code(y[i]);
  }
  return false;
}

bool prefix_rel(std::span<const Word> eta, std::span<const Word> mu) {
  if (eta.empty()) return !mu.empty();
  if (eta.size() >= mu.size()) return false;
  return std::equal(eta.begin(), eta.end(), mu.begin());
}

}  // namespace turingtest
