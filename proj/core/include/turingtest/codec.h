#pragma once

#include <cstdint>
#include <functional>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "turingtest/machine.h"

namespace turingtest {

// ---- Text form (.tm files) ----

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string message, bool violation = false);
  // 1-based line of the offending text, 0 when the error concerns the whole document.
  int line() const { return line_; }
  const std::string& message() const { return message_; }
  // The text was well-formed but described an invalid machine.
  bool violation() const { return violation_; }

 private:
  int line_;
  std::string message_;
  bool violation_;
};

// Throws ParseError; the result always passes validate().
MachineDescription parse_dsl(std::string_view text);
// Canonical text: header lines, then one fully expanded transition per line
// in key order. parse_dsl(print_dsl(d)) reproduces d with the same labels.
std::string print_dsl(const MachineDescription& desc);

// A .tm document that may also carry a `limit t` line, meaning "run this
// machine under the time-limit supervisor with budget t".
struct RunnableDocument {
  MachineDescription machine;
  std::optional<std::uint64_t> limit;
};
RunnableDocument parse_runnable(std::string_view text);

// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text_file(const std::string& path);

// ---- Encoding as words over A ----
//
// Fields are unary numbers u(v) = x1^v x0 over the first two letters of A.
// See docs/encoding.md for the exact layout.

Word encode(const MachineDescription& desc);
// Nullopt for words that are not an encoding. Decoded machines are named ""
// with states q0, q1, ...
std::optional<MachineDescription> decode(std::string_view w,
                                         const Alphabet& alphabet = default_alphabet());
bool is_valid_encoding(std::string_view w, const Alphabet& alphabet = default_alphabet());

// Valid encodings of one exact length, in lexicographic order.
struct EncodingLimits {
  std::optional<std::size_t> max_states;
  std::optional<std::size_t> max_initial_work;
};
void for_each_encoding_of_length(std::size_t length, const EncodingLimits& limits,
                                 const std::function<void(const Word&)>& visit,
                                 const Alphabet& alphabet = default_alphabet());
// Shortest possible encoding length.
inline constexpr std::size_t kMinEncodingLength = 6;

// Valid encodings in shortlex order, generated lazily and cached.
// Thread-safe.
class EncodingCatalog {
 public:
  explicit EncodingCatalog(const Alphabet& alphabet = default_alphabet());

  // k >= 1.
  const Word& at(std::uint64_t k);
  // Number of valid encodings with length <= len (generates them).
  std::uint64_t count_up_to_length(std::size_t len);
  const Alphabet& alphabet() const { return alphabet_; }

 private:
  void extend_one_length();

  Alphabet alphabet_;
  std::mutex mu_;
  std::deque<Word> words_;
  std::vector<std::uint64_t> count_by_len_;  // cumulative, indexed by length
  std::size_t next_length_ = kMinEncodingLength;
};

EncodingCatalog& default_catalog();

}  // namespace turingtest
