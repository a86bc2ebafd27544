#include "turingtest/codec.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace turingtest {

ParseError::ParseError(int line, std::string message, bool violation)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      message_(std::move(message)),
      violation_(violation) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Line {
  int number;
  std::vector<std::string> toks;
};

struct Candidate {
  Transition t;
  int specificity;
  int line;
};

RunnableDocument parse_document(std::string_view text, bool allow_limit) {
  std::vector<Line> header, rules;
  {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string_view raw = text.substr(pos, end - pos);
      ++number;
      pos = end + 1;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      auto toks = tokens(raw);
      if (toks.empty()) continue;
      const bool is_rule = std::find(toks.begin(), toks.end(), "->") != toks.end();
      (is_rule ? rules : header).push_back({number, std::move(toks)});
    }
  }

  RunnableDocument doc;
  auto& d = doc.machine;
  std::string symbols = "ab";
  char blank = '_';
  std::optional<std::string> initial_name;
  std::vector<std::pair<std::string, Mark>> final_names;
  std::vector<int> final_lines;
  int initial_line = 0;
  bool have_states = false;
  std::map<std::string, int> seen_keyword;

  auto single_char = [](const Line& l, const std::string& tok, const char* what) {
    if (tok.size() != 1) throw ParseError(l.number, std::string(what) + " must be a single character");
    return tok[0];
  };

  for (const auto& l : header) {
    const auto& kw = l.toks[0];
    const std::size_t argc = l.toks.size() - 1;
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (argc < lo || argc > hi) throw ParseError(l.number, "wrong number of arguments to '" + kw + "'");
    };
    if (kw != "final" && seen_keyword[kw]++ > 0) throw ParseError(l.number, "repeated '" + kw + "' line");
    if (kw == "machine") {
      need(1, 1);
      d.name = l.toks[1];
    } else if (kw == "alphabet") {
      need(1, 1);
      symbols = l.toks[1];
    } else if (kw == "blank") {
      need(1, 1);
      blank = single_char(l, l.toks[1], "blank");
    } else if (kw == "states") {
      need(1, SIZE_MAX);
      d.states.assign(l.toks.begin() + 1, l.toks.end());
      have_states = true;
    } else if (kw == "initial") {
      need(1, 1);
      initial_name = l.toks[1];
      initial_line = l.number;
    } else if (kw == "final") {
      need(1, 2);
      Mark m = Mark::None;
      if (argc == 2) {
        if (l.toks[2] == "Left") m = Mark::Left;
        else if (l.toks[2] == "Right") m = Mark::Right;
        else throw ParseError(l.number, "final mark must be Left or Right");
      }
      final_names.emplace_back(l.toks[1], m);
      final_lines.push_back(l.number);
    } else if (kw == "extra") {
      need(0, 1);
      d.extra_symbols = argc ? l.toks[1] : "";
    } else if (kw == "work") {
      need(0, 1);
      d.initial_work = argc ? l.toks[1] : "";
    } else if (kw == "limit") {
      if (!allow_limit) throw ParseError(l.number, "'limit' is only allowed in runnable documents");
      need(1, 1);
      std::uint64_t t = 0;
      try {
        std::size_t used = 0;
        t = std::stoull(l.toks[1], &used);
        if (used != l.toks[1].size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw ParseError(l.number, "limit must be a positive integer");
      }
      if (t == 0) throw ParseError(l.number, "limit must be a positive integer");
      doc.limit = t;
    } else {
      throw ParseError(l.number, "unknown keyword '" + kw + "'");
    }
  }

  try {
    d.alphabet = Alphabet(symbols, blank);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("alphabet: ") + e.what());
  }
  if (!have_states) throw ParseError(0, "missing 'states' line");

  auto state_index = [&d](const std::string& name, int line) {
    const auto it = std::find(d.states.begin(), d.states.end(), name);
    if (it == d.states.end()) throw ParseError(line, "undeclared state '" + name + "'");
    return static_cast<int>(it - d.states.begin());
  };
  d.initial = initial_name ? state_index(*initial_name, initial_line) : 0;
  for (std::size_t i = 0; i < final_names.size(); ++i) {
    d.finals.push_back({state_index(final_names[i].first, final_lines[i]), final_names[i].second});
  }

  const std::string work_symbols = d.work_alphabet();
  std::string b_symbols(1, d.alphabet.blank());
  b_symbols.append(d.alphabet.symbols());

  std::map<std::tuple<int, char, char, char>, Candidate> chosen;
  for (const auto& l : rules) {
    const auto& t = l.toks;
    if (t.size() != 11 || t[4] != "->")
      throw ParseError(l.number, "expected 'state work input oracle -> next write wm im om emit'");
    const int from = state_index(t[0], l.number);
    const int next = state_index(t[5], l.number);
    auto key_symbols = [&](const std::string& tok, const std::string& domain, const char* what) {
      if (tok == "*") return domain;
      const char c = single_char(l, tok, what);
      if (domain.find(c) == std::string::npos)
        throw ParseError(l.number, std::string("undeclared ") + what + " symbol '" + tok + "'");
      return std::string(1, c);
    };
    const auto works = key_symbols(t[1], work_symbols, "work");
    const auto inputs = key_symbols(t[2], b_symbols, "input");
    const auto oracles = key_symbols(t[3], b_symbols, "oracle");
    const int specificity = (t[1] != "*") + (t[2] != "*") + (t[3] != "*");

    std::optional<char> write;
    if (t[6] != "=") {
      write = single_char(l, t[6], "write");
      if (work_symbols.find(*write) == std::string::npos)
        throw ParseError(l.number, std::string("undeclared write symbol '") + t[6] + "'");
    }
    Move moves[3];
    for (int i = 0; i < 3; ++i) {
      const auto m = t[7 + i].size() == 1 ? parse_move(t[7 + i][0]) : std::nullopt;
      if (!m) throw ParseError(l.number, "move must be L, R or S");
      moves[i] = *m;
    }
    std::optional<char> emit;
    if (t[10] != "-") {
      emit = single_char(l, t[10], "emit");
      if (!d.alphabet.in_b(*emit)) throw ParseError(l.number, "emit must be a symbol of B or '-'");
    }

    for (char w : works) {
      for (char in : inputs) {
        for (char o : oracles) {
          Candidate c{{{from, w, in, o}, {next, write.value_or(w), moves[0], moves[1], moves[2], emit}},
                      specificity, l.number};
          auto [it, inserted] = chosen.try_emplace({from, w, in, o}, c);
          if (inserted) continue;
          if (it->second.specificity == specificity)
            throw ParseError(l.number, "nondeterministic: key also defined on line " +
                                           std::to_string(it->second.line));
          if (it->second.specificity < specificity) it->second = c;
        }
      }
    }
  }

  // Keep source order of first appearance for error reporting, key order otherwise.
  std::vector<int> lines;
  for (const auto& [key, c] : chosen) {
    d.transitions.push_back(c.t);
    lines.push_back(c.line);
  }
  d = d.canonical();
  lines.clear();
  for (const auto& t : d.transitions) {
    lines.push_back(chosen.at({t.key.state, t.key.work, t.key.input, t.key.oracle}).line);
  }

  if (auto violations = validate(d); !violations.empty()) {
    const auto& v = violations.front();
    int line = 0;
    if (v.field.rfind("transitions[", 0) == 0) {
      const auto idx = std::stoul(v.field.substr(12));
      if (idx < lines.size()) line = lines[idx];
    }
    throw ParseError(line, v.rule + ": " + v.detail, true);
  }
  return doc;
}

}  // namespace

MachineDescription parse_dsl(std::string_view text) { return parse_document(text, false).machine; }

RunnableDocument parse_runnable(std::string_view text) { return parse_document(text, true); }

std::string print_dsl(const MachineDescription& desc) {
  const auto d = desc.canonical();
  std::ostringstream os;
  if (!d.name.empty()) os << "machine " << d.name << '\n';
  os << "alphabet " << d.alphabet.symbols() << '\n';
  os << "blank " << d.alphabet.blank() << '\n';
  os << "states";
  for (const auto& s : d.states) os << ' ' << s;
  os << '\n';
  os << "initial " << d.states.at(d.initial) << '\n';
  for (const auto& f : d.finals) {
    os << "final " << d.states.at(f.state);
    if (f.mark != Mark::None) os << ' ' << mark_name(f.mark);
    os << '\n';
  }
  if (!d.extra_symbols.empty()) os << "extra " << d.extra_symbols << '\n';
  if (!d.initial_work.empty()) os << "work " << d.initial_work << '\n';
  for (const auto& t : d.transitions) {
    const auto& a = t.action;
    os << d.states.at(t.key.state) << ' ' << t.key.work << ' ' << t.key.input << ' ' << t.key.oracle
       << " -> " << d.states.at(a.next) << ' ' << a.write << ' ' << move_char(a.work_move) << ' '
       << move_char(a.input_move) << ' ' << move_char(a.oracle_move) << ' ' << (a.emit ? *a.emit : '-')
       << '\n';
  }
  return os.str();
}

// ---- Encoding ----

namespace {

// Mark codes in the encoding; 1 is "not final".
constexpr int kFinalPlain = 0, kNotFinal = 1, kFinalLeft = 2, kFinalRight = 3;

int mark_code(const MachineDescription& d, int state) {
  const auto m = d.final_mark(state);
  if (!m) return kNotFinal;
  switch (*m) {
    case Mark::None: return kFinalPlain;
    case Mark::Left: return kFinalLeft;
    case Mark::Right: return kFinalRight;
  }
  return kNotFinal;
}

class Writer {
 public:
  explicit Writer(const Alphabet& a) : zero_(a.symbols()[0]), one_(a.symbols()[1]) {}
  void put(std::size_t v) {
    out_.append(v, one_);
    out_.push_back(zero_);
  }
  Word take() { return std::move(out_); }

 private:
  char zero_, one_;
  Word out_;
};

class Reader {
 public:
  Reader(std::string_view w, const Alphabet& a) : w_(w), zero_(a.symbols()[0]), one_(a.symbols()[1]) {}
  // Nullopt on a malformed or truncated field, or a value >= bound.
  std::optional<std::size_t> get(std::size_t bound) {
    std::size_t v = 0;
    while (pos_ < w_.size() && w_[pos_] == one_) {
      ++v;
      ++pos_;
    }
    if (pos_ == w_.size() || w_[pos_] != zero_) return std::nullopt;
    ++pos_;
    if (v >= bound) return std::nullopt;
    return v;
  }
  bool done() const { return pos_ == w_.size(); }

 private:
  std::string_view w_;
  std::size_t pos_ = 0;
  char zero_, one_;
};

}  // namespace

Word encode(const MachineDescription& desc) {
  require_valid(desc);
  const auto d = desc.canonical();
  const auto work = d.work_alphabet();
  auto wcode = [&work](char c) { return work.find(c); };
  const auto& alpha = d.alphabet;
  Writer out(alpha);
  out.put(d.states.size() - 1);
  out.put(d.extra_symbols.size());
  out.put(static_cast<std::size_t>(d.initial));
  for (std::size_t s = 0; s < d.states.size(); ++s) out.put(static_cast<std::size_t>(mark_code(d, static_cast<int>(s))));
  out.put(d.initial_work.size());
  for (char c : d.initial_work) out.put(wcode(c));
  out.put(d.transitions.size());
  for (const auto& t : d.transitions) {
    out.put(static_cast<std::size_t>(t.key.state));
    out.put(wcode(t.key.work));
    out.put(static_cast<std::size_t>(alpha.code(t.key.input)));
    out.put(static_cast<std::size_t>(alpha.code(t.key.oracle)));
    out.put(static_cast<std::size_t>(t.action.next));
    out.put(wcode(t.action.write));
    out.put(static_cast<std::size_t>(t.action.work_move));
    out.put(static_cast<std::size_t>(t.action.input_move));
    out.put(static_cast<std::size_t>(t.action.oracle_move));
    out.put(t.action.emit ? 1 + static_cast<std::size_t>(alpha.code(*t.action.emit)) : 0);
  }
  return out.take();
}

std::optional<MachineDescription> decode(std::string_view w, const Alphabet& alphabet) {
  Reader in(w, alphabet);
  const std::size_t limit = w.size() + 1;
  MachineDescription d;
  d.alphabet = alphabet;
  const auto s1 = in.get(limit);
  if (!s1) return std::nullopt;
  const std::size_t S = *s1 + 1;
  const auto x = in.get(alphabet.extra_pool().size() + 1);
  if (!x) return std::nullopt;
  d.extra_symbols = alphabet.extra_pool().substr(0, *x);
  const auto work = d.work_alphabet();
  const std::size_t W = work.size(), B = alphabet.size() + 1;
  const auto init = in.get(S);
  if (!init) return std::nullopt;
  d.initial = static_cast<int>(*init);
  for (std::size_t s = 0; s < S; ++s) {
    d.states.push_back("q" + std::to_string(s));
    const auto m = in.get(4);
    if (!m) return std::nullopt;
    if (*m == kFinalPlain) d.finals.push_back({static_cast<int>(s), Mark::None});
    if (*m == kFinalLeft) d.finals.push_back({static_cast<int>(s), Mark::Left});
    if (*m == kFinalRight) d.finals.push_back({static_cast<int>(s), Mark::Right});
  }
  const auto iw = in.get(limit);
  if (!iw) return std::nullopt;
  for (std::size_t i = 0; i < *iw; ++i) {
    const auto c = in.get(W);
    if (!c) return std::nullopt;
    d.initial_work.push_back(work[*c]);
  }
  const auto T = in.get(limit);
  if (!T) return std::nullopt;
  std::optional<std::array<std::size_t, 4>> prev;
  for (std::size_t i = 0; i < *T; ++i) {
    std::array<std::size_t, 10> f{};
    constexpr std::array<int, 10> kind = {0, 1, 2, 2, 0, 1, 3, 3, 3, 4};
    for (int j = 0; j < 10; ++j) {
      const std::size_t bound = kind[j] == 0 ? S : kind[j] == 1 ? W : kind[j] == 2 ? B : kind[j] == 3 ? 3 : B + 1;
      const auto v = in.get(bound);
      if (!v) return std::nullopt;
      f[j] = *v;
    }
    const std::array<std::size_t, 4> key = {f[0], f[1], f[2], f[3]};
    if (prev && !(*prev < key)) return std::nullopt;
    prev = key;
    if (d.final_mark(static_cast<int>(f[0]))) return std::nullopt;
    Transition t;
    t.key = {static_cast<int>(f[0]), work[f[1]], alphabet.symbol(static_cast<int>(f[2])),
             alphabet.symbol(static_cast<int>(f[3]))};
    t.action = {static_cast<int>(f[4]), work[f[5]], static_cast<Move>(f[6]), static_cast<Move>(f[7]),
                static_cast<Move>(f[8]), std::nullopt};
    if (f[9] > 0) t.action.emit = alphabet.symbol(static_cast<int>(f[9] - 1));
    d.transitions.push_back(t);
  }
  if (!in.done()) return std::nullopt;
  return d;
}

bool is_valid_encoding(std::string_view w, const Alphabet& alphabet) {
  return decode(w, alphabet).has_value();
}

namespace {

// Depth-first generation of all valid encodings of one length. Every field
// loop runs upward, which is lexicographic order because u(v) < u(v + 1).
class LengthGenerator {
 public:
  LengthGenerator(std::size_t length, const EncodingLimits& limits,
                  const std::function<void(const Word&)>& visit, const Alphabet& a)
      : L_(length), limits_(limits), visit_(visit), zero_(a.symbols()[0]), one_(a.symbols()[1]),
        B_(a.size() + 1), pool_(a.extra_pool().size()) {}

  void run() { gen_states(); }

 private:
  std::size_t left() const { return L_ - buf_.size(); }
  void push(std::size_t v) {
    buf_.append(v, one_);
    buf_.push_back(zero_);
  }
  void pop(std::size_t v) { buf_.resize(buf_.size() - v - 1); }
  // Calls f(v) for lo <= v < hi while v + 1 + rest fits.
  template <class F>
  void each(std::size_t hi, std::size_t rest, F&& f, std::size_t lo = 0) {
    for (std::size_t v = lo; v < hi && v + 1 + rest <= left(); ++v) {
      push(v);
      f(v);
      pop(v);
    }
  }

  void gen_states() {
    const std::size_t cap = limits_.max_states.value_or(SIZE_MAX);
    for (std::size_t s = 1; s <= cap && 2 * s + 4 <= left(); ++s) {
      push(s - 1);
      S_ = s;
      each(pool_ + 1, S_ + 3, [this](std::size_t x) {
        W_ = B_ + x;
        each(S_, S_ + 2, [this](std::size_t) {
          final_.assign(S_, false);
          gen_marks(0);
        });
      });
      pop(s - 1);
    }
  }

  void gen_marks(std::size_t i) {
    if (i == S_) {
      non_final_keys_ = 0;
      for (std::size_t s = 0; s < S_; ++s) non_final_keys_ += final_[s] ? 0 : W_ * B_ * B_;
      gen_work();
      return;
    }
    each(4, (S_ - i - 1) + 2, [this, i](std::size_t m) {
      final_[i] = m != kNotFinal;
      gen_marks(i + 1);
    });
  }

  void gen_work() {
    const std::size_t cap = limits_.max_initial_work.value_or(SIZE_MAX);
    for (std::size_t n = 0; n <= cap && n + 1 + n + 1 <= left(); ++n) {
      push(n);
      gen_work_cell(n, 0);
      pop(n);
    }
  }

  void gen_work_cell(std::size_t n, std::size_t j) {
    if (j == n) {
      gen_count();
      return;
    }
    each(W_, (n - j - 1) + 1, [this, n, j](std::size_t) { gen_work_cell(n, j + 1); });
  }

  void gen_count() {
    for (std::size_t t = 0; t <= non_final_keys_ && t + 1 + 10 * t <= left(); ++t) {
      push(t);
      T_ = t;
      have_prev_ = false;
      gen_field(0, 0, false);
      pop(t);
    }
  }

  // `tight`: the key fields written so far equal the previous key.
  void gen_field(std::size_t t, int f, bool tight) {
    if (t == T_) {
      if (left() == 0) visit_(buf_);
      return;
    }
    if (f == 10) {
      const auto saved = prev_;
      const bool saved_have = have_prev_;
      prev_ = cur_;
      have_prev_ = true;
      gen_field(t + 1, 0, true);
      prev_ = saved;
      have_prev_ = saved_have;
      return;
    }
    if (f == 0) tight = have_prev_;
    static constexpr int kind[10] = {0, 1, 2, 2, 0, 1, 3, 3, 3, 4};
    const std::size_t bound = kind[f] == 0 ? S_ : kind[f] == 1 ? W_ : kind[f] == 2 ? B_ : kind[f] == 3 ? 3 : B_ + 1;
    const std::size_t rest = static_cast<std::size_t>(9 - f) + 10 * (T_ - t - 1);
    const std::size_t lo = (f < 4 && tight) ? prev_[f] : 0;
    each(bound, rest, [&](std::size_t v) {
      if (f == 0 && final_[v]) return;
      if (f < 4) cur_[f] = v;
      const bool still = f < 4 && tight && v == prev_[f];
      if (f == 3 && still) return;  // key equal to the previous one
      gen_field(t, f + 1, f < 4 ? still : false);
    }, lo);
  }

  std::size_t L_;
  EncodingLimits limits_;
  const std::function<void(const Word&)>& visit_;
  char zero_, one_;
  std::size_t B_, pool_;
  std::size_t S_ = 0, W_ = 0, T_ = 0, non_final_keys_ = 0;
  std::vector<bool> final_;
  std::array<std::size_t, 4> prev_{}, cur_{};
  bool have_prev_ = false;
  Word buf_;
};

}  // namespace

void for_each_encoding_of_length(std::size_t length, const EncodingLimits& limits,
                                 const std::function<void(const Word&)>& visit, const Alphabet& alphabet) {
  LengthGenerator(length, limits, visit, alphabet).run();
}

EncodingCatalog::EncodingCatalog(const Alphabet& alphabet) : alphabet_(alphabet) {
  count_by_len_.assign(kMinEncodingLength, 0);
}

void EncodingCatalog::extend_one_length() {
  for_each_encoding_of_length(next_length_, {}, [this](const Word& w) { words_.push_back(w); }, alphabet_);
  count_by_len_.push_back(words_.size());
  ++next_length_;
}

const Word& EncodingCatalog::at(std::uint64_t k) {
  if (k == 0) throw PreconditionViolation("enumeration indices start at 1");
  std::lock_guard lock(mu_);
  while (words_.size() < k) extend_one_length();
  return words_[k - 1];
}

std::uint64_t EncodingCatalog::count_up_to_length(std::size_t len) {
  std::lock_guard lock(mu_);
  while (next_length_ <= len) extend_one_length();
  return len < count_by_len_.size() ? count_by_len_[len] : 0;
}

EncodingCatalog& default_catalog() {
  static EncodingCatalog catalog;
  return catalog;
}

}  // namespace turingtest
