#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "support/reference.h"
#include "support/zoo.h"
#include "turingtest/codec.h"

using namespace turingtest;
using reftest::zoo;

TEST_CASE("zoo files parse and round-trip through print") {
  for (const auto& name : reftest::zoo_machines()) {
    INFO(name);
    const auto d = zoo(name);
    const auto again = parse_dsl(print_dsl(d));
    CHECK(same_machine(d, again));
    CHECK(again.name == d.name);
    CHECK(again.states == d.states);
    CHECK(print_dsl(again) == print_dsl(d));
  }
}

TEST_CASE("parse errors carry a line and a rule") {
  const std::string dup = "states s0 done\ninitial s0\nfinal done\ns0 * * * -> done = S S S -\ns0 * * * -> s0 = S S S -\n";
  try {
    (void)parse_dsl(dup);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.message().rfind("nondeterministic", 0) == 0);
  }
  CHECK_THROWS_AS(parse_dsl("states a\ninitial zz\n"), ParseError);
  CHECK_THROWS_AS(parse_dsl("initial s\n"), ParseError);
  CHECK_THROWS_AS(parse_dsl("states s0\ns0 q * * -> s0 = S S S -\n"), ParseError);
  CHECK_THROWS_AS(parse_dsl("states s0\nfinal s0\ns0 * * * -> s0 = S S S -\n"), ParseError);
  CHECK_THROWS_AS(parse_dsl("states s0\nlimit 4\n"), ParseError);
  CHECK(parse_runnable("states s0\nlimit 4\n").limit == std::uint64_t{4});
  CHECK_THROWS_AS(parse_dsl("states s0\nbogus\n"), ParseError);
  CHECK_THROWS_AS(parse_dsl("states s0\ns0 * * * -> s0 = S X S -\n"), ParseError);
}

TEST_CASE("specific rules override wildcard rules") {
  const auto d = parse_dsl("states s0 done\nfinal done\ns0 * * * -> done = S S S a\ns0 * b * -> done = S S S b\n");
  CHECK(d.transitions.size() == 27);
  int b_emits = 0;
  for (const auto& t : d.transitions) b_emits += t.action.emit == 'b';
  CHECK(b_emits == 9);
}

TEST_CASE("encode and decode are inverse on the zoo") {
  for (const auto& name : reftest::zoo_machines()) {
    const auto d = zoo(name);
    const auto w = encode(d);
    CHECK(is_valid_encoding(w));
    const auto back = decode(w);
    REQUIRE(back.has_value());
    CHECK(same_machine(*back, d));
    CHECK(encode(*back) == w);
  }
  CHECK_FALSE(is_valid_encoding(""));
  CHECK_FALSE(is_valid_encoding("a"));
  CHECK_FALSE(is_valid_encoding("aaaaaaa"));
  CHECK_FALSE(is_valid_encoding("aaaaa_"));
}

TEST_CASE("encode and decode are inverse on random machines") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 500; ++iter) {
    MachineDescription d;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) d.states.push_back("q" + std::to_string(i));
    d.initial = static_cast<int>(rng() % n);
    for (int i = 0; i < n; ++i)
      if (rng() % 3 == 0) d.finals.push_back({i, static_cast<Mark>(rng() % 3)});
    d.extra_symbols = default_alphabet().extra_pool().substr(0, rng() % 3);
    const auto work = d.work_alphabet();
    for (int k = static_cast<int>(rng() % 3); k > 0; --k) d.initial_work.push_back(work[rng() % work.size()]);
    for (int s = 0; s < n; ++s) {
      if (d.final_mark(s)) continue;
      for (char w : work)
        for (char in : std::string("_ab"))
          for (char o : std::string("_ab")) {
            if (rng() % 4) continue;
            Action a{static_cast<int>(rng() % n), work[rng() % work.size()], static_cast<Move>(rng() % 3),
                     static_cast<Move>(rng() % 3), static_cast<Move>(rng() % 3), std::nullopt};
            if (rng() % 2) a.emit = "_ab"[rng() % 3];
            d.transitions.push_back({{s, w, in, o}, a});
          }
    }
    REQUIRE(validate(d).empty());
    const auto w = encode(d);
    const auto back = decode(w);
    REQUIRE(back.has_value());
    REQUIRE(same_machine(*back, d));
    REQUIRE(encode(*back) == w);
    // Damaged encodings: truncation is never valid (prefix-free).
    if (w.size() > 1) REQUIRE_FALSE(is_valid_encoding(std::string_view(w).substr(0, w.size() - 1)));
    REQUIRE_FALSE(is_valid_encoding(w + "a"));
  }
}

TEST_CASE("first valid encoding is the one-state halting machine") {
  std::string first;
  for (const auto& w : reftest::shortlex_words("ab", 12)) {
    if (is_valid_encoding(w)) {
      first = w;
      break;
    }
  }
  CHECK(first == "aaaaaa");
  const auto d = decode(first);
  REQUIRE(d.has_value());
  CHECK(same_machine(*d, zoo("halt")));
  CHECK(default_catalog().at(1) == first);
}

TEST_CASE("generator agrees with a brute-force scan of all words") {
  // Oracle: test every word up to length 16 for validity, in shortlex order.
  std::vector<std::string> brute;
  for (const auto& w : reftest::shortlex_words("ab", 16))
    if (is_valid_encoding(w)) brute.push_back(w);
  auto& cat = default_catalog();
  REQUIRE(cat.count_up_to_length(16) == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) REQUIRE(cat.at(i + 1) == brute[i]);
  // Each decoded machine occurs once.
  std::set<std::string> canon;
  for (const auto& w : brute) canon.insert(print_dsl(*decode(w)));
  CHECK(canon.size() == brute.size());
}

TEST_CASE("limited generation matches filtering") {
  for (std::size_t len = 6; len <= 18; ++len) {
    std::vector<Word> all, limited;
    for_each_encoding_of_length(len, {}, [&](const Word& w) { all.push_back(w); });
    for_each_encoding_of_length(len, {2, 1}, [&](const Word& w) { limited.push_back(w); });
    std::vector<Word> filtered;
    for (const auto& w : all) {
      const auto d = decode(w);
      if (d->states.size() <= 2 && d->initial_work.size() <= 1) filtered.push_back(w);
    }
    REQUIRE(limited == filtered);
  }
}

TEST_CASE("golden list of the first 100 encodings") {
  std::ifstream in(std::string(TURINGTEST_TESTDATA_DIR) + "/first100.txt");
  REQUIRE(in.good());
  std::string line;
  std::uint64_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++k;
    REQUIRE(default_catalog().at(k) == line);
  }
  CHECK(k == 100);
}
