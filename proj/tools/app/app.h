#pragma once
// Shared by the command-line tool and the acceptance suite: configuration,
// the machine zoo, tester/subject specifications and the scenarios.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "turingtest/arena.h"
#include "turingtest/codec.h"
#include "turingtest/enumerate.h"
#include "turingtest/pi.h"
#include "turingtest/prob.h"

namespace turingtest::app {

// Bad flags or specifications (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string zoo_dir;  // not part of the hash
  std::uint64_t budget_cycles = 100'000;
  std::uint64_t step_cap = 1'000;
  // Diagonal tests against time-limited machines first differ late.
  std::uint64_t diag_step_cap = 2'000'000'000;
  std::uint64_t seed = 7;

  std::vector<std::string> pi_prefix = {"echo", "self_recognizer", "counter", "halt", "slow", "loop", "const1"};
  std::uint64_t pi_universe = 40;
  std::uint64_t pi_certify_cycles = 10'000;
  std::uint64_t pi_budget_cycles = 10'000;

  std::uint64_t comm_search_cap = 2'000;
  std::uint64_t comm_budget_cycles = 10'000;
  std::uint64_t comm_steps = 8;

  std::uint64_t prob_trials = 2'000;
  std::uint64_t prob_step_cap = 100'000;

  MemoryClassParams memory;

  // Defaults, overridden by a JSON file when `path` is set.
  static Config load(const std::optional<std::string>& path);
  // Path from TURINGTEST_CONFIG, if set.
  static std::optional<std::string> env_path();
  std::string json() const;  // effective configuration without zoo_dir
  std::string hash() const;  // FNV-1a of json()
  RunBudget budget() const { return RunBudget::cycles(budget_cycles); }
  TestOptions options() const;
};

struct ZooEntry {
  std::string name;
  std::string file;
  std::string role;  // machine | interrogator
  bool communicable = false;
  bool autonomous = false;
  std::optional<std::uint64_t> time_limit;
  std::size_t states = 0;
  std::size_t initial_work = 0;
  std::size_t encoding_length = 0;
  std::optional<PiFact> self_recognition;  // absent when undecided
  std::vector<Word> lambda_answers;
  std::optional<std::uint64_t> lambda_diverges_at;
};

class Zoo {
 public:
  explicit Zoo(std::string dir);
  const std::vector<ZooEntry>& entries() const { return entries_; }
  const ZooEntry& entry(const std::string& name) const;
  MachineDescription machine(const std::string& name) const;
  RunnableDocument runnable(const std::string& name) const;
  std::vector<std::string> names(const std::string& role) const;
  // Plain machines (no time limit) answering every question.
  std::vector<std::string> communicable() const;
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<ZooEntry> entries_;
};

RunnableDocument load_runnable(const std::string& path);
// Participant factory for a runnable document (M or M|t).
ParticipantFactory runnable_factory(const RunnableDocument& doc, const std::string& label);

// Enumeration used by the oracle and probabilistic testers: the listed zoo
// machines first, then the universal enumeration.
MachineSource prefixed(const Zoo& zoo, const std::vector<std::string>& names);
std::shared_ptr<const BoundedPi> make_pi(const Config& cfg, const Zoo& zoo);

// Tester specifications: dumb:<sp.tm>, dsl:<i.tm>,<sp.tm>, diag:time,
// diag:mem[:s,d,w], pi, comm, prob:<m>,<p0>.
Tester make_tester(const std::string& spec, const Config& cfg, const Zoo& zoo);
// Subject specifications: a .tm path, item:time:<n>, item:mem:<n>,
// universal:<k>, echo:<tester spec>.
ParticipantFactory make_subject(const std::string& spec, const Config& cfg, const Zoo& zoo);

struct ScenarioResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;  // one line
  std::string json;     // deterministic report
};

inline constexpr int kScenarioCount = 10;
ScenarioResult run_scenario(int id, const Config& cfg, const Zoo& zoo);

}  // namespace turingtest::app
