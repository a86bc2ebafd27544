#include "turingtest/pi.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "turingtest/codec.h"

namespace turingtest {

std::optional<PiFact> certify(const MachineDescription& m, const BWord& question, std::uint64_t max_cycles) {
  MachineInstance inst(m);
  inst.begin_question(question);
  const std::uint64_t len = question.size();
  PiFact f{encode(m), question, false, std::nullopt, ""};

  ConfigSnapshot saved = inst.config_snapshot();
  std::uint64_t saved_in = inst.input_head(), min_in = saved_in;
  std::uint64_t power = 1, lam = 0;
  while (inst.status() == MachineInstance::Status::Running) {
    if (inst.cycles_this_question() >= max_cycles) return std::nullopt;
    inst.step();
    if (inst.status() != MachineInstance::Status::Running) break;
    const std::uint64_t in = inst.input_head();
    min_in = std::min(min_in, in);
    if (inst.matches(saved)) {
      if (in == saved_in) {
        f.reason = "repetition";
        return f;
      }
      // Beyond the question every input cell is blank, so a loop that stays
      // there and drifts right repeats forever.
      if (saved_in >= len && min_in >= len && in > saved_in) {
        f.reason = "input-drift";
        return f;
      }
    }
    if (++lam == power) {
      saved = inst.config_snapshot();
      saved_in = min_in = in;
      power *= 2;
      lam = 0;
    }
  }
  if (inst.status() == MachineInstance::Status::Stuck) {
    f.reason = "stuck";
    return f;
  }
  f.halts = true;
  f.cycles = inst.cycles_this_question();
  f.reason = "halted";
  return f;
}

std::string fact_to_json(const PiFact& f) {
  nlohmann::ordered_json j;
  j["machine"] = f.machine;
  j["question"] = f.question;
  j["halts"] = f.halts;
  if (f.cycles) j["cycles"] = *f.cycles;
  j["reason"] = f.reason;
  return j.dump();
}

PiFact fact_from_json(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    PiFact f;
    f.machine = j.at("machine").get<std::string>();
    f.question = j.at("question").get<std::string>();
    f.halts = j.at("halts").get<bool>();
    if (j.contains("cycles")) f.cycles = j.at("cycles").get<std::uint64_t>();
    f.reason = j.value("reason", std::string("asserted"));
    if (!is_valid_encoding(f.machine)) throw std::invalid_argument("not a machine encoding");
    if (f.halts && !f.cycles) throw std::invalid_argument("halting fact without cycles");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("certificate: ") + e.what());
  }
}

void write_certificates(std::ostream& out, const std::vector<PiFact>& facts) {
  for (const auto& f : facts) out << fact_to_json(f) << '\n';
}

std::vector<PiFact> read_certificates(std::istream& in) {
  std::vector<PiFact> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(fact_from_json(line));
  }
  return out;
}

const char* pi_source_name(PiSource s) { return s == PiSource::Certificate ? "certificate" : "simulation"; }

BoundedPi::BoundedPi(std::vector<MachineDescription> universe, RunBudget budget, std::vector<PiFact> facts)
    : universe_(std::move(universe)), budget_(budget), facts_(std::move(facts)) {
  if (!budget_.bounded()) throw PreconditionViolation("recognition oracle needs a bounded budget");
  for (const auto& m : universe_) {
    auto e = encode(m);
    if (std::find(encodings_.begin(), encodings_.end(), e) == encodings_.end()) encodings_.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    auto [it, fresh] = index_.try_emplace({facts_[i].machine, facts_[i].question}, i);
    if (!fresh && !(facts_[it->second].halts == facts_[i].halts))
      throw std::invalid_argument("contradictory certificates for one machine and question");
  }
}

BoundedPi::BoundedPi(BoundedPi&& other) noexcept
    : universe_(std::move(other.universe_)),
      encodings_(std::move(other.encodings_)),
      budget_(other.budget_),
      facts_(std::move(other.facts_)),
      index_(std::move(other.index_)),
      negatives_(other.budget_relative_negatives()) {}

PiAnswer BoundedPi::query(const MachineDescription& m, const Word& question) const {
  if (auto it = index_.find({encode(m), question}); it != index_.end()) {
    const auto& f = facts_[it->second];
    return {f.halts, PiSource::Certificate, f.cycles};
  }
  MachineInstance inst(m);
  const auto out = inst.pose_question(question, budget_);
  if (const auto* a = std::get_if<Answered>(&out)) return {true, PiSource::Simulation, a->cycles};
  std::lock_guard lock(mu_);
  ++negatives_;
  return {false, PiSource::Simulation, std::nullopt};
}

BWord BoundedPi::tape_prefix(std::size_t len) const {
  std::vector<std::pair<Word, Word>> pairs;
  for (std::size_t i = 0; i < encodings_.size(); ++i)
    for (std::size_t j = 0; j < encodings_.size(); ++j)
      if (query(*decode(encodings_[i]), encodings_[j]).recognizes) pairs.emplace_back(encodings_[i], encodings_[j]);
  std::sort(pairs.begin(), pairs.end());
  const char blank = default_alphabet().blank();
  BWord out;
  for (const auto& [a, b] : pairs) {
    if (out.size() >= len) break;
    out += a;
    out += blank;
    out += b;
    out += blank;
  }
  out.resize(len, blank);
  return out;
}

OraclePtr BoundedPi::tape_oracle(std::size_t len) const {
  return std::make_shared<TapeOracle>(default_alphabet(), tape_prefix(len), "pi:" + describe());
}

bool BoundedPi::closed() const {
  for (const auto& a : encodings_)
    for (const auto& b : encodings_)
      if (!index_.count({a, b})) return false;
  return true;
}

std::uint64_t BoundedPi::budget_relative_negatives() const {
  std::lock_guard lock(mu_);
  return negatives_;
}

std::string BoundedPi::describe() const {
  return "universe=" + std::to_string(encodings_.size()) + " facts=" + std::to_string(facts_.size()) +
         " budget=" + std::to_string(budget_.max_cycles()) + (closed() ? " closed" : " open");
}

BoundedPi certified_universe(std::vector<MachineDescription> universe, std::uint64_t max_cycles, RunBudget budget) {
  std::vector<Word> encs;
  for (const auto& m : universe) {
    auto e = encode(m);
    if (std::find(encs.begin(), encs.end(), e) == encs.end()) encs.push_back(std::move(e));
  }
  std::vector<PiFact> facts;
  for (const auto& a : encs) {
    const auto m = *decode(a);
    for (const auto& b : encs)
      if (auto f = certify(m, b, max_cycles)) facts.push_back(std::move(*f));
  }
  return BoundedPi(std::move(universe), budget, std::move(facts));
}

}  // namespace turingtest
