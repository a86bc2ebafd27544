#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "turingtest/vm.h"

namespace turingtest {

// A decided fact "machine answers question" (or provably never does).
struct PiFact {
  Word machine;  // encoding
  BWord question;
  bool halts = false;
  std::optional<std::uint64_t> cycles;  // when halts
  // halted | stuck | repetition | input-drift | asserted
  std::string reason;

  friend bool operator==(const PiFact&, const PiFact&) = default;
};

// Decides whether `m` answers `question` on the blank oracle by simulating
// up to `max_cycles` cycles. Non-halting is proved by a repeated
// configuration, either exactly or while the input head drifts right over
// blanks. Returns nullopt when neither is established in time.
std::optional<PiFact> certify(const MachineDescription& m, const BWord& question, std::uint64_t max_cycles);

// One fact per line as JSON.
std::string fact_to_json(const PiFact& f);
PiFact fact_from_json(const std::string& line);  // throws std::invalid_argument
void write_certificates(std::ostream& out, const std::vector<PiFact>& facts);
std::vector<PiFact> read_certificates(std::istream& in);

enum class PiSource { Certificate, Simulation };
const char* pi_source_name(PiSource s);

struct PiAnswer {
  bool recognizes = false;
  PiSource source = PiSource::Simulation;
  std::optional<std::uint64_t> cycles;
};

// The recognition oracle over a finite universe: certified facts first,
// budgeted simulation for everything else. A "no" from simulation only means
// "not within budget"; such answers are counted.
class BoundedPi {
 public:
  BoundedPi(std::vector<MachineDescription> universe, RunBudget budget, std::vector<PiFact> facts = {});
  BoundedPi(BoundedPi&& other) noexcept;

  PiAnswer query(const MachineDescription& m, const Word& question) const;

  // Blocks enc(M) blank enc(N) blank for recognizing universe pairs, in
  // lexicographic order of (enc(M), enc(N)), truncated or blank-padded.
  BWord tape_prefix(std::size_t len) const;
  OraclePtr tape_oracle(std::size_t len) const;

  const std::vector<MachineDescription>& universe() const { return universe_; }
  const std::vector<PiFact>& facts() const { return facts_; }
  const RunBudget& budget() const { return budget_; }
  // Every universe pair (M, N) has a certified fact.
  bool closed() const;
  // Negative answers that came from simulation rather than a certificate.
  std::uint64_t budget_relative_negatives() const;
  std::string describe() const;

 private:
  std::vector<MachineDescription> universe_;
  std::vector<Word> encodings_;
  RunBudget budget_;
  std::vector<PiFact> facts_;
  std::map<std::pair<Word, BWord>, std::size_t> index_;
  mutable std::mutex mu_;
  mutable std::uint64_t negatives_ = 0;
};

// Certifies every universe pair within `max_cycles`; pairs that cannot be
// decided are left to simulation, so the result may not be closed().
BoundedPi certified_universe(std::vector<MachineDescription> universe, std::uint64_t max_cycles,
                             RunBudget budget);

inline bool pi_query(const BoundedPi& pi, const MachineDescription& m, const Word& n_enc) {
  return pi.query(m, n_enc).recognizes;
}
inline BWord pi_tape_prefix(const BoundedPi& pi, std::size_t len) { return pi.tape_prefix(len); }

}  // namespace turingtest
