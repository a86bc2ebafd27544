#include "app.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "turingtest/report.h"

namespace turingtest::app {

using Json = nlohmann::ordered_json;

namespace {

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + ": '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

Json memory_json(const MemoryClassParams& p) {
  return Json{{"s", p.max_states},
              {"d", p.max_initial_work},
              {"w", p.max_segment},
              {"max_encoding_length", p.max_encoding_length},
              {"size_cap", p.size_cap}};
}

// Memory classes are built once per parameter set.
const MemoryClass& memory_class(const MemoryClassParams& p) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::size_t, std::uint64_t, std::size_t, std::uint64_t>,
                  std::unique_ptr<MemoryClass>>
      cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{p.max_states, p.max_initial_work, p.max_segment, p.max_encoding_length, p.size_cap}];
  if (!slot) slot = std::make_unique<MemoryClass>(memory_class_enum(p));
  return *slot;
}

MemoryClassParams parse_memory(const std::string& s, MemoryClassParams base) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("memory class needs s,d,w: '" + s + "'");
  base.max_states = parse_u64(parts[0], "s");
  base.max_initial_work = parse_u64(parts[1], "d");
  base.max_segment = parse_u64(parts[2], "w");
  return base;
}

}  // namespace

// Configuration.

Config Config::load(const std::optional<std::string>& path) {
  Config c;
  c.zoo_dir = TURINGTEST_ZOO_DIR;
  if (!path) return c;
  std::ifstream in(*path);
  if (!in) throw std::runtime_error("cannot read config file " + *path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + *path + ": " + e.what());
  }
  try {
    const auto only = [&](const Json& obj, const std::set<std::string>& known, const std::string& where) {
      if (!obj.is_object()) throw UsageError("config " + *path + ": " + where + " must be an object");
      for (const auto& [key, value] : obj.items())
        if (!known.contains(key)) throw UsageError("config " + *path + ": unknown key '" + where + key + "'");
    };
    only(j, {"version", "alphabet", "zoo_dir", "budget_cycles", "step_cap", "diag_step_cap", "seed", "pi", "comm",
             "prob", "memory"},
         "");
    if (j.contains("pi")) only(j["pi"], {"prefix", "universe", "certify_cycles", "budget_cycles"}, "pi.");
    if (j.contains("comm")) only(j["comm"], {"search_cap", "budget_cycles", "steps"}, "comm.");
    if (j.contains("prob")) only(j["prob"], {"trials", "step_cap"}, "prob.");
    if (j.contains("memory")) only(j["memory"], {"s", "d", "w", "max_encoding_length", "size_cap"}, "memory.");
    if (j.contains("alphabet") && j["alphabet"] != "ab") throw UsageError("config " + *path + ": alphabet must be ab");
    c.zoo_dir = j.value("zoo_dir", c.zoo_dir);
    c.budget_cycles = j.value("budget_cycles", c.budget_cycles);
    c.step_cap = j.value("step_cap", c.step_cap);
    c.diag_step_cap = j.value("diag_step_cap", c.diag_step_cap);
    c.seed = j.value("seed", c.seed);
    if (j.contains("pi")) {
      const auto& p = j["pi"];
      c.pi_prefix = p.value("prefix", c.pi_prefix);
      c.pi_universe = p.value("universe", c.pi_universe);
      c.pi_certify_cycles = p.value("certify_cycles", c.pi_certify_cycles);
      c.pi_budget_cycles = p.value("budget_cycles", c.pi_budget_cycles);
    }
    if (j.contains("comm")) {
      const auto& p = j["comm"];
      c.comm_search_cap = p.value("search_cap", c.comm_search_cap);
      c.comm_budget_cycles = p.value("budget_cycles", c.comm_budget_cycles);
      c.comm_steps = p.value("steps", c.comm_steps);
    }
    if (j.contains("prob")) {
      const auto& p = j["prob"];
      c.prob_trials = p.value("trials", c.prob_trials);
      c.prob_step_cap = p.value("step_cap", c.prob_step_cap);
    }
    if (j.contains("memory")) {
      const auto& p = j["memory"];
      c.memory.max_states = p.value("s", c.memory.max_states);
      c.memory.max_initial_work = p.value("d", c.memory.max_initial_work);
      c.memory.max_segment = p.value("w", c.memory.max_segment);
      c.memory.max_encoding_length = p.value("max_encoding_length", c.memory.max_encoding_length);
      c.memory.size_cap = p.value("size_cap", c.memory.size_cap);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + *path + ": " + e.what());
  }
  if (c.budget_cycles == 0 || c.step_cap == 0 || c.pi_budget_cycles == 0 || c.comm_budget_cycles == 0)
    throw UsageError("config budgets and caps must be positive");
  return c;
}

std::optional<std::string> Config::env_path() {
  if (const char* p = std::getenv("TURINGTEST_CONFIG"); p && *p) return std::string(p);
  return std::nullopt;
}

std::string Config::json() const {
  Json j;
  j["version"] = kReportVersion;
  j["alphabet"] = "ab";
  j["budget_cycles"] = budget_cycles;
  j["step_cap"] = step_cap;
  j["diag_step_cap"] = diag_step_cap;
  j["seed"] = seed;
  j["pi"] = Json{{"prefix", pi_prefix},
                 {"universe", pi_universe},
                 {"certify_cycles", pi_certify_cycles},
                 {"budget_cycles", pi_budget_cycles}};
  j["comm"] = Json{{"search_cap", comm_search_cap}, {"budget_cycles", comm_budget_cycles}, {"steps", comm_steps}};
  j["prob"] = Json{{"trials", prob_trials}, {"step_cap", prob_step_cap}};
  j["memory"] = memory_json(memory);
  return j.dump();
}

std::string Config::hash() const { return fnv1a_hex(json()); }

TestOptions Config::options() const {
  TestOptions o;
  o.budget = budget();
  o.step_cap = step_cap;
  o.seed = seed;
  return o;
}

// Zoo.

Zoo::Zoo(std::string dir) : dir_(std::move(dir)) {
  std::ifstream in(dir_ + "/zoo.json");
  if (!in) throw std::runtime_error("cannot read " + dir_ + "/zoo.json");
  const auto j = nlohmann::json::parse(in);
  for (const auto& m : j.at("machines")) {
    ZooEntry e;
    e.name = m.at("name").get<std::string>();
    e.file = m.at("file").get<std::string>();
    e.role = m.at("role").get<std::string>();
    e.communicable = m.at("communicable").get<bool>();
    e.autonomous = m.at("autonomous").get<bool>();
    if (m.contains("time_limit")) e.time_limit = m["time_limit"].get<std::uint64_t>();
    e.states = m.at("states").get<std::size_t>();
    e.initial_work = m.at("initial_work").get<std::size_t>();
    e.encoding_length = m.at("encoding_length").get<std::size_t>();
    if (const auto& s = m.at("self_recognition"); !s.is_null()) {
      PiFact f;
      f.halts = s.at("halts").get<bool>();
      if (s.contains("cycles")) f.cycles = s["cycles"].get<std::uint64_t>();
      f.reason = s.at("reason").get<std::string>();
      e.self_recognition = f;
    }
    e.lambda_answers = m.at("lambda_answers").get<std::vector<Word>>();
    if (m.contains("lambda_diverges_at")) e.lambda_diverges_at = m["lambda_diverges_at"].get<std::uint64_t>();
    entries_.push_back(std::move(e));
  }
}

const ZooEntry& Zoo::entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw UsageError("no zoo machine named '" + name + "'");
}

RunnableDocument Zoo::runnable(const std::string& name) const { return load_runnable(dir_ + "/" + entry(name).file); }

MachineDescription Zoo::machine(const std::string& name) const { return runnable(name).machine; }

std::vector<std::string> Zoo::names(const std::string& role) const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.role == role) out.push_back(e.name);
  return out;
}

std::vector<std::string> Zoo::communicable() const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.role == "machine" && e.communicable && !e.time_limit) out.push_back(e.name);
  return out;
}

RunnableDocument load_runnable(const std::string& path) { return parse_runnable(read_text_file(path)); }

ParticipantFactory runnable_factory(const RunnableDocument& doc, const std::string& label) {
  if (!doc.limit) return machine_factory(doc.machine, label);
  const auto item = RunnableItem::time_limited(doc.machine, *doc.limit, label + "|" + std::to_string(*doc.limit));
  return [item] { return item.instantiate(); };
}

MachineSource prefixed(const Zoo& zoo, const std::vector<std::string>& names) {
  std::vector<MachineDescription> front;
  for (const auto& n : names) front.push_back(zoo.machine(n));
  return prefixed_source(std::move(front));
}

std::shared_ptr<const BoundedPi> make_pi(const Config& cfg, const Zoo& zoo) {
  const auto at = prefixed(zoo, cfg.pi_prefix);
  std::vector<MachineDescription> u;
  for (std::uint64_t k = 1; k <= cfg.pi_universe; ++k) u.push_back(at(k));
  return std::make_shared<const BoundedPi>(
      certified_universe(std::move(u), cfg.pi_certify_cycles, RunBudget::cycles(cfg.pi_budget_cycles)));
}

// Specifications.

namespace {

std::string stem(const std::string& path) {
  auto base = path.substr(path.find_last_of('/') + 1);
  if (auto dot = base.rfind(".tm"); dot != std::string::npos && dot + 3 == base.size()) base.resize(dot);
  return base;
}

MachineDescription machine_at(const std::string& path) {
  auto doc = load_runnable(path);
  if (doc.limit) throw UsageError(path + ": a time-limited document cannot serve here");
  if (doc.machine.name.empty()) doc.machine.name = stem(path);
  return doc.machine;
}

}  // namespace

Tester make_tester(const std::string& spec, const Config& cfg, const Zoo& zoo) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "dumb" && !arg.empty()) return dumb_tester(machine_at(arg), cfg.budget());
  if (kind == "dsl" && !arg.empty()) {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw UsageError("dsl tester needs <interrogator.tm>,<sp.tm>");
    return machine_tester(machine_at(parts[0]), machine_at(parts[1]), cfg.budget());
  }
  if (spec == "diag:time") return diagonal_tester(std::make_shared<TimeLimitedEnumerator>(), cfg.budget());
  if (kind == "diag" && arg.rfind("mem", 0) == 0) {
    const auto params = arg == "mem" ? cfg.memory : arg.rfind("mem:", 0) == 0 ? parse_memory(arg.substr(4), cfg.memory)
                                                                              : throw UsageError("bad spec " + spec);
    auto t = diagonal_tester(memory_class(params).egen(), cfg.budget());
    t.id = "diag:mem:" + std::to_string(params.max_states) + "," + std::to_string(params.max_initial_work) + "," +
           std::to_string(params.max_segment);
    return t;
  }
  if (spec == "pi") return pi_tester(make_pi(cfg, zoo), prefixed(zoo, cfg.pi_prefix));
  if (spec == "comm") {
    CommOptions co;
    co.search_cap = cfg.comm_search_cap;
    co.budget = RunBudget::cycles(cfg.comm_budget_cycles);
    co.machine_at = prefixed(zoo, cfg.pi_prefix);
    return comm_tester(make_pi(cfg, zoo), co);
  }
  if (kind == "prob") {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw UsageError("prob tester needs <m>,<p0>");
    ProbConfig pc;
    pc.m = parse_u64(parts[0], "m");
    try {
      pc.p0 = std::stod(parts[1]);
    } catch (const std::exception&) {
      throw UsageError("bad p0 '" + parts[1] + "'");
    }
    if (pc.m == 0 || !(pc.p0 >= 0 && pc.p0 <= 1)) throw UsageError("prob tester needs m >= 1 and 0 <= p0 <= 1");
    pc.source = prefixed(zoo, zoo.communicable());
    return prob_tester(pc, cfg.seed, nullptr);
  }
  throw UsageError("unknown tester spec '" + spec + "'");
}

ParticipantFactory make_subject(const std::string& spec, const Config& cfg, const Zoo& zoo) {
  if (spec.rfind("item:time:", 0) == 0) {
    const auto n = parse_u64(spec.substr(10), "index");
    if (n == 0) throw UsageError("indices start at 1");
    const auto item = TimeLimitedEnumerator().item(n);
    return [item] { return item.instantiate(); };
  }
  if (spec.rfind("item:mem:", 0) == 0) {
    const auto n = parse_u64(spec.substr(9), "index");
    if (n == 0) throw UsageError("indices start at 1");
    const auto item = memory_class(cfg.memory).r()->item(n);
    return [item] { return item.instantiate(); };
  }
  if (spec.rfind("universal:", 0) == 0) {
    const auto k = parse_u64(spec.substr(10), "index");
    if (k == 0) throw UsageError("indices start at 1");
    return machine_factory(universal_enum(k), "A" + std::to_string(k));
  }
  if (spec.rfind("echo:", 0) == 0) {
    const auto tester = make_tester(spec.substr(5), cfg, zoo);
    const auto budget = cfg.budget();
    const auto cap = cfg.step_cap;
    return [tester, budget, cap] { return echo_generator(tester, budget, cap); };
  }
  return runnable_factory(load_runnable(spec), stem(spec));
}

}  // namespace turingtest::app
