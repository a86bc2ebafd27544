#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "turingtest/arena.h"
#include "turingtest/prob.h"

namespace turingtest {

// Version of every JSON document below; bumped on incompatible changes.
inline constexpr int kReportVersion = 1;

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// Serialized JSON, keys in a fixed order, two-space indent.
std::string transcript_json(const Transcript& t);
std::string test_report_json(const TestRun& run, const std::string& config_hash);
// One orientation only (the verdict of the missing side is not computed).
std::string single_report_json(const Transcript& t, const std::string& config_hash);
std::string prob_report_json(const ProbOutcome& o, const std::string& config_hash);

}  // namespace turingtest
