#pragma once
// Check orchestration and machine-readable reporting. Runs the checks of an
// instance in declared order and assembles a deterministic RunReport; with a
// fixed seed two runs produce byte-identical reports modulo the wall_time_ms
// fields.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pconvex/instance.hpp"
#include "pconvex/weff.hpp"

namespace pconvex {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;

using OrderedJson = nlohmann::ordered_json;

// Exit codes: 0 all checks as expected with no counterexamples found,
// 2 at least one falsifier found an expected counterexample (informational),
// 1 at least one check did not match its declared expectation (high severity),
// 64 parse or validation failure.
struct RunReport {
  std::string tool_version = kToolVersion;
  int schema_version = 1;
  std::string instance_digest;
  std::uint64_t seed = kDefaultSeed;
  OrderedJson records = OrderedJson::array();
  std::size_t high_severity_failures = 0;
  std::size_t informational_falsified = 0;
  int exit_code = 0;

  OrderedJson to_json() const;
};

// FNV-1a 64 over the raw instance bytes, as "fnv1a:<hex>".
std::string digest_bytes(const std::string& bytes);

RunReport run_instance(const Instance& inst, const std::string& digest,
                       std::uint64_t seed);

OrderedJson witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);

// Recomputes a stored witness against the instance it refers to. The witness
// document must carry target_kind ("set" or "function") and target (name).
bool replay_against_instance(const Instance& inst, const nlohmann::json& doc,
                             std::string& message);

// Solves a named problem and returns the report (structural checks are run
// by `run_instance`, not here).
EfficiencyReport solve_problem(const Instance& inst, const std::string& name);

// One CSV row per in-domain grid point: coordinates, objective values,
// in_ew flag. UTF-8, LF line endings, '.' decimal separator.
void emit_ew_csv(const EfficiencyReport& report, const std::string& path);

}  // namespace pconvex
