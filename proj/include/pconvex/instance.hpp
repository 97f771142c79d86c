#pragma once
// Instance files: named set, function and problem definitions plus an
// ordered list of check invocations, loaded from the schema-v1 JSON format.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pconvex/certify.hpp"
#include "pconvex/pfuncs.hpp"
#include "pconvex/psets.hpp"
#include "pconvex/weff.hpp"

namespace pconvex {

struct ProblemDef {
  std::vector<std::string> objectives;
  std::vector<GridAxis> grid;
  double p = 0.5;
  double tol = 1e-12;
};

struct CheckDef {
  std::string name;
  std::string op;       // falsify_set, falsify_fn, ball_counterexample, ...
  std::string expect;   // falsified | no_counterexample | pass
  nlohmann::json params;
};

struct Instance {
  int schema_version = 1;
  std::map<std::string, SetDescriptor> sets;
  std::map<std::string, ScalarFn> functions;
  std::map<std::string, ProblemDef> problems;
  std::vector<CheckDef> checks;
};

// Parses and validates an instance document. Unresolved names, out-of-range
// exponents and malformed definitions raise std::invalid_argument naming the
// offending field.
Instance parse_instance(const nlohmann::json& doc);
Instance parse_instance_text(const std::string& text);

// Budget override block shared by several check kinds.
SearchBudget parse_budget(const nlohmann::json& params, std::uint64_t default_seed);

}  // namespace pconvex
