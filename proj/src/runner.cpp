#include "pconvex/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "pconvex/rng.hpp"

namespace pconvex {

namespace {

using nlohmann::json;

const char* kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::set_violation:
      return "set_violation";
    case WitnessKind::jensen_violation:
      return "jensen_violation";
    case WitnessKind::domain_violation:
      return "domain_violation";
  }
  return "unknown";
}

WitnessKind kind_from_name(const std::string& s) {
  if (s == "set_violation") return WitnessKind::set_violation;
  if (s == "jensen_violation") return WitnessKind::jensen_violation;
  if (s == "domain_violation") return WitnessKind::domain_violation;
  throw std::invalid_argument("unknown witness kind '" + s + "'");
}

const char* status_name(StructuralCheck::Status s) {
  switch (s) {
    case StructuralCheck::Status::pass:
      return "pass";
    case StructuralCheck::Status::fail:
      return "fail";
    case StructuralCheck::Status::not_applicable:
      return "not_applicable";
  }
  return "unknown";
}

const SetDescriptor& named_set(const Instance& inst, const json& params,
                               const std::string& key) {
  const std::string name = params.at(key).get<std::string>();
  auto it = inst.sets.find(name);
  if (it == inst.sets.end()) {
    throw std::invalid_argument("check references unknown set '" + name + "'");
  }
  return it->second;
}

const ScalarFn& named_function(const Instance& inst, const json& params,
                               const std::string& key) {
  const std::string name = params.at(key).get<std::string>();
  auto it = inst.functions.find(name);
  if (it == inst.functions.end()) {
    throw std::invalid_argument("check references unknown function '" + name +
                                "'");
  }
  return it->second;
}

VectorFn build_problem_fn(const Instance& inst, const ProblemDef& problem) {
  std::vector<ScalarFn> components;
  for (const std::string& name : problem.objectives) {
    components.push_back(inst.functions.at(name));
  }
  SetDescriptor domain = components.front().domain;
  return VectorFn(std::move(domain), std::move(components));
}

QNorm q_from_json(const json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return QNorm::inf();
  return QNorm(v.get<double>());
}

struct CheckOutcome {
  std::string verdict;  // falsified | no_counterexample | pass | fail | not_applicable
  std::size_t samples = 0;
  OrderedJson witness;         // null when absent
  OrderedJson details;         // null when absent
};

OrderedJson verdict_details(const Verdict& v) {
  OrderedJson d;
  d["strategy"] = v.strategy;
  return d;
}

CheckOutcome outcome_from_verdict(const Verdict& v, const std::string& target_kind,
                                  const std::string& target) {
  CheckOutcome out;
  out.samples = v.samples_used;
  if (v.falsified()) {
    out.verdict = "falsified";
    out.witness = witness_to_json(*v.witness);
    out.witness["target_kind"] = target_kind;
    out.witness["target"] = target;
  } else {
    out.verdict = "no_counterexample";
    out.details = verdict_details(v);
  }
  return out;
}

OrderedJson structural_to_json(const StructuralCheck& c) {
  OrderedJson j;
  j["name"] = c.name;
  j["status"] = status_name(c.status);
  j["message"] = c.message;
  if (c.skipped > 0) j["skipped"] = c.skipped;
  return j;
}

CheckOutcome run_one_check(const Instance& inst, const CheckDef& def,
                           std::uint64_t seed) {
  const json& params = def.params;
  SearchBudget budget = parse_budget(params, seed);
  CheckOutcome out;

  if (def.op == "falsify_set") {
    const SetDescriptor& K = named_set(inst, params, "set");
    const PExponent p(params.at("p").get<double>());
    Verdict v = falsify_set_pconvexity(K, p, budget);
    return outcome_from_verdict(v, "set", params.at("set").get<std::string>());
  }

  if (def.op == "falsify_fn") {
    const ScalarFn& f = named_function(inst, params, "function");
    const PExponent p(params.at("p").get<double>());
    const double tol = params.value("tol", 1e-9);
    Verdict v = falsify_fn_pconvexity(f, p, budget, tol);
    return outcome_from_verdict(v, "function",
                                params.at("function").get<std::string>());
  }

  if (def.op == "ball_counterexample") {
    Vec center = params.at("center").get<Vec>();
    const double delta = params.at("delta").get<double>();
    const QNorm q = q_from_json(params.contains("q") ? params["q"] : json(2.0));
    const PExponent p(params.at("p").get<double>());
    const double beta = params.value("beta", 1.0);
    const double epsilon = params.at("epsilon").get<double>();
    Witness w = construct_ball_counterexample(center, delta, q, p, beta, epsilon);
    out.verdict = "falsified";
    out.samples = 1;
    out.witness = witness_to_json(w);
    out.witness["target_kind"] = "ball";
    OrderedJson ball;
    ball["center"] = center;
    ball["radius"] = delta;
    ball["q"] = q.is_inf() ? OrderedJson("inf") : OrderedJson(q.value());
    out.witness["target"] = ball;
    return out;
  }

  if (def.op == "cone_equivalence") {
    const SetDescriptor& K = named_set(inst, params, "set");
    const PExponent p(params.at("p").get<double>());
    ConeEquivalenceReport r = check_cone_equivalence(K, p, budget);
    out.verdict = r.consistent ? "pass" : "fail";
    out.samples = r.pconvexity.samples_used;
    OrderedJson d;
    d["alpha_scaling_ok"] = r.alpha_scaling_ok;
    d["additive_closed"] = r.additive_closed;
    d["cone_ok"] = r.cone_ok;
    d["pconvex"] = !r.pconvexity.falsified();
    if (!r.detail.empty()) d["detail"] = r.detail;
    out.details = d;
    return out;
  }

  if (def.op == "downgrade") {
    const SetDescriptor& K = named_set(inst, params, "set");
    const PExponent p(params.at("p").get<double>());
    const PExponent p1(params.at("p1").get<double>());
    Verdict v = check_downgrade(K, p, p1, budget);
    return outcome_from_verdict(v, "set", params.at("set").get<std::string>());
  }

  if (def.op == "segment_interior") {
    const SetDescriptor& K = named_set(inst, params, "set");
    const PExponent p(params.at("p").get<double>());
    Vec x = params.at("x").get<Vec>();
    Vec y = params.at("y").get<Vec>();
    const double probe = params.at("probe_radius").get<double>();
    const std::size_t samples = params.value("samples", 32);
    SegmentInteriorReport r = check_segment_interior(K, p, x, y, probe, samples);
    out.verdict = r.passed ? "pass" : "fail";
    out.samples = r.checked;
    if (!r.passed) {
      OrderedJson d;
      d["failed_lambda"] = *r.failed_lambda;
      d["failed_point"] = r.failed_point;
      out.details = d;
    }
    return out;
  }

  if (def.op == "consequence_suite") {
    const ScalarFn& f = named_function(inst, params, "function");
    const PExponent p(params.at("p").get<double>());
    const SetDescriptor& K =
        params.contains("set") ? named_set(inst, params, "set") : f.domain;
    ConsequenceReport r = run_consequence_suite(f, K, p, budget);
    out.verdict = r.all_pass() ? "pass" : "fail";
    OrderedJson lines = OrderedJson::array();
    for (const SuiteLine& line : r.lines) {
      OrderedJson lj;
      lj["name"] = line.name;
      lj["status"] = line.status == SuiteLine::Status::pass     ? "pass"
                     : line.status == SuiteLine::Status::fail   ? "fail"
                                                                : "skipped";
      lj["message"] = line.message;
      lines.push_back(lj);
    }
    out.details = OrderedJson{{"lines", lines}};
    return out;
  }

  if (def.op == "weff") {
    const std::string problem_name = params.at("problem").get<std::string>();
    auto it = inst.problems.find(problem_name);
    if (it == inst.problems.end()) {
      throw std::invalid_argument("check references unknown problem '" +
                                  problem_name + "'");
    }
    const ProblemDef& problem = it->second;
    VectorFn F = build_problem_fn(inst, problem);
    GridSpec grid{problem.grid};
    EfficiencyReport report = weakly_efficient_set(F, grid, problem.tol);
    const PExponent p(problem.p);

    std::vector<std::string> structural;
    if (params.contains("structural")) {
      for (const json& s : params["structural"]) {
        structural.push_back(s.get<std::string>());
      }
    } else {
      structural = {"union_inclusion", "intersection_equality"};
    }
    const std::size_t coeff_samples = params.value("coefficient_samples", 16);

    bool any_fail = false;
    OrderedJson checks = OrderedJson::array();
    std::size_t samples = report.weakly_efficient.size();
    for (const std::string& s : structural) {
      StructuralCheck c;
      if (s == "union_inclusion") {
        c = check_union_inclusion(report);
      } else if (s == "intersection_equality") {
        c = check_intersection_equality(report);
      } else if (s == "rm_p_convex") {
        RmPVerdict v = is_Rm_p_convex(F, p, budget);
        samples += v.verdict.samples_used;
        c.name = "rm_p_convex";
        c.status = v.verdict.falsified() ? StructuralCheck::Status::fail
                                         : StructuralCheck::Status::pass;
        c.message = v.verdict.falsified()
                        ? "component " + std::to_string(v.component) +
                              " falsified"
                        : "componentwise falsifier passed";
      } else if (s == "scaling_closure") {
        c = check_scaling_closure(report, F, p, coeff_samples);
      } else if (s == "interval_fill") {
        c = check_interval_fill(report);
      } else if (s == "ew_pconvexity") {
        Verdict v = check_ew_pconvexity(report, p, budget);
        samples += v.samples_used;
        c.name = "ew_pconvexity";
        c.status = v.falsified() ? StructuralCheck::Status::fail
                                 : StructuralCheck::Status::pass;
        c.message = v.falsified() ? "snap set falsified"
                                  : "snap set passed the falsifier";
      } else if (s == "zero_in_ew") {
        c = check_zero_in_ew(report, F, p, budget);
      } else {
        throw std::invalid_argument("unknown structural check '" + s + "'");
      }
      if (c.status == StructuralCheck::Status::fail) any_fail = true;
      checks.push_back(structural_to_json(c));
    }

    out.verdict = any_fail ? "fail" : "pass";
    out.samples = samples;
    OrderedJson d;
    d["weakly_efficient_count"] = report.weakly_efficient.size();
    d["excluded_points"] = report.excluded;
    d["weakly_efficient_indices"] = report.weakly_efficient;
    d["structural_checks"] = checks;
    out.details = d;
    return out;
  }

  throw std::invalid_argument("unknown check op '" + def.op + "'");
}

}  // namespace

OrderedJson witness_to_json(const Witness& w) {
  OrderedJson j;
  j["kind"] = kind_name(w.kind);
  j["x"] = w.x;
  j["y"] = w.y;
  j["lambda"] = w.lambda;
  j["mu"] = w.mu;
  j["p"] = w.p;
  j["violation"] = w.violation;
  if (w.component >= 0) j["component"] = w.component;
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.kind = kind_from_name(j.at("kind").get<std::string>());
  w.x = j.at("x").get<Vec>();
  w.y = j.at("y").get<Vec>();
  w.lambda = j.at("lambda").get<double>();
  w.mu = j.at("mu").get<double>();
  w.p = j.at("p").get<double>();
  w.violation = j.at("violation").get<double>();
  w.component = j.value("component", -1);
  return w;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016" PRIx64, h);
  return buf;
}

OrderedJson RunReport::to_json() const {
  OrderedJson j;
  j["tool_version"] = tool_version;
  j["schema_version"] = schema_version;
  j["instance_digest"] = instance_digest;
  j["seed"] = seed;
  j["records"] = records;
  OrderedJson summary;
  summary["records"] = records.size();
  summary["high_severity_failures"] = high_severity_failures;
  summary["informational_falsified"] = informational_falsified;
  j["summary"] = summary;
  j["exit_code"] = exit_code;
  return j;
}

RunReport run_instance(const Instance& inst, const std::string& digest,
                       std::uint64_t seed) {
  RunReport report;
  report.instance_digest = digest;
  report.seed = seed;

  std::size_t index = 0;
  for (const CheckDef& def : inst.checks) {
    const auto start = std::chrono::steady_clock::now();
    // Per-check stream so reordering checks cannot silently shift verdicts.
    const std::uint64_t check_seed = mix_seed(seed, index);
    CheckOutcome outcome;
    try {
      outcome = run_one_check(inst, def, check_seed);
    } catch (const std::exception& e) {
      // A throwing check (bad reference, violated precondition) becomes an
      // error record instead of aborting the remaining checks.
      outcome.verdict = "error";
      outcome.details = OrderedJson{{"error", e.what()}};
    }
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();

    const bool as_expected =
        outcome.verdict == def.expect ||
        (def.expect == "pass" && outcome.verdict == "not_applicable");
    if (!as_expected) {
      ++report.high_severity_failures;
    } else if (outcome.verdict == "falsified") {
      ++report.informational_falsified;
    }

    OrderedJson rec;
    rec["name"] = def.name;
    rec["op"] = def.op;
    rec["verdict"] = outcome.verdict;
    rec["expected"] = def.expect;
    rec["as_expected"] = as_expected;
    rec["samples"] = outcome.samples;
    if (!outcome.witness.is_null()) rec["witness"] = outcome.witness;
    if (!outcome.details.is_null()) rec["details"] = outcome.details;
    rec["wall_time_ms"] = ms;
    report.records.push_back(std::move(rec));
    ++index;
  }

  report.exit_code = report.high_severity_failures > 0 ? 1
                     : report.informational_falsified > 0 ? 2
                                                          : 0;
  return report;
}

bool replay_against_instance(const Instance& inst, const json& doc,
                             std::string& message) {
  Witness w = witness_from_json(doc);
  const std::string target_kind = doc.value("target_kind", "");
  const SetDescriptor* K = nullptr;
  const ScalarFn* f = nullptr;
  SetDescriptor ball = SetDescriptor::interval(0.0, 1.0);  // placeholder slot

  if (target_kind == "set") {
    auto it = inst.sets.find(doc.at("target").get<std::string>());
    if (it == inst.sets.end()) {
      message = "replay: unknown set target";
      return false;
    }
    K = &it->second;
  } else if (target_kind == "function") {
    auto it = inst.functions.find(doc.at("target").get<std::string>());
    if (it == inst.functions.end()) {
      message = "replay: unknown function target";
      return false;
    }
    f = &it->second;
  } else if (target_kind == "ball") {
    const json& b = doc.at("target");
    ball = SetDescriptor::ball(q_from_json(b.at("q")), b.at("center").get<Vec>(),
                               b.at("radius").get<double>(), Boundary::open);
    K = &ball;
  } else {
    message = "replay: witness document lacks a usable target_kind";
    return false;
  }

  const bool ok = replay_witness(w, K, f);
  message = ok ? "replay: witness reproduced within 1e-12"
               : "replay: violation did not reproduce";
  return ok;
}

EfficiencyReport solve_problem(const Instance& inst, const std::string& name) {
  auto it = inst.problems.find(name);
  if (it == inst.problems.end()) {
    throw std::invalid_argument("unknown problem '" + name + "'");
  }
  VectorFn F = build_problem_fn(inst, it->second);
  GridSpec grid{it->second.grid};
  return weakly_efficient_set(F, grid, it->second.tol);
}

void emit_ew_csv(const EfficiencyReport& report, const std::string& path) {
  std::size_t in_domain = 0;
  for (std::uint8_t flag : report.in_domain) in_domain += flag;
  if (in_domain == 0) {
    throw std::runtime_error("emit_ew_csv: report has no in-domain grid points");
  }

  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw std::runtime_error("emit_ew_csv: cannot open '" + path + "'");

  const std::size_t d = report.grid.dims();
  for (std::size_t i = 0; i < d; ++i) out << "x" << i << ",";
  for (std::size_t i = 0; i < report.objectives; ++i) out << "f" << i << ",";
  out << "in_ew\n";

  char buf[40];
  for (std::size_t a = 0; a < report.grid.total(); ++a) {
    if (!report.in_domain[a]) continue;
    const Vec pt = report.grid.point(a);
    for (std::size_t i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", pt[i]);
      out << buf << ",";
    }
    for (std::size_t i = 0; i < report.objectives; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", report.value(a, i));
      out << buf << ",";
    }
    out << (report.is_weakly_efficient(a) ? "true" : "false") << "\n";
  }
  if (!out.good()) throw std::runtime_error("emit_ew_csv: write failed");
}

}  // namespace pconvex
