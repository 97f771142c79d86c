#include "pconvex/instance.hpp"

#include <set>

#include "pconvex/expr.hpp"

namespace pconvex {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("instance: " + where + ": " + what);
}

double number_at(const json& obj, const std::string& key,
                 const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    fail(where, "missing or non-numeric field '" + key + "'");
  }
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (obj.contains(key) && obj[key].is_number()) return obj[key].get<double>();
  return fallback;
}

QNorm parse_q(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return QNorm::inf();
    fail(where, "q must be a number >= 1 or \"inf\"");
  }
  if (!v.is_number()) fail(where, "q must be a number >= 1 or \"inf\"");
  return QNorm(v.get<double>());
}

Vec parse_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array");
  Vec out;
  for (const json& e : v) {
    if (!e.is_number()) fail(where, "expected numeric coordinates");
    out.push_back(e.get<double>());
  }
  return out;
}

// Resolves a named set, recursing through algebraic definitions with cycle
// detection.
struct SetResolver {
  const json& defs;
  std::map<std::string, SetDescriptor>& resolved;
  std::set<std::string> in_progress;

  SetDescriptor resolve(const std::string& name) {
    auto it = resolved.find(name);
    if (it != resolved.end()) return it->second;
    if (!defs.contains(name)) {
      fail("sets", "unresolved set name '" + name + "'");
    }
    if (!in_progress.insert(name).second) {
      fail("sets", "cyclic definition through '" + name + "'");
    }
    SetDescriptor d = build(defs[name], "sets." + name);
    in_progress.erase(name);
    resolved.emplace(name, d);
    return d;
  }

  SetDescriptor build(const json& def, const std::string& where) {
    if (!def.is_object() || !def.contains("type")) {
      fail(where, "set definition needs a 'type' field");
    }
    const std::string type = def["type"].get<std::string>();

    if (type == "interval") {
      const double a = def.contains("a") && def["a"].is_null()
                           ? -std::numeric_limits<double>::infinity()
                           : number_at(def, "a", where);
      const double b = def.contains("b") && def["b"].is_null()
                           ? std::numeric_limits<double>::infinity()
                           : number_at(def, "b", where);
      const bool a_strict = def.value("a_strict", false);
      const bool b_strict = def.value("b_strict", false);
      return SetDescriptor::interval(a, b, a_strict, b_strict);
    }
    if (type == "ball") {
      const QNorm q = parse_q(def.contains("q") ? def["q"] : json(2.0), where);
      Vec center = parse_vec(def.at("center"), where + ".center");
      const double radius = number_at(def, "radius", where);
      const std::string boundary = def.value("boundary", "closed");
      if (boundary != "open" && boundary != "closed") {
        fail(where, "boundary must be 'open' or 'closed'");
      }
      return SetDescriptor::ball(q, std::move(center), radius,
                                 boundary == "open" ? Boundary::open
                                                    : Boundary::closed);
    }
    if (type == "point_cloud") {
      if (!def.contains("points") || !def["points"].is_array()) {
        fail(where, "point_cloud needs a 'points' array");
      }
      std::vector<Vec> points;
      for (const json& p : def["points"]) {
        points.push_back(parse_vec(p, where + ".points"));
      }
      return SetDescriptor::point_cloud(std::move(points));
    }
    if (type == "orthant_cone") {
      if (!def.contains("dim") || !def["dim"].is_number_unsigned()) {
        fail(where, "orthant_cone needs an unsigned 'dim'");
      }
      return SetDescriptor::orthant_cone(def["dim"].get<std::size_t>());
    }
    if (type == "intersection") {
      if (!def.contains("children") || !def["children"].is_array()) {
        fail(where, "intersection needs a 'children' array of set names");
      }
      std::vector<SetDescriptor> children;
      for (const json& c : def["children"]) {
        children.push_back(resolve(c.get<std::string>()));
      }
      return SetDescriptor::intersection(std::move(children));
    }
    if (type == "minkowski_sum") {
      return SetDescriptor::minkowski_sum(
          resolve(def.at("left").get<std::string>()),
          resolve(def.at("right").get<std::string>()));
    }
    if (type == "scale") {
      return SetDescriptor::scale(number_at(def, "nu", where),
                                  resolve(def.at("child").get<std::string>()));
    }
    if (type == "tube") {
      const QNorm q = parse_q(def.contains("q") ? def["q"] : json(2.0), where);
      return SetDescriptor::tube(resolve(def.at("child").get<std::string>()),
                                 number_at(def, "delta", where), q);
    }
    fail(where, "unknown set type '" + type + "'");
  }
};

ScalarFn build_function(const json& def, const std::string& name,
                        const std::map<std::string, SetDescriptor>& sets) {
  const std::string where = "functions." + name;
  if (!def.is_object() || !def.contains("domain")) {
    fail(where, "function definition needs a 'domain' set name");
  }
  const std::string domain_name = def["domain"].get<std::string>();
  auto it = sets.find(domain_name);
  if (it == sets.end()) {
    fail(where, "unresolved domain set '" + domain_name + "'");
  }
  SetDescriptor domain = it->second;

  if (def.contains("catalog")) {
    const std::string id = def["catalog"].get<std::string>();
    if (id == "linear_sum") {
      return linear_sum(number_or(def, "alpha", 1.0), std::move(domain));
    }
    if (id == "q_norm") {
      return q_norm_fn(parse_q(def.contains("q") ? def["q"] : json(2.0), where),
                       std::move(domain));
    }
    if (id == "sqrt_minus_two") return sqrt_minus_two(std::move(domain));
    if (id == "square_shift") return square_shift(std::move(domain));
    if (id == "neg_half_quad") return neg_half_quad(std::move(domain));
    fail(where, "unknown catalog entry '" + id + "'");
  }
  if (def.contains("expr")) {
    Expr e = Expr::parse(def["expr"].get<std::string>());
    if (e.max_coordinate() >= domain.dim()) {
      fail(where, "expression references coordinate x[" +
                      std::to_string(e.max_coordinate()) +
                      "] beyond the domain dimension");
    }
    std::string label = name + ": " + e.text();
    return user_fn(std::move(domain),
                   [e](const Vec& x) { return e.eval(x); }, std::move(label));
  }
  fail(where, "function definition needs 'catalog' or 'expr'");
}

}  // namespace

SearchBudget parse_budget(const json& params, std::uint64_t default_seed) {
  SearchBudget budget;
  budget.seed = default_seed;
  if (!params.contains("budget")) return budget;
  const json& b = params["budget"];
  if (!b.is_object()) {
    throw std::invalid_argument("instance: budget must be an object");
  }
  budget.grid_per_axis = b.value("grid_per_axis", budget.grid_per_axis);
  budget.random_samples = b.value("random_samples", budget.random_samples);
  budget.lambda_grid = b.value("lambda_grid", budget.lambda_grid);
  budget.max_pairs = b.value("max_pairs", budget.max_pairs);
  if (b.contains("adversarial_lambdas")) {
    for (const json& v : b["adversarial_lambdas"]) {
      budget.adversarial_lambdas.push_back(v.get<double>());
    }
  }
  if (b.contains("seed")) budget.seed = b["seed"].get<std::uint64_t>();
  return budget;
}

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("instance: document must be a JSON object");
  }
  Instance inst;
  inst.schema_version = doc.value("schema_version", 1);
  if (inst.schema_version != 1) {
    fail("schema_version", "unsupported schema version " +
                               std::to_string(inst.schema_version));
  }

  if (doc.contains("sets")) {
    if (!doc["sets"].is_object()) fail("sets", "must be an object");
    SetResolver resolver{doc["sets"], inst.sets, {}};
    for (auto it = doc["sets"].begin(); it != doc["sets"].end(); ++it) {
      resolver.resolve(it.key());
    }
  }

  if (doc.contains("functions")) {
    if (!doc["functions"].is_object()) fail("functions", "must be an object");
    for (auto it = doc["functions"].begin(); it != doc["functions"].end();
         ++it) {
      inst.functions.emplace(it.key(),
                             build_function(it.value(), it.key(), inst.sets));
    }
  }

  if (doc.contains("problems")) {
    if (!doc["problems"].is_object()) fail("problems", "must be an object");
    for (auto it = doc["problems"].begin(); it != doc["problems"].end(); ++it) {
      const std::string where = "problems." + it.key();
      const json& def = it.value();
      ProblemDef problem;
      if (!def.contains("objectives") || !def["objectives"].is_array() ||
          def["objectives"].empty()) {
        fail(where, "needs a non-empty 'objectives' array");
      }
      std::optional<std::string> domain_name;
      for (const json& o : def["objectives"]) {
        const std::string fname = o.get<std::string>();
        if (inst.functions.find(fname) == inst.functions.end()) {
          fail(where, "unresolved objective '" + fname + "'");
        }
        problem.objectives.push_back(fname);
      }
      // All objectives must share one domain descriptor.
      for (const json& o : def["objectives"]) {
        const json& fdef = doc["functions"][o.get<std::string>()];
        const std::string d = fdef["domain"].get<std::string>();
        if (!domain_name.has_value()) {
          domain_name = d;
        } else if (*domain_name != d) {
          fail(where, "objectives do not share one domain");
        }
      }
      if (!def.contains("grid") || !def["grid"].is_object()) {
        fail(where, "needs a 'grid' object with lo/hi/count arrays");
      }
      const json& g = def["grid"];
      Vec lo = parse_vec(g.at("lo"), where + ".grid.lo");
      Vec hi = parse_vec(g.at("hi"), where + ".grid.hi");
      if (!g.contains("count") || !g["count"].is_array() ||
          g["count"].size() != lo.size() || hi.size() != lo.size()) {
        fail(where, "grid lo/hi/count must be arrays of equal length");
      }
      for (std::size_t i = 0; i < lo.size(); ++i) {
        problem.grid.push_back(
            {lo[i], hi[i], g["count"][i].get<std::size_t>()});
      }
      problem.p = number_at(def, "p", where);
      if (!(problem.p > 0.0) || !(problem.p <= 1.0)) {
        fail(where, "p must lie in (0, 1]");
      }
      problem.tol = number_or(def, "tol", 1e-12);
      inst.problems.emplace(it.key(), std::move(problem));
    }
  }

  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) fail("checks", "must be an array");
    std::size_t index = 0;
    for (const json& c : doc["checks"]) {
      const std::string where = "checks[" + std::to_string(index) + "]";
      if (!c.is_object()) fail(where, "must be an object");
      CheckDef def;
      def.name = c.value("name", where);
      if (!c.contains("op")) fail(where, "needs an 'op' field");
      def.op = c["op"].get<std::string>();
      static const std::set<std::string> known_ops{
          "falsify_set",      "falsify_fn", "ball_counterexample",
          "cone_equivalence", "downgrade",  "segment_interior",
          "consequence_suite", "weff"};
      if (known_ops.find(def.op) == known_ops.end()) {
        fail(where, "unknown op '" + def.op + "'");
      }
      def.expect = c.value("expect", "pass");
      if (def.expect != "pass" && def.expect != "falsified" &&
          def.expect != "no_counterexample") {
        fail(where,
             "expect must be 'pass', 'falsified' or 'no_counterexample'");
      }
      def.params = c;
      inst.checks.push_back(std::move(def));
      ++index;
    }
  }

  return inst;
}

Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance: JSON parse error: ") +
                                e.what());
  }
  return parse_instance(doc);
}

}  // namespace pconvex
