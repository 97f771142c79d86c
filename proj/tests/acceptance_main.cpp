// Acceptance suite: end-to-end checks against the toolkit's documented
// golden values and structural guarantees. Prints one pass/fail line per
// criterion and exits nonzero if any criterion fails.
//
//   acceptance --cli <pconvex binary> --instances <dir> --workdir <dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pconvex/runner.hpp"
#include "pconvex/rng.hpp"

using namespace pconvex;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SearchBudget acceptance_budget(std::uint64_t seed) {
  SearchBudget b;
  b.grid_per_axis = 64;
  b.random_samples = 128;
  b.lambda_grid = 64;
  b.max_pairs = 10000;
  b.seed = seed;
  return b;
}

// --------------------------------------------------------------------------
// Criterion 1: the square-shift golden counterexample.
// --------------------------------------------------------------------------
Outcome criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  auto f = square_shift(SetDescriptor::interval(0.0, 2.0));
  Verdict v = falsify_fn_pconvexity(f, PExponent(0.5), acceptance_budget(42));
  if (!v.falsified()) return {false, "no witness returned"};
  if (!replay_witness(*v.witness, nullptr, &f)) {
    return {false, "witness did not replay"};
  }
  const double gap = jensen_gap(f, Vec{0.0}, Vec{1.0}, 0.25, PExponent(0.5));
  if (std::abs(gap - (-5.0 / 16.0)) > 1e-12) {
    return {false, "gap at (0, 1, 1/4) is " + std::to_string(gap)};
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    return {false, "runtime " + std::to_string(elapsed) + " s >= 1 s"};
  }
  std::ostringstream os;
  os << "witness found, gap(0,1,1/4) = -5/16 exactly, " << elapsed << " s";
  return {true, os.str()};
}

// --------------------------------------------------------------------------
// Criterion 2: neg_half_quad passes >= 1e5 samples at tol 1e-9.
// --------------------------------------------------------------------------
Outcome criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  auto f = neg_half_quad(SetDescriptor::interval(0.0, 1.0));
  Verdict v =
      falsify_fn_pconvexity(f, PExponent(0.5), acceptance_budget(42), 1e-9);
  if (v.falsified()) return {false, "unexpected counterexample"};
  if (v.samples_used < 100000) {
    return {false, "only " + std::to_string(v.samples_used) + " samples"};
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) {
    return {false, "runtime " + std::to_string(elapsed) + " s >= 10 s"};
  }
  std::ostringstream os;
  os << "no counterexample over " << v.samples_used << " samples, " << elapsed
     << " s";
  return {true, os.str()};
}

// --------------------------------------------------------------------------
// Criterion 3: the off-origin ball construction.
// --------------------------------------------------------------------------
Outcome criterion_3() {
  Witness w = construct_ball_counterexample(Vec{1.0, 0.0}, 0.5, QNorm(2.0),
                                            PExponent(0.25), 1.0, 0.25);
  if (w.x != Vec{0.75, 0.0}) return {false, "z is not (0.75, 0)"};
  Vec combined = p_combine(w.x, w.y, w.lambda, PExponent(0.25));
  if (std::abs(combined[0] - 0.09375) > 1e-15 || combined[1] != 0.0) {
    return {false, "combination is not 2^-3 z"};
  }
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 0.5, Boundary::open);
  if (contains(ball, combined)) return {false, "combination stayed inside"};
  if (std::abs(w.violation - 0.40625) > 1e-12) {
    return {false, "violation " + std::to_string(w.violation)};
  }
  if (!replay_witness(w, &ball, nullptr)) return {false, "replay failed"};
  return {true, "z = (0.75, 0), violation = 0.40625 within 1e-12"};
}

// --------------------------------------------------------------------------
// Criterion 4: pass-suite over the eight interval shapes and 0-containing
// balls at the full budget.
// --------------------------------------------------------------------------
Outcome criterion_4() {
  const auto start = std::chrono::steady_clock::now();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, SetDescriptor>> sets{
      {"(-1,2)", SetDescriptor::interval(-1.0, 2.0, true, true)},
      {"(-1,2]", SetDescriptor::interval(-1.0, 2.0, true, false)},
      {"[-1,2)", SetDescriptor::interval(-1.0, 2.0, false, true)},
      {"[-1,2]", SetDescriptor::interval(-1.0, 2.0, false, false)},
      {"(-0.5,inf)", SetDescriptor::interval(-0.5, inf, true, false)},
      {"[0,inf)", SetDescriptor::interval(0.0, inf, false, false)},
      {"(-inf,1.5)", SetDescriptor::interval(-inf, 1.5, false, true)},
      {"(-inf,1.5]", SetDescriptor::interval(-inf, 1.5, false, false)},
      {"ball2-open", SetDescriptor::ball(QNorm(2.0), Vec{0.2, -0.1}, 1.0,
                                         Boundary::open)},
      {"ball2-closed", SetDescriptor::ball(QNorm(2.0), Vec{0.0, 0.0}, 1.0,
                                           Boundary::closed)},
      {"ballinf-closed", SetDescriptor::ball(QNorm::inf(), Vec{0.0, 0.0}, 1.0,
                                             Boundary::closed)},
      {"ball1-closed", SetDescriptor::ball(QNorm(1.0), Vec{0.25, 0.25}, 1.0,
                                           Boundary::closed)},
  };
  std::size_t runs = 0;
  for (const auto& [name, K] : sets) {
    for (double p : {0.25, 0.5, 1.0}) {
      Verdict v = falsify_set_pconvexity(K, PExponent(p), acceptance_budget(42));
      ++runs;
      if (v.falsified()) {
        std::ostringstream os;
        os << name << " falsified at p = " << p << " (lambda = "
           << v.witness->lambda << ")";
        return {false, os.str()};
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    return {false, "runtime " + std::to_string(elapsed) + " s >= 60 s"};
  }
  std::ostringstream os;
  os << runs << " falsifier runs passed, " << elapsed << " s";
  return {true, os.str()};
}

// --------------------------------------------------------------------------
// Criterion 5: downgrade p -> p1 for 10 seeded 0-containing descriptors.
// --------------------------------------------------------------------------
Outcome criterion_5() {
  SplitMix64 rng(42);
  std::vector<std::pair<SetDescriptor, double>> cases;

  const double a1 = -1.0 - rng.next_double();
  const double b1 = 1.0 + rng.next_double();
  cases.emplace_back(SetDescriptor::interval(a1, b1), 1.0);
  cases.emplace_back(SetDescriptor::interval(-rng.next_double() - 0.25,
                                             rng.next_double() + 0.25, true,
                                             true),
                     0.75);
  cases.emplace_back(SetDescriptor::interval(0.0, 1.0 + rng.next_double(),
                                             false, true),
                     0.5);

  Vec c2{0.25 * rng.next_double(), 0.25 * rng.next_double()};
  cases.emplace_back(
      SetDescriptor::ball(QNorm(2.0), c2, q_norm(c2, QNorm(2.0)) + 0.5,
                          Boundary::closed),
      1.0);
  cases.emplace_back(SetDescriptor::ball(QNorm::inf(), Vec{0.0, 0.0},
                                         0.5 + rng.next_double(),
                                         Boundary::closed),
                     1.0);
  Vec c3{0.2, -0.1};
  cases.emplace_back(
      SetDescriptor::ball(QNorm(1.0), c3, q_norm(c3, QNorm(1.0)) + 0.3,
                          Boundary::open),
      0.75);
  cases.emplace_back(SetDescriptor::orthant_cone(2), 0.5);
  cases.emplace_back(
      SetDescriptor::scale(2.5, SetDescriptor::ball(QNorm(2.0), Vec{0.1, 0.1},
                                                    0.75, Boundary::closed)),
      1.0);
  cases.emplace_back(
      SetDescriptor::intersection({SetDescriptor::interval(-1.0, 2.0),
                                   SetDescriptor::interval(-0.5, 3.0)}),
      1.0);
  cases.emplace_back(tube(SetDescriptor::interval(0.0, 1.0), 0.3, QNorm(2.0)),
                     0.5);

  if (cases.size() != 10) return {false, "internal: expected 10 descriptors"};

  SearchBudget budget;
  budget.grid_per_axis = 12;
  budget.random_samples = 96;
  budget.lambda_grid = 33;
  budget.max_pairs = 2000;
  budget.seed = 42;

  std::size_t runs = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [K, p] = cases[i];
    for (double divisor : {1.0, 2.0, 4.0}) {
      Verdict v = check_downgrade(K, PExponent(p), PExponent(p / divisor), budget);
      ++runs;
      if (v.falsified()) {
        std::ostringstream os;
        os << "descriptor " << i << " falsified at p1 = " << p / divisor;
        return {false, os.str()};
      }
    }
  }
  return {true, std::to_string(runs) + " downgrade runs passed"};
}

// --------------------------------------------------------------------------
// Criterion 6: g golden values against a numeric minimizer.
// --------------------------------------------------------------------------
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Outcome criterion_6() {
  const auto [lambda_star, g_star] = g_argmin(PExponent(0.5));
  if (lambda_star != 0.25 || g_star != 0.5) {
    return {false, "g_argmin(1/2) is not exactly (0.25, 0.5)"};
  }
  for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const PExponent pe(p);
    const auto [ls, gs] = g_argmin(pe);
    const double numeric = golden_section_min(
        [pe](double l) { return scaling_g(l, pe); }, 0.0, 1.0, 1e-10);
    if (std::abs(numeric - ls) > 1e-6 ||
        std::abs(scaling_g(numeric, pe) - gs) > 1e-6) {
      return {false, "closed form disagrees with minimization at p = " +
                         std::to_string(p)};
    }
  }
  return {true, "g_argmin(1/2) = (0.25, 0.5) exactly; 5 exponents agree with "
                "golden-section search within 1e-6"};
}

// --------------------------------------------------------------------------
// Criterion 7: solver vs an independently coded dominance oracle on 50
// seeded bi-objective instances.
// --------------------------------------------------------------------------

// Independent O(N^2) oracle: recomputes objective values directly and runs
// the dominance definition without early exits or shared tables.
std::vector<std::size_t> oracle_weff(
    const std::vector<std::function<double(double)>>& fns,
    const std::vector<double>& xs, double tol) {
  const std::size_t n = xs.size();
  const std::size_t m = fns.size();
  std::vector<std::size_t> result;
  for (std::size_t a = 0; a < n; ++a) {
    bool weakly_efficient = true;
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t strict = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (fns[i](xs[b]) < fns[i](xs[a]) - tol) ++strict;
      }
      if (strict == m) weakly_efficient = false;
    }
    if (weakly_efficient) result.push_back(a);
  }
  return result;
}

Outcome criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t equality_checked = 0;
  for (int s = 0; s < 50; ++s) {
    SplitMix64 rng(9000 + s);
    // Nonnegative 1-D component pool on [0, 2].
    auto draw = [&]() -> std::function<double(double)> {
      const std::uint64_t kind = rng.next() % 5;
      const double a = 0.25 + 1.5 * rng.next_double();
      const double c = 0.2 + 1.3 * rng.next_double();
      switch (kind) {
        case 0:
          return [c](double x) { return std::max(0.0, x - c); };
        case 1:
          return [a](double x) { return a * x * x; };
        case 2:
          return [a](double x) { return a * std::abs(x); };
        case 3:
          return [a](double x) { return a * x; };
        default:
          return [c](double x) { return (x - c) * (x - c); };
      }
    };
    std::vector<std::function<double(double)>> fns{draw(), draw()};

    auto dom = SetDescriptor::interval(0.0, 2.0);
    std::vector<ScalarFn> comps;
    for (const auto& fn1d : fns) {
      comps.push_back(user_fn(
          dom, [fn1d](const Vec& x) { return fn1d(x[0]); }, "component"));
    }
    VectorFn F(dom, std::move(comps));
    GridSpec grid({{0.0, 2.0, 201}});
    EfficiencyReport report = weakly_efficient_set(F, grid, 1e-12);

    std::vector<double> xs(201);
    for (std::size_t i = 0; i < 201; ++i) xs[i] = grid.point(i)[0];
    std::vector<std::size_t> expected = oracle_weff(fns, xs, 1e-12);
    if (report.weakly_efficient != expected) {
      return {false, "seed " + std::to_string(s) + ": solver disagrees with "
                     "the dominance oracle"};
    }
    if (check_union_inclusion(report).status != StructuralCheck::Status::pass) {
      return {false, "seed " + std::to_string(s) + ": union inclusion failed"};
    }
    auto equality = check_intersection_equality(report);
    if (equality.status == StructuralCheck::Status::fail) {
      return {false, "seed " + std::to_string(s) + ": intersection equality "
                     "failed"};
    }
    if (equality.status == StructuralCheck::Status::pass) ++equality_checked;
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    return {false, "runtime " + std::to_string(elapsed) + " s >= 60 s"};
  }
  std::ostringstream os;
  os << "50 instances match index-for-index (" << equality_checked
     << " with nonempty argmin intersection), " << elapsed << " s";
  return {true, os.str()};
}

// --------------------------------------------------------------------------
// Criterion 8: the structure suite on hypothesis-satisfying instances plus
// the injected negative control.
// --------------------------------------------------------------------------
Outcome criterion_8() {
  SearchBudget budget;
  budget.grid_per_axis = 24;
  budget.random_samples = 96;
  budget.lambda_grid = 33;
  budget.max_pairs = 3000;
  budget.seed = 42;
  const PExponent p(0.5);

  struct InstanceDef {
    std::string name;
    SetDescriptor dom;
    std::vector<std::function<double(double)>> fns;
    GridAxis axis;
  };
  std::vector<InstanceDef> instances;
  instances.push_back(
      {"hinge+square", SetDescriptor::interval(0.0, 2.0),
       {[](double x) { return std::max(0.0, x - 0.75); },
        [](double x) { return x * x; }},
       {0.0, 2.0, 201}});
  instances.push_back({"abs+square", SetDescriptor::interval(-1.0, 1.0),
                       {[](double x) { return std::abs(x); },
                        [](double x) { return x * x; }},
                       {-1.0, 1.0, 201}});

  std::size_t skipped_total = 0;
  for (const auto& def : instances) {
    std::vector<ScalarFn> comps;
    for (const auto& fn1d : def.fns) {
      comps.push_back(user_fn(
          def.dom, [fn1d](const Vec& x) { return fn1d(x[0]); }, "component"));
    }
    VectorFn F(def.dom, std::move(comps));
    GridSpec grid({def.axis});
    EfficiencyReport report = weakly_efficient_set(F, grid, 1e-12);

    RmPVerdict rm = is_Rm_p_convex(F, p, budget);
    if (rm.verdict.falsified()) {
      return {false, def.name + ": hypothesis verification failed (component " +
                         std::to_string(rm.component) + ")"};
    }
    auto zero = check_zero_in_ew(report, F, p, budget);
    if (zero.status != StructuralCheck::Status::pass) {
      return {false, def.name + ": zero_in_ew " + zero.message};
    }
    auto scaling = check_scaling_closure(report, F, p, 16);
    if (scaling.status != StructuralCheck::Status::pass) {
      return {false, def.name + ": scaling_closure " + scaling.message};
    }
    skipped_total += scaling.skipped;
    auto fill = check_interval_fill(report);
    if (fill.status == StructuralCheck::Status::fail) {
      return {false, def.name + ": interval_fill " + fill.message};
    }
    if (def.name == "hinge+square" &&
        fill.status != StructuralCheck::Status::pass) {
      return {false, def.name + ": interval_fill unexpectedly " + fill.message};
    }
    Verdict ew = check_ew_pconvexity(report, p, budget);
    if (ew.falsified()) {
      return {false, def.name + ": ew_pconvexity falsified"};
    }

    if (def.name == "hinge+square") {
      // Negative control: a doctored gap set away from 0 must falsify.
      EfficiencyReport doctored = report;
      doctored.weakly_efficient.clear();
      for (std::size_t i = 50; i <= 75; ++i) {
        doctored.weakly_efficient.push_back(i);
      }
      Verdict control = check_ew_pconvexity(doctored, p, budget);
      if (!control.falsified()) {
        return {false, "negative-control gap set was not falsified"};
      }
    }
  }
  std::ostringstream os;
  os << "both instances passed all structure checks (scaling skipped points: "
     << skipped_total << "); negative control falsified";
  return {true, os.str()};
}

// --------------------------------------------------------------------------
// Criterion 9: CLI determinism on the bundled instances.
// --------------------------------------------------------------------------
std::string normalize_report(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing report " + path.string());
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(in);
  for (auto& rec : doc["records"]) rec["wall_time_ms"] = 0.0;
  return doc.dump(2);
}

Outcome criterion_9(const std::string& cli, const fs::path& instances,
                    const fs::path& workdir) {
  fs::create_directories(workdir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(instances)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) return {false, "no bundled instances found"};

  for (const fs::path& inst : files) {
    const fs::path r1 = workdir / (inst.stem().string() + ".run1.json");
    const fs::path r2 = workdir / (inst.stem().string() + ".run2.json");
    for (const fs::path& out : {r1, r2}) {
      std::ostringstream cmd;
      cmd << '"' << cli << "\" run \"" << inst.string() << "\" --seed 42 --out \""
          << out.string() << '"';
      const int rc = std::system(cmd.str().c_str());
      if (rc == -1) return {false, "failed to spawn the CLI"};
      const int status = WEXITSTATUS(rc);
      if (status != 0 && status != 2) {
        return {false, inst.filename().string() + ": CLI exited with " +
                           std::to_string(status)};
      }
    }
    const std::string a = normalize_report(r1);
    const std::string b = normalize_report(r2);
    if (a != b) {
      return {false, inst.filename().string() +
                         ": reports differ beyond timing fields"};
    }
  }

  // Every reported witness must revalidate through the --replay flag.
  std::size_t replayed = 0;
  for (const fs::path& inst : files) {
    std::ifstream in(workdir / (inst.stem().string() + ".run1.json"));
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(in);
    for (const auto& rec : doc["records"]) {
      if (!rec.contains("witness")) continue;
      const fs::path wpath =
          workdir / (inst.stem().string() + ".witness.json");
      std::ofstream wout(wpath);
      wout << rec["witness"].dump(2) << "\n";
      wout.close();
      std::ostringstream cmd;
      cmd << '"' << cli << "\" run \"" << inst.string() << "\" --replay \""
          << wpath.string() << "\" > /dev/null";
      const int rc = std::system(cmd.str().c_str());
      if (rc == -1 || WEXITSTATUS(rc) != 0) {
        return {false, inst.filename().string() + ": --replay rejected a "
                       "reported witness"};
      }
      ++replayed;
      break;  // one witness per instance is enough
    }
  }

  return {true, std::to_string(files.size()) +
                    " bundled instances byte-identical modulo timing; " +
                    std::to_string(replayed) + " witnesses replayed"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string instances;
  std::string workdir = "acceptance_work";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--instances") instances = argv[i + 1];
    if (flag == "--workdir") workdir = argv[i + 1];
  }

  struct Entry {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  std::vector<Entry> criteria{
      {1, "square-shift golden counterexample", criterion_1},
      {2, "neg-half-quad falsification pass", criterion_2},
      {3, "off-origin ball construction", criterion_3},
      {4, "interval and ball pass-suite", criterion_4},
      {5, "downgrade across exponents", criterion_5},
      {6, "scaling-function golden values", criterion_6},
      {7, "weak-efficiency oracle equivalence", criterion_7},
      {8, "solution-set structure suite", criterion_8},
      {9, "CLI determinism",
       [&] {
         if (cli.empty() || instances.empty()) {
           return Outcome{false, "--cli and --instances are required"};
         }
         return criterion_9(cli, instances, workdir);
       }},
  };

  int failures = 0;
  for (const Entry& entry : criteria) {
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
              << entry.id << ": " << entry.name << " — " << outcome.detail
              << "\n";
    if (!outcome.pass) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
