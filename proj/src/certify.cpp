#include "pconvex/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pconvex/rng.hpp"

namespace pconvex {

namespace {

constexpr std::size_t kProbeCount = 64;

QNorm preferred_q(const SetDescriptor& K) {
  if (const auto* ball = std::get_if<detail::BallNode>(&K.node().v)) {
    return ball->q;
  }
  return QNorm(2.0);
}

void dedupe_keep_order(std::vector<double>& values) {
  std::vector<double> out;
  for (double v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  values = std::move(out);
}

std::string strategy_string(std::size_t members, std::size_t pairs,
                            std::size_t lambdas, std::size_t randoms) {
  std::ostringstream os;
  os << "adversarial+grid+random; members=" << members << " pairs=" << pairs
     << " lambdas=" << lambdas << " random_triples=" << randoms;
  return os.str();
}

// Shared triple-search skeleton for the two falsifiers. `test` evaluates one
// (x, y, lambda) triple and returns an engaged witness on violation.
template <typename TestFn>
Verdict triple_search(const std::vector<Vec>& members,
                      const std::vector<double>& lambdas,
                      const SearchBudget& budget, TestFn&& test) {
  Verdict verdict;
  const std::size_t k = members.size();

  // Deterministic pair enumeration (i <= j), capped by the pair budget.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(std::min(budget.max_pairs, k * (k + 1) / 2));
  for (std::size_t i = 0; i < k && pairs.size() < budget.max_pairs; ++i) {
    for (std::size_t j = i; j < k && pairs.size() < budget.max_pairs; ++j) {
      pairs.emplace_back(i, j);
    }
  }

  for (double lambda : lambdas) {
    for (const auto& [i, j] : pairs) {
      ++verdict.samples_used;
      if (auto w = test(members[i], members[j], lambda)) {
        verdict.witness = std::move(w);
        return verdict;
      }
      if (i != j) {
        ++verdict.samples_used;
        if (auto w = test(members[j], members[i], lambda)) {
          verdict.witness = std::move(w);
          return verdict;
        }
      }
    }
  }

  // Random phase: seeded triples drawn from the member list.
  SplitMix64 rng(mix_seed(budget.seed, 0x7a11u));
  for (std::size_t t = 0; t < budget.random_samples; ++t) {
    const std::size_t i = rng.next() % k;
    const std::size_t j = rng.next() % k;
    const double lambda = rng.next_double();
    ++verdict.samples_used;
    if (auto w = test(members[i], members[j], lambda)) {
      verdict.witness = std::move(w);
      return verdict;
    }
  }

  verdict.strategy = strategy_string(k, pairs.size(), lambdas.size(),
                                     budget.random_samples);
  return verdict;
}

std::vector<Vec> collect_members(const SetDescriptor& K,
                                 const SearchBudget& budget,
                                 const char* where) {
  MemberSample sample = sample_members(K, budget.grid_per_axis,
                                       budget.random_samples, budget.seed);
  if (sample.hits < 2) {
    throw std::runtime_error(std::string(where) +
                             ": set sampling failed (fewer than 2 member "
                             "points found in budget)");
  }
  return std::move(sample.points);
}

}  // namespace

std::vector<double> lambda_schedule(const SearchBudget& budget, PExponent p) {
  std::vector<double> lambdas{0.0, 1.0, std::pow(2.0, -1.0 / p.value()), 1e-3,
                              1.0 - 1e-3};
  for (double v : budget.adversarial_lambdas) {
    if (v >= 0.0 && v <= 1.0) lambdas.push_back(v);
  }
  const std::size_t n = std::max<std::size_t>(budget.lambda_grid, 2);
  for (std::size_t i = 0; i < n; ++i) {
    lambdas.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
  }
  dedupe_keep_order(lambdas);
  return lambdas;
}

double set_violation_magnitude(const SetDescriptor& K, const Vec& z) {
  DistanceEstimate d = distance_q(K, z, preferred_q(K));
  if (d.exact && d.value > 0.0) return d.value;
  return 1.0;
}

Verdict falsify_set_pconvexity(const SetDescriptor& K, PExponent p,
                               const SearchBudget& budget) {
  std::vector<Vec> members = collect_members(K, budget, "falsify_set_pconvexity");
  std::vector<double> lambdas = lambda_schedule(budget, p);

  auto test = [&](const Vec& x, const Vec& y,
                  double lambda) -> std::optional<Witness> {
    Vec z = p_combine(x, y, lambda, p);
    if (contains(K, z)) return std::nullopt;
    Witness w;
    w.x = x;
    w.y = y;
    w.lambda = lambda;
    w.mu = conjugate_coefficient(lambda, p);
    w.p = p.value();
    w.violation = set_violation_magnitude(K, z);
    w.kind = WitnessKind::set_violation;
    return w;
  };
  return triple_search(members, lambdas, budget, test);
}

Verdict falsify_fn_pconvexity(const ScalarFn& f, PExponent p,
                              const SearchBudget& budget, double tol) {
  std::vector<Vec> members =
      collect_members(f.domain, budget, "falsify_fn_pconvexity");
  std::vector<double> lambdas = lambda_schedule(budget, p);

  auto test = [&](const Vec& x, const Vec& y,
                  double lambda) -> std::optional<Witness> {
    const double mu = conjugate_coefficient(lambda, p);
    Vec z = p_combine(x, y, lambda, p);
    Witness w;
    w.x = x;
    w.y = y;
    w.lambda = lambda;
    w.mu = mu;
    w.p = p.value();
    if (!contains(f.domain, z)) {
      w.kind = WitnessKind::domain_violation;
      w.violation = set_violation_magnitude(f.domain, z);
      return w;
    }
    const double fx = f(x);
    const double fy = f(y);
    const double fz = f(z);
    const double gap = lambda * fx + mu * fy - fz;
    const double scale =
        std::max({1.0, std::abs(fx), std::abs(fy), std::abs(fz)});
    if (gap >= -tol * scale) return std::nullopt;
    w.kind = WitnessKind::jensen_violation;
    w.violation = -gap;
    return w;
  };
  return triple_search(members, lambdas, budget, test);
}

Witness construct_ball_counterexample(const Vec& center, double delta, QNorm q,
                                      PExponent p, double beta,
                                      double epsilon) {
  const double norm = q_norm(center, q);
  if (!(norm > 0.0)) {
    throw std::invalid_argument(
        "construct_ball_counterexample: center must be nonzero");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("construct_ball_counterexample: delta <= 0");
  }
  if (!(beta >= 1.0)) {
    throw std::invalid_argument("construct_ball_counterexample: beta < 1");
  }
  if (!(beta * delta / norm <= 0.5)) {
    throw std::invalid_argument(
        "construct_ball_counterexample: beta*delta/||center||_q > 1/2");
  }
  if (!(p.value() < 0.5)) {
    throw std::invalid_argument("construct_ball_counterexample: p >= 1/2");
  }
  if (!(epsilon > 0.0) || !(epsilon < delta / norm)) {
    throw std::invalid_argument(
        "construct_ball_counterexample: epsilon outside (0, delta/||center||_q)");
  }

  const double t = 1.0 - delta / norm + epsilon;
  Vec z(center.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = t * center[i];

  SetDescriptor ball = SetDescriptor::ball(q, center, delta, Boundary::open);
  if (!contains(ball, z)) {
    throw std::logic_error(
        "construct_ball_counterexample: construction defect (z not in ball)");
  }
  const double lambda = std::pow(2.0, -1.0 / p.value());
  Vec combined = p_combine(z, z, lambda, p);
  if (contains(ball, combined)) {
    throw std::logic_error(
        "construct_ball_counterexample: construction defect (combination "
        "stayed inside the ball)");
  }

  Witness w;
  w.x = z;
  w.y = std::move(z);
  w.lambda = lambda;
  w.mu = conjugate_coefficient(lambda, p);
  w.p = p.value();
  w.violation = set_violation_magnitude(ball, combined);
  w.kind = WitnessKind::set_violation;
  return w;
}

ConeEquivalenceReport check_cone_equivalence(const SetDescriptor& K,
                                             PExponent p,
                                             const SearchBudget& budget) {
  ConeEquivalenceReport report;
  std::vector<Vec> members =
      collect_members(K, budget, "check_cone_equivalence");
  const std::size_t d = K.dim();

  auto scaled_member = [&](const Vec& x, double t) {
    Vec s(d);
    for (std::size_t i = 0; i < d; ++i) s[i] = t * x[i];
    return contains(K, s);
  };

  // Precondition: alpha*K inside K for alpha in (0, 1].
  report.alpha_scaling_ok = true;
  for (const Vec& x : members) {
    for (int k = 1; k <= 8 && report.alpha_scaling_ok; ++k) {
      if (!scaled_member(x, static_cast<double>(k) / 8.0)) {
        report.alpha_scaling_ok = false;
        report.detail = "alpha-scaling precondition failed";
      }
    }
    if (!report.alpha_scaling_ok) break;
  }

  // (a) additive closure on member pairs.
  report.additive_closed = true;
  std::size_t tested_pairs = 0;
  Vec sum(d);
  for (std::size_t i = 0; i < members.size() && report.additive_closed; ++i) {
    for (std::size_t j = i; j < members.size(); ++j) {
      if (++tested_pairs > budget.max_pairs) break;
      for (std::size_t c = 0; c < d; ++c) sum[c] = members[i][c] + members[j][c];
      if (!contains(K, sum)) {
        report.additive_closed = false;
        break;
      }
    }
  }

  // (b) cone property over a multiplier grid in (0, 10].
  report.cone_ok = true;
  for (const Vec& x : members) {
    for (int k = 1; k <= 10 && report.cone_ok; ++k) {
      if (!scaled_member(x, static_cast<double>(k))) report.cone_ok = false;
    }
    if (!report.cone_ok) break;
  }

  report.pconvexity = falsify_set_pconvexity(K, p, budget);
  const bool b_holds = report.cone_ok && !report.pconvexity.falsified();
  report.consistent = (report.additive_closed == b_holds);
  if (!report.consistent) {
    report.detail =
        "equivalence violated on the budget: descriptor defect or genuine "
        "counterexample";
  }
  return report;
}

Verdict check_downgrade(const SetDescriptor& K, PExponent p, PExponent p1,
                        const SearchBudget& budget) {
  if (!(p1.value() <= p.value())) {
    throw std::invalid_argument("check_downgrade: requires p1 <= p");
  }
  if (!contains(K, Vec(K.dim(), 0.0))) {
    throw std::invalid_argument("check_downgrade: 0 is not a member of K");
  }
  return falsify_set_pconvexity(K, p1, budget);
}

SegmentInteriorReport check_segment_interior(const SetDescriptor& K,
                                             PExponent p, const Vec& x,
                                             const Vec& y, double probe_radius,
                                             std::size_t samples) {
  if (samples < 1) {
    throw std::invalid_argument("check_segment_interior: samples must be >= 1");
  }
  if (!is_interior_point(K, x, probe_radius, kProbeCount)) {
    throw std::invalid_argument(
        "check_segment_interior: x is not interior at the probe radius");
  }
  if (!contains(K, y) &&
      !contains(tube(K, probe_radius, QNorm(2.0)), y)) {
    throw std::invalid_argument(
        "check_segment_interior: y lies neither in K nor in its probe-radius "
        "tube");
  }

  SegmentInteriorReport report;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double lambda =
        static_cast<double>(i) / static_cast<double>(samples);
    Vec z = p_combine(x, y, lambda, p);
    ++report.checked;
    if (!is_interior_point(K, z, lambda * probe_radius, kProbeCount)) {
      report.failed_lambda = lambda;
      report.failed_point = std::move(z);
      report.passed = false;
      return report;
    }
  }
  report.passed = true;
  return report;
}

bool ConsequenceReport::all_pass() const {
  for (const SuiteLine& line : lines) {
    if (line.status == SuiteLine::Status::fail) return false;
  }
  return true;
}

ConsequenceReport run_consequence_suite(const ScalarFn& f,
                                        const SetDescriptor& K, PExponent p,
                                        const SearchBudget& budget,
                                        double tol) {
  if (K.dim() != f.domain.dim()) {
    throw std::invalid_argument("run_consequence_suite: dimension mismatch");
  }
  ConsequenceReport report;
  auto add = [&](std::string name, SuiteLine::Status status,
                 std::string message) {
    report.lines.push_back({std::move(name), status, std::move(message)});
  };

  // Hypothesis: f is p-convex on the budget.
  Verdict hypothesis = falsify_fn_pconvexity(f, p, budget);
  if (hypothesis.falsified()) {
    add("hypothesis: f p-convex", SuiteLine::Status::fail,
        "falsifier found a counterexample; consequence checks skipped");
    return report;
  }
  add("hypothesis: f p-convex", SuiteLine::Status::pass,
      "no counterexample over " + std::to_string(hypothesis.samples_used) +
          " samples");

  const bool sign_theorems = p.value() < 1.0;
  const std::size_t d = K.dim();

  // Dense grid over the bounding box for the landscape checks.
  std::size_t g = std::max<std::size_t>(budget.grid_per_axis * 4, 16);
  while (g > 2 &&
         std::pow(static_cast<double>(g), static_cast<double>(d)) > 100000.0) {
    --g;
  }
  const Box& box = K.bounding_box();
  const std::size_t total = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(g), static_cast<double>(d))));
  std::vector<double> values(total,
                             std::numeric_limits<double>::quiet_NaN());
  std::vector<Vec> points(total);
  std::vector<std::size_t> idx(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    Vec pt(d);
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = rem % g;
      rem /= g;
      const double lo = box.lo[i];
      const double hi = box.hi[i];
      pt[i] = (g == 1) ? lo
                       : (idx[i] + 1 == g
                              ? hi
                              : lo + (static_cast<double>(idx[i]) * (hi - lo)) /
                                         static_cast<double>(g - 1));
    }
    if (contains(K, pt)) values[flat] = f(pt);
    points[flat] = std::move(pt);
  }

  // (i) sampled local minima have value <= tol.
  if (!sign_theorems) {
    add("local minima nonpositive", SuiteLine::Status::skipped,
        "sign theorems require p < 1");
  } else {
    bool ok = true;
    std::string msg = "all sampled local minima <= tol";
    for (std::size_t flat = 0; flat < total && ok; ++flat) {
      if (std::isnan(values[flat])) continue;
      bool has_neighbor = false;
      bool is_local_min = true;
      std::size_t stride = 1;
      std::size_t rem = flat;
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t coord = rem % g;
        rem /= g;
        for (int step : {-1, +1}) {
          if ((step < 0 && coord == 0) || (step > 0 && coord + 1 == g)) continue;
          const std::size_t nb = flat + static_cast<std::size_t>(
                                            static_cast<long long>(stride) * step);
          if (std::isnan(values[nb])) continue;
          has_neighbor = true;
          if (values[nb] < values[flat]) is_local_min = false;
        }
        stride *= g;
      }
      if (has_neighbor && is_local_min && values[flat] > tol) {
        ok = false;
        std::ostringstream os;
        os << "sampled local minimum with f = " << values[flat] << " at grid point";
        msg = os.str();
      }
    }
    add("local minima nonpositive", ok ? SuiteLine::Status::pass
                                       : SuiteLine::Status::fail, msg);
  }

  // (ii) f(0) <= tol when 0 lies in K.
  if (!sign_theorems) {
    add("f(0) nonpositive", SuiteLine::Status::skipped,
        "sign theorems require p < 1");
  } else {
    Vec zero(d, 0.0);
    if (!contains(K, zero)) {
      add("f(0) nonpositive", SuiteLine::Status::skipped, "0 is not in K");
    } else {
      const double f0 = f(zero);
      add("f(0) nonpositive",
          f0 <= tol ? SuiteLine::Status::pass : SuiteLine::Status::fail,
          "f(0) = " + std::to_string(f0));
    }
  }

  // (iii) boundedness bound on ball domains.
  if (std::holds_alternative<detail::BallNode>(K.node().v)) {
    double max_f = -std::numeric_limits<double>::infinity();
    double min_f = std::numeric_limits<double>::infinity();
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (std::isnan(values[flat])) continue;
      max_f = std::max(max_f, values[flat]);
      min_f = std::min(min_f, values[flat]);
    }
    try {
      const double m = lower_bound_from_upper(f, max_f, p);
      const bool ok = min_f >= m - tol * (1.0 + std::abs(m));
      std::ostringstream os;
      os << "sampled min " << min_f << " vs bound " << m;
      add("lower bound from upper bound",
          ok ? SuiteLine::Status::pass : SuiteLine::Status::fail, os.str());
    } catch (const std::runtime_error& e) {
      add("lower bound from upper bound", SuiteLine::Status::skipped, e.what());
    }
  } else {
    add("lower bound from upper bound", SuiteLine::Status::skipped,
        "domain is not a ball");
  }

  // (iv) nonnegative f with a strict interior maximum must be constant.
  if (!sign_theorems) {
    add("strict interior max implies constant", SuiteLine::Status::skipped,
        "sign theorems require p < 1");
  } else {
    double max_f = -std::numeric_limits<double>::infinity();
    double min_f = std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    std::size_t argmax = 0;
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (std::isnan(values[flat])) continue;
      min_f = std::min(min_f, values[flat]);
      if (values[flat] > max_f) {
        second = max_f;
        max_f = values[flat];
        argmax = flat;
      } else {
        second = std::max(second, values[flat]);
      }
    }
    bool argmax_on_window_edge = false;
    {
      std::size_t rem = argmax;
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t coord = rem % g;
        rem /= g;
        if (coord == 0 || coord + 1 == g) argmax_on_window_edge = true;
      }
    }
    if (min_f < -tol) {
      add("strict interior max implies constant", SuiteLine::Status::skipped,
          "f takes negative values on K");
    } else if (!(second < max_f - tol)) {
      add("strict interior max implies constant", SuiteLine::Status::skipped,
          "no strict global maximum among samples");
    } else if (argmax_on_window_edge) {
      // A maximum on the sampling-window edge does not witness a global
      // maximum (the box truncates unbounded descriptors).
      add("strict interior max implies constant", SuiteLine::Status::skipped,
          "sampled maximum lies on the sampling boundary");
    } else {
      const double probe =
          0.01 * (box.hi[0] - box.lo[0] + 1e-9);
      if (!is_interior_point(K, points[argmax], probe, kProbeCount)) {
        add("strict interior max implies constant", SuiteLine::Status::skipped,
            "sampled maximum is not interior");
      } else {
        const bool constant = (max_f - min_f) <= tol;
        add("strict interior max implies constant",
            constant ? SuiteLine::Status::pass : SuiteLine::Status::fail,
            constant ? "f is constant on samples"
                     : "nonconstant f with strict interior maximum");
      }
    }
  }

  // Homogeneous p-convex functions on cones are classically convex.
  {
    bool cone_like = true;
    std::size_t checked = 0;
    for (std::size_t flat = 0; flat < total && checked < 64; ++flat) {
      if (std::isnan(values[flat])) continue;
      ++checked;
      Vec half(d);
      for (std::size_t i = 0; i < d; ++i) half[i] = 0.5 * points[flat][i];
      if (!contains(K, half)) {
        cone_like = false;
        break;
      }
    }
    if (!cone_like) {
      add("homogeneous implies convex", SuiteLine::Status::skipped,
          "domain is not a cone");
    } else if (!is_positively_homogeneous(f, 64, tol, budget.seed)) {
      add("homogeneous implies convex", SuiteLine::Status::skipped,
          "f is not positively homogeneous");
    } else {
      Verdict v = falsify_fn_pconvexity(f, PExponent(1.0), budget);
      add("homogeneous implies convex",
          v.falsified() ? SuiteLine::Status::fail : SuiteLine::Status::pass,
          v.falsified() ? "p = 1 falsifier found a counterexample"
                        : "p = 1 falsifier passed");
    }
  }

  return report;
}

bool replay_witness(const Witness& w, const SetDescriptor* K,
                    const ScalarFn* f, double tol) {
  const PExponent p(w.p);
  switch (w.kind) {
    case WitnessKind::set_violation: {
      if (K == nullptr) return false;
      Vec z = p_combine(w.x, w.y, w.lambda, p);
      if (contains(*K, z)) return false;
      return std::abs(set_violation_magnitude(*K, z) - w.violation) <= tol;
    }
    case WitnessKind::domain_violation: {
      const SetDescriptor* domain = K != nullptr ? K : (f ? &f->domain : nullptr);
      if (domain == nullptr) return false;
      Vec z = p_combine(w.x, w.y, w.lambda, p);
      if (contains(*domain, z)) return false;
      return std::abs(set_violation_magnitude(*domain, z) - w.violation) <= tol;
    }
    case WitnessKind::jensen_violation: {
      if (f == nullptr) return false;
      const double gap = jensen_gap(*f, w.x, w.y, w.lambda, p);
      return std::abs(-gap - w.violation) <= tol;
    }
  }
  return false;
}

}  // namespace pconvex
