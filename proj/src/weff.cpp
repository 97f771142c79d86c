#include "pconvex/weff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pconvex {

namespace {

constexpr std::size_t kMaxGridPoints = 1000000;

bool sorted_contains(const std::vector<std::size_t>& sorted, std::size_t v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

GridSpec::GridSpec(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("GridSpec: no axes");
  total_ = 1;
  for (const GridAxis& a : axes_) {
    if (a.count < 2) throw std::invalid_argument("GridSpec: count must be >= 2");
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw std::invalid_argument("GridSpec: requires finite lo < hi");
    }
    if (total_ > kMaxGridPoints / a.count) {
      throw std::invalid_argument("GridSpec: total points exceed 10^6");
    }
    total_ *= a.count;
  }
}

double GridSpec::step(std::size_t axis) const {
  const GridAxis& a = axes_.at(axis);
  return (a.hi - a.lo) / static_cast<double>(a.count - 1);
}

Vec GridSpec::point(std::size_t linear) const {
  Vec p(axes_.size());
  std::size_t rem = linear;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const GridAxis& a = axes_[i];
    const std::size_t idx = rem % a.count;
    rem /= a.count;
    if (idx == 0) {
      p[i] = a.lo;
    } else if (idx + 1 == a.count) {
      p[i] = a.hi;
    } else {
      p[i] = a.lo + (static_cast<double>(idx) * (a.hi - a.lo)) /
                        static_cast<double>(a.count - 1);
    }
  }
  return p;
}

std::optional<std::size_t> GridSpec::snap(const Vec& x) const {
  if (x.size() != axes_.size()) {
    throw std::invalid_argument("GridSpec::snap: dimension mismatch");
  }
  std::size_t linear = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const GridAxis& a = axes_[i];
    const double h = step(i);
    const long long idx = std::llround((x[i] - a.lo) / h);
    if (idx < 0 || idx >= static_cast<long long>(a.count)) return std::nullopt;
    linear += static_cast<std::size_t>(idx) * stride;
    stride *= a.count;
  }
  return linear;
}

bool EfficiencyReport::is_weakly_efficient(std::size_t linear) const {
  return sorted_contains(weakly_efficient, linear);
}

double EfficiencyReport::value(std::size_t linear, std::size_t objective) const {
  return values[linear * objectives + objective];
}

EfficiencyReport weakly_efficient_set(const VectorFn& F, const GridSpec& grid,
                                      double tol) {
  if (grid.dims() != F.domain().dim()) {
    throw std::invalid_argument("weakly_efficient_set: grid dimension mismatch");
  }
  const std::size_t n = grid.total();
  const std::size_t m = F.objectives();
  EfficiencyReport report{grid, m, std::vector<std::uint8_t>(n, 0),
                          std::vector<double>(n * m,
                                              std::numeric_limits<double>::quiet_NaN()),
                          {},
                          {},
                          0,
                          tol,
                          {}};

  std::vector<std::size_t> candidates;
  candidates.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    Vec x = grid.point(a);
    if (!contains(F.domain(), x)) {
      ++report.excluded;
      continue;
    }
    report.in_domain[a] = 1;
    candidates.push_back(a);
    for (std::size_t i = 0; i < m; ++i) {
      report.values[a * m + i] = F.components()[i](x);
    }
  }
  if (candidates.empty()) {
    throw std::runtime_error("weakly_efficient_set: empty in-domain grid");
  }

  // Pairwise strict-dominance scan with early exit.
  for (std::size_t a : candidates) {
    bool dominated = false;
    for (std::size_t b : candidates) {
      if (b == a) continue;
      bool strict_all = true;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(report.values[b * m + i] < report.values[a * m + i] - tol)) {
          strict_all = false;
          break;
        }
      }
      if (strict_all) {
        dominated = true;
        break;
      }
    }
    if (!dominated) report.weakly_efficient.push_back(a);
  }

  // Per-objective argmin sets.
  report.argmins.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : candidates) {
      best = std::min(best, report.values[a * m + i]);
    }
    for (std::size_t a : candidates) {
      if (report.values[a * m + i] <= best + tol) {
        report.argmins[i].push_back(a);
      }
    }
  }

  // Report invariant: every argmin index is weakly efficient.
  for (const auto& am : report.argmins) {
    for (std::size_t idx : am) {
      if (!report.is_weakly_efficient(idx)) {
        throw std::logic_error(
            "weakly_efficient_set: argmin index missing from the weakly "
            "efficient set (scan defect)");
      }
    }
  }
  return report;
}

std::vector<std::vector<std::size_t>> argmin_sets(const VectorFn& F,
                                                  const GridSpec& grid,
                                                  double tol) {
  return weakly_efficient_set(F, grid, tol).argmins;
}

StructuralCheck check_union_inclusion(const EfficiencyReport& report) {
  StructuralCheck check;
  check.name = "union_inclusion";
  check.status = StructuralCheck::Status::pass;
  for (const auto& am : report.argmins) {
    for (std::size_t idx : am) {
      if (!report.is_weakly_efficient(idx)) {
        check.status = StructuralCheck::Status::fail;
        check.message = "argmin index " + std::to_string(idx) +
                        " is not weakly efficient";
        return check;
      }
    }
  }
  check.message = "argmin union contained in the weakly efficient set";
  return check;
}

StructuralCheck check_intersection_equality(const EfficiencyReport& report) {
  StructuralCheck check;
  check.name = "intersection_equality";

  std::vector<std::size_t> inter = report.argmins.empty()
                                       ? std::vector<std::size_t>{}
                                       : report.argmins.front();
  for (std::size_t i = 1; i < report.argmins.size(); ++i) {
    std::vector<std::size_t> next;
    std::set_intersection(inter.begin(), inter.end(),
                          report.argmins[i].begin(), report.argmins[i].end(),
                          std::back_inserter(next));
    inter = std::move(next);
  }
  if (inter.empty()) {
    check.status = StructuralCheck::Status::not_applicable;
    check.message = "argmin intersection is empty";
    return check;
  }

  std::vector<std::size_t> uni;
  for (const auto& am : report.argmins) {
    std::vector<std::size_t> next;
    std::set_union(uni.begin(), uni.end(), am.begin(), am.end(),
                   std::back_inserter(next));
    uni = std::move(next);
  }
  if (uni == report.weakly_efficient) {
    check.status = StructuralCheck::Status::pass;
    check.message = "weakly efficient set equals the argmin union";
  } else {
    check.status = StructuralCheck::Status::fail;
    check.message = "weakly efficient set differs from the argmin union (" +
                    std::to_string(report.weakly_efficient.size()) + " vs " +
                    std::to_string(uni.size()) + " indices)";
  }
  return check;
}

RmPVerdict is_Rm_p_convex(const VectorFn& F, PExponent p,
                          const SearchBudget& budget) {
  RmPVerdict out;
  out.verdict = falsify_set_pconvexity(F.domain(), p, budget);
  if (out.verdict.falsified()) {
    out.component = -1;
    out.verdict.witness->kind = WitnessKind::domain_violation;
    return out;
  }
  std::size_t samples = out.verdict.samples_used;
  for (std::size_t i = 0; i < F.objectives(); ++i) {
    Verdict v = falsify_fn_pconvexity(F.components()[i], p, budget);
    samples += v.samples_used;
    if (v.falsified()) {
      v.witness->component = static_cast<int>(i);
      v.samples_used = samples;
      out.verdict = std::move(v);
      out.component = static_cast<int>(i);
      return out;
    }
  }
  out.verdict.samples_used = samples;
  out.verdict.strategy = "componentwise reduction over " +
                         std::to_string(F.objectives()) + " objectives";
  return out;
}

StructuralCheck check_scaling_closure(const EfficiencyReport& report,
                                      [[maybe_unused]] const VectorFn& F,
                                      PExponent p,
                                      std::size_t coefficient_samples) {
  StructuralCheck check;
  check.name = "scaling_closure";
  if (coefficient_samples < 2) {
    throw std::invalid_argument(
        "check_scaling_closure: coefficient_samples must be >= 2");
  }

  // Codomain hypothesis: F >= 0 on the in-domain grid.
  for (std::size_t a = 0; a < report.grid.total(); ++a) {
    if (!report.in_domain[a]) continue;
    for (std::size_t i = 0; i < report.objectives; ++i) {
      if (report.value(a, i) < -report.tol) {
        check.status = StructuralCheck::Status::not_applicable;
        check.message = "objective " + std::to_string(i) +
                        " takes negative values; hypothesis F >= 0 fails";
        return check;
      }
    }
  }

  std::vector<double> lambdas;
  for (std::size_t j = 0; j < coefficient_samples; ++j) {
    lambdas.push_back(static_cast<double>(j) /
                      static_cast<double>(coefficient_samples - 1));
  }
  if (p.value() < 1.0) lambdas.push_back(std::pow(2.0, -1.0 / p.value()));

  const std::size_t d = report.grid.dims();
  for (std::size_t xbar : report.weakly_efficient) {
    const Vec pt = report.grid.point(xbar);
    for (double lambda : lambdas) {
      const double factor = scaling_g(lambda, p);
      Vec scaled(d);
      for (std::size_t i = 0; i < d; ++i) scaled[i] = factor * pt[i];
      auto snapped = report.grid.snap(scaled);
      if (!snapped.has_value()) {
        ++check.skipped;
        continue;
      }
      if (!report.in_domain[*snapped]) {
        ++check.skipped;
        continue;
      }
      if (!report.is_weakly_efficient(*snapped)) {
        check.status = StructuralCheck::Status::fail;
        std::ostringstream os;
        os << "scaled point left the weakly efficient set: index " << xbar
           << ", lambda = " << lambda << ", mu = "
           << conjugate_coefficient(lambda, p);
        check.message = os.str();
        return check;
      }
    }
  }
  check.status = StructuralCheck::Status::pass;
  check.message = "all snapped scalings stayed weakly efficient (" +
                  std::to_string(check.skipped) + " out-of-range skipped)";
  return check;
}

StructuralCheck check_interval_fill(const EfficiencyReport& report) {
  if (report.grid.dims() != 1) {
    throw std::invalid_argument("check_interval_fill: 1-D instances only");
  }
  StructuralCheck check;
  check.name = "interval_fill";

  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t idx : report.weakly_efficient) {
    const double x = report.grid.point(idx)[0];
    pos = std::max(pos, x);
    neg = std::min(neg, x);
  }
  if (pos <= 0.0 && neg >= 0.0) {
    check.status = StructuralCheck::Status::not_applicable;
    check.message = "no strictly signed weakly efficient point";
    return check;
  }

  const double h = report.grid.step(0);
  for (std::size_t a = 0; a < report.grid.total(); ++a) {
    if (!report.in_domain[a]) continue;
    const double x = report.grid.point(a)[0];
    const bool in_pos_fill = pos > 0.0 && x > 0.0 && x <= pos + 1e-12 * h;
    const bool in_neg_fill = neg < 0.0 && x < 0.0 && x >= neg - 1e-12 * h;
    if ((in_pos_fill || in_neg_fill) && !report.is_weakly_efficient(a)) {
      check.status = StructuralCheck::Status::fail;
      check.message =
          "gap point x = " + std::to_string(x) + " inside the fill interval";
      return check;
    }
  }
  check.status = StructuralCheck::Status::pass;
  check.message = "fill intervals fully weakly efficient";
  return check;
}

Verdict check_ew_pconvexity(const EfficiencyReport& report, PExponent p,
                            const SearchBudget& budget) {
  if (report.grid.dims() != 1) {
    throw std::invalid_argument("check_ew_pconvexity: 1-D instances only");
  }
  std::vector<double> coords;
  coords.reserve(report.weakly_efficient.size());
  for (std::size_t idx : report.weakly_efficient) {
    coords.push_back(report.grid.point(idx)[0]);
  }
  if (coords.empty()) {
    throw std::runtime_error("check_ew_pconvexity: empty weakly efficient set");
  }
  std::sort(coords.begin(), coords.end());
  // Relative slack keeps the union of half-step balls seamless: without it,
  // rounding opens ulp-wide cracks exactly at the midpoints between grid
  // points, which the adversarial lambda schedule reliably hits.
  const double snap = 0.5 * report.grid.step(0) * (1.0 + 1e-9);

  SetDescriptor snap_set = SetDescriptor::oracle(
      [coords, snap](const Vec& x) {
        auto it = std::lower_bound(coords.begin(), coords.end(), x[0]);
        if (it != coords.end() && std::abs(*it - x[0]) <= snap) return true;
        if (it != coords.begin() && std::abs(*(it - 1) - x[0]) <= snap) {
          return true;
        }
        return false;
      },
      1, Box{{coords.front() - snap}, {coords.back() + snap}});
  return falsify_set_pconvexity(snap_set, p, budget);
}

StructuralCheck check_zero_in_ew(const EfficiencyReport& report,
                                 const VectorFn& F, PExponent p,
                                 const SearchBudget& budget) {
  StructuralCheck check;
  check.name = "zero_in_ew";
  if (!(p.value() < 1.0)) {
    throw std::invalid_argument("check_zero_in_ew: requires 0 < p < 1");
  }
  for (const GridAxis& a : report.grid.axes()) {
    if (a.lo > 0.0 || a.hi < 0.0) {
      throw std::invalid_argument("check_zero_in_ew: 0 is outside the grid range");
    }
  }

  // Codomain hypothesis and the single p-convex component hypothesis.
  double most_negative = 0.0;
  for (std::size_t a = 0; a < report.grid.total(); ++a) {
    if (!report.in_domain[a]) continue;
    for (std::size_t i = 0; i < report.objectives; ++i) {
      most_negative = std::min(most_negative, report.value(a, i));
    }
  }
  if (most_negative < -report.tol) {
    check.status = StructuralCheck::Status::not_applicable;
    check.message = "hypothesis F >= 0 fails on the grid";
    return check;
  }
  bool some_component_pconvex = false;
  for (const ScalarFn& f : F.components()) {
    if (!falsify_fn_pconvexity(f, p, budget).falsified()) {
      some_component_pconvex = true;
      break;
    }
  }
  if (!some_component_pconvex) {
    check.status = StructuralCheck::Status::not_applicable;
    check.message = "no component passed the p-convexity falsifier";
    return check;
  }

  auto idx = report.grid.snap(Vec(report.grid.dims(), 0.0));
  if (!idx.has_value() || !report.in_domain[*idx]) {
    check.status = StructuralCheck::Status::fail;
    check.message = "grid point nearest 0 is outside the domain";
    return check;
  }
  if (report.is_weakly_efficient(*idx)) {
    check.status = StructuralCheck::Status::pass;
    check.message = "grid point nearest 0 is weakly efficient";
  } else {
    check.status = StructuralCheck::Status::fail;
    check.message = "grid point nearest 0 is not weakly efficient";
  }
  return check;
}

std::vector<std::pair<double, double>> interval_fill_cover(double xbar,
                                                           PExponent p,
                                                           std::size_t depth) {
  if (!(xbar > 0.0)) {
    throw std::invalid_argument("interval_fill_cover: requires xbar > 0");
  }
  if (!(p.value() < 1.0)) {
    throw std::invalid_argument("interval_fill_cover: requires p < 1");
  }
  const double r = std::pow(2.0, (p.value() - 1.0) / p.value());
  std::vector<std::pair<double, double>> cover;
  double hi = xbar;
  for (std::size_t nIter = 0; nIter < depth; ++nIter) {
    const double lo = r * hi;
    cover.emplace_back(lo, hi);
    hi = lo;
  }
  return cover;
}

}  // namespace pconvex
