#pragma once
// Brute-force weak-efficiency solver on rectangular grids, plus executable
// checks for the structural results about weakly efficient solution sets of
// componentwise p-convex objectives: argmin-union inclusion, argmin-
// intersection equality, scaling closure, interval fill and p-convexity of
// the solution set.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pconvex/certify.hpp"
#include "pconvex/pcore.hpp"
#include "pconvex/pfuncs.hpp"

namespace pconvex {

struct GridAxis {
  double lo;
  double hi;
  std::size_t count;  // >= 2
};

// Rectangular grid; total points capped at 10^6 (desk-scale guard).
class GridSpec {
 public:
  explicit GridSpec(std::vector<GridAxis> axes);

  std::size_t dims() const { return axes_.size(); }
  std::size_t total() const { return total_; }
  const std::vector<GridAxis>& axes() const { return axes_; }
  double step(std::size_t axis) const;
  Vec point(std::size_t linear) const;

  // Nearest grid index to x (half-step snap per axis); nullopt if any
  // coordinate rounds outside the axis range.
  std::optional<std::size_t> snap(const Vec& x) const;

 private:
  std::vector<GridAxis> axes_;
  std::size_t total_;
};

struct StructuralCheck {
  enum class Status { pass, fail, not_applicable };
  std::string name;
  Status status = Status::not_applicable;
  std::string message;
  std::size_t skipped = 0;  // scaled points outside the grid range
};

struct EfficiencyReport {
  GridSpec grid;
  std::size_t objectives = 0;
  std::vector<std::uint8_t> in_domain;     // per grid point
  std::vector<double> values;              // total*m, NaN outside the domain
  std::vector<std::size_t> weakly_efficient;  // sorted linear indices
  std::vector<std::vector<std::size_t>> argmins;  // per objective, sorted
  std::size_t excluded = 0;
  double tol = 1e-12;
  std::vector<StructuralCheck> structural_checks;

  bool is_weakly_efficient(std::size_t linear) const;
  double value(std::size_t linear, std::size_t objective) const;
};

// Strict componentwise dominance scan: x_bar is weakly efficient iff no grid
// point improves every objective by more than tol. Objective values are
// tabulated once; the scan is O(N^2) with early exit. Grid points outside
// the domain are excluded and counted.
EfficiencyReport weakly_efficient_set(const VectorFn& F, const GridSpec& grid,
                                      double tol = 1e-12);

// Per-objective sets of grid indices within tol of the grid minimum.
std::vector<std::vector<std::size_t>> argmin_sets(const VectorFn& F,
                                                  const GridSpec& grid,
                                                  double tol = 1e-12);

StructuralCheck check_union_inclusion(const EfficiencyReport& report);

// When the argmin intersection is nonempty, the weakly efficient set equals
// the argmin union; not_applicable otherwise.
StructuralCheck check_intersection_equality(const EfficiencyReport& report);

// Componentwise reduction: F is R^m_+ p-convex iff every component is
// p-convex. The verdict names the falsified component when there is one.
struct RmPVerdict {
  Verdict verdict;
  int component = -1;  // -1: domain itself falsified (or no witness)
};

RmPVerdict is_Rm_p_convex(const VectorFn& F, PExponent p,
                          const SearchBudget& budget);

// For nonnegative objectives: (lambda + mu) * x_bar stays weakly efficient.
// Scaled points are snapped at half-step tolerance; points leaving the grid
// range are skipped and counted rather than failed.
StructuralCheck check_scaling_closure(const EfficiencyReport& report,
                                      const VectorFn& F, PExponent p,
                                      std::size_t coefficient_samples);

// 1-D: every grid point in (0, x_bar] (resp. [x_bar, 0)) is weakly efficient
// for the extremal signed x_bar; not_applicable when no signed point exists.
StructuralCheck check_interval_fill(const EfficiencyReport& report);

// 1-D: treats the weakly efficient grid points as a half-step snap set and
// runs the set falsifier on it.
Verdict check_ew_pconvexity(const EfficiencyReport& report, PExponent p,
                            const SearchBudget& budget);

// The grid point nearest the origin is weakly efficient whenever F >= 0 and
// some component is p-convex with p < 1. Throws when 0 is outside the grid.
StructuralCheck check_zero_in_ew(const EfficiencyReport& report,
                                 const VectorFn& F, PExponent p,
                                 const SearchBudget& budget);

// Endpoint chain [r^n x_bar, r^(n-1) x_bar] with r = 2^((p-1)/p); successive
// intervals share endpoints and cover (0, x_bar] in the limit.
std::vector<std::pair<double, double>> interval_fill_cover(double xbar,
                                                           PExponent p,
                                                           std::size_t depth);

}  // namespace pconvex
