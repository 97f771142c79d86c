#pragma once
// Arithmetic for p-convex combinations: admissible coefficient pairs
// (lambda, mu) with lambda^p + mu^p = 1, the combination lambda*x + mu*y,
// and the scaling function g(lambda) = lambda + (1 - lambda^p)^(1/p).

#include <cstddef>
#include <utility>
#include <vector>

namespace pconvex {

using Vec = std::vector<double>;

// Exponent p in (0, 1]. p = 1 recovers classical convex combinations.
class PExponent {
 public:
  explicit PExponent(double p);
  double value() const { return p_; }

 private:
  double p_;
};

// An admissible coefficient pair for a given exponent.
struct PCoefficients {
  double lambda = 0.0;
  double mu = 0.0;
  double p = 1.0;

  // |lambda^p + mu^p - 1| <= tol. Constructions are closed-form, so drift
  // beyond 1e-12 indicates a bug rather than roundoff.
  bool valid(double tol = 1e-12) const;
};

enum class SegmentKind { open, half_open, closed };

// mu = (1 - lambda^p)^(1/p). The intermediate 1 - lambda^p is clamped into
// [0, 1]: near lambda = 1 it can go an ulp negative, and a negative base
// under a fractional power is undefined.
double conjugate_coefficient(double lambda, PExponent p);

// lambda*x + (1 - lambda^p)^(1/p)*y, componentwise.
Vec p_combine(const Vec& x, const Vec& y, double lambda, PExponent p);

// g(lambda) = lambda + (1 - lambda^p)^(1/p); range [2^((p-1)/p), 1].
double scaling_g(double lambda, PExponent p);

// Closed-form minimizer of g: (2^(-1/p), 2^((p-1)/p)). Requires p < 1;
// for p = 1 the function is constant and has no strict minimizer.
std::pair<double, double> g_argmin(PExponent p);

// Points of the p-segment between x and y at `count` lambda values equally
// spaced on (0,1), (0,1] or [0,1] according to `kind`, in increasing lambda
// order (so a closed segment starts at y and ends at x).
std::vector<Vec> sample_p_segment(const Vec& x, const Vec& y, PExponent p,
                                  std::size_t count, SegmentKind kind);

}  // namespace pconvex
