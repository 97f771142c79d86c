#pragma once
// Evaluable scalar and vector objectives over set-descriptor domains, the
// worked-example catalog, and the Jensen-gap primitive
//   gap = lambda*f(x) + mu*f(y) - f(lambda*x + mu*y),  lambda^p + mu^p = 1.
// A nonnegative gap at an admissible triple is exactly the p-convexity
// inequality holding at that instance.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pconvex/pcore.hpp"
#include "pconvex/psets.hpp"

namespace pconvex {

struct ScalarFn {
  SetDescriptor domain;
  std::function<double(const Vec&)> eval;  // total and finite on the domain
  std::string label;

  double operator()(const Vec& x) const { return eval(x); }
};

// Components share one domain descriptor; the constructor rebinds them.
class VectorFn {
 public:
  VectorFn(SetDescriptor domain, std::vector<ScalarFn> components);

  const SetDescriptor& domain() const { return domain_; }
  const std::vector<ScalarFn>& components() const { return components_; }
  std::size_t objectives() const { return components_.size(); }

 private:
  SetDescriptor domain_;
  std::vector<ScalarFn> components_;
};

// Thrown when a p-combination of domain points escapes the domain. That is
// itself a counterexample to the domain's p-convexity, so the escape point
// and coefficients are preserved for reporting upstream.
class DomainViolation : public std::runtime_error {
 public:
  DomainViolation(Vec x, Vec y, Vec point, double lambda, double mu, double p);

  Vec x, y, point;
  double lambda, mu, p;
};

double jensen_gap(const ScalarFn& f, const Vec& x, const Vec& y, double lambda,
                  PExponent p);

std::vector<double> evaluate_vector(const VectorFn& F, const Vec& x);

// Sampled test of f(t*x) = t*f(x) over domain samples and a log-spaced
// t-grid in (0, 10]. The domain is expected to be a cone; scaled points that
// escape it falsify the precondition and yield false.
bool is_positively_homogeneous(const ScalarFn& f, std::size_t sample_budget,
                               double tol = 1e-9, std::uint64_t seed = 42);

// For f on a ball domain upper-bounded by M: returns m = 2^(1/p) f(z) - M
// with z = 2^(1 - 1/p) * center, a lower bound for f on the ball. Throws
// "center condition violated" when z falls outside the ball.
double lower_bound_from_upper(const ScalarFn& f, double M, PExponent p);

// --- worked-example catalog -------------------------------------------------

ScalarFn linear_sum(double alpha, SetDescriptor domain);
ScalarFn q_norm_fn(QNorm q, SetDescriptor domain);
ScalarFn sqrt_minus_two(SetDescriptor domain);  // sqrt(x) - 2, 1-D
ScalarFn square_shift(SetDescriptor domain);    // (x - 1)^2, 1-D
ScalarFn neg_half_quad(SetDescriptor domain);   // -x^2/2 - 1/2, 1-D
ScalarFn user_fn(SetDescriptor domain, std::function<double(const Vec&)> eval,
                 std::string label);

// Catalog metadata: the (p, domain) pairs each entry is documented to hold
// on. Exponents listed are the ones a falsification run is expected to pass.
struct CatalogInfo {
  const char* id;
  const char* domain_note;
  std::vector<double> recommended_p;
};

const std::vector<CatalogInfo>& catalog();

}  // namespace pconvex
