#include "pconvex/pfuncs.hpp"

#include <cmath>
#include <utility>

#include "pconvex/rng.hpp"

namespace pconvex {

VectorFn::VectorFn(SetDescriptor domain, std::vector<ScalarFn> components)
    : domain_(std::move(domain)), components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("VectorFn: needs at least one component");
  }
  for (ScalarFn& c : components_) {
    if (c.domain.dim() != domain_.dim()) {
      throw std::invalid_argument(
          "VectorFn: component domain dimension mismatch");
    }
    c.domain = domain_;
  }
}

DomainViolation::DomainViolation(Vec x_, Vec y_, Vec point_, double lambda_,
                                 double mu_, double p_)
    : std::runtime_error("domain not p-convex at witness"),
      x(std::move(x_)),
      y(std::move(y_)),
      point(std::move(point_)),
      lambda(lambda_),
      mu(mu_),
      p(p_) {}

double jensen_gap(const ScalarFn& f, const Vec& x, const Vec& y, double lambda,
                  PExponent p) {
  if (!contains(f.domain, x) || !contains(f.domain, y)) {
    throw std::invalid_argument("jensen_gap: x and y must lie in the domain");
  }
  const double mu = conjugate_coefficient(lambda, p);
  Vec z = p_combine(x, y, lambda, p);
  if (!contains(f.domain, z)) {
    throw DomainViolation(x, y, std::move(z), lambda, mu, p.value());
  }
  return lambda * f(x) + mu * f(y) - f(z);
}

std::vector<double> evaluate_vector(const VectorFn& F, const Vec& x) {
  if (!contains(F.domain(), x)) {
    throw std::invalid_argument("evaluate_vector: point outside domain");
  }
  std::vector<double> out;
  out.reserve(F.objectives());
  for (const ScalarFn& f : F.components()) out.push_back(f(x));
  return out;
}

bool is_positively_homogeneous(const ScalarFn& f, std::size_t sample_budget,
                               double tol, std::uint64_t seed) {
  MemberSample members = sample_members(f.domain, 8, sample_budget, seed);
  if (members.points.empty()) {
    throw std::runtime_error("is_positively_homogeneous: no domain samples");
  }
  // log-spaced t in (0, 10]
  std::vector<double> ts;
  for (int k = 0; k <= 12; ++k) {
    ts.push_back(std::pow(10.0, -3.0 + k * (4.0 / 12.0)));
  }
  Vec scaled;
  for (const Vec& x : members.points) {
    const double fx = f(x);
    for (double t : ts) {
      scaled.assign(x.size(), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = t * x[i];
      if (!contains(f.domain, scaled)) return false;  // not a cone after all
      if (std::abs(f(scaled) - t * fx) > tol * (1.0 + std::abs(fx))) {
        return false;
      }
    }
  }
  return true;
}

double lower_bound_from_upper(const ScalarFn& f, double M, PExponent p) {
  const auto* ball = std::get_if<detail::BallNode>(&f.domain.node().v);
  if (ball == nullptr) {
    throw std::invalid_argument("lower_bound_from_upper: domain must be a ball");
  }
  const double factor = std::pow(2.0, 1.0 - 1.0 / p.value());
  Vec z(ball->center.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = factor * ball->center[i];
  if (!contains(f.domain, z)) {
    throw std::runtime_error("lower_bound_from_upper: center condition violated");
  }
  return std::pow(2.0, 1.0 / p.value()) * f(z) - M;
}

// --- worked-example catalog -------------------------------------------------

namespace {

void require_1d(const SetDescriptor& domain, const char* what) {
  if (domain.dim() != 1) {
    throw std::invalid_argument(std::string(what) + ": domain must be 1-D");
  }
}

}  // namespace

ScalarFn linear_sum(double alpha, SetDescriptor domain) {
  return {std::move(domain),
          [alpha](const Vec& x) {
            double s = 0.0;
            for (double v : x) s += v;
            return alpha * s;
          },
          "linear_sum(" + std::to_string(alpha) + ")"};
}

ScalarFn q_norm_fn(QNorm q, SetDescriptor domain) {
  return {std::move(domain), [q](const Vec& x) { return q_norm(x, q); },
          q.is_inf() ? std::string("q_norm(inf)")
                     : "q_norm(" + std::to_string(q.value()) + ")"};
}

ScalarFn sqrt_minus_two(SetDescriptor domain) {
  require_1d(domain, "sqrt_minus_two");
  return {std::move(domain),
          [](const Vec& x) { return std::sqrt(x[0]) - 2.0; }, "sqrt(x)-2"};
}

ScalarFn square_shift(SetDescriptor domain) {
  require_1d(domain, "square_shift");
  return {std::move(domain),
          [](const Vec& x) { return (x[0] - 1.0) * (x[0] - 1.0); }, "(x-1)^2"};
}

ScalarFn neg_half_quad(SetDescriptor domain) {
  require_1d(domain, "neg_half_quad");
  return {std::move(domain),
          [](const Vec& x) { return -0.5 * x[0] * x[0] - 0.5; }, "-x^2/2-1/2"};
}

ScalarFn user_fn(SetDescriptor domain, std::function<double(const Vec&)> eval,
                 std::string label) {
  if (!eval) throw std::invalid_argument("user_fn: null evaluator");
  return {std::move(domain), std::move(eval), std::move(label)};
}

const std::vector<CatalogInfo>& catalog() {
  static const std::vector<CatalogInfo> entries{
      {"linear_sum", "any p-convex domain", {0.25, 0.5, 1.0}},
      {"q_norm", "any p-convex domain", {0.25, 0.5, 1.0}},
      {"sqrt_minus_two", "[0, 1]", {0.25, 0.5}},
      {"square_shift", "[0, 2]", {1.0}},
      {"neg_half_quad", "[0, 1]", {0.5}},
      {"user_oracle", "caller-declared; in-process API only", {}},
  };
  return entries;
}

}  // namespace pconvex
