#include "pconvex/pcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pconvex {

PExponent::PExponent(double p) : p_(p) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("PExponent: p must lie in (0, 1], got " +
                                std::to_string(p));
  }
}

bool PCoefficients::valid(double tol) const {
  if (lambda < 0.0 || mu < 0.0) return false;
  const double s = std::pow(lambda, p) + std::pow(mu, p);
  return std::abs(s - 1.0) <= tol;
}

double conjugate_coefficient(double lambda, PExponent p) {
  if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
    throw std::domain_error("conjugate_coefficient: lambda must lie in [0, 1]");
  }
  double c = 1.0 - std::pow(lambda, p.value());
  if (c < 0.0) c = 0.0;
  if (c > 1.0) c = 1.0;
  return std::pow(c, 1.0 / p.value());
}

Vec p_combine(const Vec& x, const Vec& y, double lambda, PExponent p) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("p_combine: dimension mismatch");
  }
  const double mu = conjugate_coefficient(lambda, p);
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = lambda * x[i] + mu * y[i];
  return z;
}

double scaling_g(double lambda, PExponent p) {
  return lambda + conjugate_coefficient(lambda, p);
}

std::pair<double, double> g_argmin(PExponent p) {
  if (p.value() == 1.0) {
    throw std::invalid_argument(
        "g_argmin: g is constant for p = 1; no strict minimizer");
  }
  const double inv = 1.0 / p.value();
  const double lambda_star = std::pow(2.0, -inv);
  const double g_star = std::pow(2.0, (p.value() - 1.0) * inv);
  return {lambda_star, g_star};
}

std::vector<Vec> sample_p_segment(const Vec& x, const Vec& y, PExponent p,
                                  std::size_t count, SegmentKind kind) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("sample_p_segment: dimension mismatch");
  }
  if (count < 1) {
    throw std::invalid_argument("sample_p_segment: count must be >= 1");
  }
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double lambda = 0.0;
    switch (kind) {
      case SegmentKind::open:
        lambda = static_cast<double>(i + 1) / static_cast<double>(count + 1);
        break;
      case SegmentKind::half_open:
        lambda = static_cast<double>(i + 1) / static_cast<double>(count);
        break;
      case SegmentKind::closed:
        lambda = (count == 1) ? 0.0
                              : static_cast<double>(i) /
                                    static_cast<double>(count - 1);
        break;
    }
    out.push_back(p_combine(x, y, lambda, p));
  }
  return out;
}

}  // namespace pconvex
