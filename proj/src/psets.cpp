#include "pconvex/psets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "pconvex/rng.hpp"

namespace pconvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Internal seeds for samplers that have no seed parameter in their contract.
constexpr std::uint64_t kSumSearchSeed = 0x5eed0001u;
constexpr std::uint64_t kDistanceSeed = 0x5eed0002u;
constexpr std::uint64_t kProbeSeed = 0x5eed0003u;

bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

void require_dim(const SetDescriptor& s, const Vec& x, const char* where) {
  if (s.dim() != x.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

// Grid coordinate with exact endpoints.
double linspace_at(double lo, double hi, std::size_t count, std::size_t i) {
  if (count <= 1) return lo;
  if (i == 0) return lo;
  if (i + 1 == count) return hi;
  return lo + (static_cast<double>(i) * (hi - lo)) /
                  static_cast<double>(count - 1);
}

}  // namespace

QNorm::QNorm(double q) : q_(q) {
  if (!(q >= 1.0)) {
    throw std::invalid_argument("QNorm: q must satisfy q >= 1");
  }
}

double q_norm(const Vec& x, QNorm q) {
  if (q.is_inf()) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (q.value() == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (q.value() == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), q.value());
  return std::pow(s, 1.0 / q.value());
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

using detail::Node;

std::shared_ptr<const Node> make_node(detail::NodeVariant v, std::size_t dim,
                                      Box box) {
  auto n = std::make_shared<Node>();
  n->v = std::move(v);
  n->dim = dim;
  n->box = std::move(box);
  return n;
}

}  // namespace

SetDescriptor SetDescriptor::interval(double a, double b, bool a_strict,
                                      bool b_strict) {
  if (std::isnan(a) || std::isnan(b)) {
    throw std::invalid_argument("interval: NaN endpoint");
  }
  if (!(a <= b)) {
    throw std::invalid_argument("interval: requires a <= b");
  }
  double lo, hi;
  if (std::isfinite(a)) {
    lo = a;
  } else {
    lo = (std::isfinite(b) ? std::min(b, 0.0) : 0.0) - kUnboundedExtent;
  }
  if (std::isfinite(b)) {
    hi = b;
  } else {
    hi = (std::isfinite(a) ? std::max(a, 0.0) : 0.0) + kUnboundedExtent;
  }
  return SetDescriptor(make_node(detail::IntervalNode{a, b, a_strict, b_strict},
                                 1, Box{{lo}, {hi}}));
}

SetDescriptor SetDescriptor::ball(QNorm q, Vec center, double radius,
                                  Boundary boundary) {
  if (center.empty() || !all_finite(center)) {
    throw std::invalid_argument("ball: center must be finite and nonempty");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball: radius must be positive and finite");
  }
  Box box;
  box.lo.resize(center.size());
  box.hi.resize(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    box.lo[i] = center[i] - radius;
    box.hi[i] = center[i] + radius;
  }
  const std::size_t d = center.size();
  return SetDescriptor(make_node(
      detail::BallNode{q, std::move(center), radius, boundary}, d, box));
}

SetDescriptor SetDescriptor::point_cloud(std::vector<Vec> points) {
  if (points.empty()) {
    throw std::invalid_argument("point_cloud: needs at least one point");
  }
  const std::size_t d = points.front().size();
  if (d == 0) throw std::invalid_argument("point_cloud: zero-dimensional point");
  Box box{points.front(), points.front()};
  for (const Vec& p : points) {
    if (p.size() != d) {
      throw std::invalid_argument("point_cloud: inconsistent dimensions");
    }
    if (!all_finite(p)) {
      throw std::invalid_argument("point_cloud: non-finite coordinate");
    }
    for (std::size_t i = 0; i < d; ++i) {
      box.lo[i] = std::min(box.lo[i], p[i]);
      box.hi[i] = std::max(box.hi[i], p[i]);
    }
  }
  return SetDescriptor(
      make_node(detail::PointCloudNode{std::move(points)}, d, box));
}

SetDescriptor SetDescriptor::orthant_cone(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("orthant_cone: dim must be >= 1");
  Box box{Vec(dim, 0.0), Vec(dim, kUnboundedExtent)};
  return SetDescriptor(make_node(detail::OrthantConeNode{dim}, dim, box));
}

SetDescriptor SetDescriptor::oracle(std::function<bool(const Vec&)> member,
                                    std::size_t dim, Box bounding_box) {
  if (!member) throw std::invalid_argument("oracle: null membership predicate");
  if (dim == 0) throw std::invalid_argument("oracle: dim must be >= 1");
  if (bounding_box.lo.size() != dim || bounding_box.hi.size() != dim) {
    throw std::invalid_argument("oracle: bounding box dimension mismatch");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(bounding_box.lo[i]) || !std::isfinite(bounding_box.hi[i]) ||
        bounding_box.lo[i] > bounding_box.hi[i]) {
      throw std::invalid_argument("oracle: bounding box must be finite with lo <= hi");
    }
  }
  return SetDescriptor(make_node(detail::OracleNode{std::move(member), dim},
                                 dim, std::move(bounding_box)));
}

SetDescriptor SetDescriptor::intersection(std::vector<SetDescriptor> children) {
  if (children.empty()) {
    throw std::invalid_argument("intersection: needs at least one child");
  }
  const std::size_t d = children.front().dim();
  Box box = children.front().bounding_box();
  for (const SetDescriptor& c : children) {
    if (c.dim() != d) {
      throw std::invalid_argument("intersection: ambient dimension mismatch");
    }
    for (std::size_t i = 0; i < d; ++i) {
      box.lo[i] = std::max(box.lo[i], c.bounding_box().lo[i]);
      box.hi[i] = std::min(box.hi[i], c.bounding_box().hi[i]);
    }
  }
  // An empty box (lo > hi) is kept degenerate; samplers will report failure.
  for (std::size_t i = 0; i < d; ++i) {
    if (box.lo[i] > box.hi[i]) {
      const double mid = 0.5 * (box.lo[i] + box.hi[i]);
      box.lo[i] = box.hi[i] = mid;
    }
  }
  return SetDescriptor(
      make_node(detail::IntersectionNode{std::move(children)}, d, box));
}

SetDescriptor SetDescriptor::minkowski_sum(SetDescriptor left,
                                           SetDescriptor right) {
  if (left.dim() != right.dim()) {
    throw std::invalid_argument("minkowski_sum: ambient dimension mismatch");
  }
  const std::size_t d = left.dim();
  Box box;
  box.lo.resize(d);
  box.hi.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    box.lo[i] = left.bounding_box().lo[i] + right.bounding_box().lo[i];
    box.hi[i] = left.bounding_box().hi[i] + right.bounding_box().hi[i];
  }
  std::vector<Vec> left_sample;
  const bool enumerable =
      std::holds_alternative<detail::PointCloudNode>(left.node().v) ||
      std::holds_alternative<detail::PointCloudNode>(right.node().v);
  if (!enumerable) {
    std::size_t grid = 2;
    while (grid < 64) {
      const double total =
          std::pow(static_cast<double>(grid + 1), static_cast<double>(d));
      if (total > static_cast<double>(kSumWitnessBudget) / 2.0) break;
      ++grid;
    }
    left_sample = sample_members(left, grid, kSumWitnessBudget / 2,
                                 kSumSearchSeed)
                      .points;
  }
  return SetDescriptor(make_node(
      detail::MinkowskiSumNode{
          std::make_shared<const SetDescriptor>(std::move(left)),
          std::make_shared<const SetDescriptor>(std::move(right)),
          std::move(left_sample)},
      d, box));
}

SetDescriptor SetDescriptor::scale(double nu, SetDescriptor child) {
  if (!std::isfinite(nu)) throw std::invalid_argument("scale: nu must be finite");
  const std::size_t d = child.dim();
  Box box;
  box.lo.resize(d);
  box.hi.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double a = nu * child.bounding_box().lo[i];
    const double b = nu * child.bounding_box().hi[i];
    box.lo[i] = std::min(a, b);
    box.hi[i] = std::max(a, b);
  }
  return SetDescriptor(make_node(
      detail::ScaleNode{nu, std::make_shared<const SetDescriptor>(std::move(child))},
      d, box));
}

SetDescriptor SetDescriptor::tube(SetDescriptor child, double delta, QNorm q) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("tube: delta must be positive and finite");
  }
  const std::size_t d = child.dim();
  Box box = child.bounding_box();
  // The q-ball of radius delta sits inside the max-norm ball of radius delta,
  // so inflating every axis by delta bounds the tube for every q >= 1.
  for (std::size_t i = 0; i < d; ++i) {
    box.lo[i] -= delta;
    box.hi[i] += delta;
  }
  return SetDescriptor(make_node(
      detail::TubeNode{std::make_shared<const SetDescriptor>(std::move(child)),
                       delta, q},
      d, box));
}

SetDescriptor tube(const SetDescriptor& set, double delta, QNorm q) {
  return SetDescriptor::tube(set, delta, q);
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace {

bool sum_membership(const detail::MinkowskiSumNode& node, const Vec& x);

struct ContainsVisitor {
  const Vec& x;

  bool operator()(const detail::IntervalNode& n) const {
    const double v = x[0];
    if (std::isfinite(n.a)) {
      if (n.a_strict ? !(v > n.a) : !(v >= n.a)) return false;
    }
    if (std::isfinite(n.b)) {
      if (n.b_strict ? !(v < n.b) : !(v <= n.b)) return false;
    }
    return true;
  }

  bool operator()(const detail::BallNode& n) const {
    Vec d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - n.center[i];
    const double r = q_norm(d, n.q);
    return n.boundary == Boundary::open ? r < n.radius : r <= n.radius;
  }

  bool operator()(const detail::PointCloudNode& n) const {
    for (const Vec& p : n.points)
      if (p == x) return true;
    return false;
  }

  bool operator()(const detail::OrthantConeNode&) const {
    for (double v : x)
      if (!(v >= 0.0)) return false;
    return true;
  }

  bool operator()(const detail::OracleNode& n) const { return n.member(x); }

  bool operator()(const detail::IntersectionNode& n) const {
    for (const SetDescriptor& c : n.children)
      if (!contains(c, x)) return false;
    return true;
  }

  bool operator()(const detail::MinkowskiSumNode& n) const {
    return sum_membership(n, x);
  }

  bool operator()(const detail::ScaleNode& n) const {
    if (n.nu == 0.0) {
      for (double v : x)
        if (v != 0.0) return false;
      return true;
    }
    Vec scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] / n.nu;
    return contains(*n.child, scaled);
  }

  bool operator()(const detail::TubeNode& n) const {
    return distance_q(*n.child, x, n.q).value < n.delta;
  }
};

// Minkowski-sum membership: x is in L + R iff some k in L has x - k in R.
// Finite clouds are enumerated exactly; otherwise a budgeted sampled search
// over the left child decides, returning false on exhaustion.
bool sum_membership(const detail::MinkowskiSumNode& node, const Vec& x) {
  const SetDescriptor* enumerated = nullptr;
  const SetDescriptor* other = nullptr;
  if (std::holds_alternative<detail::PointCloudNode>(node.left->node().v)) {
    enumerated = node.left.get();
    other = node.right.get();
  } else if (std::holds_alternative<detail::PointCloudNode>(node.right->node().v)) {
    enumerated = node.right.get();
    other = node.left.get();
  }
  if (enumerated != nullptr) {
    const auto& cloud = std::get<detail::PointCloudNode>(enumerated->node().v);
    for (const Vec& k : cloud.points) {
      Vec rest(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) rest[i] = x[i] - k[i];
      if (contains(*other, rest)) return true;
    }
    return false;
  }

  Vec rest(x.size());
  for (const Vec& k : node.left_sample) {
    for (std::size_t i = 0; i < x.size(); ++i) rest[i] = x[i] - k[i];
    if (contains(*node.right, rest)) return true;
  }
  return false;
}

}  // namespace

bool contains(const SetDescriptor& set, const Vec& x) {
  require_dim(set, x, "contains");
  return std::visit(ContainsVisitor{x}, set.node().v);
}

namespace {

// Structural test: does distance_q take a closed-form branch for this
// descriptor under the given norm?
bool distance_is_exact(const SetDescriptor& set, QNorm q) {
  const auto& v = set.node().v;
  if (std::holds_alternative<detail::IntervalNode>(v)) return true;
  if (std::holds_alternative<detail::PointCloudNode>(v)) return true;
  if (std::holds_alternative<detail::OrthantConeNode>(v)) return true;
  if (const auto* b = std::get_if<detail::BallNode>(&v)) {
    return b->q.value() == q.value();
  }
  if (const auto* s = std::get_if<detail::ScaleNode>(&v)) {
    return distance_is_exact(*s->child, q);
  }
  if (const auto* t = std::get_if<detail::TubeNode>(&v)) {
    return t->q.value() == q.value() && distance_is_exact(*t->child, q);
  }
  return false;
}

}  // namespace

bool membership_is_exact(const SetDescriptor& set) {
  const auto& v = set.node().v;
  if (std::holds_alternative<detail::IntersectionNode>(v)) {
    for (const SetDescriptor& c :
         std::get<detail::IntersectionNode>(v).children) {
      if (!membership_is_exact(c)) return false;
    }
    return true;
  }
  if (const auto* s = std::get_if<detail::ScaleNode>(&v)) {
    return membership_is_exact(*s->child);
  }
  if (const auto* t = std::get_if<detail::TubeNode>(&v)) {
    return distance_is_exact(*t->child, t->q) && membership_is_exact(*t->child);
  }
  if (const auto* m = std::get_if<detail::MinkowskiSumNode>(&v)) {
    const bool left_cloud =
        std::holds_alternative<detail::PointCloudNode>(m->left->node().v);
    const bool right_cloud =
        std::holds_alternative<detail::PointCloudNode>(m->right->node().v);
    if (left_cloud) return membership_is_exact(*m->right);
    if (right_cloud) return membership_is_exact(*m->left);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Distance
// ---------------------------------------------------------------------------

namespace {

DistanceEstimate sampled_distance(const SetDescriptor& set, const Vec& x,
                                  QNorm q) {
  const std::size_t d = set.dim();
  const std::size_t grid = d == 1 ? 64 : (d == 2 ? 24 : 8);
  MemberSample sample = sample_members(set, grid, 2048, kDistanceSeed);
  if (sample.points.empty()) {
    throw std::runtime_error("distance_q: distance inestimable (no member points found)");
  }
  double best = kInf;
  Vec diff(d);
  for (const Vec& k : sample.points) {
    for (std::size_t i = 0; i < d; ++i) diff[i] = k[i] - x[i];
    best = std::min(best, q_norm(diff, q));
  }
  return {best, false};
}

}  // namespace

DistanceEstimate distance_q(const SetDescriptor& set, const Vec& x, QNorm q) {
  require_dim(set, x, "distance_q");
  const auto& v = set.node().v;

  if (const auto* n = std::get_if<detail::IntervalNode>(&v)) {
    const double t = x[0];
    // The infimum over an open interval equals that over its closure.
    if ((!std::isfinite(n->a) || t >= n->a) &&
        (!std::isfinite(n->b) || t <= n->b)) {
      return {0.0, true};
    }
    double best = kInf;
    if (std::isfinite(n->a)) best = std::min(best, std::abs(t - n->a));
    if (std::isfinite(n->b)) best = std::min(best, std::abs(t - n->b));
    return {best, true};
  }

  if (const auto* n = std::get_if<detail::BallNode>(&v)) {
    // Closed form only when the ball's own norm matches the query norm.
    if (n->q.value() == q.value()) {
      Vec d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - n->center[i];
      return {std::max(0.0, q_norm(d, q) - n->radius), true};
    }
    return sampled_distance(set, x, q);
  }

  if (const auto* n = std::get_if<detail::PointCloudNode>(&v)) {
    double best = kInf;
    Vec diff(x.size());
    for (const Vec& p : n->points) {
      for (std::size_t i = 0; i < x.size(); ++i) diff[i] = p[i] - x[i];
      best = std::min(best, q_norm(diff, q));
    }
    return {best, true};
  }

  if (std::holds_alternative<detail::OrthantConeNode>(v)) {
    // Coordinate clipping attains the infimum for every q >= 1.
    Vec neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = std::min(x[i], 0.0);
    return {q_norm(neg, q), true};
  }

  if (const auto* n = std::get_if<detail::ScaleNode>(&v)) {
    if (n->nu == 0.0) return {q_norm(x, q), true};
    Vec scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] / n->nu;
    DistanceEstimate inner = distance_q(*n->child, scaled, q);
    return {std::abs(n->nu) * inner.value, inner.exact};
  }

  if (const auto* n = std::get_if<detail::TubeNode>(&v)) {
    if (n->q.value() == q.value()) {
      DistanceEstimate inner = distance_q(*n->child, x, q);
      if (inner.exact) return {std::max(0.0, inner.value - n->delta), true};
    }
    return sampled_distance(set, x, q);
  }

  return sampled_distance(set, x, q);
}

// ---------------------------------------------------------------------------
// Interiority probe
// ---------------------------------------------------------------------------

bool is_interior_point(const SetDescriptor& set, const Vec& x,
                       double probe_radius, std::size_t probe_count) {
  require_dim(set, x, "is_interior_point");
  if (!(probe_radius > 0.0)) {
    throw std::invalid_argument("is_interior_point: probe_radius must be > 0");
  }
  if (probe_count < 1) {
    throw std::invalid_argument("is_interior_point: probe_count must be >= 1");
  }
  if (!contains(set, x)) return false;

  const std::size_t d = x.size();
  SplitMix64 rng(mix_seed(kProbeSeed, probe_count));
  Vec probe(d);
  for (std::size_t k = 0; k < probe_count; ++k) {
    if (k < 2 * d) {
      // Axis probes on the sphere first; they catch flat boundaries exactly.
      probe = x;
      probe[k / 2] += (k % 2 == 0) ? probe_radius : -probe_radius;
    } else {
      Vec dir(d);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        dir[i] = rng.normal();
        norm2 += dir[i] * dir[i];
      }
      double norm = std::sqrt(norm2);
      if (norm == 0.0) {
        dir[0] = 1.0;
        norm = 1.0;
      }
      // Alternate on-sphere and in-ball points.
      double r = probe_radius;
      if (k % 2 == 1) {
        r *= std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
      }
      for (std::size_t i = 0; i < d; ++i) probe[i] = x[i] + r * dir[i] / norm;
    }
    if (!contains(set, probe)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Member sampling
// ---------------------------------------------------------------------------

MemberSample sample_members(const SetDescriptor& set, std::size_t grid_per_axis,
                            std::size_t random_samples, std::uint64_t seed) {
  const std::size_t d = set.dim();
  const Box& box = set.bounding_box();
  MemberSample out;
  std::set<Vec> seen;

  auto accept = [&](const Vec& p) {
    ++out.hits;
    if (seen.insert(p).second) out.points.push_back(p);
  };

  // Point clouds enumerate exactly; grid/random sampling would miss interior
  // points that sit off the bounding-box lattice.
  if (const auto* cloud = std::get_if<detail::PointCloudNode>(&set.node().v)) {
    for (const Vec& p : cloud->points) accept(p);
  }

  // Grid phase: lexicographic multi-index sweep, capped for high dimensions.
  std::size_t g = std::max<std::size_t>(grid_per_axis, 1);
  while (g > 1 && std::pow(static_cast<double>(g), static_cast<double>(d)) >
                      100000.0) {
    --g;
  }
  std::vector<std::size_t> idx(d, 0);
  const std::size_t total = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(g), static_cast<double>(d))));
  Vec p(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = rem % g;
      rem /= g;
    }
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = linspace_at(box.lo[i], box.hi[i], g, idx[i]);
    }
    if (contains(set, p)) accept(p);
  }

  // Random phase.
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < random_samples; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = rng.uniform(box.lo[i], box.hi[i]);
    }
    if (contains(set, p)) accept(p);
  }

  return out;
}

}  // namespace pconvex
