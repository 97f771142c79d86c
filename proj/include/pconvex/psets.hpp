#pragma once
// Composable descriptors of subsets of R^n with membership and q-distance
// oracles, plus the set algebra the certification checks rely on:
// intersection, Minkowski sum, scaling and tubular neighborhoods.
//
// Descriptors are immutable after construction and cheap to copy (shared
// nodes). Every descriptor carries a finite axis-aligned bounding box used
// by the samplers; for unbounded primitives the box truncates the set at a
// fixed extent.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include "pconvex/pcore.hpp"

namespace pconvex {

// q in [1, +inf]; +inf selects the max norm.
class QNorm {
 public:
  explicit QNorm(double q);
  static QNorm inf() { return QNorm(std::numeric_limits<double>::infinity()); }
  double value() const { return q_; }
  bool is_inf() const { return q_ == std::numeric_limits<double>::infinity(); }

 private:
  double q_;
};

double q_norm(const Vec& x, QNorm q);

struct Box {
  Vec lo;
  Vec hi;
};

enum class Boundary { open, closed };

class SetDescriptor;

namespace detail {

// 1-D interval; +-infinity marks an unbounded side. Strict flags select the
// eight shapes (a,b), (a,b], [a,b), [a,b], (a,inf), [a,inf), (-inf,b), (-inf,b].
struct IntervalNode {
  double a;
  double b;
  bool a_strict;
  bool b_strict;
};

struct BallNode {
  QNorm q;
  Vec center;
  double radius;
  Boundary boundary;
};

struct PointCloudNode {
  std::vector<Vec> points;
};

struct OrthantConeNode {
  std::size_t dim;
};

struct OracleNode {
  std::function<bool(const Vec&)> member;  // must be pure
  std::size_t dim;
};

struct IntersectionNode {
  std::vector<SetDescriptor> children;
};

struct MinkowskiSumNode {
  std::shared_ptr<const SetDescriptor> left;
  std::shared_ptr<const SetDescriptor> right;
  // Witness-search sample of the left child, fixed at construction so that
  // membership queries stay pure and do not re-sample.
  std::vector<Vec> left_sample;
};

struct ScaleNode {
  double nu;
  std::shared_ptr<const SetDescriptor> child;
};

struct TubeNode {
  std::shared_ptr<const SetDescriptor> child;
  double delta;
  QNorm q;
};

using NodeVariant =
    std::variant<IntervalNode, BallNode, PointCloudNode, OrthantConeNode,
                 OracleNode, IntersectionNode, MinkowskiSumNode, ScaleNode,
                 TubeNode>;

struct Node {
  NodeVariant v;
  std::size_t dim;
  Box box;
};

}  // namespace detail

class SetDescriptor {
 public:
  static SetDescriptor interval(double a, double b, bool a_strict = false,
                                bool b_strict = false);
  static SetDescriptor ball(QNorm q, Vec center, double radius,
                            Boundary boundary);
  static SetDescriptor point_cloud(std::vector<Vec> points);
  static SetDescriptor orthant_cone(std::size_t dim);
  static SetDescriptor oracle(std::function<bool(const Vec&)> member,
                              std::size_t dim, Box bounding_box);
  static SetDescriptor intersection(std::vector<SetDescriptor> children);
  static SetDescriptor minkowski_sum(SetDescriptor left, SetDescriptor right);
  static SetDescriptor scale(double nu, SetDescriptor child);
  static SetDescriptor tube(SetDescriptor child, double delta, QNorm q);

  std::size_t dim() const { return node_->dim; }
  const Box& bounding_box() const { return node_->box; }
  const detail::Node& node() const { return *node_; }

 private:
  explicit SetDescriptor(std::shared_ptr<const detail::Node> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

// Sampling extent used to truncate unbounded primitives' bounding boxes.
inline constexpr double kUnboundedExtent = 16.0;

// Witness-search budget for Minkowski-sum membership over non-finite children.
inline constexpr std::size_t kSumWitnessBudget = 10000;

// Membership. Exact for primitives (strict comparisons on open boundaries,
// non-strict on closed ones); Minkowski sums over non-finite children fall
// back to a budgeted sampled witness search that returns false on exhaustion.
bool contains(const SetDescriptor& set, const Vec& x);

// True when every membership decision in the descriptor tree is exact, i.e.
// no node needs a sampled witness search or a sampled distance estimate.
bool membership_is_exact(const SetDescriptor& set);

// Distance d_q(x, K). `exact` marks the closed-form branch (Interval, Ball
// with matching norm, PointCloud, OrthantCone, and Scale/Tube over those);
// otherwise the value is a sampled upper bound on the true distance.
struct DistanceEstimate {
  double value;
  bool exact;
};

DistanceEstimate distance_q(const SetDescriptor& set, const Vec& x, QNorm q);

// Tubular neighborhood U(K, delta) = K + open q-ball of radius delta;
// membership is d_q(x, K) < delta.
SetDescriptor tube(const SetDescriptor& set, double delta, QNorm q);

// One-sided interiority probe: true iff x is a member and all probe_count
// points drawn on/in the Euclidean ball of radius probe_radius around x are
// members too. The first 2n probes are the axis points x +- r*e_i.
bool is_interior_point(const SetDescriptor& set, const Vec& x,
                       double probe_radius, std::size_t probe_count = 64);

// Deterministic member sampling: exact enumeration for point clouds, then a
// per-axis grid over the bounding box, then seeded random points, all
// rejection-filtered by membership. `hits` counts accepted samples with
// multiplicity; `points` is deduplicated in discovery order.
struct MemberSample {
  std::vector<Vec> points;
  std::size_t hits = 0;
};

MemberSample sample_members(const SetDescriptor& set, std::size_t grid_per_axis,
                            std::size_t random_samples, std::uint64_t seed);

}  // namespace pconvex
