#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pconvex/certify.hpp"

using namespace pconvex;

namespace {

SearchBudget small_budget(std::uint64_t seed = 42) {
  SearchBudget b;
  b.grid_per_axis = 8;
  b.random_samples = 64;
  b.lambda_grid = 17;
  b.max_pairs = 500;
  b.seed = seed;
  return b;
}

}  // namespace

TEST_CASE("lambda schedule always injects the adversarial core") {
  SearchBudget b = small_budget();
  b.adversarial_lambdas = {0.37};
  auto lambdas = lambda_schedule(b, PExponent(0.5));
  auto has = [&](double v) {
    for (double l : lambdas)
      if (l == v) return true;
    return false;
  };
  CHECK(has(0.0));
  CHECK(has(1.0));
  CHECK(has(0.25));  // 2^(-1/p) for p = 1/2
  CHECK(has(1e-3));
  CHECK(has(1.0 - 1e-3));
  CHECK(has(0.37));
}

TEST_CASE("falsify_set: small off-origin open ball is not 1/4-convex") {
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 0.5, Boundary::open);
  Verdict v = falsify_set_pconvexity(ball, PExponent(0.25), small_budget());
  REQUIRE(v.falsified());
  const Witness& w = *v.witness;
  CHECK(w.violation > 0.0);
  CHECK(PCoefficients{w.lambda, w.mu, w.p}.valid());
  CHECK(replay_witness(w, &ball, nullptr));
}

TEST_CASE("falsify_set: intervals with a <= 0 < b pass") {
  auto iv = SetDescriptor::interval(-1.0, 2.0);
  for (double p : {0.25, 0.5, 1.0}) {
    Verdict v = falsify_set_pconvexity(iv, PExponent(p), small_budget());
    CHECK_FALSE(v.falsified());
    CHECK(v.samples_used > 0);
    CHECK_FALSE(v.strategy.empty());
  }
}

TEST_CASE("falsify_set: singleton point clouds") {
  // {(1,1)} falsifies at lambda = mu = 2^(-1/p); {(0,0)} passes.
  auto off_origin = SetDescriptor::point_cloud({Vec{1.0, 1.0}});
  Verdict v = falsify_set_pconvexity(off_origin, PExponent(0.5), small_budget());
  REQUIRE(v.falsified());
  CHECK(v.witness->lambda == doctest::Approx(0.25));
  CHECK(v.witness->mu == doctest::Approx(0.25));
  CHECK(v.witness->x == Vec{1.0, 1.0});

  auto origin = SetDescriptor::point_cloud({Vec{0.0, 0.0}});
  CHECK_FALSE(
      falsify_set_pconvexity(origin, PExponent(0.5), small_budget()).falsified());
}

TEST_CASE("falsify_set: 0-containing balls pass for all tested p") {
  auto open0 = SetDescriptor::ball(QNorm(2.0), Vec{0.2, -0.1}, 1.0, Boundary::open);
  auto closed0 = SetDescriptor::ball(QNorm::inf(), Vec{0.0, 0.0}, 1.0,
                                     Boundary::closed);
  // Off-origin balls with radius ||center||: 0 sits on the boundary; the
  // open variant excludes it, the closed one includes it.
  auto tangent = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 1.0, Boundary::open);
  auto tangent_closed =
      SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 1.0, Boundary::closed);
  for (double p : {0.25, 0.5, 1.0}) {
    CAPTURE(p);
    CHECK_FALSE(
        falsify_set_pconvexity(open0, PExponent(p), small_budget()).falsified());
    CHECK_FALSE(
        falsify_set_pconvexity(closed0, PExponent(p), small_budget()).falsified());
    CHECK_FALSE(
        falsify_set_pconvexity(tangent, PExponent(p), small_budget()).falsified());
    CHECK_FALSE(falsify_set_pconvexity(tangent_closed, PExponent(p), small_budget())
                    .falsified());
  }
}

TEST_CASE("falsifier is deterministic given the seed") {
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 0.5, Boundary::open);
  Verdict a = falsify_set_pconvexity(ball, PExponent(0.25), small_budget(7));
  Verdict b = falsify_set_pconvexity(ball, PExponent(0.25), small_budget(7));
  REQUIRE(a.falsified());
  REQUIRE(b.falsified());
  CHECK(a.witness->x == b.witness->x);
  CHECK(a.witness->y == b.witness->y);
  CHECK(a.witness->lambda == b.witness->lambda);
  CHECK(a.witness->violation == b.witness->violation);
  CHECK(a.samples_used == b.samples_used);
}

TEST_CASE("falsify_fn: square_shift is not 1/2-convex") {
  auto f = square_shift(SetDescriptor::interval(0.0, 2.0));
  Verdict v = falsify_fn_pconvexity(f, PExponent(0.5), small_budget());
  REQUIRE(v.falsified());
  CHECK(v.witness->kind == WitnessKind::jensen_violation);
  CHECK(v.witness->violation > 0.0);
  CHECK(replay_witness(*v.witness, nullptr, &f));

  // The documented witness reproduces the exact violation 5/16.
  const double gap = jensen_gap(f, Vec{0.0}, Vec{1.0}, 0.25, PExponent(0.5));
  CHECK(std::abs(gap + 5.0 / 16.0) < 1e-12);
}

TEST_CASE("falsify_fn: neg_half_quad passes at p = 1/2") {
  auto f = neg_half_quad(SetDescriptor::interval(0.0, 1.0));
  Verdict v = falsify_fn_pconvexity(f, PExponent(0.5), small_budget());
  CHECK_FALSE(v.falsified());
}

TEST_CASE("falsify_fn: linear sums pass on a box domain") {
  auto box = SetDescriptor::ball(QNorm::inf(), Vec{0.5, 0.5}, 0.5, Boundary::closed);
  auto f = linear_sum(3.0, box);
  CHECK_FALSE(falsify_fn_pconvexity(f, PExponent(0.5), small_budget()).falsified());
}

TEST_CASE("falsify_fn: domain escapes surface as domain violations") {
  auto f = user_fn(SetDescriptor::interval(0.5, 2.0),
                   [](const Vec& x) { return x[0]; }, "id");
  Verdict v = falsify_fn_pconvexity(f, PExponent(0.5), small_budget());
  REQUIRE(v.falsified());
  CHECK(v.witness->kind == WitnessKind::domain_violation);
  CHECK(replay_witness(*v.witness, &f.domain, &f));
}

TEST_CASE("construct_ball_counterexample golden instance") {
  Witness w = construct_ball_counterexample(Vec{1.0, 0.0}, 0.5, QNorm(2.0),
                                            PExponent(0.25), 1.0, 0.25);
  CHECK(w.x == Vec{0.75, 0.0});
  CHECK(w.y == w.x);
  CHECK(w.lambda == doctest::Approx(0.0625));  // 2^(-4)
  CHECK(std::abs(w.violation - 0.40625) < 1e-12);

  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 0.5, Boundary::open);
  CHECK(replay_witness(w, &ball, nullptr));
  // The combination lands at 2^(-3) z = (0.09375, 0), outside the ball.
  Vec combined = p_combine(w.x, w.y, w.lambda, PExponent(0.25));
  CHECK(combined[0] == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK_FALSE(contains(ball, combined));
}

TEST_CASE("construct_ball_counterexample validates its hypotheses") {
  CHECK_THROWS_WITH_AS(construct_ball_counterexample(Vec{1.0, 0.0}, 0.5,
                                                     QNorm(2.0), PExponent(0.6),
                                                     1.0, 0.25),
                       doctest::Contains("p >= 1/2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(construct_ball_counterexample(Vec{1.0, 0.0}, 0.5,
                                                     QNorm(2.0), PExponent(0.25),
                                                     0.5, 0.25),
                       doctest::Contains("beta"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(construct_ball_counterexample(Vec{1.0, 0.0}, 0.5,
                                                     QNorm(2.0), PExponent(0.25),
                                                     1.0, 0.75),
                       doctest::Contains("epsilon"), std::invalid_argument);
  // beta*delta/||center|| > 1/2
  CHECK_THROWS_WITH_AS(construct_ball_counterexample(Vec{1.0, 0.0}, 0.5,
                                                     QNorm(2.0), PExponent(0.25),
                                                     2.0, 0.25),
                       doctest::Contains("1/2"), std::invalid_argument);

  // beta = 2 with a farther center satisfies the hypotheses.
  Witness w = construct_ball_counterexample(Vec{2.0, 0.0}, 0.5, QNorm(2.0),
                                            PExponent(0.25), 2.0, 0.1);
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{2.0, 0.0}, 0.5, Boundary::open);
  CHECK(replay_witness(w, &ball, nullptr));
}

TEST_CASE("check_cone_equivalence") {
  auto cone = SetDescriptor::orthant_cone(2);
  auto r1 = check_cone_equivalence(cone, PExponent(0.5), small_budget());
  CHECK(r1.alpha_scaling_ok);
  CHECK(r1.additive_closed);
  CHECK(r1.cone_ok);
  CHECK_FALSE(r1.pconvexity.falsified());
  CHECK(r1.consistent);

  // [0, 1]: both sides fail together, which is consistent.
  auto iv = SetDescriptor::interval(0.0, 1.0);
  auto r2 = check_cone_equivalence(iv, PExponent(0.5), small_budget());
  CHECK(r2.alpha_scaling_ok);
  CHECK_FALSE(r2.additive_closed);
  CHECK_FALSE(r2.cone_ok);
  CHECK_FALSE(r2.pconvexity.falsified());  // [0,1] is p-convex
  CHECK(r2.consistent);

  auto scaled = SetDescriptor::scale(3.0, SetDescriptor::orthant_cone(2));
  auto r3 = check_cone_equivalence(scaled, PExponent(0.25), small_budget());
  CHECK(r3.additive_closed);
  CHECK(r3.cone_ok);
  CHECK(r3.consistent);
}

TEST_CASE("check_downgrade") {
  auto iv = SetDescriptor::interval(-1.0, 2.0);
  CHECK_FALSE(check_downgrade(iv, PExponent(1.0), PExponent(0.5), small_budget())
                  .falsified());

  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{0.0, 0.0}, 1.0, Boundary::closed);
  CHECK_FALSE(check_downgrade(ball, PExponent(1.0), PExponent(0.25), small_budget())
                  .falsified());

  auto away = SetDescriptor::interval(1.0, 2.0);
  CHECK_THROWS_AS(
      check_downgrade(away, PExponent(1.0), PExponent(0.5), small_budget()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      check_downgrade(iv, PExponent(0.5), PExponent(1.0), small_budget()),
      std::invalid_argument);
}

TEST_CASE("linear sums and norms pass on p-convex catalog domains") {
  std::vector<SetDescriptor> domains{
      SetDescriptor::interval(-1.0, 2.0),
      SetDescriptor::interval(0.0, 1.0),
      SetDescriptor::ball(QNorm(2.0), Vec{0.2, -0.1}, 1.0, Boundary::open),
  };
  for (const SetDescriptor& dom : domains) {
    for (double p : {0.25, 0.5, 1.0}) {
      CAPTURE(p);
      auto lin = linear_sum(dom.dim() == 1 ? -2.0 : 3.0, dom);
      CHECK_FALSE(
          falsify_fn_pconvexity(lin, PExponent(p), small_budget()).falsified());
      auto nrm = q_norm_fn(QNorm(2.0), dom);
      CHECK_FALSE(
          falsify_fn_pconvexity(nrm, PExponent(p), small_budget()).falsified());
    }
  }
}

TEST_CASE("closure proxy: the thin tube of a passing set passes") {
  // Tube(K, 1e-6) stands in for the closure of K.
  auto open_iv = SetDescriptor::interval(-1.0, 2.0, true, true);
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{0.2, -0.1}, 1.0, Boundary::open);
  for (double p : {0.5, 1.0}) {
    CHECK_FALSE(falsify_set_pconvexity(tube(open_iv, 1e-6, QNorm(2.0)),
                                       PExponent(p), small_budget())
                    .falsified());
    CHECK_FALSE(falsify_set_pconvexity(tube(ball, 1e-6, QNorm(2.0)),
                                       PExponent(p), small_budget())
                    .falsified());
  }
}

TEST_CASE("composites of passing sets keep passing") {
  auto iv = SetDescriptor::interval(-1.0, 2.0);
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{0.25}, 1.0, Boundary::closed);
  const PExponent p(0.5);

  auto meet = SetDescriptor::intersection({iv, ball});
  CHECK_FALSE(falsify_set_pconvexity(meet, p, small_budget()).falsified());

  auto sum = SetDescriptor::minkowski_sum(iv, ball);
  CHECK_FALSE(falsify_set_pconvexity(sum, p, small_budget()).falsified());

  auto scaled = SetDescriptor::scale(-1.5, iv);
  CHECK_FALSE(falsify_set_pconvexity(scaled, p, small_budget()).falsified());

  auto tubed = tube(ball, 0.25, QNorm(2.0));
  CHECK_FALSE(falsify_set_pconvexity(tubed, p, small_budget()).falsified());
}

TEST_CASE("check_segment_interior") {
  auto iv = SetDescriptor::interval(-1.0, 2.0);
  auto r = check_segment_interior(iv, PExponent(0.5), Vec{0.5}, Vec{2.0}, 1e-3, 24);
  CHECK(r.passed);
  CHECK(r.checked == 24);

  // y on the boundary of an open ball is reachable through the tube.
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{0.0, 0.0}, 1.0, Boundary::open);
  auto r2 = check_segment_interior(ball, PExponent(0.5), Vec{0.0, 0.0},
                                   Vec{1.0, 0.0}, 1e-3, 24);
  CHECK(r2.passed);

  CHECK_THROWS_WITH_AS(check_segment_interior(iv, PExponent(0.5), Vec{2.0},
                                              Vec{0.0}, 1e-3, 8),
                       doctest::Contains("not interior"), std::invalid_argument);
}

TEST_CASE("run_consequence_suite catalog instances") {
  auto budget = small_budget();

  auto srt = sqrt_minus_two(SetDescriptor::interval(0.0, 1.0));
  auto r1 = run_consequence_suite(srt, srt.domain, PExponent(0.5), budget);
  CHECK(r1.all_pass());
  bool saw_origin_line = false;
  for (const SuiteLine& line : r1.lines) {
    if (line.name == "f(0) nonpositive") {
      saw_origin_line = true;
      CHECK(line.status == SuiteLine::Status::pass);
    }
  }
  CHECK(saw_origin_line);

  auto nq = neg_half_quad(SetDescriptor::interval(0.0, 1.0));
  auto r2 = run_consequence_suite(nq, nq.domain, PExponent(0.5), budget);
  CHECK(r2.all_pass());

  auto lin = linear_sum(1.0, SetDescriptor::interval(0.0, 1.0));
  auto r3 = run_consequence_suite(lin, lin.domain, PExponent(0.5), budget);
  CHECK(r3.all_pass());
}

TEST_CASE("replayed witnesses reproduce their violations") {
  auto ball = SetDescriptor::ball(QNorm(2.0), Vec{1.0, 0.0}, 0.5, Boundary::open);
  Verdict v = falsify_set_pconvexity(ball, PExponent(0.25), small_budget());
  REQUIRE(v.falsified());
  Witness w = *v.witness;
  CHECK(replay_witness(w, &ball, nullptr));
  w.violation += 1e-6;  // tampered witness must not replay
  CHECK_FALSE(replay_witness(w, &ball, nullptr));
}
