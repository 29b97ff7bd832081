#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "skewvnj/banach_mazur.hpp"
#include "skewvnj/errors.hpp"
#include "skewvnj/report.hpp"

using namespace skewvnj;

TEST(Transform2, RejectsSingular) {
  EXPECT_THROW(Transform2(Mat2{1, 2, 2, 4}), ConfigError);
  const Transform2 t = Transform2::rotation_stretch(0.3, 2.0, 1.1, true);
  EXPECT_NEAR(std::abs(t.matrix().det()), 2.0, 1e-12);
  const Vec2 v = t.inverse()(t({0.25, -3}));
  EXPECT_NEAR(v.x1, 0.25, 1e-12);
  EXPECT_NEAR(v.x2, -3, 1e-12);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(Space::lp(2), Space::lp(2), Transform2::identity()), 1.0, 1e-9);
  EXPECT_NEAR(operator_norm(Space::lp(2), Space::lp(2), Transform2(Mat2::diag(2, 3))), 3.0, 1e-9);
  EXPECT_NEAR(operator_norm(Space::lp(1), Space::lp(kInfinity), Transform2(Mat2{1, 1, 1, -1})), 1.0, 1e-9);
}

TEST(OperatorNorm, Submultiplicative) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  const Space l2 = Space::lp(2);
  SearchConfig c;
  c.grid_theta = 180;
  for (int i = 0; i < 100; ++i) {
    Mat2 a, b;
    do a = {u(rng), u(rng), u(rng), u(rng)}; while (std::abs(a.det()) < 0.05);
    do b = {u(rng), u(rng), u(rng), u(rng)}; while (std::abs(b.det()) < 0.05);
    const double ts = operator_norm(l2, l2, Transform2(a * b), c);
    EXPECT_LE(ts, operator_norm(l2, l2, Transform2(a), c) * operator_norm(l2, l2, Transform2(b), c) + 1e-9);
  }
}

TEST(BmUpperBound, Examples) {
  EXPECT_NEAR(bm_upper_bound(Space::lp(2), Space::lp(2)).upper_bound, 1.0, 1e-6);
  EXPECT_LE(bm_upper_bound(Space::lp(1), Space::lp(kInfinity)).upper_bound, 1.0 + 1e-3);
  EXPECT_NEAR(bm_upper_bound(Space::lp(1), Space::lp(2)).upper_bound, std::sqrt(2.0), 1e-2);
}

TEST(BmUpperBound, ProductMatchesTransform) {
  const Space x = Space::lp(1), y = Space::lp(3);
  const BmEstimate e = bm_upper_bound(x, y);
  const double prod = operator_norm(x, y, e.best_transform) * operator_norm(y, x, e.best_transform.inverse());
  EXPECT_NEAR(e.upper_bound, std::max(1.0, prod), 1e-10);
  EXPECT_GE(e.upper_bound, 1.0);
}

TEST(BmUpperBound, SelfDistanceIsOne) {
  for (const Space& s : standard_corpus()) EXPECT_NEAR(bm_upper_bound(s, s).upper_bound, 1.0, 1e-6) << describe(s);
}

TEST(BmUpperBound, SymmetricAndScaleInvariant) {
  const Space a = Space::lp(1), b = Space::regular_polygon(4);
  const double ab = bm_upper_bound(a, b).upper_bound;
  const double ba = bm_upper_bound(b, a).upper_bound;
  EXPECT_NEAR(ab, ba, 1e-2);
  const Space b3 = Space::linear_image(b, Mat2::diag(3.5, 3.5));
  EXPECT_NEAR(bm_upper_bound(a, b3).upper_bound, ab, 1e-6);
}

TEST(EquivalentNormRatio, Examples) {
  const auto [a, b] = equivalent_norm_ratio(Space::lp(1), Space::lp(2));
  EXPECT_NEAR(a, 1.0, 1e-9);
  EXPECT_NEAR(b, std::sqrt(2.0), 1e-9);
  const auto [c, d] = equivalent_norm_ratio(Space::lp(3), Space::lp(3));
  EXPECT_NEAR(c, 1.0, 1e-12);
  EXPECT_NEAR(d, 1.0, 1e-12);
  const auto [e, f] = equivalent_norm_ratio(Space::linear_image(Space::lp(2), Mat2::diag(2, 2)), Space::lp(2));
  EXPECT_NEAR(e, 2.0, 1e-12);
  EXPECT_NEAR(f, 2.0, 1e-12);
}

TEST(EquivalentNormRatio, SandwichOnFreshSamples) {
  const Space s1 = Space::regular_polygon(3), s2 = Space::weighted_lp(2.5, 1, 3);
  const auto [a, b] = equivalent_norm_ratio(s1, s2);
  EXPECT_LE(a, b);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 500; ++i) {
    const Vec2 v{u(rng), u(rng)};
    EXPECT_LE(a * eval_norm(s2, v), eval_norm(s1, v) * (1 + 1e-9));
    EXPECT_LE(eval_norm(s1, v), b * eval_norm(s2, v) * (1 + 1e-9));
  }
}

TEST(BmStability, Examples) {
  SearchConfig c;
  c.grid_theta = 96;
  c.grid_t = 17;
  c.refine_rounds = 12;
  c.multistart = 4;
  const auto r1 = audit_bm_stability(Space::lp(1), Space::lp(kInfinity), 1, 1, 2, c);
  EXPECT_TRUE(r1.passed) << r1.note;
  EXPECT_GE(r1.slack, -1e-3);
  const auto r2 = audit_bm_stability(Space::lp(3), Space::lp(3), 2, 1, 2, c);
  EXPECT_TRUE(r2.passed) << r2.note;
  const auto r3 = audit_bm_stability(Space::lp(2), Space::lp(1), 1, 1, 2, c);
  EXPECT_TRUE(r3.passed) << r3.note;
  EXPECT_EQ(r3.theorem_id, "bm_stability");
}
