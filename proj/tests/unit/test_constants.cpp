#include <gtest/gtest.h>

#include <json.hpp>

#include <fstream>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "skewvnj/constants.hpp"
#include "skewvnj/errors.hpp"
#include "skewvnj/report.hpp"

using namespace skewvnj;

namespace {

constexpr double kPi = std::numbers::pi;

SearchConfig fast() {
  SearchConfig c;
  c.grid_theta = 96;
  c.grid_t = 17;
  c.refine_rounds = 12;
  c.multistart = 4;
  return c;
}

double cp(const Space& s, double l, double m, double p, const SearchConfig& c = {}) {
  return estimate_constant(s, Query::make(ConstantKind::CpMinusInf, l, m, p), c).value;
}

}  // namespace

TEST(Ratios, CpMinusInfExamples) {
  for (double p : {1.0, 1.5, 2.0, 3.0})
    EXPECT_NEAR(ratio_cp_minus_inf(1, 1, p, {1, 0}, {0, 1}, Space::lp(1)), 2.0, 1e-12);
  EXPECT_NEAR(ratio_cp_minus_inf(1, 1, 2, {1, 0}, {0, 1}, Space::lp(2)), 1.0, 1e-12);
  for (const Space& s : standard_corpus()) {
    const Vec2 y = sphere_point(s, 0.7);
    EXPECT_NEAR(ratio_cp_minus_inf(2, 1, 2, {0, 0}, y, s), 0.4, 1e-12);
  }
  EXPECT_THROW(ratio_cp_minus_inf(1, 1, 2, {0, 0}, {0, 0}, Space::lp(2)), DomainError);
}

TEST(Ratios, CnjExamples) {
  EXPECT_NEAR(ratio_cnj_p(1, 1, 2, {1, 0}, {0, 1}, Space::lp(2)), 1.0, 1e-12);
  EXPECT_NEAR(ratio_cnj_p(1, 1, 2, {1, 0}, {0, 1}, Space::lp(1)), 2.0, 1e-12);
  EXPECT_THROW(ratio_cnj_p(1, 1, 2, {0, 0}, {0, 0}, Space::lp(1)), DomainError);
}

TEST(Ratios, MinNeverExceedsMean) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2), w(0.2, 5), pp(1, 4);
  for (const Space& s : standard_corpus()) {
    for (int i = 0; i < 200; ++i) {
      const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
      const double l = w(rng), m = w(rng), p = pp(rng);
      EXPECT_LE(ratio_cp_minus_inf(l, m, p, x, y, s), ratio_cnj_p(l, m, p, x, y, s));
    }
  }
}

TEST(Ratios, JamesExamples) {
  EXPECT_NEAR(ratio_james({1, 0}, {0, 1}, Space::lp(2)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ratio_james({1, 0}, {0, 1}, Space::lp(1)), 2.0, 1e-12);
  const Space oct = Space::regular_polygon(4);
  const Vec2 x = sphere_point(oct, 1.1);
  EXPECT_EQ(ratio_james(x, x, oct), 0.0);
  EXPECT_THROW(ratio_james({2, 0}, {0, 1}, Space::lp(2)), DomainError);
}

TEST(Ratios, LyjExamples) {
  EXPECT_NEAR(ratio_lyj(1, 1, {1, 0}, {0, 1}, Space::lp(2)), 1.0, 1e-12);
  EXPECT_NEAR(ratio_lyj(1, 1, {1, 0}, {0, 1}, Space::lp(1)), 2.0, 1e-12);
  EXPECT_NEAR(ratio_lyj(1, 1, {0.3, 0.4}, {0, 0}, Space::lp(2)), 1.0, 1e-12);
  EXPECT_THROW(ratio_lyj(1, 1, {0, 0}, {0, 0}, Space::lp(2)), DomainError);
}

TEST(Ratios, ScaleInvarianceAndRotationSwap) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), w(0.2, 5), pp(1, 4), c(0.01, 100);
  for (const Space& s : standard_corpus()) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
      const double l = w(rng), m = w(rng), p = pp(rng), k = c(rng);
      const double r = ratio_cp_minus_inf(l, m, p, x, y, s);
      EXPECT_NEAR(ratio_cp_minus_inf(l, m, p, x * k, y * k, s), r, 1e-10 * std::max(1.0, r));
      EXPECT_NEAR(ratio_cp_minus_inf(l, m, p, y, x * -1.0, s), r, 1e-10 * std::max(1.0, r));
    }
  }
}

TEST(PowerMean, HoldsOnSeeds) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w(0.01, 100), pp(1, 12);
  for (int i = 0; i < 1000; ++i) {
    const double l = w(rng), m = w(rng), p = pp(rng);
    const double s = std::pow(l, p) + std::pow(m, p);
    const double mid = std::pow(l + m, p);
    EXPECT_LE(s, mid * (1 + 1e-12));
    EXPECT_LE(mid, std::pow(2.0, p - 1) * s * (1 + 1e-12));
  }
}

TEST(Query, MakeFixesParameters) {
  EXPECT_EQ(Query::make(ConstantKind::Cnj, 3, 4, 5), (Query{ConstantKind::Cnj, 1, 1, 2}));
  EXPECT_EQ(Query::make(ConstantKind::CMinusInf, 3, 4, 5), (Query{ConstantKind::CMinusInf, 1, 1, 2}));
  EXPECT_EQ(Query::make(ConstantKind::James, 3, 4, 5), (Query{ConstantKind::James, 1, 1, 1}));
  EXPECT_EQ(Query::make(ConstantKind::CpMinusInfZuo, 3, 4, 5),
            (Query{ConstantKind::CpMinusInfZuo, 1, 1, 5}));
  EXPECT_THROW(Query::make(ConstantKind::CpMinusInf, 0, 1, 2), DomainError);
  EXPECT_THROW(Query::make(ConstantKind::CpMinusInf, 1, -1, 2), DomainError);
  EXPECT_THROW(Query::make(ConstantKind::CpMinusInf, 1, 1, 0.5), DomainError);
}

TEST(Query, KindNames) {
  for (auto k : {ConstantKind::CpMinusInf, ConstantKind::CnjP, ConstantKind::Cnj, ConstantKind::James,
                 ConstantKind::Lyj, ConstantKind::CMinusInf, ConstantKind::CpMinusInfZuo})
    EXPECT_EQ(parse_constant_kind(to_string(k)), k);
  EXPECT_EQ(parse_constant_kind("cp-minus-inf"), ConstantKind::CpMinusInf);
  EXPECT_THROW(parse_constant_kind("nope"), ParseError);
}

TEST(Estimate, WorkedValues) {
  EXPECT_NEAR(cp(Space::lp(1), 1, 1, 2), 2.0, 1e-3);
  EXPECT_NEAR(cp(Space::lp(kInfinity), 1, 1, 3), 2.0, 1e-3);
  EXPECT_NEAR(cp(Space::lp(2), 1, 1, 2), 1.0, 1e-3);
  const auto j = estimate_constant(Space::lp(2), Query::make(ConstantKind::James));
  EXPECT_NEAR(j.value, std::sqrt(2.0), 1e-3);
  EXPECT_DOUBLE_EQ(j.witness.t, 1.0);
}

TEST(Estimate, PEqualsOneUniversality) {
  for (const Space& s : standard_corpus()) EXPECT_NEAR(cp(s, 1, 1, 1, fast()), 2.0, 1e-3) << describe(s);
}

TEST(Estimate, CompanionConstantsOnHilbertAndL1) {
  const auto c = fast();
  auto est = [&](const Space& s, ConstantKind k) { return estimate_constant(s, Query::make(k), c).value; };
  EXPECT_NEAR(est(Space::lp(2), ConstantKind::Cnj), 1.0, 1e-3);
  EXPECT_NEAR(est(Space::lp(1), ConstantKind::Cnj), 2.0, 1e-3);
  EXPECT_NEAR(est(Space::lp(2), ConstantKind::Lyj), 1.0, 1e-3);
  EXPECT_NEAR(est(Space::lp(2), ConstantKind::CMinusInf), 0.5, 5e-4);
  EXPECT_NEAR(est(Space::lp(1), ConstantKind::CMinusInf), 1.0, 5e-4);
  EXPECT_NEAR(est(Space::lp(1), ConstantKind::James), 2.0, 1e-3);
}

TEST(Estimate, WitnessReproducesValue) {
  const auto c = fast();
  for (const Space& s : standard_corpus()) {
    for (auto q : {Query::make(ConstantKind::CpMinusInf, 2, 0.7, 2.5), Query::make(ConstantKind::CnjP, 1, 3, 1.2),
                   Query::make(ConstantKind::James), Query::make(ConstantKind::Lyj, 0.4, 1)}) {
      const Estimate e = estimate_constant(s, q, c);
      EXPECT_NEAR(objective_at(s, q, e.witness), e.value, 1e-12) << describe(s);
      EXPECT_GT(e.samples_evaluated, 0);
    }
  }
}

TEST(Estimate, MonotoneInRefineRounds) {
  const Space s = Space::lp(3);
  SearchConfig c = fast();
  double prev = -1;
  for (int r : {0, 1, 3, 8, 20}) {
    c.refine_rounds = r;
    const double v = cp(s, 2, 1, 2.5, c);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Estimate, MonotoneOnNestedGrids) {
  const Space s = Space::weighted_lp(1.7, 1, 2.5);
  SearchConfig c = fast();
  c.refine_rounds = 0;
  const double coarse = cp(s, 1.3, 0.6, 2.2, c);
  const double fine = cp(s, 1.3, 0.6, 2.2, c.doubled());
  EXPECT_GE(fine, coarse);
}

TEST(Estimate, DeterministicAcrossThreadCounts) {
  SearchConfig a = fast(), b = fast();
  a.threads = 1;
  b.threads = 5;
  const Space s = Space::regular_polygon(3);
  const auto q = Query::make(ConstantKind::CpMinusInf, 1.5, 1, 1.8);
  const Estimate ea = estimate_constant(s, q, a), eb = estimate_constant(s, q, b);
  EXPECT_EQ(ea.value, eb.value);
  EXPECT_EQ(ea.witness.theta_x, eb.witness.theta_x);
  EXPECT_EQ(ea.witness.theta_y, eb.witness.theta_y);
  EXPECT_EQ(ea.witness.t, eb.witness.t);
  EXPECT_EQ(ea.samples_evaluated, eb.samples_evaluated);
}

TEST(Estimate, StaysInsideUniversalBounds) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> w(0.2, 5), pp(1, 4);
  const auto corpus = standard_corpus();
  for (int i = 0; i < 16; ++i) {
    const double l = w(rng), m = w(rng), p = pp(rng);
    const Space& s = corpus[i % corpus.size()];
    const double v = cp(s, l, m, p, fast());
    EXPECT_GE(v, cp_lower_bound(l, m, p) - 1e-9);
    EXPECT_LE(v, 2.0 + 1e-12);
  }
}

TEST(Estimate, InvalidConfigRejected) {
  SearchConfig c;
  c.grid_theta = 4;
  EXPECT_THROW(estimate_constant(Space::lp(2), Query::make(ConstantKind::CpMinusInf), c), ConfigError);
}

TEST(SharedSamples, SingletonAndGrid) {
  const Witness w{0, kPi / 2, 1};
  for (const Space& s : standard_corpus()) {
    const auto r = estimate_on_samples(s, 2, 1, 3, std::span<const Witness>(&w, 1));
    EXPECT_LE(r.minus_inf.value, r.nj.value);
  }
  EXPECT_THROW(estimate_on_samples(Space::lp(2), 1, 1, 2, {}), ConfigError);
  const auto l1 = estimate_on_grid(Space::lp(1), 1, 1, 2, SearchConfig{});
  EXPECT_NEAR(l1.minus_inf.value, 2.0, 1e-3);
  EXPECT_NEAR(l1.nj.value, 2.0, 1e-3);
  const auto l2 = estimate_on_grid(Space::lp(2), 1, 1, 2, SearchConfig{});
  EXPECT_NEAR(l2.minus_inf.value, 1.0, 1e-3);
  EXPECT_NEAR(l2.nj.value, 1.0, 1e-3);
}

TEST(DerivedSpecializations, Values) {
  const auto c = fast();
  EXPECT_NEAR(derived_specializations(Space::lp(2), c).at("C_MINUS_INF"), 0.5, 5e-4);
  EXPECT_NEAR(derived_specializations(Space::lp(1), c).at("C_MINUS_INF"), 1.0, 5e-4);
  for (double p : {1.0, 2.5}) {
    const Space s = Space::regular_polygon(4);
    const auto m = derived_specializations(s, c, p);
    EXPECT_EQ(m.at("CP_MINUS_INF_ZUO"), cp(s, 1, 1, p, c));
    const auto zuo = estimate_constant(s, Query::make(ConstantKind::CpMinusInfZuo, 1, 1, p), c);
    EXPECT_EQ(zuo.value, cp(s, 1, 1, p, c));
  }
}

TEST(Bounds, Envelope) {
  EXPECT_NEAR(cp_lower_bound(2, 1, 2), 0.4, 1e-15);
  EXPECT_NEAR(cp_lower_bound(1, 1, 1), 2.0, 1e-15);
  const auto [lo, hi] = universal_bounds(Query::make(ConstantKind::CpMinusInf, 2, 1, 2));
  EXPECT_NEAR(lo, 0.4, 1e-15);
  EXPECT_EQ(hi, 2.0);
}

TEST(EstimateCache, ReturnsSameEstimate) {
  EstimateCache cache;
  const auto q = Query::make(ConstantKind::CpMinusInf, 1, 2, 2);
  const Estimate a = cache.get(Space::lp(3), q, fast());
  const Estimate b = cache.get(Space::lp(3), q, fast());
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.value, estimate_constant(Space::lp(3), q, fast()).value);
}

TEST(Oracle, EngineMatchesDenseGrid) {
  std::ifstream f(SKEWVNJ_FIXTURE);
  ASSERT_TRUE(f) << SKEWVNJ_FIXTURE;
  const auto o = nlohmann::json::parse(f);
  auto at = [&](const char* k) { return o.at(k).get<double>(); };
  // The engine refines beyond the oracle's grid, so it may only exceed it slightly.
  EXPECT_NEAR(cp(Space::lp(2), 1, 1, 2), at("cp_minus_inf_l2_1_1_2"), 1e-3);
  EXPECT_NEAR(cp(Space::lp(1), 1, 1, 2), at("cp_minus_inf_l1_1_1_2"), 1e-3);
  EXPECT_NEAR(cp(Space::lp(kInfinity), 1, 1, 3), at("cp_minus_inf_linf_1_1_3"), 1e-3);
  EXPECT_NEAR(cp(Space::lp(2), 1, 1, 1.5), at("cp_minus_inf_l2_1_1_1p5"), 1e-3);
  EXPECT_NEAR(cp(Space::lp(2), 2, 1, 2), at("cp_minus_inf_l2_2_1_2"), 1e-3);
  EXPECT_NEAR(cp(Space::regular_polygon(4), 1, 1, 2), at("cp_minus_inf_oct_1_1_2"), 1e-3);
  EXPECT_NEAR(estimate_constant(Space::lp(1), Query::make(ConstantKind::James)).value, at("james_l1"), 1e-3);
  EXPECT_NEAR(estimate_constant(Space::lp(kInfinity), Query::make(ConstantKind::James)).value, at("james_linf"), 1e-3);
  EXPECT_NEAR(estimate_constant(Space::regular_polygon(4), Query::make(ConstantKind::James)).value, at("james_oct"), 1e-3);
}

TEST(Estimate, WitnessRescalesToNormSumTwo) {
  // The t-form witness (x, t y) scaled so that ||x||^p + ||t y||^p = 2 keeps its ratio.
  for (const Space& s : standard_corpus()) {
    const double l = 1.7, m = 0.6, p = 2.3;
    const Estimate e = estimate_constant(s, Query::make(ConstantKind::CpMinusInf, l, m, p), fast());
    const Vec2 x = sphere_point(s, e.witness.theta_x);
    const Vec2 y = sphere_point(s, e.witness.theta_y) * e.witness.t;
    const double k = std::pow(2.0 / (1.0 + std::pow(e.witness.t, p)), 1.0 / p);
    const Vec2 xs = x * k, ys = y * k;
    EXPECT_NEAR(std::pow(eval_norm(s, xs), p) + std::pow(eval_norm(s, ys), p), 2.0, 1e-12);
    EXPECT_NEAR(ratio_cp_minus_inf(l, m, p, xs, ys, s), e.value, 1e-12);
  }
}
