#include <gtest/gtest.h>

#include <cmath>

#include "mdim/mdim.hpp"

using namespace mdim;

namespace {

SemigroupSystem circle(std::vector<GeneratorMap> g) { return SemigroupSystem(SpaceDescriptor::torus(1), std::move(g)); }

SweepSpec small_spec(std::vector<double> grid) {
  SweepSpec s;
  s.eps_grid = std::move(grid);
  s.n_cap = 6;
  s.point_budget = 1 << 15;
  return s;
}

EstimatorParams params() {
  EstimatorParams p;
  p.seed = 11;
  return p;
}

MeasureSide side(std::vector<Point> xs) {
  MeasureSide s;
  s.xs = std::move(xs);
  s.eps_grid = {0.1, 0.05, 0.02};
  s.range = {1, 4};
  s.budget = 1e7;
  return s;
}

}  // namespace

TEST(MdimFit, SyntheticSlopeIsExact) {
  std::vector<std::pair<double, double>> pts;
  for (double e : {0.5, 0.2, 0.1, 0.05, 0.01}) pts.emplace_back(e, 1.7 * -std::log(e) + 0.3);
  const auto m = mdim_from_points("synthetic", pts);
  EXPECT_NEAR(m.slope, 1.7, 1e-9);
  EXPECT_NEAR(m.intercept, 0.3, 1e-9);
  EXPECT_NEAR(m.residual, 0.0, 1e-9);
  EXPECT_LE(m.lower_slope, m.slope);
}

TEST(MdimFit, InvariantUnderReorderAndDuplicates) {
  const std::vector<std::pair<double, double>> a{{0.2, 1.0}, {0.1, 1.4}, {0.05, 2.1}, {0.02, 2.5}};
  auto b = a;
  std::reverse(b.begin(), b.end());
  b.push_back({0.1, 1.4});
  const auto ma = mdim_from_points("a", a);
  const auto mb = mdim_from_points("b", b);
  EXPECT_EQ(ma.eps, mb.eps);
  EXPECT_DOUBLE_EQ(ma.slope, mb.slope);
  EXPECT_DOUBLE_EQ(ma.ratio_sup, mb.ratio_sup);
  EXPECT_DOUBLE_EQ(ma.ratio_inf, mb.ratio_inf);
}

TEST(MdimFit, ConstantEntropyHasZeroSlope) {
  std::vector<std::pair<double, double>> pts;
  for (double e : {0.1, 0.05, 0.02, 0.01}) pts.emplace_back(e, std::log(2.0));
  const auto m = mdim_from_points("flat", pts);
  EXPECT_NEAR(m.slope, 0.0, 1e-12);
  EXPECT_GT(m.ratio_sup, 0.0);
  EXPECT_LE(m.lower_slope, m.slope);
}

TEST(MdimFit, LowerNeverExceedsUpper) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<double, double>> pts;
    double e = 0.5;
    for (int k = 0; k < 5; ++k) {
      e *= 0.3 + 0.5 * rng.uniform();
      pts.emplace_back(e, 3.0 * rng.uniform());
    }
    const auto m = mdim_from_points("r", pts);
    ASSERT_LE(m.lower_slope, m.slope);
    ASSERT_LE(m.ratio_inf, m.ratio_sup);
    ASSERT_GE(m.slope, 0.0);
  }
}

TEST(MdimFit, Rejections) {
  EXPECT_THROW(mdim_from_points("x", {{1.0, 0.0}, {0.5, 0.0}, {0.1, 0.0}}), Error);
  EXPECT_THROW(mdim_from_points("x", {{0.5, 0.0}, {0.1, 0.0}, {0.1, 0.0}}), Error);
  EXPECT_THROW(mdim_from_points("x", {{0.5, 0.0}, {0.2, NAN}, {0.1, 0.0}}), Error);
}

TEST(Planner, GridPlanFitsBudget) {
  const auto sys = circle({GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto plans = plan_sweep(sys, small_spec({0.2, 0.1, 0.05}));
  ASSERT_EQ(plans.size(), 3U);
  for (const auto& p : plans) {
    EXPECT_LE(p.points, std::size_t{1} << 15);
    EXPECT_GE(p.range.n_max - p.range.n_min + 1, 3U);
    EXPECT_LE(p.models(p.range.n_max)->mesh(), p.eps / 4.0);
  }
  EXPECT_THROW(plan_scale(sys, 1.5, small_spec({0.1})), Error);
}

TEST(Comparators, IdentityPassesAAndB) {
  const auto sys = circle({GeneratorMap::identity()});
  const auto plans = plan_sweep(sys, small_spec({0.2, 0.1, 0.05}));
  const auto walk = RandomWalk::symmetric(1);
  const auto a = verify_thmA(plans, walk, params());
  EXPECT_EQ(a.verdict, Verdict::Pass);
  for (const auto& c : a.curves) {
    for (const auto& e : c.entries) EXPECT_EQ(e.growth_rate, 0.0);
  }
  const auto b = verify_thmB(plans, walk, {uniform_candidate()}, params());
  EXPECT_EQ(b.verdict, Verdict::Pass);
  ASSERT_NE(b.estimate("walk"), nullptr);
  EXPECT_EQ(b.estimate("walk")->slope, 0.0);
}

TEST(Comparators, DoublingPassesA) {
  const auto sys = circle({GeneratorMap::affine(2)});
  const auto plans = plan_sweep(sys, small_spec({0.2, 0.1, 0.05}));
  ThmAOptions opt;
  opt.x_count = 5;
  const auto a = verify_thmA(plans, RandomWalk::symmetric(1), params(), opt);
  EXPECT_EQ(a.verdict, Verdict::Pass);
  for (const auto& r : a.rows) EXPECT_TRUE(r.ok) << r.check << " eps " << r.eps;
}

TEST(Comparators, FinalizeRecomputesRows) {
  ComparatorReport rep;
  rep.add("x", 0.1, -1, 1.0, 1.0, Relation::Equal, 0.0);
  rep.finalize();
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  rep.rows[0].left = 2.0;
  rep.finalize();
  EXPECT_FALSE(rep.rows[0].ok);
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  rep.rows[0].gating = false;
  rep.finalize();
  EXPECT_EQ(rep.verdict, Verdict::NoVerdict);
  EXPECT_TRUE(relation_holds(Relation::LessEq, 1.04, 1.0, 0.05));
  EXPECT_FALSE(relation_holds(Relation::GreaterEq, 0.9, 1.0, 0.05));
}

TEST(Comparators, CoverIdentityOneGenerator) {
  const auto sys = circle({GeneratorMap::affine(2)});
  const auto cover = ball_cover(sys.space(), 0.2, 0.25);
  const auto rep = verify_thmC(sys, cover, {1, 2, 3, 4}, FinModel::grid(sys.space(), 1.0 / 64.0));
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  for (const auto& r : rep.rows) {
    if (r.check == "identity") {
      EXPECT_EQ(r.left, r.right);
    }
  }
}

TEST(Comparators, CoverIdentityTwoGenerators) {
  const auto sys = circle({GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto cover = ball_cover(sys.space(), 0.2, 0.25);
  const auto rep = verify_thmC(sys, cover, {1, 2, 3}, FinModel::grid(sys.space(), 1.0 / 32.0));
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  const auto single = verify_thmC(sys, cover, {2}, FinModel::grid(sys.space(), 1.0 / 32.0));
  EXPECT_EQ(single.rows.size(), 1U);
  EXPECT_EQ(single.notes.size(), 1U);
}

TEST(Comparators, InverseClosure) {
  EXPECT_TRUE(inverse_closed(circle({GeneratorMap::rotation(0.3), GeneratorMap::rotation(0.7)})));
  EXPECT_FALSE(inverse_closed(circle({GeneratorMap::rotation(0.3)})));
  EXPECT_FALSE(inverse_closed(circle({GeneratorMap::affine(2)})));
}

TEST(Comparators, ENeedsInverseClosedTorusAction) {
  const auto sys = circle({GeneratorMap::affine(2)});
  const EntropyCurve empty{"glw", true, {}};
  const auto rep = verify_thmE(sys, uniform_grid(sys.space(), 100), side({Point(std::vector<double>{0.1})}), empty);
  EXPECT_FALSE(rep.hypothesis_established);
  EXPECT_EQ(rep.verdict, Verdict::NoVerdict);
}

TEST(Comparators, RotationGroupPassesEAndF) {
  const double a = std::sqrt(2.0) - 1.0;
  const auto sys = circle({GeneratorMap::rotation(a), GeneratorMap::rotation(1.0 - a)});
  const auto nu = uniform_grid(sys.space(), 4000);
  auto spec = small_spec({0.1, 0.05, 0.02});
  spec.n_cap = 4;
  const auto glw = glw_curve(plan_sweep(sys, spec, PlanMode::Group), params());
  for (const auto& e : glw.entries) EXPECT_EQ(e.growth_rate, 0.0);
  const std::vector<Point> xs{Point(std::vector<double>{0.1}), Point(std::vector<double>{0.6})};
  const auto e = verify_thmE(sys, nu, side(xs), glw);
  EXPECT_EQ(e.verdict, Verdict::Pass);

  const auto ghom = g_homogeneity_check(sys, nu, {0.1, 0.05}, 3, {0.5}, 1e7, sample_points(sys.space(), 20, 3));
  ASSERT_TRUE(ghom.strong);
  const auto f = verify_thmF(sys, nu, side(xs), ghom, glw);
  EXPECT_EQ(f.verdict, Verdict::Pass);

  GHomogeneityReport weak = ghom;
  weak.strong = false;
  EXPECT_EQ(verify_thmF(sys, nu, side(xs), weak, glw).verdict, Verdict::NoVerdict);
}
