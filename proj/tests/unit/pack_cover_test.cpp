#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "mdim/fin_model.hpp"
#include "mdim/pack_cover.hpp"
#include "mdim/rng.hpp"

using namespace mdim;

namespace {

FinModel lattice11() {
  std::vector<Point> p;
  for (int k = 0; k <= 10; ++k) p.emplace_back(std::vector<double>{k / 10.0});
  return FinModel(SpaceDescriptor::interval(0, 1), p);
}

/// Independent brute force over all subsets, smallest or largest feasible size.
template <class Feasible>
std::size_t brute(std::size_t m, bool maximize, Feasible&& ok) {
  std::size_t best = maximize ? 0 : m + 1;
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    const auto c = static_cast<std::size_t>(__builtin_popcount(mask));
    if (maximize ? c <= best : c >= best) continue;
    if (ok(mask)) best = c;
  }
  return best;
}

std::size_t brute_separated(const MatrixMetric& d, double eps) {
  return brute(d.size(), true, [&](std::uint32_t mask) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        if ((mask >> i & 1U) && (mask >> j & 1U) && !(d.distance(i, j) > eps)) return false;
      }
    }
    return true;
  });
}

std::size_t brute_spanning(const MatrixMetric& d, double eps) {
  return brute(d.size(), false, [&](std::uint32_t mask) {
    for (std::size_t x = 0; x < d.size(); ++x) {
      bool hit = false;
      for (std::size_t c = 0; c < d.size() && !hit; ++c) hit = (mask >> c & 1U) && d.distance(c, x) <= eps;
      if (!hit) return false;
    }
    return true;
  });
}

MatrixMetric random_metric(std::size_t m, std::uint64_t seed) {
  // points on a circle: a genuine metric with plenty of near-ties
  Rng rng(seed);
  std::vector<double> x(m);
  for (auto& v : x) v = rng.uniform();
  std::vector<std::vector<double>> d(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) d[i][j] = circle_distance(x[i], x[j]);
  }
  return MatrixMetric(d);
}

bool is_separated(const MatrixMetric& d, const std::vector<std::size_t>& s, double eps) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (!(d.distance(s[a], s[b]) > eps)) return false;
    }
  }
  return true;
}

bool spans(const MatrixMetric& d, const std::vector<std::size_t>& s, double eps) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    bool hit = false;
    for (auto c : s) hit = hit || d.distance(c, x) <= eps;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST(PackCover, SeparatedLattice11) {
  const auto model = lattice11();
  const auto sep = maximal_separated(BaseMetric(model), 0.15);
  ASSERT_EQ(sep.centers.size(), 6U);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(model.at(sep.centers[k])[0], 0.2 * static_cast<double>(k), 1e-12);
  EXPECT_EQ(exact_small_oracle(BaseMetric(model), 0.15, OracleMode::Separated).optimum, 6U);
}

TEST(PackCover, SeparatedTrivialCases) {
  const auto model = lattice11();
  EXPECT_EQ(maximal_separated(BaseMetric(model), 2.0).centers.size(), 1U);
  const FinModel twins(SpaceDescriptor::interval(0, 1), std::vector<double>{0.3, 0.3});
  EXPECT_EQ(maximal_separated(BaseMetric(twins), 1e-9).centers.size(), 1U);
  EXPECT_THROW(maximal_separated(BaseMetric(model), 0.0), Error);
}

TEST(PackCover, OwnersPointToCentersWithinEps) {
  const auto model = FinModel::grid(SpaceDescriptor::torus(2), 0.02);
  const BaseMetric metric(model);
  const auto sep = maximal_separated(metric, 0.1);
  for (std::size_t i = 0; i < model.size(); ++i) {
    ASSERT_LT(sep.owner[i], sep.centers.size());
    ASSERT_LE(metric.distance(i, sep.centers[sep.owner[i]]), 0.1);
  }
}

TEST(PackCover, SpanningLattice11) {
  const auto model = lattice11();
  const auto span = greedy_spanning(BaseMetric(model), 0.15);
  EXPECT_LE(span.size(), 4U);
  EXPECT_EQ(exact_small_oracle(BaseMetric(model), 0.15, OracleMode::Spanning).optimum, 4U);
  const FinModel one(SpaceDescriptor::interval(0, 1), std::vector<double>{0.5});
  EXPECT_EQ(greedy_spanning(BaseMetric(one), 0.1), (std::vector<std::size_t>{0}));
}

TEST(PackCover, SubcoverLattice11Balls) {
  const auto model = lattice11();
  const auto family = ball_family(BaseMetric(model), 0.15);
  EXPECT_EQ(min_subcover(family).count, 4U);
  EXPECT_EQ(exact_small_oracle(BaseMetric(model), 0.15, OracleMode::Subcover, &family).optimum, 4U);
}

TEST(PackCover, SubcoverTrivialCases) {
  SetFamily one{5, {{0, 1, 2, 3, 4}, {1, 2}}};
  EXPECT_EQ(min_subcover(one).count, 1U);
  SetFamily disjoint{6, {{0, 1}, {2}, {}, {3, 4, 5}}};
  EXPECT_EQ(min_subcover(disjoint).count, 3U);
}

TEST(PackCover, SubcoverNamesUncoveredPoint) {
  SetFamily gap{4, {{0, 1}, {3}}};
  try {
    min_subcover(gap);
    FAIL() << "expected NotACover";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACover);
    EXPECT_NE(std::string(e.what()).find("point 2"), std::string::npos);
  }
}

TEST(PackCover, SubcoverMassExamples) {
  // one set with 9 of 10 points plus singletons
  SetFamily f;
  f.universe = 10;
  f.sets.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8});
  for (std::uint32_t x = 0; x < 10; ++x) f.sets.push_back({x});
  const std::vector<double> w(10, 0.1);
  EXPECT_EQ(min_subcover_mass(f, w, 0.15).count, 1U);
  EXPECT_LE(min_subcover_mass(f, w, 0.99).count, 1U);
  EXPECT_EQ(min_subcover_mass(f, w, 0.05).count, min_subcover(f).count);
}

TEST(PackCover, SubcoverMassMonotoneAndDominated) {
  const auto model = FinModel::grid(SpaceDescriptor::torus(1), 0.01);
  const auto family = ball_family(BaseMetric(model), 0.07);
  std::vector<double> w(model.size());
  Rng rng(3);
  double total = 0.0;
  for (auto& v : w) total += v = 0.1 + rng.uniform();
  for (auto& v : w) v /= total;
  const std::size_t full = min_subcover(family).count;
  std::size_t prev = 0;
  for (double delta : {0.9, 0.5, 0.3, 0.1, 0.05, 0.01, 0.001}) {
    const auto c = min_subcover_mass(family, w, delta).count;
    EXPECT_LE(c, full);
    EXPECT_GE(c, prev) << "delta " << delta;
    prev = c;
  }
}

TEST(PackCover, SubcoverMassValidation) {
  SetFamily f{2, {{0, 1}}};
  EXPECT_THROW(min_subcover_mass(f, {0.5, 0.5}, 0.0), Error);
  EXPECT_THROW(min_subcover_mass(f, {0.5, 0.4}, 0.1), Error);
  EXPECT_THROW(min_subcover_mass(f, {1.0}, 0.1), Error);
}

TEST(PackCover, OracleSingletonAllModes) {
  const MatrixMetric one(std::vector<std::vector<double>>{{0.0}});
  SetFamily f{1, {{0}}};
  EXPECT_EQ(exact_small_oracle(one, 0.1, OracleMode::Separated).optimum, 1U);
  EXPECT_EQ(exact_small_oracle(one, 0.1, OracleMode::Spanning).optimum, 1U);
  EXPECT_EQ(exact_small_oracle(one, 0.1, OracleMode::Subcover, &f).optimum, 1U);
}

TEST(PackCover, OracleCap) {
  const auto big = random_metric(21, 1);
  try {
    exact_small_oracle(big, 0.1, OracleMode::Separated);
    FAIL() << "expected a cap error";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

TEST(PackCover, OracleAgreesWithBruteForce) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t m = 4 + s % 9;
    const auto d = random_metric(m, s + 100);
    for (double eps : {0.05, 0.12, 0.3}) {
      const auto sep = exact_small_oracle(d, eps, OracleMode::Separated);
      const auto span = exact_small_oracle(d, eps, OracleMode::Spanning);
      ASSERT_EQ(sep.optimum, brute_separated(d, eps));
      ASSERT_EQ(span.optimum, brute_spanning(d, eps));
      EXPECT_TRUE(is_separated(d, sep.witness, eps));
      EXPECT_TRUE(spans(d, span.witness, eps));
    }
  }
}

TEST(PackCover, GreedyFeasibleMaximalAndSandwiched) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t m = 3 + s % 10;
    const auto d = random_metric(m, s);
    const double eps = 0.04 + 0.01 * static_cast<double>(s % 15);
    const auto sep = maximal_separated(d, eps);
    const auto span = greedy_spanning(d, eps);
    ASSERT_TRUE(is_separated(d, sep.centers, eps));
    ASSERT_TRUE(spans(d, sep.centers, eps)) << "maximality implies spanning";
    ASSERT_TRUE(spans(d, span, eps));
    const auto opt_sep = exact_small_oracle(d, eps, OracleMode::Separated).optimum;
    const auto opt_span = exact_small_oracle(d, eps, OracleMode::Spanning).optimum;
    const auto opt_span_half = exact_small_oracle(d, eps / 2, OracleMode::Spanning).optimum;
    EXPECT_LE(sep.centers.size(), opt_sep);
    EXPECT_GE(2 * sep.centers.size(), opt_sep);
    EXPECT_LE(static_cast<double>(span.size()), 1.5 * static_cast<double>(opt_span));
    EXPECT_LE(opt_span, opt_sep);
    EXPECT_LE(opt_sep, opt_span_half);
    EXPECT_LE(span.size(), sep.centers.size());
  }
}

TEST(PackCover, SeparatedOptimumNonincreasingInEps) {
  const auto d = random_metric(12, 77);
  std::size_t prev = 13;
  for (double eps = 0.01; eps < 0.5; eps += 0.02) {
    const auto v = exact_small_oracle(d, eps, OracleMode::Separated).optimum;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(PackCover, StrictSpanningComparison) {
  // points 0 and 0.1: the closed 0.1-ball around 0 holds both, the open one does not
  const FinModel two(SpaceDescriptor::interval(0, 1), std::vector<double>{0.0, 0.1});
  EXPECT_EQ(greedy_spanning(BaseMetric(two), 0.1).size(), 1U);
  EXPECT_EQ(greedy_spanning(BaseMetric(two), 0.1 + 1e-12, Comparison::Strict).size(), 1U);
  const MatrixMetric d({{0.0, 0.1}, {0.1, 0.0}});
  EXPECT_EQ(greedy_spanning(d, 0.1, Comparison::Strict).size(), 2U);
  EXPECT_EQ(exact_small_oracle(d, 0.1, OracleMode::Spanning, nullptr, Comparison::Strict).optimum, 2U);
}

TEST(PackCover, IndexedAndBruteForceKernelsAgree) {
  // the neighbor index must not change any selection
  const auto model = FinModel(SpaceDescriptor::torus(2), sample_points(SpaceDescriptor::torus(2), 800, 2));
  const BaseMetric indexed(model);
  const CallbackMetric plain(model.size(), [&](std::size_t i, std::size_t j) { return indexed.distance(i, j); });
  for (double eps : {0.03, 0.1, 0.4}) {
    EXPECT_EQ(maximal_separated(indexed, eps).centers, maximal_separated(plain, eps).centers);
    EXPECT_EQ(greedy_spanning(indexed, eps), greedy_spanning(plain, eps));
  }
}

TEST(PackCover, InstanceRoundTrip) {
  const auto model = lattice11();
  std::ostringstream os;
  dump_instance(BaseMetric(model), 0.15, OracleMode::Spanning, os);
  std::istringstream is(os.str());
  const auto inst = read_instance(is);
  EXPECT_EQ(inst.mode, OracleMode::Spanning);
  EXPECT_EQ(inst.matrix.size(), 11U);
  EXPECT_EQ(solve_instance(inst).optimum, 4U);
}

TEST(PackCover, InstanceErrorsCarryLineNumbers) {
  std::istringstream bad("mode separated\nepsilon 0.1\nmatrix 2\n0 1\n2 0\n");
  try {
    read_instance(bad);
    FAIL() << "expected an asymmetry error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos);
  }
  std::istringstream unknown("mode separated\nfoo 1\n");
  try {
    read_instance(unknown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}
