#include <gtest/gtest.h>

#include <cmath>

#include "mdim/semigroup.hpp"

using namespace mdim;

namespace {

Point pt(double x) { return Point(std::vector<double>{x}); }

SemigroupSystem doubling() { return SemigroupSystem(SpaceDescriptor::torus(1), {GeneratorMap::affine(2)}); }

SemigroupSystem doubling_tripling() {
  return SemigroupSystem(SpaceDescriptor::torus(1), {GeneratorMap::affine(2), GeneratorMap::affine(3)});
}

}  // namespace

TEST(Semigroup, ApplyWordExamples) {
  const auto seg = apply_word(doubling(), Word{0, 0}, pt(0.3));
  ASSERT_EQ(seg.size(), 3U);
  EXPECT_NEAR(seg[0].coords[0], 0.3, 1e-15);
  EXPECT_NEAR(seg[1].coords[0], 0.6, 1e-15);
  EXPECT_NEAR(seg[2].coords[0], 0.2, 1e-12);

  const auto e = apply_word(doubling(), Word{}, pt(0.4));
  ASSERT_EQ(e.size(), 1U);
  EXPECT_EQ(e[0].coords[0], 0.4);

  const auto two = apply_word(doubling_tripling(), Word{0, 1}, pt(0.1));
  EXPECT_NEAR(two[1].coords[0], 0.2, 1e-15);
  EXPECT_NEAR(two[2].coords[0], 0.6, 1e-12);
}

TEST(Semigroup, WordIndexOutOfRange) {
  EXPECT_THROW(apply_word(doubling(), Word{1}, pt(0.1)), Error);
}

TEST(Semigroup, DynamicalDistanceExamples) {
  const auto sys = doubling();
  EXPECT_DOUBLE_EQ(dynamical_distance(sys, Word{}, pt(0.1), pt(0.35)), 0.25);
  EXPECT_NEAR(dynamical_distance(sys, Word{0}, pt(0.0), pt(0.2)), 0.4, 1e-15);
  EXPECT_NEAR(dynamical_distance(sys, Word{0, 0, 0}, pt(0.0), pt(0.07)), 0.44, 1e-12);
}

TEST(Semigroup, DynamicalMetricAxioms) {
  const auto sys = doubling_tripling();
  const auto pts = sample_points(sys.space(), 3000, 21);
  const Word w{0, 1, 1, 0, 1};
  for (std::size_t t = 0; t < 1000; ++t) {
    const auto& x = pts[3 * t];
    const auto& y = pts[3 * t + 1];
    const auto& z = pts[3 * t + 2];
    const double dxy = dynamical_distance(sys, w, x, y);
    EXPECT_EQ(dxy, dynamical_distance(sys, w, y, x));
    EXPECT_EQ(dynamical_distance(sys, w, x, x), 0.0);
    EXPECT_LE(dynamical_distance(sys, w, x, z), dxy + dynamical_distance(sys, w, y, z) + 1e-12);
  }
}

TEST(Semigroup, ExtendingWordNeverDecreasesDistance) {
  const auto sys = doubling_tripling();
  const auto pts = sample_points(sys.space(), 400, 4);
  const Word w = RandomWalk::symmetric(2).sample(12, 99);
  for (std::size_t t = 0; t + 1 < pts.size(); t += 2) {
    double prev = 0.0;
    for (std::size_t n = 0; n <= w.size(); ++n) {
      const Word prefix(std::vector<std::uint32_t>(w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(n)));
      const double d = dynamical_distance(sys, prefix, pts[t], pts[t + 1]);
      ASSERT_GE(d, prev);
      prev = d;
    }
  }
}

TEST(Semigroup, OneGeneratorMatchesClassicalBowenMetric) {
  const auto sys = doubling();
  const auto pts = sample_points(sys.space(), 200, 8);
  for (std::size_t t = 0; t + 1 < pts.size(); t += 2) {
    double a = pts[t].coords[0], b = pts[t + 1].coords[0];
    double dn = 0.0;
    for (int j = 0; j <= 6; ++j) {
      dn = std::max(dn, circle_distance(a, b));
      a = std::fmod(2.0 * a, 1.0);
      b = std::fmod(2.0 * b, 1.0);
    }
    EXPECT_NEAR(dynamical_distance(sys, Word(std::vector<std::uint32_t>(6, 0)), pts[t], pts[t + 1]), dn, 1e-12);
  }
}

TEST(Semigroup, GroupBallDepthZeroIsOrdinaryBall) {
  const auto sys = doubling_tripling();
  EXPECT_TRUE(group_ball_contains(sys, pt(0.1), pt(0.15), 0.1, 0));
  EXPECT_FALSE(group_ball_contains(sys, pt(0.1), pt(0.25), 0.1, 0));
}

TEST(Semigroup, GroupBallsAreNested) {
  const auto sys = doubling_tripling();
  const auto pts = sample_points(sys.space(), 600, 13);
  for (std::size_t t = 0; t + 1 < pts.size(); t += 2) {
    for (std::size_t n = 0; n < 5; ++n) {
      if (group_ball_contains(sys, pts[t], pts[t + 1], 0.3, n + 1)) {
        ASSERT_TRUE(group_ball_contains(sys, pts[t], pts[t + 1], 0.3, n));
      }
    }
  }
}

TEST(Semigroup, GroupBallMatchesEnumeratedWords) {
  const auto sys = doubling_tripling();
  const auto pts = sample_points(sys.space(), 200, 17);
  for (std::size_t t = 0; t + 1 < pts.size(); t += 2) {
    bool inside = distance(sys.space(), pts[t], pts[t + 1]) < 0.2;
    for (std::size_t j = 1; j <= 3; ++j) {
      for (std::uint64_t k = 0; k < 1U << j; ++k) {
        const auto w = word_from_index(2, j, k);
        const auto a = apply_word(sys, w, pts[t]).back();
        const auto b = apply_word(sys, w, pts[t + 1]).back();
        inside = inside && distance(sys.space(), a, b) < 0.2;
      }
    }
    EXPECT_EQ(group_ball_contains(sys, pts[t], pts[t + 1], 0.2, 3), inside);
  }
}

TEST(Semigroup, GroupBudgetIsExplicit) {
  const auto sys = doubling_tripling();
  try {
    group_ball_contains(sys, pt(0.1), pt(0.2), 0.1, 20, 1e3);
    FAIL() << "expected a budget error";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    EXPECT_EQ(e.depth(), 20);
  }
}

TEST(Semigroup, WalkWeightsAndSampling) {
  const auto eta2 = RandomWalk::symmetric(2);
  EXPECT_DOUBLE_EQ(eta2.weight(Word{0, 1, 0}), 0.125);
  EXPECT_TRUE(eta2.is_symmetric());
  const RandomWalk skewed({0.25, 0.75});
  EXPECT_DOUBLE_EQ(skewed.weight(Word{1, 1}), 0.5625);
  EXPECT_FALSE(skewed.is_symmetric());

  const auto a = skewed.sample(2000, 5);
  const auto b = skewed.sample(2000, 5);
  EXPECT_EQ(a, b);
  std::size_t ones = 0;
  for (auto l : a.letters) ones += l;
  EXPECT_NEAR(static_cast<double>(ones) / 2000.0, 0.75, 0.05);
}

TEST(Semigroup, WalkRejectsBadProbabilities) {
  EXPECT_THROW(RandomWalk({0.5, 0.4}), Error);
  EXPECT_THROW(RandomWalk({-0.5, 1.5}), Error);
  EXPECT_THROW(RandomWalk(std::vector<double>{}), Error);
}

TEST(Semigroup, ZeroWeightLettersNeverSampled) {
  const RandomWalk point({1.0, 0.0});
  for (auto l : point.sample(500, 3).letters) EXPECT_EQ(l, 0U);
}

TEST(Semigroup, SkewApplyExamples) {
  const auto sys = doubling_tripling();
  const auto [w0, x0] = skew_apply(sys, Word{0, 1}, pt(0.3), 0);
  EXPECT_EQ(w0, (Word{0, 1}));
  EXPECT_EQ(x0.coords[0], 0.3);

  const auto [w1, x1] = skew_apply(sys, Word{0, 1, 1}, pt(0.1), 1);
  EXPECT_EQ(w1, (Word{1, 1}));
  EXPECT_NEAR(x1.coords[0], 0.2, 1e-15);

  EXPECT_THROW(skew_apply(sys, Word{0}, pt(0.1), 2), Error);
}

TEST(Semigroup, WordEnumeration) {
  EXPECT_EQ(word_from_index(2, 3, 5), (Word{1, 0, 1}));
  EXPECT_EQ(word_count(3, 4), 81.0);
  EXPECT_EQ(group_word_count(2, 3), 14.0);
  EXPECT_EQ((Word{0, 1, 1}).str(), "1.2.2");
}

TEST(Semigroup, GeneratorValidation) {
  EXPECT_THROW(SemigroupSystem(SpaceDescriptor::interval(0, 1), {GeneratorMap::rotation(0.3)}), Error);
  EXPECT_THROW(SemigroupSystem(SpaceDescriptor::torus(1), {GeneratorMap::shift()}), Error);
  EXPECT_THROW(SemigroupSystem(SpaceDescriptor::torus(1), {}), Error);
  EXPECT_NO_THROW(SemigroupSystem(SpaceDescriptor::interval(0, 1), {GeneratorMap::tent(2.0), GeneratorMap::identity()}));
}

TEST(Semigroup, ShiftDropsFirstCoordinate) {
  const auto seq = SpaceDescriptor::sequence(SpaceDescriptor::interval(0, 1), 4, 0.5);
  const SemigroupSystem sys(seq, {GeneratorMap::shift()});
  const auto seg = apply_word(sys, Word{0}, Point(std::vector<double>{0.1, 0.2, 0.3, 0.4}));
  EXPECT_EQ(seg[1].coords, (std::vector<double>{0.2, 0.3, 0.4, 0.0}));
}
