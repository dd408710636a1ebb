#include <gtest/gtest.h>

#include <cmath>

#include "mdim/fin_model.hpp"
#include "mdim/pack_cover.hpp"

using namespace mdim;

TEST(FinModel, GridMeshBoundsCoveringRadius) {
  for (const auto& s : {SpaceDescriptor::interval(0, 2), SpaceDescriptor::torus(1), SpaceDescriptor::torus(2)}) {
    const auto model = FinModel::grid(s, 0.05);
    EXPECT_LE(model.mesh(), 0.05);
    EXPECT_EQ(model.kind(), ModelKind::Grid);
    for (const auto& y : sample_points(s, 500, 1)) {
      double best = 1e9;
      for (std::size_t i = 0; i < model.size(); ++i) best = std::min(best, s.raw_distance(model.at(i), y.coords.data()));
      ASSERT_LE(best, model.mesh() + 1e-12);
    }
  }
}

TEST(FinModel, RejectsMismatchedCoordinates) {
  EXPECT_THROW(FinModel(SpaceDescriptor::torus(2), std::vector<double>{0.1, 0.2, 0.3}), Error);
  EXPECT_THROW(FinModel(SpaceDescriptor::torus(1), std::vector<double>{}), Error);
}

TEST(FinModel, FingerprintTracksContent) {
  const FinModel a(SpaceDescriptor::torus(1), std::vector<double>{0.1, 0.2});
  const FinModel b(SpaceDescriptor::torus(1), std::vector<double>{0.1, 0.2});
  const FinModel c(SpaceDescriptor::torus(1), std::vector<double>{0.1, 0.3});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(FinModel, SeparationLatticeIsSeparatedAlongShift) {
  const auto seq = SpaceDescriptor::sequence(SpaceDescriptor::interval(0, 1), 6, 0.5);
  const SemigroupSystem sys(seq, {GeneratorMap::shift()});
  for (std::size_t n : {0U, 1U, 2U}) {
    const double eps = 0.1;
    const auto model = separation_lattice(seq, eps, n, 1U << 16);
    EXPECT_EQ(model.kind(), ModelKind::SeparationLattice);
    EXPECT_DOUBLE_EQ(static_cast<double>(model.size()), separation_lattice_size(seq, eps, n));
    auto table = orbit_table(sys, model, Word(std::vector<std::uint32_t>(n, 0)));
    const WordMetric metric(seq, table);
    EXPECT_EQ(maximal_separated(metric, eps).centers.size(), model.size()) << "n " << n;
  }
}

TEST(FinModel, SeparationLatticeGrowsByLevelCount) {
  // one more shift step exposes one more coordinate at full weight rho
  const auto seq = SpaceDescriptor::sequence(SpaceDescriptor::interval(0, 1), 10, 0.5);
  const double eps = 0.05;
  const double l = std::ceil(0.5 / eps - 1e-12);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_DOUBLE_EQ(separation_lattice_size(seq, eps, n + 1, 2) / separation_lattice_size(seq, eps, n, 2), l);
  }
}

TEST(FinModel, SeparationLatticeCap) {
  const auto seq = SpaceDescriptor::sequence(SpaceDescriptor::interval(0, 1), 12, 0.5);
  try {
    separation_lattice(seq, 0.01, 6, 1000);
    FAIL() << "expected a cap error";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    EXPECT_EQ(e.depth(), 6);
  }
}

TEST(FinModel, LatticeTailDepthGrowsAsEpsShrinks) {
  const auto base = SpaceDescriptor::interval(0, 1);
  EXPECT_EQ(lattice_tail_depth(base, 0.5, 0.3), 0U);
  EXPECT_EQ(lattice_tail_depth(base, 0.5, 0.2), 1U);
  std::size_t prev = 0;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    const auto k = lattice_tail_depth(base, 0.5, eps);
    EXPECT_GE(k, prev);
    prev = k;
  }
  EXPECT_EQ(lattice_tail_depth(base, 0.5, 0.0125), lattice_tail_depth(base, 0.5, 0.025) + 1);
}

TEST(FinModel, OrbitCacheIsTransparent) {
  const SemigroupSystem sys(SpaceDescriptor::torus(1), {GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto model = FinModel::grid(sys.space(), 0.01);
  OrbitCache cache;
  for (std::uint64_t k = 0; k < 16; ++k) {
    const Word w = word_from_index(2, 4, k);
    const auto plain = orbit_table(sys, model, w);
    const auto cached = orbit_table(sys, model, w, &cache);
    ASSERT_EQ(plain->data, cached->data);
    ASSERT_EQ(plain->steps, 5U);
  }
  EXPECT_GT(cache.hits(), 0U);
  // repeated lookups return the stored table
  const auto again = orbit_table(sys, model, word_from_index(2, 4, 3), &cache);
  EXPECT_EQ(again->data, orbit_table(sys, model, word_from_index(2, 4, 3))->data);
}

TEST(FinModel, OrbitCacheRespectsCapacity) {
  const SemigroupSystem sys(SpaceDescriptor::torus(1), {GeneratorMap::affine(2)});
  const auto model = FinModel::grid(sys.space(), 0.001);
  OrbitCache tiny(1024);
  const auto t = orbit_table(sys, model, Word{0, 0, 0}, &tiny);
  EXPECT_EQ(t->steps, 4U);
  EXPECT_LE(tiny.bytes_used(), 1024U);
}

TEST(FinModel, OrbitTableMatchesApplyWord) {
  const SemigroupSystem sys(SpaceDescriptor::torus(1), {GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto model = FinModel(sys.space(), sample_points(sys.space(), 50, 3));
  const Word w{1, 0, 1};
  const auto table = orbit_table(sys, model, w);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto seg = apply_word(sys, w, model.point(i));
    for (std::size_t j = 0; j < seg.size(); ++j) ASSERT_EQ(table->at(i, j)[0], seg[j].coords[0]);
  }
}

TEST(FinModel, WordMetricEqualsDynamicalDistance) {
  const SemigroupSystem sys(SpaceDescriptor::torus(1), {GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto model = FinModel(sys.space(), sample_points(sys.space(), 40, 5));
  const Word w{0, 1, 1, 0};
  const WordMetric metric(sys.space(), orbit_table(sys, model, w));
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (std::size_t j = 0; j < model.size(); ++j) {
      ASSERT_DOUBLE_EQ(metric.distance(i, j), dynamical_distance(sys, w, model.point(i), model.point(j)));
    }
  }
}

TEST(FinModel, GroupMetricMatchesGroupBall) {
  const SemigroupSystem sys(SpaceDescriptor::torus(1), {GeneratorMap::affine(2), GeneratorMap::affine(3)});
  const auto model = FinModel(sys.space(), sample_points(sys.space(), 40, 6));
  auto table = std::make_shared<const GroupImageTable>(sys, model.coords(), 3, 1e6);
  EXPECT_EQ(table->nodes(), 15U);
  const GroupMetric metric(table);
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (std::size_t j = 0; j < model.size(); ++j) {
      ASSERT_EQ(metric.within(i, j, 0.2, true), group_ball_contains(sys, model.point(i), model.point(j), 0.2, 3));
    }
  }
}
