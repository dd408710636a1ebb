#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "mdim/config.hpp"

using namespace mdim;

namespace {

const std::string kMinimal = "[space]\nkind = torus\n\n[generators]\nd = affine 2\n\n[grid]\nseed = 7\n";

bool mentions(const ConfigResult& r, const std::string& text) {
  for (const auto& e : r.errors) {
    if (e.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Config, MinimalConfigTakesDefaults) {
  const auto r = parse_config(kMinimal);
  ASSERT_TRUE(r.ok()) << r.errors.front();
  const auto& c = *r.config;
  EXPECT_EQ(c.dim, 1);
  EXPECT_EQ(c.eps_grid, (std::vector<double>{0.1, 0.05, 0.02}));
  EXPECT_EQ(c.tail, 3U);
  EXPECT_EQ(*c.seed, 7U);
  EXPECT_TRUE(c.probs.empty());
  EXPECT_EQ(c.make_walk().arity(), 1U);
  EXPECT_TRUE(c.comparators.empty());
}

TEST(Config, CanonicalTextReparsesToSameText) {
  const auto r = parse_config(kMinimal + "[walk]\n");
  ASSERT_TRUE(r.ok());
  const auto text = canonical_config(*r.config);
  const auto again = parse_config(text);
  ASSERT_TRUE(again.ok()) << again.errors.front();
  EXPECT_EQ(canonical_config(*again.config), text);
}

TEST(Config, IncreasingEpsGridIsNamed) {
  const auto r = parse_config(kMinimal + "eps = 0.5 0.6\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "eps grid {0.5 0.6}"));
  EXPECT_TRUE(mentions(r, "line 9"));
}

TEST(Config, ProbabilitiesMustSumToOne) {
  const auto r = parse_config(
      "[space]\nkind = torus\n[generators]\na = affine 2\nb = affine 3\n[walk]\nprobs = 0.5 0.4\n[grid]\nseed = 1\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "sum is 0.9"));
}

TEST(Config, UnknownKeyReportsLine) {
  const auto r = parse_config(kMinimal + "colour = red\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "line 9: unknown key 'colour' in [grid]"));
}

TEST(Config, SeedIsMandatory) {
  const auto r = parse_config("[space]\nkind = torus\n[generators]\nd = affine 2\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "seed is mandatory"));
}

TEST(Config, AllErrorsAreCollected) {
  const auto r = parse_config(
      "[space]\nkind = klein\n[generators]\nd = affine 2.5\n[grid]\nseed = 1\ntail = 1\n[comparators]\nrun = A Z\n");
  EXPECT_FALSE(r.ok());
  EXPECT_GE(r.errors.size(), 4U);
  EXPECT_TRUE(mentions(r, "space kind"));
  EXPECT_TRUE(mentions(r, "affine slope must be an integer"));
  EXPECT_TRUE(mentions(r, "tail must be >= 2"));
  EXPECT_TRUE(mentions(r, "unknown comparator 'Z'"));
}

TEST(Config, DuplicateKeysAndStrayLines) {
  const auto r = parse_config("seed = 1\n[grid]\nseed = 1\nseed = 2\njunk\n[space\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "line 1: key 'seed' appears before any section"));
  EXPECT_TRUE(mentions(r, "line 4: duplicate key 'seed'"));
  EXPECT_TRUE(mentions(r, "line 5: expected key = value"));
  EXPECT_TRUE(mentions(r, "line 6: malformed section header"));
}

TEST(Config, GeneratorGrammar) {
  EXPECT_NO_THROW(ExperimentConfig::parse_generator("affine 3 0.25"));
  EXPECT_NO_THROW(ExperimentConfig::parse_generator("rotation 0.1 0.2"));
  EXPECT_NO_THROW(ExperimentConfig::parse_generator("tent 2"));
  EXPECT_THROW(ExperimentConfig::parse_generator("shift 1"), Error);
  EXPECT_THROW(ExperimentConfig::parse_generator("rotation"), Error);
  EXPECT_THROW(ExperimentConfig::parse_generator("affine two"), Error);
  EXPECT_THROW(ExperimentConfig::parse_generator("twist 1"), Error);
}

TEST(Config, ShippedConfigsValidate) {
  const char* dir = std::getenv("MDIM_CONFIG_DIR");
  if (!dir) GTEST_SKIP() << "MDIM_CONFIG_DIR not set";
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".cfg") continue;
    const auto r = load_config(entry.path().string());
    EXPECT_TRUE(r.ok()) << entry.path() << ": " << (r.errors.empty() ? "" : r.errors.front());
    ++count;
  }
  EXPECT_GE(count, 6U);
}

TEST(Config, MissingFileIsAnError) {
  const auto r = load_config("/nonexistent/x.cfg");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "cannot open"));
}
