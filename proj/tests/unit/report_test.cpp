#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mdim/report.hpp"

using namespace mdim;

namespace {

ExperimentConfig small(const std::string& extra) {
  const auto r = parse_config(
      "[space]\nkind = torus\n[generators]\na = affine 2\n[grid]\neps = 0.2 0.1 0.05\nn_cap = 5\n"
      "seed = 9\nestimators = walk glw\n[budgets]\npoint_budget = 32768\ngroup_budget = 100000\n" +
      extra);
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  return *r.config;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string all_files(const RunReport& r) {
  return curves_csv(r) + mdim_csv(r) + comparators_csv(r) + homogeneity_csv(r) + summary_text(r);
}

}  // namespace

TEST(Report, EmptyReportHasHeadersOnly) {
  const RunReport r;
  EXPECT_EQ(curves_csv(r), std::string(kCurvesHeader) + "\n");
  EXPECT_EQ(mdim_csv(r), std::string(kMdimHeader) + "\n");
  EXPECT_EQ(comparators_csv(r), std::string(kComparatorsHeader) + "\n");
  EXPECT_EQ(homogeneity_csv(r), std::string(kHomogeneityHeader) + "\n");
  EXPECT_NE(summary_text(r).find("status: OK"), std::string::npos);
}

TEST(Report, CurveRowsOnePerScaleAndDepth) {
  const auto r = run_experiment(small(""));
  ASSERT_TRUE(r.errors.empty()) << r.errors.front();
  std::size_t expected = 0;
  for (const auto& c : r.curves) {
    for (const auto& e : c.entries) expected += e.counts.size();
  }
  EXPECT_GT(expected, 0U);
  EXPECT_EQ(lines(curves_csv(r)), expected + 1);
  EXPECT_EQ(lines(mdim_csv(r)), r.estimates.size() + 1);
}

TEST(Report, SummaryNamesVerdicts) {
  RunReport r;
  ComparatorReport pass;
  pass.theorem = "A";
  pass.add("x", 0.1, 1, 1.0, 1.0, Relation::Equal, 0.0);
  pass.finalize();
  ComparatorReport fail = pass;
  fail.theorem = "B";
  fail.rows[0].left = 3.0;
  fail.finalize();
  ComparatorReport none;
  none.theorem = "E";
  none.notes.push_back("hypothesis not established");
  none.finalize();
  r.comparators = {{pass, true}, {fail, true}, {none, false}};
  const auto s = summary_text(r);
  EXPECT_NE(s.find("theorem A: PASS"), std::string::npos);
  EXPECT_NE(s.find("theorem B: FAIL"), std::string::npos);
  EXPECT_NE(s.find("theorem E: NO-VERDICT (not gating)"), std::string::npos);
  EXPECT_NE(s.find("note: hypothesis not established"), std::string::npos);
  EXPECT_NE(s.find("status: FAILED"), std::string::npos);
  EXPECT_FALSE(r.success());
  EXPECT_EQ(lines(comparators_csv(r)), 3U);
}

TEST(Report, IdenticalAcrossWorkersAndCache) {
  const auto cfg = small("[comparators]\nrun = A B C\nx_count = 4\ncover_n = 1 2 3\n");
  const auto one = all_files(run_experiment(cfg, 1, true));
  EXPECT_EQ(one, all_files(run_experiment(cfg, 2, true)));
  EXPECT_EQ(one, all_files(run_experiment(cfg, 1, false)));
}

TEST(Report, EmitWritesFiveFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "mdim_report_test";
  std::filesystem::remove_all(dir);
  RunReport r;
  emit_report(r, dir.string());
  for (const char* f : {"curves.csv", "mdim.csv", "comparators.csv", "homogeneity.csv", "summary.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritableDirectoryIsIoError) {
  const auto file = std::filesystem::temp_directory_path() / "mdim_report_blocker";
  std::ofstream(file) << "x";
  try {
    emit_report(RunReport{}, (file / "sub").string());
    FAIL() << "expected an i/o error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  std::filesystem::remove(file);
}
