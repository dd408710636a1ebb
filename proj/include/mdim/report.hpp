#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/run.hpp"

namespace mdim {

inline constexpr const char* kCurvesHeader = "estimator,epsilon,n,log_count,growth_rate,residual,stderr";
inline constexpr const char* kMdimHeader =
    "estimator,slope,lower_slope,ratio_sup,ratio_inf,raw_slope,intercept,residual,grid_points";
inline constexpr const char* kComparatorsHeader =
    "theorem,check,epsilon,n,left,right,gap,relation,tolerance,gating,ok";
inline constexpr const char* kHomogeneityHeader = "kind,epsilon,ratio,value,doubling,zero_mass";

namespace detail {

/// %.9g; integral values print without exponent noise.
inline std::string num(double v) { return fmt(v); }

inline void curve_rows(std::ostream& o, const EntropyCurve& c, const std::string& prefix) {
  for (const auto& e : c.entries) {
    for (const auto& p : e.counts) {
      o << prefix << c.estimator << ',' << num(e.eps) << ',' << p.n << ',' << num(p.log_count()) << ','
        << num(e.growth_rate) << ',' << num(e.residual) << ',' << num(p.stderr_) << '\n';
    }
  }
}

inline void mdim_row(std::ostream& o, const MdimEstimate& m, const std::string& prefix) {
  o << prefix << m.estimator << ',' << num(m.slope) << ',' << num(m.lower_slope) << ',' << num(m.ratio_sup) << ','
    << num(m.ratio_inf) << ',' << num(m.raw_slope) << ',' << num(m.intercept) << ',' << num(m.residual) << ','
    << m.eps.size() << '\n';
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

}  // namespace detail

inline std::string curves_csv(const RunReport& r) {
  std::ostringstream o;
  o << kCurvesHeader << '\n';
  for (const auto& c : r.curves) detail::curve_rows(o, c, "");
  for (const auto& c : r.comparators) {
    for (const auto& curve : c.report.curves) detail::curve_rows(o, curve, c.report.theorem + "/");
  }
  return o.str();
}

inline std::string mdim_csv(const RunReport& r) {
  std::ostringstream o;
  o << kMdimHeader << '\n';
  for (const auto& m : r.estimates) detail::mdim_row(o, m, "");
  for (const auto& c : r.comparators) {
    for (const auto& m : c.report.estimates) detail::mdim_row(o, m, c.report.theorem + "/");
  }
  return o.str();
}

inline std::string comparators_csv(const RunReport& r) {
  std::ostringstream o;
  o << kComparatorsHeader << '\n';
  for (const auto& c : r.comparators) {
    for (const auto& row : c.report.rows) {
      o << c.report.theorem << ',' << row.check << ',' << detail::num(row.eps) << ',' << row.n << ','
        << detail::num(row.left) << ',' << detail::num(row.right) << ',' << detail::num(row.gap()) << ','
        << relation_name(row.relation) << ',' << detail::num(row.tolerance) << ',' << (row.gating ? 1 : 0) << ','
        << (row.ok ? 1 : 0) << '\n';
    }
  }
  return o.str();
}

inline std::string homogeneity_csv(const RunReport& r) {
  std::ostringstream o;
  o << kHomogeneityHeader << '\n';
  if (r.homogeneity) {
    for (const auto& row : r.homogeneity->rows) {
      o << "L," << detail::num(row.eps) << ",2," << detail::num(row.L) << ',' << detail::num(row.doubling) << ','
        << (row.zero_mass ? 1 : 0) << '\n';
    }
  }
  if (r.g_homogeneity) {
    for (const auto& row : r.g_homogeneity->rows) {
      o << "c," << detail::num(row.eps) << ',' << detail::num(row.ratio) << ',' << detail::num(row.c) << ",,0\n";
    }
  }
  return o.str();
}

inline std::string summary_text(const RunReport& r) {
  std::ostringstream o;
  o << "mdim " << r.version << "\n\n";
  o << "comparators:\n";
  if (r.comparators.empty()) o << "  (none)\n";
  for (const auto& c : r.comparators) {
    std::size_t failed = 0;
    for (const auto& row : c.report.rows) failed += (row.gating && !row.ok) ? 1 : 0;
    o << "  theorem " << c.report.theorem << ": " << verdict_name(c.report.verdict) << (c.gating ? "" : " (not gating)")
      << ", " << c.report.rows.size() << " checks, " << failed << " failed\n";
    for (const auto& n : c.report.notes) o << "    note: " << n << '\n';
  }
  o << "\nmetric mean dimension estimates:\n";
  if (r.estimates.empty()) o << "  (none)\n";
  for (const auto& m : r.estimates) {
    o << "  " << m.estimator << ": slope " << detail::num(m.slope) << ", lower " << detail::num(m.lower_slope)
      << ", residual " << detail::num(m.residual) << '\n';
  }
  if (r.homogeneity) {
    o << "\nhomogeneity: sup L " << detail::num(r.homogeneity->sup_L) << " vs L_max " << detail::num(r.homogeneity->L_max)
      << ": " << (r.homogeneity->pass ? "PASS" : "FAIL") << '\n';
  }
  if (r.g_homogeneity) {
    o << "G-homogeneity: best ratio " << detail::num(r.g_homogeneity->best_ratio) << ", c "
      << detail::num(r.g_homogeneity->best_c) << ", strong " << (r.g_homogeneity->strong ? "yes" : "no")
      << (r.g_homogeneity->degenerate ? ", degenerate" : "") << '\n';
  }
  if (!r.plan_notes.empty()) {
    o << "\nplans:\n";
    for (const auto& n : r.plan_notes) o << "  " << n << '\n';
  }
  if (!r.errors.empty()) {
    o << "\nerrors:\n";
    for (const auto& e : r.errors) o << "  " << e << '\n';
  }
  o << "\nstatus: " << (r.success() ? "OK" : "FAILED") << "\n\nconfig:\n" << r.config_echo;
  return o.str();
}

/// Writes curves.csv, mdim.csv, comparators.csv, homogeneity.csv and summary.txt into dir.
inline void emit_report(const RunReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path d(dir);
  detail::write_file(d / "curves.csv", curves_csv(r));
  detail::write_file(d / "mdim.csv", mdim_csv(r));
  detail::write_file(d / "comparators.csv", comparators_csv(r));
  detail::write_file(d / "homogeneity.csv", homogeneity_csv(r));
  detail::write_file(d / "summary.txt", summary_text(r));
}

}  // namespace mdim
