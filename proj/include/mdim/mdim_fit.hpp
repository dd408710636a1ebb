#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mdim/entropy.hpp"
#include "mdim/error.hpp"

namespace mdim {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "least squares needs at least 2 points", ErrorKind::DegenerateFit);
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "least squares needs distinct abscissae", ErrorKind::DegenerateFit);
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / k);
  return f;
}

/// Growth of h(eps) against -log eps.
struct MdimEstimate {
  std::string estimator;
  std::vector<double> eps;  // decreasing, deduplicated
  std::vector<double> h;
  /// max of h / (-log eps) over the three smallest eps (upper surrogate)
  double ratio_sup = 0.0;
  /// min of the same ratios (lower surrogate)
  double ratio_inf = 0.0;
  /// least-squares slope of h against -log eps, floored at 0 (upper surrogate)
  double slope = 0.0;
  /// min(slope, ratio_inf) (lower surrogate)
  double lower_slope = 0.0;
  double raw_slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

inline MdimEstimate mdim_from_points(std::string estimator, std::vector<std::pair<double, double>> eps_h) {
  for (const auto& [e, v] : eps_h) {
    require(e > 0.0 && e < 1.0, "mdim grid: every eps must lie in (0, 1) so that -log eps > 0");
    require(std::isfinite(v), "mdim grid: growth values must be finite");
  }
  std::stable_sort(eps_h.begin(), eps_h.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  eps_h.erase(std::unique(eps_h.begin(), eps_h.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              eps_h.end());
  require(eps_h.size() >= 3, "mdim estimate needs at least 3 distinct grid points", ErrorKind::DegenerateFit);
  MdimEstimate m;
  m.estimator = std::move(estimator);
  std::vector<double> x;
  for (const auto& [e, v] : eps_h) {
    m.eps.push_back(e);
    m.h.push_back(v);
    x.push_back(-std::log(e));
  }
  const auto fit = least_squares(x, m.h);
  m.raw_slope = fit.slope;
  m.slope = std::max(0.0, fit.slope);
  m.intercept = fit.intercept;
  m.residual = fit.residual;
  const std::size_t n = m.eps.size();
  m.ratio_sup = -1e300;
  m.ratio_inf = 1e300;
  for (std::size_t i = n - 3; i < n; ++i) {
    const double r = std::max(0.0, m.h[i]) / x[i];
    m.ratio_sup = std::max(m.ratio_sup, r);
    m.ratio_inf = std::min(m.ratio_inf, r);
  }
  m.lower_slope = std::min(m.slope, m.ratio_inf);
  return m;
}

inline MdimEstimate mdim_from_curve(const EntropyCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : curve.entries) pts.emplace_back(e.eps, e.growth_rate);
  return mdim_from_points(curve.estimator, std::move(pts));
}

}  // namespace mdim
