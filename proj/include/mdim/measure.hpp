#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mdim/entropy.hpp"
#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"
#include "mdim/mdim_fit.hpp"
#include "mdim/measure_sample.hpp"
#include "mdim/pack_cover.hpp"

namespace mdim {

inline void check_eps_grid(const std::vector<double>& grid, std::size_t min_size) {
  require(grid.size() >= min_size, "eps grid needs at least " + std::to_string(min_size) + " values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, "eps grid values must be > 0");
    if (i) require(grid[i] < grid[i - 1], "eps grid must be strictly decreasing");
  }
}

struct BoxDimension {
  std::vector<double> eps;
  std::vector<double> log_count;
  double slope = 0.0;
  double residual = 0.0;
};

/// Upper box dimension surrogate: N(eps) = greedy maximal eps-separated count, slope of
/// log N(eps) against -log eps.
inline BoxDimension box_dimension_set(const FinModel& model, const std::vector<double>& grid, bool check_mesh = true) {
  check_eps_grid(grid, 3);
  if (check_mesh) {
    require(model.mesh() <= grid.back() / 4.0, "model mesh exceeds min eps / 4", ErrorKind::MeshTooCoarse);
  }
  BoxDimension out;
  std::vector<double> x;
  BaseMetric metric(model);
  for (double e : grid) {
    out.eps.push_back(e);
    out.log_count.push_back(std::log(static_cast<double>(maximal_separated(metric, e).centers.size())));
    x.push_back(-std::log(e));
  }
  const auto fit = least_squares(x, out.log_count);
  out.slope = fit.slope;
  out.residual = fit.residual;
  return out;
}

namespace detail {

/// nu(B(y_k, r)) with open balls, for query points given as raw coordinates.
inline std::vector<double> ball_masses(const MeasureSample& nu, const std::vector<double>& queries, double r) {
  const auto& space = nu.space;
  const std::size_t d = space.point_dim();
  const std::size_t q = queries.size() / d;
  std::vector<double> joint = nu.coords;
  joint.insert(joint.end(), queries.begin(), queries.end());
  std::vector<Projection> proj;
  for (const auto& a : space.key_axes()) proj.push_back({joint.data() + a.coord, d, a});
  CellIndex index(proj, r, nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) index.insert(i);
  std::vector<double> out(q, 0.0);
  for (std::size_t k = 0; k < q; ++k) {
    const double* y = queries.data() + k * d;
    double m = 0.0;
    index.visit(nu.size() + k, [&](std::size_t i) {
      if (space.raw_distance(nu.at(i), y) < r) m += nu.weights[i];
      return true;
    });
    out[k] = m;
  }
  return out;
}

}  // namespace detail

inline double ball_mass(const MeasureSample& nu, const Point& y, double r) {
  nu.space.validate(y);
  return detail::ball_masses(nu, y.coords, r).front();
}

/// Box dimension of a measure: atoms are discarded in increasing order of nu(B(y, r_loc))
/// (ties by index) while the discarded weight stays <= delta, then the survivors are measured
/// as a set. r_loc defaults to min eps / 4.
inline BoxDimension box_dimension_measure(const MeasureSample& nu, double delta, const std::vector<double>& grid,
                                          double local_radius = 0.0) {
  require(delta > 0.0 && delta < 1.0, "measure box dimension: delta must lie in (0, 1)");
  check_eps_grid(grid, 3);
  nu.validate();
  const double r = local_radius > 0.0 ? local_radius : grid.back() / 4.0;
  const auto local = detail::ball_masses(nu, nu.coords, r);
  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return local[a] < local[b]; });
  std::vector<char> keep(nu.size(), 1);
  double dropped = 0.0;
  for (auto i : order) {
    if (dropped + nu.weights[i] > delta) break;
    dropped += nu.weights[i];
    keep[i] = 0;
  }
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (keep[i]) survivors.push_back(i);
  }
  require(!survivors.empty(), "measure box dimension: every atom was discarded");
  std::vector<double> c;
  const std::size_t d = nu.space.point_dim();
  for (auto i : survivors) c.insert(c.end(), nu.at(i), nu.at(i) + d);
  return box_dimension_set(FinModel(nu.space, std::move(c)), grid, false);
}

struct HomogeneityRow {
  double eps = 0.0;
  double L = 0.0;         // max_y1 nu(B(y1, 2 eps)) / min_y2 nu(B(y2, eps)); inf on a zero denominator
  double doubling = 0.0;  // max_y nu(B(y, 2 eps)) / nu(B(y, eps))
  std::size_t witness_big = 0;
  std::size_t witness_small = 0;
  bool zero_mass = false;
};

struct HomogeneityReport {
  std::vector<HomogeneityRow> rows;
  double sup_L = 0.0;
  double L_max = 0.0;
  bool pass = false;
};

inline HomogeneityReport homogeneity_check(const MeasureSample& nu, const std::vector<double>& grid,
                                           const std::vector<Point>& support, double L_max) {
  nu.validate();
  require(!grid.empty(), "homogeneity check needs an eps grid");
  require(!support.empty(), "homogeneity check needs support points");
  require(L_max >= 1.0, "L_max must be >= 1");
  std::vector<double> q;
  for (const auto& y : support) {
    nu.space.validate(y);
    q.insert(q.end(), y.coords.begin(), y.coords.end());
  }
  HomogeneityReport rep;
  rep.L_max = L_max;
  for (double e : grid) {
    require(e > 0.0, "eps must be > 0");
    const auto m1 = detail::ball_masses(nu, q, e);
    const auto m2 = detail::ball_masses(nu, q, 2.0 * e);
    HomogeneityRow row;
    row.eps = e;
    const auto big = static_cast<std::size_t>(std::max_element(m2.begin(), m2.end()) - m2.begin());
    const auto small = static_cast<std::size_t>(std::min_element(m1.begin(), m1.end()) - m1.begin());
    row.witness_big = big;
    row.witness_small = small;
    if (m1[small] <= 0.0) {
      row.zero_mass = true;
      row.L = std::numeric_limits<double>::infinity();
      row.doubling = std::numeric_limits<double>::infinity();
    } else {
      row.L = m2[big] / m1[small];
      for (std::size_t k = 0; k < m1.size(); ++k) row.doubling = std::max(row.doubling, m2[k] / m1[k]);
    }
    rep.sup_L = std::max(rep.sup_L, row.L);
    rep.rows.push_back(row);
  }
  rep.pass = rep.sup_L <= L_max;
  return rep;
}

/// nu(B_n^G(x_k, r)) for n = 0..depth, k over the query points, all from one image table.
/// Result is indexed [k][n].
inline std::vector<std::vector<double>> group_ball_masses(const SemigroupSystem& sys, const MeasureSample& nu,
                                                          const std::vector<Point>& xs, double r, std::size_t depth,
                                                          double budget) {
  require(r > 0.0, "group ball radius must be > 0");
  std::vector<double> joint = nu.coords;
  for (const auto& x : xs) {
    sys.space().validate(x);
    joint.insert(joint.end(), x.coords.begin(), x.coords.end());
  }
  const GroupImageTable table(sys, joint, depth, budget);
  std::vector<std::vector<double>> out(xs.size(), std::vector<double>(depth + 1, 0.0));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::vector<double> exit_mass(depth + 2, 0.0);
    for (std::size_t y = 0; y < nu.size(); ++y) exit_mass[table.exit_depth(nu.size() + k, y, r, true)] += nu.weights[y];
    // mass still inside at depth n: exits after n
    double inside = 0.0;
    for (std::size_t n = depth + 1; n-- > 0;) {
      inside += exit_mass[n + 1];
      out[k][n] = inside;
    }
  }
  return out;
}

struct GHomogeneityRow {
  double eps = 0.0;
  double ratio = 0.0;
  /// max over n of max_x nu(B_n^G(x, ratio eps)) / min_y nu(B_n^G(y, eps)); inf on zero mass
  double c = 0.0;
};

struct GHomogeneityReport {
  std::vector<GHomogeneityRow> rows;
  double c_max = 0.0;
  /// Largest ratio whose c stays <= c_max at every eps; 0 when none does.
  double best_ratio = 0.0;
  double best_c = 0.0;
  bool strong = false;
  /// The measure has a single atom: the inequality holds with c = 1 only at x = y.
  bool degenerate = false;
};

inline GHomogeneityReport g_homogeneity_check(const SemigroupSystem& sys, const MeasureSample& nu,
                                              const std::vector<double>& eps_list, std::size_t depth,
                                              const std::vector<double>& ratios, double budget,
                                              const std::vector<Point>& sample, double c_max = 1.5) {
  nu.validate();
  require(!eps_list.empty() && !ratios.empty() && !sample.empty(), "G-homogeneity check needs eps, ratios and sample");
  check_group_budget(sys.arity(), depth, budget);
  GHomogeneityReport rep;
  rep.c_max = c_max;
  rep.degenerate = nu.size() == 1;
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> worst(sorted.size(), 0.0);
  for (double e : eps_list) {
    const auto base = group_ball_masses(sys, nu, sample, e, depth, budget);
    for (std::size_t r = 0; r < sorted.size(); ++r) {
      const auto small = group_ball_masses(sys, nu, sample, sorted[r] * e, depth, budget);
      double c = 0.0;
      for (std::size_t n = 0; n <= depth; ++n) {
        double num = 0.0, den = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sample.size(); ++k) {
          num = std::max(num, small[k][n]);
          den = std::min(den, base[k][n]);
        }
        c = std::max(c, den > 0.0 ? num / den : std::numeric_limits<double>::infinity());
      }
      rep.rows.push_back({e, sorted[r], c});
      worst[r] = std::max(worst[r], c);
    }
  }
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (worst[r] <= c_max) {
      rep.best_ratio = sorted[r];
      rep.best_c = worst[r];
      rep.strong = true;
      break;
    }
  }
  return rep;
}

enum class EntropyMode { Upper, Lower };

struct LocalMeasureEntropy {
  std::vector<std::size_t> n;
  std::vector<double> mass;
  /// first n with zero mass; the curve stops before it
  std::optional<std::size_t> truncated_at;
  double upper = 0.0;  // max tail increment of -log mass
  double lower = 0.0;  // min tail increment
  double slope = 0.0;  // least-squares slope over the tail
  double value = 0.0;  // per mode, floored at 0
};

/// Local upper / lower nu-measure entropy at scale eps: tail increments of -log nu(B_n^G(x, eps)).
inline LocalMeasureEntropy local_measure_entropy(const SemigroupSystem& sys, const MeasureSample& nu, const Point& x,
                                                 double eps, const NRange& range, double budget, EntropyMode mode,
                                                 std::size_t tail = 3) {
  nu.validate();
  check_range(range);
  require(tail >= 2, "tail must hold at least 2 points", ErrorKind::DegenerateFit);
  const auto masses = group_ball_masses(sys, nu, {x}, eps, range.n_max, budget).front();
  LocalMeasureEntropy out;
  for (std::size_t n = range.n_min; n <= range.n_max; ++n) {
    if (masses[n] <= 0.0) {
      out.truncated_at = n;
      break;
    }
    out.n.push_back(n);
    out.mass.push_back(masses[n]);
  }
  if (out.n.size() < 2) {
    throw Error(ErrorKind::DegenerateFit, "local measure entropy at " + SpaceDescriptor::format_point(x) +
                                              ": fewer than 2 positive ball masses");
  }
  const std::size_t k = std::min(tail, out.n.size());
  const std::size_t first = out.n.size() - k;
  std::vector<double> xs, ys;
  out.upper = -1e300;
  out.lower = 1e300;
  for (std::size_t i = first; i < out.n.size(); ++i) {
    xs.push_back(static_cast<double>(out.n[i]));
    ys.push_back(-std::log(out.mass[i]));
    if (i > first) {
      const double inc = (std::log(out.mass[i - 1]) - std::log(out.mass[i])) / static_cast<double>(out.n[i] - out.n[i - 1]);
      out.upper = std::max(out.upper, inc);
      out.lower = std::min(out.lower, inc);
    }
  }
  out.slope = least_squares(xs, ys).slope;
  out.value = std::max(0.0, mode == EntropyMode::Upper ? out.upper : out.lower);
  return out;
}

/// Slope of the local measure entropy at x against -log eps.
inline MdimEstimate measure_mdim(const SemigroupSystem& sys, const MeasureSample& nu, const Point& x,
                                 const std::vector<double>& grid, const NRange& range, double budget, EntropyMode mode,
                                 std::size_t tail = 3) {
  check_eps_grid(grid, 3);
  std::vector<std::pair<double, double>> pts;
  for (double e : grid) pts.emplace_back(e, local_measure_entropy(sys, nu, x, e, range, budget, mode, tail).value);
  return mdim_from_points(mode == EntropyMode::Upper ? "measure_upper" : "measure_lower", std::move(pts));
}

}  // namespace mdim
