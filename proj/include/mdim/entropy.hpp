#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"
#include "mdim/measure_sample.hpp"
#include "mdim/pack_cover.hpp"
#include "mdim/parallel.hpp"
#include "mdim/semigroup.hpp"

namespace mdim {

struct NRange {
  std::size_t n_min = 0;
  std::size_t n_max = 0;
};

struct EstimatorParams {
  std::size_t word_budget = 4096;
  double group_budget = 1e6;
  /// Cap on the number of (point, refined cover element) memberships per word.
  std::size_t cover_budget = std::size_t{1} << 24;
  /// Number of trailing n values in the growth fit.
  std::size_t tail = 3;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  OrbitCache* cache = nullptr;
  bool check_mesh = true;
};

/// The model used at each n; most estimators use one model for every n.
using ModelSource = std::function<std::shared_ptr<const FinModel>(std::size_t n)>;

inline ModelSource fixed_model(std::shared_ptr<const FinModel> model) {
  return [model = std::move(model)](std::size_t) { return model; };
}

/// Weights of a candidate measure on a given model (models may change with n).
using WeightSource = std::function<std::vector<double>(const FinModel&)>;

/// A fixed sample moved onto the model's nearest points.
inline WeightSource projected(MeasureSample nu) {
  nu.validate();
  return [nu = std::move(nu)](const FinModel& model) { return project_weights(nu, model); };
}

/// Equal weights on whatever model is in use.
inline WeightSource uniform_weights() {
  return [](const FinModel& model) { return std::vector<double>(model.size(), 1.0 / static_cast<double>(model.size())); };
}

inline void check_model_scale(const FinModel& model, double eps, bool check_mesh) {
  if (!check_mesh || model.kind() == ModelKind::SeparationLattice) return;
  if (!(model.mesh() <= eps / 4.0)) {
    throw Error(ErrorKind::MeshTooCoarse, "model mesh " + std::to_string(model.mesh()) + " exceeds eps/4 = " +
                                              std::to_string(eps / 4.0));
  }
}

/// Walk average of one per-word quantity.
struct Integral {
  double mean = 0.0;
  double stderr_ = 0.0;
  bool exact = true;
  std::size_t words = 0;
};

/// Integrates `outputs` per-word quantities over words of length n: exactly over all p^n words
/// when p^n <= word_budget, otherwise by the plain average of word_budget sampled words.
/// Per-word values land in per-index slots and are summed in index order.
template <class PerWord>
std::vector<Integral> integrate_walk(const RandomWalk& walk, std::size_t n, std::size_t outputs,
                                     const EstimatorParams& params, PerWord&& f) {
  const std::size_t p = walk.arity();
  std::vector<Integral> out(outputs);
  const bool exact = word_count(p, n) <= static_cast<double>(params.word_budget);
  if (exact) {
    const auto total = static_cast<std::size_t>(word_count(p, n));
    std::vector<std::vector<double>> slots(total);
    std::vector<double> weights(total);
    parallel_for(total, params.workers, [&](std::size_t k) {
      const Word w = word_from_index(p, n, k);
      weights[k] = walk.weight(w);
      if (weights[k] > 0.0) slots[k] = f(w);
    });
    for (std::size_t k = 0; k < total; ++k) {
      if (weights[k] == 0.0) continue;
      for (std::size_t o = 0; o < outputs; ++o) out[o].mean += weights[k] * slots[k][o];
    }
    for (auto& i : out) {
      i.exact = true;
      i.words = total;
    }
    return out;
  }
  const std::size_t draws = params.word_budget;
  require(draws >= 2, "Monte Carlo integration needs a word budget >= 2");
  std::vector<std::vector<double>> slots(draws);
  parallel_for(draws, params.workers, [&](std::size_t k) {
    slots[k] = f(walk.sample(n, substream(params.seed, "word_draws", (static_cast<std::uint64_t>(n) << 32) | k)));
  });
  for (std::size_t o = 0; o < outputs; ++o) {
    double sum = 0.0;
    for (std::size_t k = 0; k < draws; ++k) sum += slots[k][o];
    const double mean = sum / static_cast<double>(draws);
    double ss = 0.0;
    for (std::size_t k = 0; k < draws; ++k) ss += (slots[k][o] - mean) * (slots[k][o] - mean);
    out[o] = {mean, std::sqrt(ss / static_cast<double>(draws - 1) / static_cast<double>(draws)), false, draws};
  }
  return out;
}

struct CountPoint {
  std::size_t n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  bool exact = true;
  std::size_t words = 0;

  /// Counts below one (possible only for truncated covers) are floored at one.
  double log_count() const { return std::log(std::max(mean, 1.0)); }
};

/// One entry of an entropy curve.
struct ScaleEstimate {
  double eps = 0.0;
  std::vector<CountPoint> counts;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  double slope = 0.0;
  double residual = 0.0;
  /// max(slope, 0): the growth-rate surrogate.
  double growth_rate = 0.0;
};

/// Least-squares slope of log counts over the last `tail` n values.
inline void fit_tail(ScaleEstimate& e, std::size_t tail) {
  if (tail < 2 || e.counts.size() < 2) {
    throw Error(ErrorKind::DegenerateFit, "growth fit needs at least 2 tail points, have " +
                                              std::to_string(std::min(tail, e.counts.size())));
  }
  const std::size_t k = std::min(tail, e.counts.size());
  const std::size_t first = e.counts.size() - k;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = first; i < e.counts.size(); ++i) {
    sx += static_cast<double>(e.counts[i].n);
    sy += e.counts[i].log_count();
  }
  const double mx = sx / static_cast<double>(k), my = sy / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < e.counts.size(); ++i) {
    const double dx = static_cast<double>(e.counts[i].n) - mx;
    sxx += dx * dx;
    sxy += dx * (e.counts[i].log_count() - my);
  }
  e.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = first; i < e.counts.size(); ++i) {
    const double r = e.counts[i].log_count() - (my + e.slope * (static_cast<double>(e.counts[i].n) - mx));
    rss += r * r;
  }
  e.residual = std::sqrt(rss / static_cast<double>(k));
  e.window_lo = e.counts[first].n;
  e.window_hi = e.counts.back().n;
  e.growth_rate = std::max(0.0, e.slope);
}

inline ScaleEstimate make_estimate(double eps, const NRange& range, const std::vector<std::vector<Integral>>& per_n,
                                   std::size_t output, std::size_t tail) {
  ScaleEstimate e;
  e.eps = eps;
  for (std::size_t i = 0; i < per_n.size(); ++i) {
    const auto& in = per_n[i][output];
    e.counts.push_back({range.n_min + i, in.mean, in.stderr_, in.exact, in.words});
  }
  fit_tail(e, tail);
  return e;
}

/// Scale-indexed growth rates of one estimator.
struct EntropyCurve {
  std::string estimator;
  bool glw = false;
  std::vector<ScaleEstimate> entries;

  void validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      require(entries[i].growth_rate >= 0.0, "negative growth rate in curve " + estimator);
      if (i > 0) require(entries[i].eps < entries[i - 1].eps, "curve " + estimator + ": eps must strictly decrease");
    }
  }
};

inline void check_range(const NRange& range) {
  require(range.n_min <= range.n_max, "n range must satisfy n_min <= n_max");
}

/// For every n in range and every word of length n, calls make(n, model) once per n to get a
/// per-word evaluator and integrates its outputs over the walk. Result is indexed [n - n_min][output].
template <class Factory>
std::vector<std::vector<Integral>> scan_walk(const SemigroupSystem& sys, const RandomWalk& walk, const NRange& range,
                                             const EstimatorParams& params, const ModelSource& models,
                                             std::size_t outputs, Factory&& make) {
  check_range(range);
  require(walk.arity() == sys.arity(), "walk alphabet size differs from the number of generators",
          ErrorKind::DimensionMismatch);
  std::vector<std::vector<Integral>> out;
  for (std::size_t n = range.n_min; n <= range.n_max; ++n) {
    auto model = models(n);
    auto eval = make(n, *model);
    out.push_back(integrate_walk(walk, n, outputs, params, [&](const Word& w) {
      auto table = orbit_table(sys, *model, w, params.cache);
      return eval(w, *table);
    }));
  }
  return out;
}

/// Greedy maximal (w, n, eps)-separated set of the model along w.
inline SeparatedSet separated_along(const SemigroupSystem& sys, const FinModel& model, const Word& w, double eps,
                                    OrbitCache* cache = nullptr) {
  auto table = orbit_table(sys, model, w, cache);
  return maximal_separated(WordMetric(sys.space(), table), eps);
}

/// h(X, S, P, eps): growth of the walk average of s(w, n, eps).
inline ScaleEstimate walk_entropy_at_scale(const SemigroupSystem& sys, const RandomWalk& walk, double eps,
                                           const NRange& range, const EstimatorParams& params, const ModelSource& models) {
  require(eps > 0.0, "eps must be > 0");
  auto per_n = scan_walk(sys, walk, range, params, models, 1, [&](std::size_t, const FinModel& model) {
    check_model_scale(model, eps, params.check_mesh);
    return [&sys, eps](const Word&, const OrbitTable& table) {
      return std::vector<double>{static_cast<double>(maximal_separated(WordMetric(sys.space(), table), eps).centers.size())};
    };
  });
  return make_estimate(eps, range, per_n, 0, params.tail);
}

/// h_d(x, eps) at one point: per-radius growth rates and their minimum.
struct LocalEntropy {
  Point x;
  std::vector<double> radii;
  std::vector<ScaleEstimate> per_radius;  // parallel to radii; empty counts when skipped
  std::vector<bool> skipped;
  std::vector<std::string> warnings;
  double value = 0.0;
};

struct LocalBatch {
  ScaleEstimate walk;  // h(X, S, P, eps) on the same words and models
  std::vector<LocalEntropy> points;
};

/// Local entropy at several points, sharing one pass over the words with the global count.
/// B(K_r) along w is the number of distinct separated-set owners of the model points in the
/// closed ball K_r: those centers eps-span K_r and form a subset of the global separated set,
/// so B(K_r) <= s(w, n, eps) holds for every word.
inline LocalBatch local_entropy_batch(const SemigroupSystem& sys, const RandomWalk& walk, const std::vector<Point>& xs,
                                      double eps, const std::vector<double>& radii, const NRange& range,
                                      const EstimatorParams& params, const ModelSource& models) {
  require(eps > 0.0, "eps must be > 0");
  require(!radii.empty(), "radius schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0, "radii must be > 0");
    if (i) require(radii[i] < radii[i - 1], "radius schedule must be decreasing");
  }
  for (const auto& x : xs) sys.space().validate(x);
  const std::size_t R = radii.size();
  const std::size_t outputs = 1 + xs.size() * R;
  std::vector<std::vector<bool>> empty_ball(xs.size(), std::vector<bool>(R, false));

  auto per_n = scan_walk(sys, walk, range, params, models, outputs, [&](std::size_t, const FinModel& model) {
    check_model_scale(model, eps, params.check_mesh);
    auto balls = std::make_shared<std::vector<std::vector<std::uint32_t>>>(xs.size() * R);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t z = 0; z < model.size(); ++z) {
        const double d = model.space().raw_distance(xs[a].coords.data(), model.at(z));
        for (std::size_t r = 0; r < R; ++r) {
          if (d <= radii[r]) (*balls)[a * R + r].push_back(static_cast<std::uint32_t>(z));
        }
      }
      for (std::size_t r = 0; r < R; ++r) {
        if ((*balls)[a * R + r].empty()) empty_ball[a][r] = true;
      }
    }
    return [&sys, eps, balls, outputs](const Word&, const OrbitTable& table) {
      const auto sep = maximal_separated(WordMetric(sys.space(), table), eps);
      std::vector<double> v(outputs, 0.0);
      v[0] = static_cast<double>(sep.centers.size());
      std::vector<std::uint32_t> stamp(sep.centers.size(), 0);
      for (std::size_t b = 0; b < balls->size(); ++b) {
        std::size_t distinct = 0;
        for (auto z : (*balls)[b]) {
          auto& s = stamp[sep.owner[z]];
          if (s != b + 1) {
            s = static_cast<std::uint32_t>(b + 1);
            ++distinct;
          }
        }
        v[1 + b] = static_cast<double>(distinct);
      }
      return v;
    };
  });

  LocalBatch out;
  out.walk = make_estimate(eps, range, per_n, 0, params.tail);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    LocalEntropy le;
    le.x = xs[a];
    le.radii = radii;
    bool any = false;
    for (std::size_t r = 0; r < R; ++r) {
      if (empty_ball[a][r]) {
        le.per_radius.emplace_back();
        le.skipped.push_back(true);
        le.warnings.push_back("radius " + std::to_string(radii[r]) + " holds no model points; skipped");
        continue;
      }
      le.per_radius.push_back(make_estimate(eps, range, per_n, 1 + a * R + r, params.tail));
      le.skipped.push_back(false);
      le.value = any ? std::min(le.value, le.per_radius.back().growth_rate) : le.per_radius.back().growth_rate;
      any = true;
    }
    if (!any) {
      throw Error(ErrorKind::InvalidArgument, "local entropy at " + SpaceDescriptor::format_point(xs[a]) +
                                                  ": every radius holds no model points");
    }
    out.points.push_back(std::move(le));
  }
  return out;
}

inline LocalEntropy local_entropy(const SemigroupSystem& sys, const RandomWalk& walk, const Point& x, double eps,
                                  const std::vector<double>& radii, const NRange& range, const EstimatorParams& params,
                                  const ModelSource& models) {
  return local_entropy_batch(sys, walk, {x}, eps, radii, range, params, models).points.front();
}

/// Katok count after deleting whole owner cells, lightest first (ties by center order), while
/// the deleted weight stays below delta. The kept centers are separated and eps-span the kept
/// cells, so the count never exceeds the unrestricted one.
inline std::size_t katok_count(const SeparatedSet& sep, const std::vector<double>& weights, double delta) {
  std::vector<double> mass(sep.centers.size(), 0.0);
  for (std::size_t z = 0; z < sep.owner.size(); ++z) mass[sep.owner[z]] += weights[z];
  std::vector<std::size_t> order(mass.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] < mass[b]; });
  double deleted = 0.0;
  std::size_t removed = 0;
  for (auto c : order) {
    if (!(deleted + mass[c] < delta)) break;
    deleted += mass[c];
    ++removed;
  }
  return sep.centers.size() - removed;
}

struct KatokBatch {
  ScaleEstimate walk;
  /// [candidate][delta]
  std::vector<std::vector<ScaleEstimate>> katok;
  /// Every per-word count satisfied s_nu <= s.
  bool count_dominated = true;
};

inline KatokBatch katok_batch(const SemigroupSystem& sys, const RandomWalk& walk, const std::vector<WeightSource>& nus,
                              double eps, const std::vector<double>& deltas, const NRange& range,
                              const EstimatorParams& params, const ModelSource& models) {
  require(eps > 0.0, "eps must be > 0");
  require(!nus.empty() && !deltas.empty(), "Katok entropy needs measures and deltas");
  for (double d : deltas) require(d > 0.0 && d < 1.0, "Katok delta must lie in (0, 1)");
  const std::size_t D = deltas.size();
  const std::size_t outputs = 1 + nus.size() * D;
  std::atomic<bool> dominated{true};
  auto per_n = scan_walk(sys, walk, range, params, models, outputs, [&](std::size_t, const FinModel& model) {
    check_model_scale(model, eps, params.check_mesh);
    auto weights = std::make_shared<std::vector<std::vector<double>>>();
    for (const auto& nu : nus) weights->push_back(nu(model));
    return [&sys, &deltas, &dominated, eps, weights, outputs, D](const Word&, const OrbitTable& table) {
      const auto sep = maximal_separated(WordMetric(sys.space(), table), eps);
      std::vector<double> v(outputs, 0.0);
      v[0] = static_cast<double>(sep.centers.size());
      for (std::size_t a = 0; a < weights->size(); ++a) {
        for (std::size_t d = 0; d < D; ++d) {
          const auto c = katok_count(sep, (*weights)[a], deltas[d]);
          if (c > sep.centers.size()) dominated = false;
          v[1 + a * D + d] = static_cast<double>(c);
        }
      }
      return v;
    };
  });
  KatokBatch out;
  out.walk = make_estimate(eps, range, per_n, 0, params.tail);
  for (std::size_t a = 0; a < nus.size(); ++a) {
    out.katok.emplace_back();
    for (std::size_t d = 0; d < D; ++d) out.katok.back().push_back(make_estimate(eps, range, per_n, 1 + a * D + d, params.tail));
  }
  out.count_dominated = dominated;
  return out;
}

inline ScaleEstimate katok_entropy(const SemigroupSystem& sys, const RandomWalk& walk, const MeasureSample& nu, double eps,
                                   double delta, const NRange& range, const EstimatorParams& params,
                                   const ModelSource& models) {
  return katok_batch(sys, walk, {projected(nu)}, eps, {delta}, range, params, models).katok[0][0];
}

/// Finite cover by open balls of the space metric.
struct CoverSpec {
  std::vector<Point> centers;
  std::vector<double> radii;

  double diameter() const { return 2.0 * *std::max_element(radii.begin(), radii.end()); }

  /// Indices of the balls containing x, ascending.
  void members_of(const SpaceDescriptor& space, const double* x, std::vector<std::uint32_t>& out) const {
    out.clear();
    for (std::size_t b = 0; b < centers.size(); ++b) {
      if (space.raw_distance(centers[b].coords.data(), x) < radii[b]) out.push_back(static_cast<std::uint32_t>(b));
    }
  }

  void validate(const SpaceDescriptor& space) const {
    require(!centers.empty() && centers.size() == radii.size(), "cover needs one radius per center");
    for (std::size_t b = 0; b < centers.size(); ++b) {
      space.validate(centers[b]);
      require(radii[b] > 0.0, "cover radii must be > 0");
    }
  }

  /// Throws NotACover naming the first model point outside every ball.
  void check_covers(const FinModel& model) const {
    std::vector<std::uint32_t> m;
    for (std::size_t z = 0; z < model.size(); ++z) {
      members_of(model.space(), model.at(z), m);
      if (m.empty()) {
        throw Error(ErrorKind::NotACover, "cover misses model point " + std::to_string(z) + " " +
                                              SpaceDescriptor::format_point(model.point(z)));
      }
    }
  }
};

/// Balls of one radius centered on a lattice with spacing at most `spacing`.
inline CoverSpec ball_cover(const SpaceDescriptor& space, double radius, double spacing, std::size_t cap = 1U << 16) {
  require(radius > 0.0 && spacing > 0.0, "cover radius and spacing must be > 0");
  CoverSpec c;
  c.centers = make_net(space, std::min(spacing, space.diameter()), cap).centers;
  c.radii.assign(c.centers.size(), radius);
  return c;
}

namespace detail {

/// Walks the cartesian product of per-step ball lists; fn(combo) per element.
template <class Fn>
void for_each_combo(const std::vector<std::vector<std::uint32_t>>& lists, std::vector<std::uint32_t>& combo, Fn&& fn) {
  const std::size_t n = lists.size();
  combo.assign(n, 0);
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    for (std::size_t j = 0; j < n; ++j) combo[j] = lists[j][idx[j]];
    fn(combo);
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++idx[j] < lists[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace detail

/// U(w, n) restricted to the model: one set per nonempty U_{i_0} ∩ (f_w^1)^{-1} U_{i_1} ∩ ...
/// ∩ (f_w^{n-1})^{-1} U_{i_{n-1}}, sets ordered by their index sequence. n = 0 gives {X}.
inline SetFamily refined_family(const CoverSpec& cover, const SpaceDescriptor& space, const OrbitTable& table,
                                std::size_t n, std::size_t budget) {
  require(n <= table.steps, "orbit table too short for the refinement");
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> members;
  std::vector<std::vector<std::uint32_t>> lists(n);
  std::vector<std::uint32_t> combo;
  std::size_t work = 0;
  for (std::size_t z = 0; z < table.points; ++z) {
    std::size_t combos = 1;
    for (std::size_t j = 0; j < n; ++j) {
      cover.members_of(space, table.at(z, j), lists[j]);
      if (lists[j].empty()) {
        throw Error(ErrorKind::NotACover, "refined cover misses model point " + std::to_string(z) + " at step " +
                                              std::to_string(j));
      }
      combos *= lists[j].size();
    }
    work += combos;
    if (work > budget) {
      throw BudgetError("refined cover needs more than " + std::to_string(budget) + " memberships",
                        static_cast<double>(work), static_cast<double>(budget), static_cast<int>(n));
    }
    detail::for_each_combo(lists, combo, [&](const std::vector<std::uint32_t>& c) {
      members[c].push_back(static_cast<std::uint32_t>(z));
    });
  }
  SetFamily f;
  f.universe = table.points;
  for (auto& [key, pts] : members) f.sets.push_back(std::move(pts));
  return f;
}

/// N(U, w, n): greedy minimal subcover of the refined cover.
inline std::size_t cover_count(const SemigroupSystem& sys, const CoverSpec& cover, const FinModel& model, const Word& w,
                               std::size_t budget = std::size_t{1} << 24, OrbitCache* cache = nullptr) {
  cover.validate(sys.space());
  auto table = orbit_table(sys, model, w, cache);
  return min_subcover(refined_family(cover, sys.space(), *table, w.size(), budget)).count;
}

/// h_top(U, S, P): growth of the walk average of N(U, w, n).
inline ScaleEstimate cover_entropy(const SemigroupSystem& sys, const RandomWalk& walk, const CoverSpec& cover,
                                   const NRange& range, const EstimatorParams& params, const ModelSource& models) {
  cover.validate(sys.space());
  auto per_n = scan_walk(sys, walk, range, params, models, 1, [&](std::size_t n, const FinModel& model) {
    cover.check_covers(model);
    return [&sys, &cover, &params, n](const Word&, const OrbitTable& table) {
      return std::vector<double>{
          static_cast<double>(min_subcover(refined_family(cover, sys.space(), table, n, params.cover_budget)).count)};
    };
  });
  return make_estimate(cover.diameter(), range, per_n, 0, params.tail);
}

struct ShapiraResult {
  std::vector<double> deltas;
  std::vector<ScaleEstimate> per_delta;
  /// Growth rate at the smallest delta, the stand-in for the delta -> 0 limit.
  double value = 0.0;
  /// Growth rates nondecreasing as delta decreases.
  bool monotone = true;
};

struct ShapiraBatch {
  ScaleEstimate cover;  // unrestricted N(U, w, n)
  std::vector<ShapiraResult> per_measure;
  /// Every per-word count satisfied N_nu <= N.
  bool count_dominated = true;
};

inline ShapiraBatch shapira_batch(const SemigroupSystem& sys, const RandomWalk& walk, const CoverSpec& cover,
                                  const std::vector<WeightSource>& nus, const std::vector<double>& deltas,
                                  const NRange& range, const EstimatorParams& params, const ModelSource& models) {
  cover.validate(sys.space());
  require(!nus.empty() && !deltas.empty(), "Shapira entropy needs measures and deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    require(deltas[i] > 0.0 && deltas[i] < 1.0, "Shapira delta must lie in (0, 1)");
    if (i) require(deltas[i] < deltas[i - 1], "delta schedule must be decreasing");
  }
  const std::size_t D = deltas.size();
  const std::size_t outputs = 1 + nus.size() * D;
  std::atomic<bool> dominated{true};
  auto per_n = scan_walk(sys, walk, range, params, models, outputs, [&](std::size_t n, const FinModel& model) {
    cover.check_covers(model);
    auto weights = std::make_shared<std::vector<std::vector<double>>>();
    for (const auto& nu : nus) weights->push_back(nu(model));
    return [&sys, &cover, &params, &deltas, &dominated, n, weights, outputs, D](const Word&, const OrbitTable& table) {
      const auto family = refined_family(cover, sys.space(), table, n, params.cover_budget);
      const auto full = min_subcover(family).count;
      std::vector<double> v(outputs, 0.0);
      v[0] = static_cast<double>(full);
      for (std::size_t a = 0; a < weights->size(); ++a) {
        for (std::size_t d = 0; d < D; ++d) {
          const auto c = min_subcover_mass(family, (*weights)[a], deltas[d]).count;
          if (c > full) dominated = false;
          v[1 + a * D + d] = static_cast<double>(c);
        }
      }
      return v;
    };
  });
  ShapiraBatch out;
  out.cover = make_estimate(cover.diameter(), range, per_n, 0, params.tail);
  for (std::size_t a = 0; a < nus.size(); ++a) {
    ShapiraResult r;
    r.deltas = deltas;
    for (std::size_t d = 0; d < D; ++d) {
      r.per_delta.push_back(make_estimate(cover.diameter(), range, per_n, 1 + a * D + d, params.tail));
      if (d && r.per_delta[d].growth_rate < r.per_delta[d - 1].growth_rate) r.monotone = false;
    }
    r.value = r.per_delta.back().growth_rate;
    out.per_measure.push_back(std::move(r));
  }
  out.count_dominated = dominated;
  return out;
}

/// Finite-level skew-product identity data.
struct SkewCount {
  std::vector<std::size_t> per_word;  // N(U, w, n), words in lexicographic order
  std::size_t total = 0;              // sum of per_word
  std::size_t skew = 0;               // N(U~, T_G, n) on cylinders x model
};

/// N(U~, T_G, n) for U~ = {[i] x U_k}, computed on the product of length-n cylinders and the
/// model by iterating T_G, next to the per-word counts N(U, w, n).
inline SkewCount skew_cover_count(const SemigroupSystem& sys, const CoverSpec& cover, std::size_t n, const FinModel& model,
                                  double budget = 1e6, std::size_t cover_budget = std::size_t{1} << 24) {
  cover.validate(sys.space());
  cover.check_covers(model);
  const std::size_t p = sys.arity();
  const double product = word_count(p, n) * static_cast<double>(model.size());
  if (product > budget) {
    throw BudgetError("skew product model needs " + std::to_string(product) + " points, budget is " +
                          std::to_string(budget),
                      product, budget, static_cast<int>(n));
  }
  const auto words = static_cast<std::size_t>(word_count(p, n));
  SkewCount out;
  for (std::size_t a = 0; a < words; ++a) {
    out.per_word.push_back(cover_count(sys, cover, model, word_from_index(p, n, a), cover_budget));
    out.total += out.per_word.back();
  }

  // direct product path: product point (omega, z) has index a * m + z
  const std::size_t m = model.size();
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> members;
  std::vector<std::vector<std::uint32_t>> lists(n);
  std::vector<std::uint32_t> combo;
  for (std::size_t a = 0; a < words; ++a) {
    const Word omega = word_from_index(p, n, a);
    for (std::size_t z = 0; z < m; ++z) {
      std::pair<Word, Point> state{omega, model.point(z)};
      std::vector<std::uint32_t> cylinder;
      for (std::size_t j = 0; j < n; ++j) {
        cylinder.push_back(state.first.letters.front());
        cover.members_of(sys.space(), state.second.coords.data(), lists[j]);
        if (lists[j].empty()) {
          throw Error(ErrorKind::NotACover, "skew cover misses product point (" + omega.str() + ", " +
                                                std::to_string(z) + ") at step " + std::to_string(j));
        }
        state = skew_apply(sys, state.first, state.second, 1);
      }
      detail::for_each_combo(lists, combo, [&](const std::vector<std::uint32_t>& c) {
        std::vector<std::uint32_t> key = cylinder;
        key.insert(key.end(), c.begin(), c.end());
        members[key].push_back(static_cast<std::uint32_t>(a * m + z));
      });
    }
  }
  SetFamily f;
  f.universe = words * m;
  for (auto& [key, pts] : members) f.sets.push_back(std::move(pts));
  out.skew = min_subcover(f).count;
  return out;
}

/// GLW entropy at one scale: growth of the maximal separated count under the relation
/// "some g of length <= n has d(g x, g y) > eps".
inline ScaleEstimate glw_entropy_at_scale(const SemigroupSystem& sys, double eps, const NRange& range,
                                          const EstimatorParams& params, const ModelSource& models) {
  require(eps > 0.0, "eps must be > 0");
  check_range(range);
  ScaleEstimate e;
  e.eps = eps;
  for (std::size_t n = range.n_min; n <= range.n_max; ++n) {
    auto model = models(n);
    check_model_scale(*model, eps, params.check_mesh);
    auto table = std::make_shared<const GroupImageTable>(sys, model->coords(), n, params.group_budget);
    const auto s = maximal_separated(GroupMetric(table), eps).centers.size();
    e.counts.push_back({n, static_cast<double>(s), 0.0, true, 1});
  }
  fit_tail(e, params.tail);
  return e;
}

/// GLW maximal separated count at one depth.
inline std::size_t glw_separated_count(const SemigroupSystem& sys, const FinModel& model, double eps, std::size_t n,
                                       double budget = 1e6) {
  auto table = std::make_shared<const GroupImageTable>(sys, model.coords(), n, budget);
  return maximal_separated(GroupMetric(table), eps).centers.size();
}

}  // namespace mdim
