#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdim/entropy.hpp"
#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"
#include "mdim/mdim_fit.hpp"
#include "mdim/measure.hpp"
#include "mdim/measure_sample.hpp"
#include "mdim/semigroup.hpp"
#include "mdim/space.hpp"

namespace mdim {

// ---------------------------------------------------------------------------
// Sweep planning

struct SweepSpec {
  std::vector<double> eps_grid;
  std::size_t n_cap = 12;
  std::size_t tail = 3;
  /// Largest model at the deepest n.
  std::size_t point_budget = std::size_t{1} << 20;
  /// Grid models use spacing eps / (resolution * Lip^n_max).
  double resolution = 16.0;
  /// Sequence spaces: truncation chosen per eps as n_max + 1 + K'(eps).
  bool adaptive_depth = true;
  /// Group mode: cap on (group elements + 1) * model points.
  double group_points = double(std::size_t{1} << 24);
  double group_budget = 1e6;
};

enum class PlanMode { Walk, Group };

struct ScalePlan {
  double eps = 0.0;
  NRange range;
  std::shared_ptr<const SemigroupSystem> system;
  ModelSource models;
  /// Model size at n_max.
  std::size_t points = 0;
  std::string note;
};

namespace detail {

inline double net_size(const SpaceDescriptor& space, double spacing) {
  std::vector<AxisLattice> axes;
  double radius = 0.0;
  net_axes(space, spacing, axes, radius);
  double t = 1.0;
  for (const auto& a : axes) t *= static_cast<double>(a.values.size());
  return t;
}

inline double node_count(std::size_t p, std::size_t n) { return group_word_count(p, n) + 1.0; }

inline ScalePlan plan_grid(const SemigroupSystem& sys, double eps, const SweepSpec& spec, PlanMode mode) {
  const double lip = std::max(1.0, sys.max_lipschitz());
  auto spacing = [&](std::size_t n) { return eps / (spec.resolution * std::pow(lip, static_cast<double>(n))); };
  auto fits = [&](std::size_t n) {
    const double m = net_size(sys.space(), spacing(n));
    if (m > static_cast<double>(spec.point_budget)) return false;
    if (mode == PlanMode::Group) {
      const double nodes = node_count(sys.arity(), n);
      if (nodes - 1.0 > spec.group_budget || nodes * m > spec.group_points) return false;
    }
    return true;
  };
  if (!fits(0)) {
    throw BudgetError("no depth fits the point budget at eps " + std::to_string(eps),
                      net_size(sys.space(), spacing(0)), static_cast<double>(spec.point_budget), 0);
  }
  std::size_t n_max = 0;
  while (n_max < spec.n_cap && fits(n_max + 1)) ++n_max;
  ScalePlan plan;
  plan.eps = eps;
  plan.range = {n_max + 1 >= spec.tail ? n_max + 1 - spec.tail : 0, n_max};
  plan.system = std::make_shared<const SemigroupSystem>(sys);
  auto model = std::make_shared<const FinModel>(FinModel::grid(sys.space(), spacing(n_max), spec.point_budget));
  plan.points = model->size();
  plan.models = fixed_model(std::move(model));
  std::ostringstream os;
  os << "grid spacing " << spacing(n_max) << ", " << plan.points << " points";
  plan.note = os.str();
  return plan;
}

struct LatticeSource {
  LatticeSource(SpaceDescriptor s, double e, std::size_t c, std::size_t k) : space(std::move(s)), eps(e), cap(c), deep_keep(k) {}

  SpaceDescriptor space;
  double eps;
  std::size_t cap;
  std::size_t deep_keep;
  std::mutex mu;
  std::map<std::size_t, std::shared_ptr<const FinModel>> memo;

  std::shared_ptr<const FinModel> get(std::size_t n) {
    std::lock_guard lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    auto m = std::make_shared<const FinModel>(separation_lattice(space, eps, n, cap, deep_keep));
    memo.emplace(n, m);
    return m;
  }
};

inline ScalePlan plan_lattice(const SemigroupSystem& sys, double eps, const SweepSpec& spec, PlanMode mode) {
  const auto& seq = sys.space().as_sequence();
  const auto& base = *seq.base;
  const double cap = static_cast<double>(spec.point_budget);
  std::size_t tail_depth = spec.adaptive_depth ? lattice_tail_depth(base, seq.ratio, eps) : 0;
  auto space_for = [&](std::size_t n_max) {
    return spec.adaptive_depth ? SpaceDescriptor::sequence(base, static_cast<int>(n_max + 1 + tail_depth), seq.ratio)
                               : sys.space();
  };
  auto fits = [&](std::size_t n) {
    if (separation_lattice_size(space_for(n), eps, n, 0) > cap) return false;
    if (mode == PlanMode::Group) {
      const double nodes = node_count(sys.arity(), n);
      if (nodes - 1.0 > spec.group_budget || nodes * separation_lattice_size(space_for(n), eps, n, 0) > spec.group_points) {
        return false;
      }
    }
    return true;
  };
  if (!fits(0)) {
    throw BudgetError("separation lattice does not fit the point budget at eps " + std::to_string(eps),
                      separation_lattice_size(space_for(0), eps, 0, 0), cap, 0, ErrorKind::CapExceeded);
  }
  std::size_t n_max = 0;
  while (n_max < spec.n_cap && fits(n_max + 1)) ++n_max;
  const SpaceDescriptor space = space_for(n_max);
  // one deep-coordinate count for every n, so the constant factor does not drift with n
  std::size_t keep = space.as_sequence().depth;
  while (keep > 0) {
    const double size = separation_lattice_size(space, eps, n_max, keep);
    const double nodes = mode == PlanMode::Group ? node_count(sys.arity(), n_max) : 1.0;
    if (size <= cap && nodes * size <= spec.group_points) break;
    --keep;
  }
  std::vector<GeneratorMap> gens = sys.generators();
  ScalePlan plan;
  plan.eps = eps;
  plan.range = {n_max + 1 >= spec.tail ? n_max + 1 - spec.tail : 0, n_max};
  plan.system = std::make_shared<const SemigroupSystem>(space, gens, sys.names());
  auto src = std::make_shared<LatticeSource>(space, eps, spec.point_budget, keep);
  plan.points = static_cast<std::size_t>(separation_lattice_size(space, eps, n_max, keep));
  plan.models = [src](std::size_t n) { return src->get(n); };
  std::ostringstream os;
  os << "separation lattice, K " << space.as_sequence().depth << ", " << keep << " deep coordinates, " << plan.points
     << " points at n " << n_max;
  plan.note = os.str();
  return plan;
}

}  // namespace detail

/// Model and n window for one scale. Interval and torus systems get one grid fine enough for
/// the deepest n; sequence systems get a separation lattice per n.
inline ScalePlan plan_scale(const SemigroupSystem& sys, double eps, const SweepSpec& spec, PlanMode mode = PlanMode::Walk) {
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  require(spec.tail >= 2, "tail window must hold at least 2 points", ErrorKind::DegenerateFit);
  require(spec.point_budget >= 1 && spec.resolution > 0.0, "point budget and resolution must be positive");
  if (sys.space().is_sequence()) return detail::plan_lattice(sys, eps, spec, mode);
  return detail::plan_grid(sys, eps, spec, mode);
}

inline std::vector<ScalePlan> plan_sweep(const SemigroupSystem& sys, const SweepSpec& spec, PlanMode mode = PlanMode::Walk) {
  check_eps_grid(spec.eps_grid, 1);
  std::vector<ScalePlan> plans;
  for (double e : spec.eps_grid) plans.push_back(plan_scale(sys, e, spec, mode));
  return plans;
}

inline EntropyCurve walk_curve(const std::vector<ScalePlan>& plans, const RandomWalk& walk, const EstimatorParams& params,
                               std::string name = "walk") {
  EntropyCurve c{std::move(name), false, {}};
  for (const auto& p : plans) c.entries.push_back(walk_entropy_at_scale(*p.system, walk, p.eps, p.range, params, p.models));
  c.validate();
  return c;
}

inline EntropyCurve glw_curve(const std::vector<ScalePlan>& plans, const EstimatorParams& params) {
  EntropyCurve c{"glw", true, {}};
  for (const auto& p : plans) c.entries.push_back(glw_entropy_at_scale(*p.system, p.eps, p.range, params, p.models));
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Comparators

enum class Verdict { Pass, Fail, NoVerdict };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NoVerdict: return "NO-VERDICT";
  }
  return "?";
}

enum class Relation { LessEq, Equal, GreaterEq };

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::Equal: return "==";
    case Relation::GreaterEq: return ">=";
  }
  return "?";
}

inline bool relation_holds(Relation r, double left, double right, double tol) {
  switch (r) {
    case Relation::LessEq: return left <= right + tol;
    case Relation::Equal: return std::fabs(left - right) <= tol;
    case Relation::GreaterEq: return left >= right - tol;
  }
  return false;
}

struct ComparatorRow {
  std::string check;
  double eps = 0.0;  // 0 for grid-level rows
  long n = -1;       // -1 unless the row is per n
  double left = 0.0;
  double right = 0.0;
  Relation relation = Relation::LessEq;
  double tolerance = 0.0;
  bool gating = true;
  bool ok = false;

  double gap() const { return left - right; }
};

struct ComparatorReport {
  std::string theorem;
  std::vector<ComparatorRow> rows;
  Verdict verdict = Verdict::NoVerdict;
  bool hypothesis_established = true;
  std::vector<std::string> notes;
  std::vector<EntropyCurve> curves;
  std::vector<MdimEstimate> estimates;

  ComparatorRow& add(std::string check, double eps, long n, double left, double right, Relation rel, double tol,
                     bool gating = true) {
    ComparatorRow r{std::move(check), eps, n, left, right, rel, tol, gating, false};
    r.ok = relation_holds(rel, left, right, tol);
    rows.push_back(std::move(r));
    return rows.back();
  }

  /// Recomputes every row and the verdict from the stored values.
  void finalize() {
    for (auto& r : rows) r.ok = relation_holds(r.relation, r.left, r.right, r.tolerance);
    if (!hypothesis_established) {
      verdict = Verdict::NoVerdict;
      return;
    }
    bool any = false, all = true;
    for (const auto& r : rows) {
      if (!r.gating) continue;
      any = true;
      all = all && r.ok;
    }
    verdict = !any ? Verdict::NoVerdict : (all ? Verdict::Pass : Verdict::Fail);
  }

  const MdimEstimate* estimate(const std::string& name) const {
    for (const auto& e : estimates) {
      if (e.estimator == name) return &e;
    }
    return nullptr;
  }
};

struct Tolerances {
  double rate_rel = 0.1;
  double rate_abs = 0.05;
  double slope = 0.15;

  double rate(double right) const { return rate_rel * std::fabs(right) + rate_abs; }
};

/// A candidate measure: weights on whatever model an estimator uses.
struct MeasureCandidate {
  std::string name;
  WeightSource weights;
};

inline MeasureCandidate uniform_candidate() { return {"uniform", uniform_weights()}; }

/// A sample built for the model's own space, then projected onto the model.
inline MeasureCandidate sample_candidate(std::string name, std::function<MeasureSample(const SpaceDescriptor&)> make) {
  return {std::move(name), [make = std::move(make)](const FinModel& model) {
            const auto nu = make(model.space());
            nu.validate();
            return project_weights(nu, model);
          }};
}

inline MeasureCandidate atom_candidate(std::function<Point(const SpaceDescriptor&)> where, std::string name = "atom") {
  return sample_candidate(std::move(name), [where = std::move(where)](const SpaceDescriptor& s) { return point_mass(s, where(s)); });
}

namespace detail {

inline std::optional<MdimEstimate> try_mdim(const std::string& name, const std::vector<std::pair<double, double>>& pts,
                                            ComparatorReport& rep) {
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j) seen = seen || pts[j].first == pts[i].first;
    if (!seen) ++distinct;
  }
  if (distinct < 3) {
    rep.notes.push_back(name + ": fewer than 3 grid points, no slope");
    return std::nullopt;
  }
  auto m = mdim_from_points(name, pts);
  rep.estimates.push_back(m);
  return m;
}

inline std::vector<std::pair<double, double>> curve_points(const EntropyCurve& c) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : c.entries) pts.emplace_back(e.eps, e.growth_rate);
  return pts;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

struct ThmAOptions {
  std::vector<double> radii{0.5, 0.25, 0.1};
  std::size_t x_count = 20;
  Tolerances tol;
};

/// Local entropy supremum over sampled points against the walk entropy, per scale and in slope.
inline ComparatorReport verify_thmA(const std::vector<ScalePlan>& plans, const RandomWalk& walk,
                                    const EstimatorParams& params, const ThmAOptions& opt = {}) {
  ComparatorReport rep;
  rep.theorem = "A";
  EntropyCurve right_curve{"walk", false, {}};
  EntropyCurve left_curve{"local_sup", false, {}};
  for (const auto& plan : plans) {
    const auto xs = sample_points(plan.system->space(), opt.x_count, substream(params.seed, "local_points"));
    const auto batch = local_entropy_batch(*plan.system, walk, xs, plan.eps, opt.radii, plan.range, params, plan.models);
    std::size_t best = 0;
    for (std::size_t a = 1; a < batch.points.size(); ++a) {
      if (batch.points[a].value > batch.points[best].value) best = a;
    }
    const auto& le = batch.points[best];
    for (std::size_t i = 0; i < batch.walk.counts.size(); ++i) {
      double worst = 0.0;
      for (const auto& pt : batch.points) {
        for (std::size_t r = 0; r < pt.per_radius.size(); ++r) {
          if (!pt.skipped[r]) worst = std::max(worst, pt.per_radius[r].counts[i].mean);
        }
      }
      rep.add("count", plan.eps, static_cast<long>(batch.walk.counts[i].n), worst, batch.walk.counts[i].mean,
              Relation::LessEq, 0.0);
    }
    const double h = batch.walk.growth_rate;
    rep.add("rate", plan.eps, -1, le.value, h, Relation::LessEq, opt.tol.rate(h));
    rep.add("rate_equality", plan.eps, -1, le.value, h, Relation::Equal, opt.tol.rate(h), false);
    right_curve.entries.push_back(batch.walk);
    // the minimizing radius of the maximizing point
    std::size_t arg = 0;
    bool found = false;
    for (std::size_t r = 0; r < le.per_radius.size(); ++r) {
      if (le.skipped[r]) continue;
      if (!found || le.per_radius[r].growth_rate < le.per_radius[arg].growth_rate) arg = r;
      found = true;
    }
    left_curve.entries.push_back(le.per_radius[arg]);
  }
  const auto lm = detail::try_mdim("local_sup", detail::curve_points(left_curve), rep);
  const auto rm = detail::try_mdim("walk", detail::curve_points(right_curve), rep);
  if (lm && rm) rep.add("slope", 0.0, -1, lm->slope, rm->slope, Relation::Equal, opt.tol.slope);
  rep.curves.push_back(std::move(right_curve));
  rep.curves.push_back(std::move(left_curve));
  rep.finalize();
  return rep;
}

struct ThmBOptions {
  std::vector<double> deltas{0.1};
  Tolerances tol;
  /// Katok slope <= action slope + slope_slack.
  double slope_slack = 0.05;
  double equality_tol = 0.2;
  /// Finite alphabets make the walk homogeneous, so equality is expected.
  bool expect_equality = true;
};

/// Katok entropies of the candidates against the walk entropy.
inline ComparatorReport verify_thmB(const std::vector<ScalePlan>& plans, const RandomWalk& walk,
                                    const std::vector<MeasureCandidate>& candidates, const EstimatorParams& params,
                                    const ThmBOptions& opt = {}) {
  require(!candidates.empty(), "Katok comparison needs at least one candidate measure");
  ComparatorReport rep;
  rep.theorem = "B";
  std::vector<WeightSource> sources;
  for (const auto& c : candidates) sources.push_back(c.weights);
  const std::size_t D = opt.deltas.size();
  EntropyCurve right_curve{"walk", false, {}};
  std::vector<EntropyCurve> katok(candidates.size() * D);
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t d = 0; d < D; ++d) katok[a * D + d].estimator = "katok:" + candidates[a].name + ":" + detail::fmt(opt.deltas[d]);
  }
  for (const auto& plan : plans) {
    const auto batch = katok_batch(*plan.system, walk, sources, plan.eps, opt.deltas, plan.range, params, plan.models);
    rep.add("count_words", plan.eps, -1, batch.count_dominated ? 0.0 : 1.0, 0.0, Relation::LessEq, 0.0);
    for (std::size_t i = 0; i < batch.walk.counts.size(); ++i) {
      double worst = 0.0;
      for (const auto& per : batch.katok) {
        for (const auto& e : per) worst = std::max(worst, e.counts[i].mean);
      }
      rep.add("count", plan.eps, static_cast<long>(batch.walk.counts[i].n), worst, batch.walk.counts[i].mean,
              Relation::LessEq, 0.0);
    }
    const double h = batch.walk.growth_rate;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      for (std::size_t d = 0; d < D; ++d) {
        const auto& e = batch.katok[a][d];
        rep.add("rate:" + candidates[a].name + ":" + detail::fmt(opt.deltas[d]), plan.eps, -1, e.growth_rate, h,
                Relation::LessEq, opt.tol.rate(h));
        katok[a * D + d].entries.push_back(e);
      }
    }
    right_curve.entries.push_back(batch.walk);
  }
  const auto rm = detail::try_mdim("walk", detail::curve_points(right_curve), rep);
  std::optional<double> best;
  for (const auto& c : katok) {
    const auto m = detail::try_mdim(c.estimator, detail::curve_points(c), rep);
    if (m) best = best ? std::max(*best, m->slope) : m->slope;
  }
  if (rm && best) {
    rep.add("slope", 0.0, -1, *best, rm->slope, Relation::LessEq, opt.slope_slack);
    rep.add("slope_equality", 0.0, -1, *best, rm->slope, Relation::Equal, opt.equality_tol, opt.expect_equality);
  }
  rep.curves.push_back(std::move(right_curve));
  for (auto& c : katok) rep.curves.push_back(std::move(c));
  rep.finalize();
  return rep;
}

struct ThmCOptions {
  double budget = 1e6;
  std::size_t cover_budget = std::size_t{1} << 24;
  double rate_tol = 0.1;
};

/// Per-word cover counts summed over all words against the skew-product count, and the
/// log p offset between their growth rates.
inline ComparatorReport verify_thmC(const SemigroupSystem& sys, const CoverSpec& cover, const std::vector<std::size_t>& n_list,
                                    const FinModel& model, const ThmCOptions& opt = {}) {
  require(!n_list.empty(), "identity check needs at least one n");
  ComparatorReport rep;
  rep.theorem = "C";
  const double logp = std::log(static_cast<double>(sys.arity()));
  ScaleEstimate avg, skew;
  avg.eps = skew.eps = cover.diameter();
  for (auto n : n_list) {
    const auto sc = skew_cover_count(sys, cover, n, model, opt.budget, opt.cover_budget);
    rep.add("identity", 0.0, static_cast<long>(n), static_cast<double>(sc.total), static_cast<double>(sc.skew),
            Relation::Equal, 0.0);
    const double pn = word_count(sys.arity(), n);
    avg.counts.push_back({n, static_cast<double>(sc.total) / pn, 0.0, true, static_cast<std::size_t>(pn)});
    skew.counts.push_back({n, static_cast<double>(sc.skew), 0.0, true, 1});
  }
  if (n_list.size() >= 2) {
    fit_tail(avg, n_list.size());
    fit_tail(skew, n_list.size());
    rep.add("rate_offset", 0.0, -1, avg.slope, skew.slope - logp, Relation::Equal, opt.rate_tol);
  } else {
    rep.notes.push_back("one n only: no growth-rate check");
  }
  rep.curves.push_back({"cover_average", false, {avg}});
  rep.curves.push_back({"skew_cover", false, {skew}});
  rep.finalize();
  return rep;
}

struct ThmDOptions {
  /// Ball covers of radius eps/2 on lattices with these spacings (fractions of eps); the
  /// Lebesgue number of such a cover is at least eps (1/2 - spacing/2).
  std::vector<double> spacings{0.75, 0.5};
  std::vector<double> deltas{0.1, 0.05};
  Tolerances tol;
  /// The separated side is evaluated at eps / scale_down.
  double scale_down = 8.0;
};

/// Shapira entropies over small-diameter ball covers against the walk entropy at eps / 8.
inline ComparatorReport verify_thmD(const SemigroupSystem& sys, const RandomWalk& walk,
                                    const std::vector<MeasureCandidate>& candidates, const SweepSpec& spec,
                                    const EstimatorParams& params, const ThmDOptions& opt = {}) {
  require(!candidates.empty(), "Shapira comparison needs at least one candidate measure");
  ComparatorReport rep;
  rep.theorem = "D";
  std::vector<WeightSource> sources;
  for (const auto& c : candidates) sources.push_back(c.weights);
  EntropyCurve left_curve{"shapira_sup", false, {}};
  EntropyCurve right_curve{"walk_fine", false, {}};
  std::vector<std::pair<double, double>> left_pts, right_pts;
  for (double eps : spec.eps_grid) {
    const auto plan = plan_scale(sys, eps / opt.scale_down, spec);
    const auto right = walk_entropy_at_scale(*plan.system, walk, plan.eps, plan.range, params, plan.models);
    std::vector<double> per_candidate(candidates.size(), std::numeric_limits<double>::infinity());
    std::vector<ScaleEstimate> per_candidate_est(candidates.size());
    bool dominated = true;
    for (double s : opt.spacings) {
      const auto cover = ball_cover(plan.system->space(), eps / 2.0, s * eps);
      const auto sb = shapira_batch(*plan.system, walk, cover, sources, opt.deltas, plan.range, params, plan.models);
      dominated = dominated && sb.count_dominated;
      for (std::size_t a = 0; a < candidates.size(); ++a) {
        const auto& r = sb.per_measure[a];
        rep.add("monotone:" + candidates[a].name, eps, -1, r.monotone ? 1.0 : 0.0, 1.0, Relation::Equal, 0.0, false);
        if (r.value < per_candidate[a]) {
          per_candidate[a] = r.value;
          per_candidate_est[a] = r.per_delta.back();
        }
      }
    }
    rep.add("count_words", eps, -1, dominated ? 0.0 : 1.0, 0.0, Relation::LessEq, 0.0);
    const auto best = static_cast<std::size_t>(std::max_element(per_candidate.begin(), per_candidate.end()) - per_candidate.begin());
    const double left = per_candidate[best];
    rep.add("rate", eps, -1, left, right.growth_rate, Relation::LessEq, opt.tol.rate(right.growth_rate));
    auto le = per_candidate_est[best];
    le.eps = eps;
    left_curve.entries.push_back(le);
    auto re = right;
    re.eps = eps;
    right_curve.entries.push_back(re);
    left_pts.emplace_back(eps, left);
    right_pts.emplace_back(eps, right.growth_rate);
  }
  const auto lm = detail::try_mdim("shapira_sup", left_pts, rep);
  const auto rm = detail::try_mdim("walk_fine", right_pts, rep);
  if (lm && rm) rep.add("slope", 0.0, -1, lm->slope, rm->slope, Relation::Equal, opt.tol.slope);
  rep.curves.push_back(std::move(left_curve));
  rep.curves.push_back(std::move(right_curve));
  rep.finalize();
  return rep;
}

/// True when every generator has an inverse in the list (rotations, unit-slope affine maps,
/// the identity).
inline bool inverse_closed(const SemigroupSystem& sys) {
  auto same = [](double a, double b) { return circle_distance(wrap_unit(a), wrap_unit(b)) <= 1e-12; };
  for (const auto& g : sys.generators()) {
    using K = GeneratorMap::Kind;
    if (g.kind() == K::Identity) continue;
    const bool rot = g.kind() == K::Rotation || (g.kind() == K::AffineMod1 && g.slope() == 1);
    if (!rot) return false;
    bool found = false;
    for (const auto& h : sys.generators()) {
      const bool hrot = h.kind() == K::Rotation || (h.kind() == K::AffineMod1 && h.slope() == 1);
      if (!hrot || h.offsets().size() != g.offsets().size()) continue;
      bool inv = true;
      for (std::size_t i = 0; i < g.offsets().size(); ++i) inv = inv && same(g.offsets()[i], -h.offsets()[i]);
      found = found || inv;
    }
    if (!found) return false;
  }
  return true;
}

struct MeasureSide {
  std::vector<Point> xs;
  std::vector<double> eps_grid;
  NRange range;
  double budget = 1e6;
  std::size_t tail = 3;
};

struct ThmEOptions {
  std::vector<double> s_grid{0.0, 0.5, 1.0};
  double tol = 0.15;
};

/// GLW slope against the largest local upper measure slope, for groups on tori.
inline ComparatorReport verify_thmE(const SemigroupSystem& sys, const MeasureSample& nu, const MeasureSide& side,
                                    const EntropyCurve& glw, const ThmEOptions& opt = {}) {
  ComparatorReport rep;
  rep.theorem = "E";
  if (!sys.space().is_torus() || !inverse_closed(sys)) {
    rep.hypothesis_established = false;
    rep.notes.push_back("hypothesis not established: generators must act on a torus and be closed under inverses");
    rep.finalize();
    return rep;
  }
  require(!side.xs.empty(), "measure side needs sample points");
  double hyp = 0.0;
  for (std::size_t k = 0; k < side.xs.size(); ++k) {
    auto m = measure_mdim(sys, nu, side.xs[k], side.eps_grid, side.range, side.budget, EntropyMode::Upper, side.tail);
    m.estimator = "measure_upper:x" + std::to_string(k);
    hyp = k == 0 ? m.slope : std::max(hyp, m.slope);
    rep.estimates.push_back(std::move(m));
  }
  auto g = mdim_from_curve(glw);
  const double conclusion = g.slope;
  rep.estimates.push_back(std::move(g));
  bool any = false;
  for (double s : opt.s_grid) {
    if (s + 1e-12 < hyp) continue;
    rep.add("s=" + detail::fmt(s), 0.0, -1, conclusion, s, Relation::LessEq, opt.tol);
    any = true;
  }
  if (!any) rep.add("s=hypothesis", 0.0, -1, conclusion, hyp, Relation::LessEq, opt.tol);
  rep.curves.push_back(glw);
  rep.finalize();
  return rep;
}

struct ThmFOptions {
  std::vector<double> s_list{0.0, 0.5, 1.0};
  double tol = 0.15;
};

/// (a) strongly G-homogeneous measures: GLW slope equals the measure slope; (b) a lower
/// measure slope >= s everywhere on the sample forces GLW slope >= s.
inline ComparatorReport verify_thmF(const SemigroupSystem& sys, const MeasureSample& nu, const MeasureSide& side,
                                    const GHomogeneityReport& ghom, const EntropyCurve& glw, const ThmFOptions& opt = {}) {
  ComparatorReport rep;
  rep.theorem = "F";
  if (!ghom.strong || ghom.degenerate) {
    rep.hypothesis_established = false;
    rep.notes.push_back("hypothesis not established: measure did not pass the strong G-homogeneity check");
    rep.finalize();
    return rep;
  }
  require(!side.xs.empty(), "measure side needs sample points");
  auto g = mdim_from_curve(glw);
  const double glw_slope = g.slope;
  rep.estimates.push_back(std::move(g));
  double upper = 0.0, lower = 0.0;
  for (std::size_t k = 0; k < side.xs.size(); ++k) {
    auto mu = measure_mdim(sys, nu, side.xs[k], side.eps_grid, side.range, side.budget, EntropyMode::Upper, side.tail);
    auto ml = measure_mdim(sys, nu, side.xs[k], side.eps_grid, side.range, side.budget, EntropyMode::Lower, side.tail);
    upper = k == 0 ? mu.slope : std::max(upper, mu.slope);
    lower = k == 0 ? ml.slope : std::min(lower, ml.slope);
    mu.estimator = "measure_upper:x" + std::to_string(k);
    ml.estimator = "measure_lower:x" + std::to_string(k);
    rep.estimates.push_back(std::move(mu));
    rep.estimates.push_back(std::move(ml));
  }
  rep.add("a:slope", 0.0, -1, glw_slope, upper, Relation::Equal, opt.tol);
  for (double s : opt.s_list) {
    if (lower + 1e-12 >= s) {
      rep.add("b:s=" + detail::fmt(s), 0.0, -1, glw_slope, s, Relation::GreaterEq, opt.tol);
    } else {
      rep.add("b:s=" + detail::fmt(s) + ":vacuous", 0.0, -1, lower, s, Relation::LessEq, 0.0, false);
    }
  }
  rep.curves.push_back(glw);
  rep.finalize();
  return rep;
}

}  // namespace mdim
