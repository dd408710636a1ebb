#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdim/config.hpp"
#include "mdim/entropy.hpp"
#include "mdim/error.hpp"
#include "mdim/measure.hpp"
#include "mdim/measure_sample.hpp"
#include "mdim/mdim.hpp"
#include "mdim/version.hpp"

namespace mdim {

struct ComparatorEntry {
  ComparatorReport report;
  bool gating = true;
};

struct RunReport {
  std::string version = kVersion;
  std::string config_echo;
  std::vector<std::string> plan_notes;
  std::vector<EntropyCurve> curves;
  std::vector<MdimEstimate> estimates;
  std::vector<ComparatorEntry> comparators;
  std::optional<HomogeneityReport> homogeneity;
  std::optional<GHomogeneityReport> g_homogeneity;
  /// "<estimator or comparator>: <message>" for every step that failed.
  std::vector<std::string> errors;
  /// Not written to the report files, which must not depend on timing.
  double wall_seconds = 0.0;

  bool success() const {
    if (!errors.empty()) return false;
    for (const auto& c : comparators) {
      if (c.gating && c.report.verdict != Verdict::Pass) return false;
    }
    return true;
  }
};

/// The reference measure of the measure-lab diagnostics.
inline MeasureSample reference_measure(const ExperimentConfig& cfg, const SpaceDescriptor& space) {
  if (cfg.reference == "density2x") {
    require(space.is_interval(), "the density2x reference lives on an interval", ErrorKind::Config);
    const auto [lo, hi] = space.as_interval();
    return quantile_sample(space, cfg.sample_size, [lo = lo, hi = hi](double u) { return lo + (hi - lo) * std::sqrt(u); },
                           "density2x");
  }
  return uniform_grid(space, cfg.sample_size);
}

inline std::vector<MeasureCandidate> make_candidates(const ExperimentConfig& cfg, const SemigroupSystem& sys,
                                                     const RandomWalk& walk) {
  std::vector<MeasureCandidate> out;
  const auto seed = cfg.seed.value_or(0);
  for (const auto& c : cfg.candidates) {
    if (c == "uniform") {
      out.push_back(uniform_candidate());
    } else if (c == "atom") {
      const auto coords = cfg.atom;
      out.push_back(atom_candidate([coords](const SpaceDescriptor& s) {
        if (coords.empty()) return s.origin();
        Point p(coords);
        s.validate(p);
        return p;
      }));
    } else if (c == "random") {
      const auto m = cfg.sample_size;
      out.push_back(sample_candidate("random", [m, seed](const SpaceDescriptor& s) {
        return uniform_random(s, m, substream(seed, "candidate_sample"));
      }));
    } else if (c == "orbit") {
      const auto len = cfg.orbit_length;
      const auto gens = sys.generators();
      const auto names = sys.names();
      const auto probs = walk.probs();
      out.push_back(sample_candidate("orbit", [len, gens, names, probs, seed](const SpaceDescriptor& s) {
        const SemigroupSystem local(s, gens, names);
        const auto x0 = sample_points(s, 1, substream(seed, "orbit_start")).front();
        return orbit_empirical(local, RandomWalk(probs), x0, len, seed);
      }));
    }
  }
  return out;
}

/// Evenly spaced atoms of the sample, first and last included.
inline std::vector<Point> support_points(const MeasureSample& nu, std::size_t count) {
  std::vector<Point> out;
  const std::size_t m = nu.size();
  const std::size_t k = std::min(count, m);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = k == 1 ? 0 : i * (m - 1) / (k - 1);
    out.push_back(nu.point(idx));
  }
  return out;
}

/// Runs the selected estimators and comparators. Failures are recorded per step; the report is
/// always returned so that partial results can be written.
inline RunReport run_experiment(const ExperimentConfig& cfg, unsigned workers = 1, bool use_cache = true) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config_echo = canonical_config(cfg);
  const SemigroupSystem sys = cfg.make_system();
  const RandomWalk walk = cfg.make_walk();
  const SweepSpec sweep = cfg.make_sweep();
  OrbitCache cache;
  EstimatorParams params = cfg.make_params(workers);
  params.cache = use_cache ? &cache : nullptr;
  const Tolerances tol = cfg.make_tolerances();

  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      rep.errors.push_back(name + ": " + e.what());
    }
  };

  std::optional<std::vector<ScalePlan>> walk_plans, group_plans;
  auto get_walk_plans = [&]() -> const std::vector<ScalePlan>& {
    if (!walk_plans) {
      walk_plans = plan_sweep(sys, sweep, PlanMode::Walk);
      for (const auto& p : *walk_plans) {
        rep.plan_notes.push_back("walk eps " + detail::fmt(p.eps) + ": n " + std::to_string(p.range.n_min) + ".." +
                                 std::to_string(p.range.n_max) + ", " + p.note);
      }
    }
    return *walk_plans;
  };
  std::optional<EntropyCurve> glw;
  auto get_glw = [&]() -> const EntropyCurve& {
    if (!glw) {
      group_plans = plan_sweep(sys, sweep, PlanMode::Group);
      for (const auto& p : *group_plans) {
        rep.plan_notes.push_back("glw eps " + detail::fmt(p.eps) + ": n " + std::to_string(p.range.n_min) + ".." +
                                 std::to_string(p.range.n_max) + ", " + p.note);
      }
      glw = glw_curve(*group_plans, params);
    }
    return *glw;
  };
  auto add_curve = [&](const EntropyCurve& c) {
    rep.curves.push_back(c);
    if (c.entries.size() >= 3) rep.estimates.push_back(mdim_from_curve(c));
  };

  for (const auto& e : cfg.estimators) {
    if (e == "walk") guarded("estimator walk", [&] { add_curve(walk_curve(get_walk_plans(), walk, params)); });
    if (e == "glw") guarded("estimator glw", [&] { add_curve(get_glw()); });
    if (e == "box") {
      guarded("estimator box", [&] {
        const auto model = FinModel::grid(sys.space(), cfg.eps_grid.back() / 4.0, cfg.point_budget);
        const auto box = box_dimension_set(model, cfg.eps_grid);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < box.eps.size(); ++i) pts.emplace_back(box.eps[i], box.log_count[i]);
        rep.estimates.push_back(mdim_from_points("box_dimension", pts));
      });
    }
  }

  std::optional<MeasureSample> reference;
  auto get_reference = [&]() -> const MeasureSample& {
    if (!reference) reference = reference_measure(cfg, sys.space());
    return *reference;
  };

  if (cfg.homogeneity) {
    guarded("homogeneity", [&] {
      const auto& nu = get_reference();
      rep.homogeneity = homogeneity_check(nu, cfg.eps_grid, support_points(nu, 64), cfg.L_max);
    });
  }

  const auto xs_measure = [&] { return sample_points(sys.space(), cfg.x_count, substream(params.seed, "measure_points")); };
  auto measure_side = [&] {
    MeasureSide side;
    side.xs = xs_measure();
    side.eps_grid = cfg.eps_grid;
    side.range = {0, cfg.group_depth};
    side.budget = cfg.group_budget;
    side.tail = cfg.tail;
    return side;
  };

  for (const auto& c : cfg.comparators) {
    const std::string name = "comparator " + c;
    auto push = [&](ComparatorReport r) { rep.comparators.push_back({std::move(r), cfg.gates(c)}); };
    if (c == "A") {
      guarded(name, [&] {
        ThmAOptions opt;
        opt.radii = cfg.radii;
        opt.x_count = cfg.x_count;
        opt.tol = tol;
        push(verify_thmA(get_walk_plans(), walk, params, opt));
      });
    } else if (c == "B") {
      guarded(name, [&] {
        ThmBOptions opt;
        opt.deltas = cfg.deltas;
        opt.tol = tol;
        push(verify_thmB(get_walk_plans(), walk, make_candidates(cfg, sys, walk), params, opt));
      });
    } else if (c == "C") {
      guarded(name, [&] {
        require(!sys.space().is_sequence(), "the cover identity check needs an interval or torus space", ErrorKind::Config);
        const double span = sys.space().is_interval() ? sys.space().as_interval().hi - sys.space().as_interval().lo : 1.0;
        const auto cover = ball_cover(sys.space(), cfg.cover_radius, span / static_cast<double>(cfg.cover_balls));
        const auto model = FinModel::grid(sys.space(), span / static_cast<double>(cfg.cover_points), cfg.point_budget);
        ThmCOptions opt;
        opt.budget = cfg.skew_budget;
        opt.cover_budget = cfg.cover_budget;
        opt.rate_tol = cfg.rate_rel;
        push(verify_thmC(sys, cover, cfg.cover_n, model, opt));
      });
    } else if (c == "D") {
      guarded(name, [&] {
        ThmDOptions opt;
        opt.deltas = cfg.deltas;
        opt.tol = tol;
        push(verify_thmD(sys, walk, make_candidates(cfg, sys, walk), sweep, params, opt));
      });
    } else if (c == "E") {
      guarded(name, [&] {
        ThmEOptions opt;
        opt.s_grid = cfg.s_grid;
        opt.tol = cfg.slope_tol;
        push(verify_thmE(sys, get_reference(), measure_side(), get_glw(), opt));
      });
    } else if (c == "F") {
      guarded(name, [&] {
        const auto side = measure_side();
        rep.g_homogeneity =
            g_homogeneity_check(sys, get_reference(), cfg.eps_grid, cfg.group_depth, cfg.ratios, cfg.group_budget, side.xs, cfg.c_max);
        ThmFOptions opt;
        opt.s_list = cfg.s_grid;
        opt.tol = cfg.slope_tol;
        push(verify_thmF(sys, get_reference(), side, *rep.g_homogeneity, get_glw(), opt));
      });
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace mdim
