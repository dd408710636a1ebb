#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"
#include "mdim/rng.hpp"
#include "mdim/semigroup.hpp"
#include "mdim/space.hpp"

namespace mdim {

/// Weighted finite point set standing in for a Borel probability measure.
struct MeasureSample {
  SpaceDescriptor space;
  std::vector<double> coords;  // row-major, space.point_dim() per point
  std::vector<double> weights;
  std::string provenance;

  std::size_t size() const { return weights.size(); }
  const double* at(std::size_t i) const { return coords.data() + i * space.point_dim(); }
  Point point(std::size_t i) const { return Point(std::vector<double>(at(i), at(i) + space.point_dim())); }

  void validate() const {
    const std::size_t d = space.point_dim();
    require(!weights.empty(), "measure sample is empty");
    require(coords.size() == weights.size() * d, "measure sample coordinates do not match its weights",
            ErrorKind::DimensionMismatch);
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      require(std::isfinite(weights[i]) && weights[i] > 0.0, "measure weights must be > 0");
      require(space.contains(std::span<const double>(at(i), d)), "measure point lies outside " + space.describe());
      total += weights[i];
    }
    require(std::fabs(total - 1.0) <= 1e-9, "measure weights must sum to 1");
  }
};

namespace detail {

inline MeasureSample equal_weights(const SpaceDescriptor& space, std::vector<double> coords, std::string tag) {
  MeasureSample s{space, std::move(coords), {}, std::move(tag)};
  const std::size_t m = s.coords.size() / space.point_dim();
  s.weights.assign(m, 1.0 / static_cast<double>(m));
  return s;
}

}  // namespace detail

/// Equal weights on the points of a model.
inline MeasureSample uniform_on(const FinModel& model, std::string tag = "uniform-model") {
  return detail::equal_weights(model.space(), model.coords(), std::move(tag));
}

/// Equal weights on a regular grid with about m points: interval midpoints, torus lattice.
inline MeasureSample uniform_grid(const SpaceDescriptor& space, std::size_t m) {
  require(m >= 1, "uniform_grid: m must be >= 1");
  std::vector<double> c;
  if (space.is_interval()) {
    const auto [lo, hi] = space.as_interval();
    for (std::size_t i = 0; i < m; ++i) c.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
  } else if (space.is_torus()) {
    const int d = space.as_torus().dim;
    const auto k = static_cast<std::size_t>(std::max(1.0, std::round(std::pow(static_cast<double>(m), 1.0 / d))));
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= k;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t i = 0; i < total; ++i) {
      for (int a = 0; a < d; ++a) c.push_back(static_cast<double>(idx[static_cast<std::size_t>(a)]) / static_cast<double>(k));
      for (int a = d; a-- > 0;) {
        if (++idx[static_cast<std::size_t>(a)] < k) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
    }
  } else {
    for (const auto& p : sample_points(space, m, 0, SampleMode::LowDiscrepancy)) c.insert(c.end(), p.coords.begin(), p.coords.end());
  }
  return detail::equal_weights(space, std::move(c), "uniform-grid");
}

/// m seeded uniform draws, equal weights.
inline MeasureSample uniform_random(const SpaceDescriptor& space, std::size_t m, std::uint64_t seed,
                                    SampleMode mode = SampleMode::Pseudo) {
  std::vector<double> c;
  for (const auto& p : sample_points(space, m, seed, mode)) c.insert(c.end(), p.coords.begin(), p.coords.end());
  return detail::equal_weights(space, std::move(c), "sampler");
}

/// Equal-weight quantile sample of a distribution on an interval: points Q((i + 1/2) / m).
inline MeasureSample quantile_sample(const SpaceDescriptor& space, std::size_t m, const std::function<double(double)>& quantile,
                                     std::string tag) {
  require(space.is_interval(), "quantile samples live on an interval");
  require(m >= 1, "quantile_sample: m must be >= 1");
  std::vector<double> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(quantile((static_cast<double>(i) + 0.5) / static_cast<double>(m)));
  return detail::equal_weights(space, std::move(c), std::move(tag));
}

inline MeasureSample atoms(const SpaceDescriptor& space, const std::vector<Point>& points, std::vector<double> weights) {
  require(points.size() == weights.size(), "one weight per atom", ErrorKind::DimensionMismatch);
  MeasureSample s{space, {}, std::move(weights), "atoms"};
  for (const auto& p : points) {
    space.validate(p);
    s.coords.insert(s.coords.end(), p.coords.begin(), p.coords.end());
  }
  s.validate();
  return s;
}

inline MeasureSample point_mass(const SpaceDescriptor& space, const Point& x) { return atoms(space, {x}, {1.0}); }

/// Empirical measure of one random orbit x0, f_w^1 x0, ..., f_w^{length-1} x0 with w drawn from the walk.
inline MeasureSample orbit_empirical(const SemigroupSystem& sys, const RandomWalk& walk, const Point& x0, std::size_t length,
                                     std::uint64_t seed) {
  require(length >= 1, "orbit length must be >= 1");
  const Word w = walk.sample(length - 1, substream(seed, "orbit_measure"));
  const auto seg = apply_word(sys, w, x0);
  std::vector<double> c;
  for (const auto& p : seg) c.insert(c.end(), p.coords.begin(), p.coords.end());
  return detail::equal_weights(sys.space(), std::move(c), "orbit-empirical");
}

/// t * a + (1 - t) * b.
inline MeasureSample mixture(const MeasureSample& a, const MeasureSample& b, double t) {
  require(t > 0.0 && t < 1.0, "mixture weight must lie in (0, 1)");
  require(a.space.describe() == b.space.describe(), "mixture components live on different spaces");
  MeasureSample s{a.space, a.coords, {}, "mixture"};
  s.coords.insert(s.coords.end(), b.coords.begin(), b.coords.end());
  for (double w : a.weights) s.weights.push_back(t * w);
  for (double w : b.weights) s.weights.push_back((1.0 - t) * w);
  return s;
}

/// Moves each atom to its nearest model point (ties by lowest index) and returns the model
/// weights. Exact nearest search: an indexed scan when the model has a finite mesh, a full
/// scan otherwise.
inline std::vector<double> project_weights(const MeasureSample& nu, const FinModel& model) {
  require(nu.space.describe() == model.space().describe(), "measure and model live on different spaces");
  const auto& space = model.space();
  const std::size_t d = space.point_dim();
  std::vector<double> out(model.size(), 0.0);
  std::vector<double> joint;
  std::unique_ptr<CellIndex> index;
  if (std::isfinite(model.mesh()) && model.mesh() > 0.0) {
    // query points are appended after the model points so one index serves both
    joint = model.coords();
    joint.insert(joint.end(), nu.coords.begin(), nu.coords.end());
    std::vector<Projection> proj;
    for (const auto& a : space.key_axes()) proj.push_back({joint.data() + a.coord, d, a});
    index = std::make_unique<CellIndex>(proj, model.mesh() * 1.000001, model.size());
    for (std::size_t i = 0; i < model.size(); ++i) index->insert(i);
  }
  for (std::size_t a = 0; a < nu.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = SIZE_MAX;
    auto consider = [&](std::size_t i) {
      const double dist = space.raw_distance(model.at(i), nu.at(a));
      if (dist < best || (dist == best && i < arg)) {
        best = dist;
        arg = i;
      }
      return true;
    };
    if (index) index->visit(model.size() + a, consider);
    if (arg == SIZE_MAX || best > model.mesh()) {
      for (std::size_t i = 0; i < model.size(); ++i) consider(i);
    }
    out[arg] += nu.weights[a];
  }
  return out;
}

}  // namespace mdim
