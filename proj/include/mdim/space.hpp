#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/rng.hpp"

namespace mdim {

/// A point of a space; the coordinate count is fixed by the descriptor.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::span<const double> view() const { return coords; }
  bool operator==(const Point&) const = default;
};

/// Circle distance between two reals read modulo 1.
inline double circle_distance(double a, double b) {
  double t = std::fabs(a - b);
  t -= std::floor(t);
  return std::min(t, 1.0 - t);
}

inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// A coordinate whose (scaled) difference never exceeds the metric: scale*|x_c - y_c| <= d(x, y),
/// with |.| the circle distance when `periodic`. Neighbor indices hash on these.
struct KeyAxis {
  std::size_t coord = 0;
  double scale = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
};

enum class SampleMode { Pseudo, LowDiscrepancy };

class SpaceDescriptor {
 public:
  struct Interval {
    double lo;
    double hi;
  };
  struct Torus {
    int dim;
  };
  struct Sequence {
    std::shared_ptr<const SpaceDescriptor> base;
    int depth;
    double ratio;
  };

  static SpaceDescriptor interval(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "interval needs a < b");
    return SpaceDescriptor(Interval{lo, hi});
  }

  static SpaceDescriptor torus(int dim) {
    require(dim >= 1, "torus dimension must be >= 1");
    return SpaceDescriptor(Torus{dim});
  }

  /// Truncated sequence space base^K with d(x, y) = sum_{i=1..K} ratio^i d_base(x_i, y_i).
  static SpaceDescriptor sequence(const SpaceDescriptor& base, int depth, double ratio) {
    require(depth >= 1, "sequence truncation K must be >= 1");
    require(ratio > 0.0 && ratio < 1.0, "sequence weight ratio must lie in (0, 1)");
    return SpaceDescriptor(Sequence{std::make_shared<const SpaceDescriptor>(base), depth, ratio});
  }

  bool is_interval() const { return std::holds_alternative<Interval>(kind_); }
  bool is_torus() const { return std::holds_alternative<Torus>(kind_); }
  bool is_sequence() const { return std::holds_alternative<Sequence>(kind_); }
  const Interval& as_interval() const { return std::get<Interval>(kind_); }
  const Torus& as_torus() const { return std::get<Torus>(kind_); }
  const Sequence& as_sequence() const { return std::get<Sequence>(kind_); }

  std::size_t point_dim() const {
    if (is_interval()) return 1;
    if (is_torus()) return static_cast<std::size_t>(as_torus().dim);
    const auto& s = as_sequence();
    return static_cast<std::size_t>(s.depth) * s.base->point_dim();
  }

  double diameter() const {
    if (is_interval()) return as_interval().hi - as_interval().lo;
    if (is_torus()) return 0.5 * as_torus().dim;
    const auto& s = as_sequence();
    return s.base->diameter() * (s.ratio * (1.0 - std::pow(s.ratio, s.depth)) / (1.0 - s.ratio));
  }

  /// Unchecked distance on raw coordinates; hot path of every kernel.
  double raw_distance(const double* x, const double* y) const {
    switch (kind_.index()) {
      case 0:
        return std::fabs(x[0] - y[0]);
      case 1: {
        double sum = 0.0;
        const int d = as_torus().dim;
        for (int i = 0; i < d; ++i) sum += circle_distance(x[i], y[i]);
        return sum;
      }
      default: {
        const auto& s = as_sequence();
        const std::size_t bd = s.base->point_dim();
        double sum = 0.0;
        double w = s.ratio;
        for (int i = 0; i < s.depth; ++i, w *= s.ratio) {
          sum += w * s.base->raw_distance(x + i * bd, y + i * bd);
        }
        return sum;
      }
    }
  }

  double distance(std::span<const double> x, std::span<const double> y) const {
    check_dim(x.size());
    check_dim(y.size());
    return raw_distance(x.data(), y.data());
  }

  void check_dim(std::size_t n) const {
    if (n != point_dim()) {
      std::ostringstream os;
      os << "point has " << n << " coordinates, space " << describe() << " expects " << point_dim();
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
  }

  /// Brings coordinates into the fundamental domain (torus coordinates mod 1, interval clamped).
  void reduce(double* x) const {
    switch (kind_.index()) {
      case 0:
        x[0] = std::clamp(x[0], as_interval().lo, as_interval().hi);
        break;
      case 1:
        for (int i = 0; i < as_torus().dim; ++i) x[i] = wrap_unit(x[i]);
        break;
      default: {
        const auto& s = as_sequence();
        const std::size_t bd = s.base->point_dim();
        for (int i = 0; i < s.depth; ++i) s.base->reduce(x + i * bd);
      }
    }
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != point_dim()) return false;
    switch (kind_.index()) {
      case 0:
        return x[0] >= as_interval().lo && x[0] <= as_interval().hi;
      case 1:
        return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0 && v < 1.0; });
      default: {
        const auto& s = as_sequence();
        const std::size_t bd = s.base->point_dim();
        for (int i = 0; i < s.depth; ++i) {
          if (!s.base->contains(x.subspan(i * bd, bd))) return false;
        }
        return true;
      }
    }
  }

  /// Conformance check for user-supplied points.
  void validate(const Point& p) const {
    check_dim(p.coords.size());
    require(contains(p.coords), "point " + format_point(p) + " lies outside " + describe());
  }

  std::vector<KeyAxis> key_axes() const {
    std::vector<KeyAxis> axes;
    switch (kind_.index()) {
      case 0:
        axes.push_back({0, 1.0, as_interval().lo, as_interval().hi, false});
        break;
      case 1:
        for (int i = 0; i < as_torus().dim; ++i) axes.push_back({static_cast<std::size_t>(i), 1.0, 0.0, 1.0, true});
        break;
      default: {
        const auto& s = as_sequence();
        const std::size_t bd = s.base->point_dim();
        double w = s.ratio;
        for (int i = 0; i < s.depth; ++i, w *= s.ratio) {
          for (KeyAxis a : s.base->key_axes()) {
            a.coord += i * bd;
            a.scale *= w;
            axes.push_back(a);
          }
        }
      }
    }
    return axes;
  }

  /// Distinguished base point: the interval's left end, the torus origin, the zero sequence.
  Point origin() const {
    Point p(std::vector<double>(point_dim(), 0.0));
    fill_origin(p.coords.data());
    return p;
  }

  void fill_origin(double* x) const {
    switch (kind_.index()) {
      case 0:
        x[0] = as_interval().lo;
        break;
      case 1:
        for (int i = 0; i < as_torus().dim; ++i) x[i] = 0.0;
        break;
      default: {
        const auto& s = as_sequence();
        const std::size_t bd = s.base->point_dim();
        for (int i = 0; i < s.depth; ++i) s.base->fill_origin(x + i * bd);
      }
    }
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(9);
    switch (kind_.index()) {
      case 0:
        os << "Interval(" << as_interval().lo << "," << as_interval().hi << ")";
        break;
      case 1:
        os << "Torus(" << as_torus().dim << ")";
        break;
      default:
        os << "SeqSpace(" << as_sequence().base->describe() << ",K=" << as_sequence().depth
           << ",rho=" << as_sequence().ratio << ")";
    }
    return os.str();
  }

  std::uint64_t hash() const { return fnv1a(describe()); }

  static std::string format_point(const Point& p) {
    std::ostringstream os;
    os.precision(9);
    os << "(";
    for (std::size_t i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << p.coords[i];
    os << ")";
    return os.str();
  }

 private:
  explicit SpaceDescriptor(std::variant<Interval, Torus, Sequence> k) : kind_(std::move(k)) {}

  std::variant<Interval, Torus, Sequence> kind_;
};

inline double distance(const SpaceDescriptor& space, const Point& x, const Point& y) {
  return space.distance(x.coords, y.coords);
}

namespace detail {

/// Per-axis lattice of a cover net: values plus whether the axis wraps.
struct AxisLattice {
  std::vector<double> values;
};

/// Lattice description of a net with covering radius <= eps. Sequence spaces
/// split the budget so that sum_i rho^i r = eps.
inline void net_axes(const SpaceDescriptor& space, double eps, std::vector<AxisLattice>& out, double& radius) {
  if (space.is_interval()) {
    const auto [lo, hi] = space.as_interval();
    const double len = hi - lo;
    AxisLattice ax;
    const auto count = static_cast<std::size_t>(std::ceil(len / eps - 1e-12)) + 1;
    ax.values.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      ax.values[k] = count == 1 ? lo : lo + len * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    ax.values.back() = count == 1 ? lo : hi;
    radius = count == 1 ? len : 0.5 * len / static_cast<double>(count - 1);
    out.push_back(std::move(ax));
    return;
  }
  if (space.is_torus()) {
    const int d = space.as_torus().dim;
    const double spacing = std::min(eps, 2.0 * eps / d);
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(1.0 / spacing - 1e-12)));
    radius = 0.0;
    for (int i = 0; i < d; ++i) {
      AxisLattice ax;
      ax.values.resize(count);
      for (std::size_t k = 0; k < count; ++k) ax.values[k] = static_cast<double>(k) / static_cast<double>(count);
      radius += count == 1 ? 0.5 : 0.5 / static_cast<double>(count);
      out.push_back(std::move(ax));
    }
    return;
  }
  const auto& s = space.as_sequence();
  const double weight_sum = s.ratio * (1.0 - std::pow(s.ratio, s.depth)) / (1.0 - s.ratio);
  const double base_eps = std::min(eps / weight_sum, s.base->diameter());
  radius = 0.0;
  for (int i = 0; i < s.depth; ++i) {
    double r = 0.0;
    net_axes(*s.base, base_eps, out, r);
    radius += std::pow(s.ratio, i + 1) * r;
  }
}

}  // namespace detail

/// Regular lattice whose covering radius is at most eps.
struct Net {
  std::vector<Point> centers;
  double covering_radius = 0.0;
};

inline Net make_net(const SpaceDescriptor& space, double eps, std::size_t cap) {
  require(std::isfinite(eps) && eps > 0.0, "net scale must be > 0");
  std::vector<detail::AxisLattice> axes;
  double radius = 0.0;
  detail::net_axes(space, eps, axes, radius);
  double required = 1.0;
  for (const auto& a : axes) required *= static_cast<double>(a.values.size());
  if (required > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "net of " << space.describe() << " at scale " << eps << " needs " << required
       << " centers, cap is " << cap;
    throw BudgetError(os.str(), required, static_cast<double>(cap), -1, ErrorKind::CapExceeded);
  }
  Net net;
  net.covering_radius = radius;
  const auto total = static_cast<std::size_t>(required);
  net.centers.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Point p(std::vector<double>(axes.size()));
    for (std::size_t a = 0; a < axes.size(); ++a) p.coords[a] = axes[a].values[idx[a]];
    net.centers.push_back(std::move(p));
    // odometer, last axis fastest
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return net;
}

/// Centers such that every point of the space lies within eps of one of them.
inline std::vector<Point> cover_net(const SpaceDescriptor& space, double eps, std::size_t cap = 1U << 22) {
  require(std::isfinite(eps) && eps > 0.0, "cover_net: eps must be > 0");
  require(eps <= space.diameter() * (1.0 + 1e-12), "cover_net: eps must not exceed the diameter");
  return make_net(space, eps, cap).centers;
}

namespace detail {

inline void sample_into(const SpaceDescriptor& space, double* x, const double* u) {
  if (space.is_interval()) {
    const auto [lo, hi] = space.as_interval();
    x[0] = std::min(lo + (hi - lo) * u[0], hi);
    return;
  }
  if (space.is_torus()) {
    for (int i = 0; i < space.as_torus().dim; ++i) x[i] = wrap_unit(u[i]);
    return;
  }
  const auto& s = space.as_sequence();
  const std::size_t bd = s.base->point_dim();
  for (int i = 0; i < s.depth; ++i) sample_into(*s.base, x + i * bd, u + i * bd);
}

/// Generalized golden ratio for the R_d low-discrepancy sequence.
inline double rd_phi(std::size_t d) {
  double x = 2.0;
  for (int it = 0; it < 64; ++it) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
  return x;
}

}  // namespace detail

/// m points, deterministic in seed. Pseudo mode uses xoshiro256**; low-discrepancy mode
/// uses the R_d Kronecker sequence with a seed-derived offset.
inline std::vector<Point> sample_points(const SpaceDescriptor& space, std::size_t m, std::uint64_t seed,
                                        SampleMode mode = SampleMode::Pseudo) {
  require(m >= 1, "sample_points: m must be >= 1");
  const std::size_t d = space.point_dim();
  std::vector<Point> out;
  out.reserve(m);
  std::vector<double> u(d);
  Rng rng(substream(seed, "sample_points"));
  std::vector<double> alpha(d), offset(d);
  if (mode == SampleMode::LowDiscrepancy) {
    const double phi = detail::rd_phi(d);
    for (std::size_t k = 0; k < d; ++k) {
      alpha[k] = wrap_unit(1.0 / std::pow(phi, static_cast<double>(k + 1)));
      offset[k] = rng.uniform();
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      u[k] = mode == SampleMode::Pseudo ? rng.uniform()
                                        : wrap_unit(offset[k] + alpha[k] * static_cast<double>(i + 1));
    }
    Point p(std::vector<double>(d, 0.0));
    detail::sample_into(space, p.coords.data(), u.data());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mdim
