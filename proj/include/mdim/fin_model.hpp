#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/semigroup.hpp"
#include "mdim/space.hpp"

namespace mdim {

/// How a model discretizes its space.
enum class ModelKind {
  /// Every point of the space lies within `mesh` of a model point.
  Grid,
  /// Lattice whose points are pairwise separated at the scale it was built for; counts on it
  /// are lattice-counting lower bounds and the mesh precondition does not apply.
  SeparationLattice,
  /// Arbitrary point set (samples, supports, test instances).
  Scattered,
};

/// Finite stand-in for X (or a subset E, K of X): points stored row-major.
class FinModel {
 public:
  FinModel(SpaceDescriptor space, std::vector<double> coords, double mesh = std::numeric_limits<double>::infinity(),
           ModelKind kind = ModelKind::Scattered)
      : space_(std::move(space)), dim_(space_.point_dim()), coords_(std::move(coords)), mesh_(mesh), kind_(kind) {
    require(dim_ > 0 && coords_.size() % dim_ == 0, "model coordinates do not match the space dimension",
            ErrorKind::DimensionMismatch);
    require(!coords_.empty(), "a model needs at least one point");
    fingerprint_ = space_.hash() ^ splitmix64(coords_.size());
    for (double v : coords_) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &v, sizeof v);
      fingerprint_ = splitmix64(fingerprint_ ^ bits);
    }
  }

  FinModel(SpaceDescriptor space, const std::vector<Point>& points, double mesh = std::numeric_limits<double>::infinity(),
           ModelKind kind = ModelKind::Scattered)
      : FinModel(space, flatten(space, points), mesh, kind) {}

  /// Regular lattice with covering radius <= mesh.
  static FinModel grid(const SpaceDescriptor& space, double mesh, std::size_t cap = 1U << 22) {
    Net net = make_net(space, mesh, cap);
    return FinModel(space, net.centers, net.covering_radius, ModelKind::Grid);
  }

  const SpaceDescriptor& space() const { return space_; }
  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  double mesh() const { return mesh_; }
  ModelKind kind() const { return kind_; }
  const double* at(std::size_t i) const { return coords_.data() + i * dim_; }
  const std::vector<double>& coords() const { return coords_; }
  Point point(std::size_t i) const { return Point(std::vector<double>(at(i), at(i) + dim_)); }

  /// Content fingerprint used as an orbit-cache key component.
  std::uint64_t fingerprint() const { return fingerprint_; }

  FinModel subset(std::span<const std::size_t> idx) const {
    std::vector<double> c;
    c.reserve(idx.size() * dim_);
    for (auto i : idx) c.insert(c.end(), at(i), at(i) + dim_);
    return FinModel(space_, std::move(c), std::numeric_limits<double>::infinity(), ModelKind::Scattered);
  }

 private:
  static std::vector<double> flatten(const SpaceDescriptor& space, const std::vector<Point>& points) {
    std::vector<double> c;
    c.reserve(points.size() * space.point_dim());
    for (const auto& p : points) {
      space.check_dim(p.coords.size());
      c.insert(c.end(), p.coords.begin(), p.coords.end());
    }
    return c;
  }

  SpaceDescriptor space_;
  std::size_t dim_;
  std::vector<double> coords_;
  double mesh_;
  ModelKind kind_;
  std::uint64_t fingerprint_ = 0;
};

namespace detail {

inline std::vector<std::size_t> lattice_levels(const SpaceDescriptor& space, double eps, std::size_t n,
                                               std::size_t deep_keep) {
  require(space.is_sequence(), "separation lattice needs a sequence space");
  require(eps > 0.0, "separation lattice: eps must be > 0");
  const auto& s = space.as_sequence();
  const auto& base = *s.base;
  require(base.is_interval() || (base.is_torus() && base.as_torus().dim == 1),
          "separation lattice supports interval and circle bases");
  const auto K = static_cast<std::size_t>(s.depth);
  std::vector<std::size_t> levels(K, 1);
  for (std::size_t k = 1; k <= K; ++k) {
    if (k > n + 1 && k - (n + 1) > deep_keep) continue;
    const double w = std::pow(s.ratio, static_cast<double>(k > n + 1 ? k - n : 1));
    if (base.is_interval()) {
      const double len = base.as_interval().hi - base.as_interval().lo;
      levels[k - 1] = static_cast<std::size_t>(std::max(1.0, std::ceil(len * w / eps - 1e-12)));
    } else {
      levels[k - 1] = static_cast<std::size_t>(std::max(1.0, std::ceil(w / eps - 1e-12) - 1.0));
    }
  }
  return levels;
}

}  // namespace detail

/// Number of points of separation_lattice(space, eps, n, ., deep_keep), as a double.
inline double separation_lattice_size(const SpaceDescriptor& space, double eps, std::size_t n,
                                      std::size_t deep_keep = SIZE_MAX) {
  double t = 1.0;
  for (auto l : detail::lattice_levels(space, eps, n, deep_keep)) t *= static_cast<double>(l);
  return t;
}

/// Lattice on a truncated sequence space whose points are pairwise (1^n, n, eps)-separated
/// for the left shift: coordinate k (1-based) is seen with weight ratio^max(1, k - n) by some
/// orbit step, and gets as many levels as that weight can tell apart at scale eps. At most
/// `deep_keep` coordinates past the first n + 1 are resolved; the rest sit at the base origin.
inline FinModel separation_lattice(const SpaceDescriptor& space, double eps, std::size_t n, std::size_t cap,
                                   std::size_t deep_keep = SIZE_MAX) {
  const auto levels = detail::lattice_levels(space, eps, n, deep_keep);
  const auto& base = *space.as_sequence().base;
  const std::size_t K = levels.size();
  const double size = separation_lattice_size(space, eps, n, deep_keep);
  if (size > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "separation lattice at eps " << eps << ", n " << n << " needs " << size << " points, cap is " << cap;
    throw BudgetError(os.str(), size, static_cast<double>(cap), static_cast<int>(n), ErrorKind::CapExceeded);
  }
  auto value = [&](std::size_t k, std::size_t t) {
    if (levels[k] == 1) {
      double o = 0.0;
      base.fill_origin(&o);
      return o;
    }
    if (base.is_interval()) {
      const auto [lo, hi] = base.as_interval();
      return lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(levels[k] - 1);
    }
    return static_cast<double>(t) / static_cast<double>(levels[k]);
  };
  const auto total = static_cast<std::size_t>(size);
  std::vector<double> coords;
  coords.reserve(total * K);
  std::vector<std::size_t> idx(K, 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < K; ++k) coords.push_back(value(k, idx[k]));
    for (std::size_t k = K; k-- > 0;) {
      if (++idx[k] < levels[k]) break;
      idx[k] = 0;
    }
  }
  return FinModel(space, std::move(coords), std::numeric_limits<double>::infinity(), ModelKind::SeparationLattice);
}

/// Number of coordinates past the first that a separation lattice at scale eps resolves:
/// the K' in an adaptive truncation K = n_max + 1 + K'.
inline std::size_t lattice_tail_depth(const SpaceDescriptor& base, double ratio, double eps) {
  const double len = base.is_interval() ? base.as_interval().hi - base.as_interval().lo : 1.0;
  std::size_t k = 0;
  for (double w = ratio * ratio; (base.is_interval() ? std::ceil(len * w / eps - 1e-12) : std::ceil(w / eps - 1e-12) - 1.0) >= 2.0;
       w *= ratio) {
    ++k;
  }
  return k;
}

/// Orbits of every model point along one word: rows (point, step j = 0..n).
struct OrbitTable {
  std::size_t points = 0;
  std::size_t steps = 0;  // n + 1
  std::size_t dim = 0;
  std::vector<double> data;

  const double* at(std::size_t i, std::size_t j) const { return data.data() + (i * steps + j) * dim; }
  double* at(std::size_t i, std::size_t j) { return data.data() + (i * steps + j) * dim; }
};

/// Orbit tables keyed by (system hash, model fingerprint, word letters). Concurrent readers,
/// serialized inserts, no eviction: once `capacity_bytes` is reached further tables are not kept.
class OrbitCache {
 public:
  explicit OrbitCache(std::size_t capacity_bytes = 256U << 20) : capacity_(capacity_bytes) {}

  std::shared_ptr<const OrbitTable> find(std::uint64_t system, std::uint64_t model, const Word& w) const {
    std::shared_lock lock(mutex_);
    auto it = tables_.find(Key{system, model, w.letters});
    if (it == tables_.end()) return nullptr;
    ++hits_;
    return it->second;
  }

  void insert(std::uint64_t system, std::uint64_t model, const Word& w, std::shared_ptr<const OrbitTable> t) {
    const std::size_t bytes = t->data.size() * sizeof(double);
    std::unique_lock lock(mutex_);
    if (used_ + bytes > capacity_) return;
    if (tables_.emplace(Key{system, model, w.letters}, std::move(t)).second) used_ += bytes;
  }

  std::size_t hits() const { return hits_; }
  std::size_t bytes_used() const {
    std::shared_lock lock(mutex_);
    return used_;
  }

 private:
  struct Key {
    std::uint64_t system;
    std::uint64_t model;
    std::vector<std::uint32_t> letters;
    bool operator<(const Key& o) const {
      if (system != o.system) return system < o.system;
      if (model != o.model) return model < o.model;
      return letters < o.letters;
    }
  };

  std::size_t capacity_;
  std::size_t used_ = 0;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const OrbitTable>> tables_;
};

namespace detail {

inline void extend_orbit(const SemigroupSystem& sys, const OrbitTable& prefix, std::uint32_t letter, OrbitTable& out) {
  out.points = prefix.points;
  out.dim = prefix.dim;
  out.steps = prefix.steps + 1;
  out.data.assign(out.points * out.steps * out.dim, 0.0);
  const auto& g = sys.generators()[letter];
  for (std::size_t i = 0; i < out.points; ++i) {
    std::copy(prefix.at(i, 0), prefix.at(i, 0) + prefix.steps * prefix.dim, out.at(i, 0));
    g.apply(sys.space(), out.at(i, prefix.steps - 1), out.at(i, prefix.steps));
  }
}

}  // namespace detail

/// Orbit table of every model point along w. With a cache, the longest cached prefix is
/// extended and every new table is offered back to the cache; numbers are identical either way.
inline std::shared_ptr<const OrbitTable> orbit_table(const SemigroupSystem& sys, const FinModel& model, const Word& w,
                                                     OrbitCache* cache = nullptr) {
  sys.validate(w);
  const std::uint64_t sh = sys.hash();
  const std::uint64_t mh = cache ? model.fingerprint() : 0;
  std::shared_ptr<const OrbitTable> base;
  std::size_t have = 0;
  if (cache) {
    for (std::size_t len = w.size() + 1; len-- > 0;) {
      Word prefix(std::vector<std::uint32_t>(w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(len)));
      if (auto t = cache->find(sh, mh, prefix)) {
        base = std::move(t);
        have = len;
        break;
      }
    }
  }
  if (!base) {
    auto t = std::make_shared<OrbitTable>();
    t->points = model.size();
    t->steps = 1;
    t->dim = model.dim();
    t->data = model.coords();
    base = t;
    have = 0;
    if (cache) cache->insert(sh, mh, Word{}, base);
  }
  for (std::size_t k = have; k < w.size(); ++k) {
    auto t = std::make_shared<OrbitTable>();
    detail::extend_orbit(sys, *base, w.letters[k], *t);
    base = t;
    if (cache) {
      Word prefix(std::vector<std::uint32_t>(w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(k + 1)));
      cache->insert(sh, mh, prefix, base);
    }
  }
  return base;
}

/// Scalar view of one key coordinate of every point: value(i) = base[i * stride].
struct Projection {
  const double* base = nullptr;
  std::size_t stride = 0;
  KeyAxis axis;
};

/// Hash grid over up to `max_axes` projections. Every metric ball of `radius` around a point
/// stays within radius / scale of it along each axis, so a query walks only the cells inside
/// that window, axis by axis, skipping cell prefixes that hold no point.
class CellIndex {
 public:
  /// `points` (when known) lets the index sample each axis for lattice-like value sets.
  CellIndex(std::vector<Projection> projections, double radius, std::size_t points = 0, std::size_t max_axes = 10) {
    struct Candidate {
      Projection p;
      std::int64_t cells;
    };
    std::vector<Candidate> usable;
    for (const auto& p : projections) {
      const double width = radius / p.axis.scale;
      const double range = p.axis.hi - p.axis.lo;
      // an axis prunes once its range exceeds the query window
      if (!(range / width >= 1.5)) continue;
      const double cells = std::max(1.0, std::floor(range / width));
      usable.push_back({p, static_cast<std::int64_t>(std::min(cells, 1e9))});
    }
    std::stable_sort(usable.begin(), usable.end(), [](const Candidate& a, const Candidate& b) { return a.cells > b.cells; });
    // more axes only pay while cells still outnumber the points
    std::size_t keep = 0;
    for (double cells = 1.0; keep < usable.size() && keep < max_axes; ++keep) {
      if (points > 0 ? cells >= 4.0 * static_cast<double>(points) : keep >= 4) break;
      cells *= static_cast<double>(usable[keep].cells);
    }
    usable.resize(keep);
    for (const auto& u : usable) {
      const double range = u.p.axis.hi - u.p.axis.lo;
      axes_.push_back(u.p);
      reach_.push_back(radius / u.p.axis.scale * (1.0 + 1e-9));
      // coarse or lattice-valued axes get finer cells so the query window hugs the reach
      const std::int64_t split = u.cells < 10 || few_values(u.p, points) ? 8 : 1;
      if (u.p.axis.periodic) {
        cells_.push_back(u.cells * split);
        width_.push_back(range / static_cast<double>(cells_.back()));
      } else {
        width_.push_back(radius / u.p.axis.scale / static_cast<double>(split));
        cells_.push_back(static_cast<std::int64_t>(std::ceil(range / width_.back())) + 1);
      }
    }
    prefixes_.resize(axes_.size());
  }

  std::size_t axis_count() const { return axes_.size(); }

  void insert(std::size_t i) {
    std::uint64_t h = kSeed;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      h = step(h, cell(a, value(a, i)));
      prefixes_[a].insert(h);
    }
    buckets_[h].push_back(static_cast<std::uint32_t>(i));
  }

  /// Visits indexed points in neighboring cells of point i (a superset of its radius-ball)
  /// until `fn` returns false. Visit order is deterministic.
  template <class Fn>
  void visit(std::size_t i, Fn&& fn) const {
    std::vector<double> v(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) v[a] = value(a, i);
    walk(v, 0, kSeed, fn);
  }

 private:
  static constexpr std::uint64_t kSeed = 0x51ed27080c9b1d4dULL;

  static bool few_values(const Projection& p, std::size_t points) {
    const std::size_t samples = std::min<std::size_t>(points, 256);
    if (samples < 32) return false;
    std::vector<double> v(samples);
    // hashed indices: strided ones alias with periodic orbit coordinates on grids
    for (std::size_t k = 0; k < samples; ++k) v[k] = p.base[(splitmix64(k + 1) % points) * p.stride];
    std::sort(v.begin(), v.end());
    const auto distinct = static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
    return 4 * distinct < samples;
  }

  static std::uint64_t step(std::uint64_t h, std::int64_t c) { return splitmix64(h ^ static_cast<std::uint64_t>(c)); }

  double value(std::size_t a, std::size_t i) const { return axes_[a].base[i * axes_[a].stride] - axes_[a].axis.lo; }

  std::int64_t wrap(std::size_t a, std::int64_t k) const {
    if (axes_[a].axis.periodic) return ((k % cells_[a]) + cells_[a]) % cells_[a];
    return std::clamp<std::int64_t>(k, 0, cells_[a]);
  }

  std::int64_t cell(std::size_t a, double v) const { return wrap(a, static_cast<std::int64_t>(std::floor(v / width_[a]))); }

  bool near(std::size_t a, double u, double v) const {
    double d = std::fabs(u - v);
    if (axes_[a].axis.periodic) d = std::min(d, (axes_[a].axis.hi - axes_[a].axis.lo) - d);
    return d <= reach_[a];
  }

  // returns false once fn asked to stop
  template <class Fn>
  bool walk(const std::vector<double>& v, std::size_t a, std::uint64_t h, Fn& fn) const {
    if (a == v.size()) {
      auto it = buckets_.find(h);
      if (it == buckets_.end()) return true;
      for (auto j : it->second) {
        bool ok = true;
        for (std::size_t b = 0; b < v.size() && ok; ++b) ok = near(b, value(b, j), v[b]);
        if (ok && !fn(static_cast<std::size_t>(j))) return false;
      }
      return true;
    }
    const auto first = static_cast<std::int64_t>(std::floor((v[a] - reach_[a]) / width_[a]));
    const auto last = static_cast<std::int64_t>(std::floor((v[a] + reach_[a]) / width_[a]));
    std::int64_t prev = -1;
    for (std::int64_t k = first; k <= last; ++k) {
      const auto c = wrap(a, k);
      // clamped or wrapped indices can repeat at the ends
      if (c == prev || (axes_[a].axis.periodic && k - first >= cells_[a])) continue;
      prev = c;
      const auto next = step(h, c);
      if (!prefixes_[a].count(next)) continue;
      if (!walk(v, a + 1, next, fn)) return false;
    }
    return true;
  }

  std::vector<Projection> axes_;
  std::vector<std::int64_t> cells_;
  std::vector<double> width_;
  std::vector<double> reach_;
  std::vector<std::unordered_set<std::uint64_t>> prefixes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

/// A finite metric the packing/covering kernels can run on.
template <class M>
concept FiniteMetric = requires(const M& m, std::size_t i, std::size_t j, double eps, bool strict) {
  { m.size() } -> std::convertible_to<std::size_t>;
  { m.distance(i, j) } -> std::convertible_to<double>;
  { m.within(i, j, eps, strict) } -> std::same_as<bool>;
  { m.projections() } -> std::same_as<std::vector<Projection>>;
};

/// Brute-force metric backed by a callback; no neighbor index.
class CallbackMetric {
 public:
  CallbackMetric(std::size_t m, std::function<double(std::size_t, std::size_t)> d) : m_(m), d_(std::move(d)) {}

  std::size_t size() const { return m_; }
  double distance(std::size_t i, std::size_t j) const { return i == j ? 0.0 : d_(i, j); }
  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    const double d = distance(i, j);
    return strict ? d < eps : d <= eps;
  }
  std::vector<Projection> projections() const { return {}; }

 private:
  std::size_t m_;
  std::function<double(std::size_t, std::size_t)> d_;
};

/// Explicit distance matrix (oracle instances, debug dumps).
class MatrixMetric {
 public:
  explicit MatrixMetric(std::vector<std::vector<double>> d) : d_(std::move(d)) {
    for (const auto& row : d_) require(row.size() == d_.size(), "distance matrix must be square");
  }
  std::size_t size() const { return d_.size(); }
  double distance(std::size_t i, std::size_t j) const { return d_[i][j]; }
  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    return strict ? d_[i][j] < eps : d_[i][j] <= eps;
  }
  std::vector<Projection> projections() const { return {}; }

 private:
  std::vector<std::vector<double>> d_;
};

/// The space metric d on the model points.
class BaseMetric {
 public:
  explicit BaseMetric(const FinModel& model) : model_(&model) {}
  std::size_t size() const { return model_->size(); }
  double distance(std::size_t i, std::size_t j) const { return model_->space().raw_distance(model_->at(i), model_->at(j)); }
  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    const double d = distance(i, j);
    return strict ? d < eps : d <= eps;
  }
  std::vector<Projection> projections() const {
    std::vector<Projection> out;
    for (const auto& a : model_->space().key_axes()) out.push_back({model_->coords().data() + a.coord, model_->dim(), a});
    return out;
  }

 private:
  const FinModel* model_;
};

/// Dynamical metric d_w(x, z) = max_j d(w_j x, w_j z) read off an orbit table.
class WordMetric {
 public:
  WordMetric(const SpaceDescriptor& space, std::shared_ptr<const OrbitTable> table)
      : space_(&space), owned_(std::move(table)), table_(owned_.get()) {}
  /// Non-owning view; the table must outlive the metric.
  WordMetric(const SpaceDescriptor& space, const OrbitTable& table) : space_(&space), table_(&table) {}

  std::size_t size() const { return table_->points; }
  std::size_t steps() const { return table_->steps; }

  double distance(std::size_t i, std::size_t j) const {
    double d = 0.0;
    for (std::size_t t = 0; t < table_->steps; ++t) d = std::max(d, space_->raw_distance(table_->at(i, t), table_->at(j, t)));
    return d;
  }

  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    // last step first: expansion makes it the most likely witness
    for (std::size_t t = table_->steps; t-- > 0;) {
      const double d = space_->raw_distance(table_->at(i, t), table_->at(j, t));
      if (strict ? d >= eps : d > eps) return false;
    }
    return true;
  }

  std::vector<Projection> projections() const {
    std::vector<Projection> out;
    const std::size_t stride = table_->steps * table_->dim;
    // first and last step lead; middle steps follow for orbits that spread over many coordinates
    std::vector<std::size_t> order{0};
    if (table_->steps > 1) order.push_back(table_->steps - 1);
    for (std::size_t t = 1; t + 1 < table_->steps; ++t) order.push_back(t);
    for (auto t : order) {
      for (const auto& a : space_->key_axes()) out.push_back({table_->data.data() + t * table_->dim + a.coord, stride, a});
    }
    return out;
  }

 private:
  const SpaceDescriptor* space_;
  std::shared_ptr<const OrbitTable> owned_;
  const OrbitTable* table_;
};

/// Images of a point set under every semigroup element of length <= n, in breadth-first
/// order (node 0 is the identity, then G_1 lexicographically, then G_2, ...).
class GroupImageTable {
 public:
  GroupImageTable(const SemigroupSystem& sys, std::span<const double> coords, std::size_t depth, double budget)
      : space_(&sys.space()), dim_(sys.space().point_dim()), points_(coords.size() / dim_), depth_(depth) {
    check_group_budget(sys.arity(), depth, budget);
    const std::size_t p = sys.arity();
    std::size_t nodes = 1;
    lengths_.push_back(0);
    for (std::size_t j = 1, level = 1; j <= depth; ++j) {
      level *= p;
      nodes += level;
      lengths_.insert(lengths_.end(), level, j);
    }
    data_.assign(nodes * points_ * dim_, 0.0);
    std::copy(coords.begin(), coords.end(), data_.begin());
    // node k >= 1 at level j has parent (k - 1) / p and last letter (k - 1) % p
    for (std::size_t k = 1; k < nodes; ++k) {
      const std::size_t parent = (k - 1) / p;
      const auto& g = sys.generators()[(k - 1) % p];
      for (std::size_t i = 0; i < points_; ++i) g.apply(*space_, image(parent, i), mutable_image(k, i));
    }
  }

  std::size_t nodes() const { return lengths_.size(); }
  std::size_t points() const { return points_; }
  std::size_t depth() const { return depth_; }
  std::size_t length(std::size_t node) const { return lengths_[node]; }
  const double* image(std::size_t node, std::size_t i) const { return data_.data() + (node * points_ + i) * dim_; }

  /// Smallest word length at which (i, j) leaves the radius, depth + 1 if never.
  std::size_t exit_depth(std::size_t i, std::size_t j, double radius, bool exit_on_equal) const {
    for (std::size_t k = 0; k < nodes(); ++k) {
      const double d = space_->raw_distance(image(k, i), image(k, j));
      if (exit_on_equal ? d >= radius : d > radius) return lengths_[k];
    }
    return depth_ + 1;
  }

  const double* column(std::size_t node) const { return data_.data() + node * points_ * dim_; }
  std::size_t dim() const { return dim_; }
  const SpaceDescriptor& space() const { return *space_; }

 private:
  double* mutable_image(std::size_t node, std::size_t i) { return data_.data() + (node * points_ + i) * dim_; }

  const SpaceDescriptor* space_;
  std::size_t dim_;
  std::size_t points_;
  std::size_t depth_;
  std::vector<std::size_t> lengths_;
  std::vector<double> data_;
};

/// GLW metric: max of d(g x, g z) over all g in G_j, j <= n. Its closed eps-balls are the
/// points not separated by elements of the semigroup; its open balls are B_n^G.
class GroupMetric {
 public:
  explicit GroupMetric(std::shared_ptr<const GroupImageTable> table) : table_(std::move(table)) {}

  std::size_t size() const { return table_->points(); }
  double distance(std::size_t i, std::size_t j) const {
    double d = 0.0;
    for (std::size_t k = 0; k < table_->nodes(); ++k) {
      d = std::max(d, table_->space().raw_distance(table_->image(k, i), table_->image(k, j)));
    }
    return d;
  }
  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    return table_->exit_depth(i, j, eps, strict) > table_->depth();
  }
  std::vector<Projection> projections() const {
    std::vector<Projection> out;
    const auto& space = table_->space();
    const std::size_t last = table_->nodes() - 1;
    for (std::size_t node : {std::size_t{0}, last}) {
      for (const auto& a : space.key_axes()) out.push_back({table_->column(node) + a.coord, table_->dim(), a});
      if (last == 0) break;
    }
    return out;
  }

 private:
  std::shared_ptr<const GroupImageTable> table_;
};

/// Metric restricted to a subset of indices of another metric.
template <FiniteMetric M>
class SubMetric {
 public:
  SubMetric(const M& inner, std::vector<std::size_t> idx) : inner_(&inner), idx_(std::move(idx)) {}
  std::size_t size() const { return idx_.size(); }
  double distance(std::size_t i, std::size_t j) const { return inner_->distance(idx_[i], idx_[j]); }
  bool within(std::size_t i, std::size_t j, double eps, bool strict) const {
    return inner_->within(idx_[i], idx_[j], eps, strict);
  }
  std::vector<Projection> projections() const { return {}; }

 private:
  const M* inner_;
  std::vector<std::size_t> idx_;
};

}  // namespace mdim
