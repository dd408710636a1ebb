#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/rng.hpp"
#include "mdim/space.hpp"

namespace mdim {

/// One generator g_y. Every kind maps its space into itself; outputs are reduced to the
/// fundamental domain after evaluation.
class GeneratorMap {
 public:
  enum class Kind { AffineMod1, Rotation, Tent, Shift, Identity };

  /// x -> k x + c (mod 1), coordinatewise on a torus.
  static GeneratorMap affine(int slope, double offset = 0.0) {
    require(slope >= 1, "affine generator needs an integer slope >= 1");
    GeneratorMap g(Kind::AffineMod1);
    g.slope_ = slope;
    g.offsets_ = {offset};
    return g;
  }

  /// x -> x + alpha (mod 1); one angle for all coordinates or one per coordinate.
  static GeneratorMap rotation(std::vector<double> angles) {
    require(!angles.empty(), "rotation needs at least one angle");
    GeneratorMap g(Kind::Rotation);
    g.offsets_ = std::move(angles);
    return g;
  }
  static GeneratorMap rotation(double angle) { return rotation(std::vector<double>{angle}); }

  /// Tent of height s/2 on an interval (rescaled to [0,1]); 0 < s <= 2 keeps the interval invariant.
  static GeneratorMap tent(double slope) {
    require(slope > 0.0 && slope <= 2.0, "tent slope must lie in (0, 2]");
    GeneratorMap g(Kind::Tent);
    g.tent_slope_ = slope;
    return g;
  }

  /// Left shift on a truncated sequence space; the vacated last coordinate gets the base origin.
  static GeneratorMap shift() { return GeneratorMap(Kind::Shift); }
  static GeneratorMap identity() { return GeneratorMap(Kind::Identity); }

  Kind kind() const { return kind_; }
  int slope() const { return slope_; }
  double tent_slope() const { return tent_slope_; }
  const std::vector<double>& offsets() const { return offsets_; }

  void validate(const SpaceDescriptor& space) const {
    switch (kind_) {
      case Kind::AffineMod1:
        require(space.is_torus(), "affine generator acts on a torus only");
        break;
      case Kind::Rotation:
        require(space.is_torus(), "rotation acts on a torus only");
        require(offsets_.size() == 1 || offsets_.size() == space.point_dim(),
                "rotation needs one angle or one per torus coordinate");
        break;
      case Kind::Tent:
        require(space.is_interval(), "tent map acts on an interval only");
        break;
      case Kind::Shift:
        require(space.is_sequence(), "shift acts on a sequence space only");
        break;
      case Kind::Identity:
        break;
    }
  }

  /// Evaluates on raw coordinates; `in` and `out` must not alias.
  void apply(const SpaceDescriptor& space, const double* in, double* out) const {
    const std::size_t d = space.point_dim();
    switch (kind_) {
      case Kind::AffineMod1:
        for (std::size_t i = 0; i < d; ++i) out[i] = wrap_unit(slope_ * in[i] + offsets_[0]);
        break;
      case Kind::Rotation:
        for (std::size_t i = 0; i < d; ++i) {
          out[i] = wrap_unit(in[i] + offsets_[offsets_.size() == 1 ? 0 : i]);
        }
        break;
      case Kind::Tent: {
        const auto [lo, hi] = space.as_interval();
        const double t = (in[0] - lo) / (hi - lo);
        const double y = t <= 0.5 ? tent_slope_ * t : tent_slope_ * (1.0 - t);
        out[0] = std::clamp(lo + (hi - lo) * y, lo, hi);
        break;
      }
      case Kind::Shift: {
        const auto& s = space.as_sequence();
        const std::size_t bd = s.base->point_dim();
        for (std::size_t i = 0; i + bd < d; ++i) out[i] = in[i + bd];
        s.base->fill_origin(out + d - bd);
        break;
      }
      case Kind::Identity:
        for (std::size_t i = 0; i < d; ++i) out[i] = in[i];
        break;
    }
  }

  /// Lipschitz constant for the space metric.
  double lipschitz(const SpaceDescriptor& space) const {
    switch (kind_) {
      case Kind::AffineMod1: return slope_;
      case Kind::Tent: return tent_slope_;
      case Kind::Shift: return 1.0 / space.as_sequence().ratio;
      default: return 1.0;
    }
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case Kind::AffineMod1: os << "affine(k=" << slope_ << ",c=" << offsets_[0] << ")"; break;
      case Kind::Rotation:
        os << "rotation(";
        for (std::size_t i = 0; i < offsets_.size(); ++i) os << (i ? "," : "") << offsets_[i];
        os << ")";
        break;
      case Kind::Tent: os << "tent(s=" << tent_slope_ << ")"; break;
      case Kind::Shift: os << "shift"; break;
      case Kind::Identity: os << "identity"; break;
    }
    return os.str();
  }

 private:
  explicit GeneratorMap(Kind k) : kind_(k) {}

  Kind kind_;
  int slope_ = 1;
  double tent_slope_ = 2.0;
  std::vector<double> offsets_;
};

/// A concatenation of generator indices (0-based); letters[0] is applied first.
/// Distinct concatenations are distinct words even when they induce the same map.
struct Word {
  std::vector<std::uint32_t> letters;

  Word() = default;
  explicit Word(std::vector<std::uint32_t> l) : letters(std::move(l)) {}
  Word(std::initializer_list<std::uint32_t> l) : letters(l) {}

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word&) const = default;

  /// 1-based rendering, e.g. "1.2.2".
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(letters[i] + 1);
    }
    return s.empty() ? "e" : s;
  }
};

/// Word of length n at lexicographic position `index` over p letters (first letter most significant).
inline Word word_from_index(std::size_t p, std::size_t n, std::uint64_t index) {
  Word w;
  w.letters.assign(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    w.letters[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return w;
}

/// p^n as a double, so callers can compare against budgets without overflow.
inline double word_count(std::size_t p, std::size_t n) { return std::pow(static_cast<double>(p), static_cast<double>(n)); }

/// Number of non-identity semigroup elements of length <= n, p + p^2 + ... + p^n.
inline double group_word_count(std::size_t p, std::size_t n) {
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += word_count(p, j);
  return total;
}

class SemigroupSystem {
 public:
  SemigroupSystem(SpaceDescriptor space, std::vector<GeneratorMap> generators, std::vector<std::string> names = {})
      : space_(std::move(space)), generators_(std::move(generators)), names_(std::move(names)) {
    require(!generators_.empty(), "a semigroup system needs at least one generator");
    for (const auto& g : generators_) g.validate(space_);
    if (names_.empty()) {
      for (std::size_t i = 0; i < generators_.size(); ++i) names_.push_back("g" + std::to_string(i + 1));
    }
    require(names_.size() == generators_.size(), "one name per generator");
  }

  const SpaceDescriptor& space() const { return space_; }
  const std::vector<GeneratorMap>& generators() const { return generators_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t arity() const { return generators_.size(); }

  void validate(const Word& w) const {
    for (auto l : w.letters) {
      if (l >= generators_.size()) {
        throw Error(ErrorKind::InvalidArgument, "word letter " + std::to_string(l + 1) + " out of range 1.." +
                                                    std::to_string(generators_.size()));
      }
    }
  }

  /// Largest generator Lipschitz constant.
  double max_lipschitz() const {
    double l = 1.0;
    for (const auto& g : generators_) l = std::max(l, g.lipschitz(space_));
    return l;
  }

  std::string describe() const {
    std::string s = space_.describe() + "|";
    for (const auto& g : generators_) s += g.describe() + ";";
    return s;
  }

  std::uint64_t hash() const { return fnv1a(describe()); }

 private:
  SpaceDescriptor space_;
  std::vector<GeneratorMap> generators_;
  std::vector<std::string> names_;
};

using OrbitSegment = std::vector<Point>;

/// x, g_{w1} x, ..., f_w^n x.
inline OrbitSegment apply_word(const SemigroupSystem& sys, const Word& w, const Point& x) {
  sys.validate(w);
  sys.space().validate(x);
  OrbitSegment seg;
  seg.reserve(w.size() + 1);
  seg.push_back(x);
  for (auto l : w.letters) {
    Point next(std::vector<double>(x.coords.size()));
    sys.generators()[l].apply(sys.space(), seg.back().coords.data(), next.coords.data());
    seg.push_back(std::move(next));
  }
  return seg;
}

/// max_{0<=j<=n} d(g_j x, g_j y) along the prefixes of w.
inline double dynamical_distance(const SemigroupSystem& sys, const Word& w, const Point& x, const Point& y) {
  const auto ox = apply_word(sys, w, x);
  const auto oy = apply_word(sys, w, y);
  double d = 0.0;
  for (std::size_t j = 0; j < ox.size(); ++j) d = std::max(d, sys.space().raw_distance(ox[j].coords.data(), oy[j].coords.data()));
  return d;
}

/// Depth at which the pair (x, y) first leaves the radius: the smallest j such that some
/// g in G_j has d(g x, g y) >= radius (> radius when `strict_exit` is false). Returns n+1
/// when the pair stays inside through depth n. Breadth-first with early exit.
inline std::size_t group_exit_depth(const SemigroupSystem& sys, const double* x, const double* y, double radius,
                                    std::size_t n, bool exit_on_equal = true) {
  const auto& space = sys.space();
  const std::size_t d = space.point_dim();
  auto leaves = [&](const double* a, const double* b) {
    const double dist = space.raw_distance(a, b);
    return exit_on_equal ? dist >= radius : dist > radius;
  };
  if (leaves(x, y)) return 0;
  std::vector<double> frontier(x, x + d);
  frontier.insert(frontier.end(), y, y + d);
  std::vector<double> next;
  const std::size_t p = sys.arity();
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t pairs = frontier.size() / (2 * d);
    next.assign(pairs * p * 2 * d, 0.0);
    for (std::size_t k = 0; k < pairs; ++k) {
      const double* a = frontier.data() + 2 * d * k;
      const double* b = a + d;
      for (std::size_t g = 0; g < p; ++g) {
        double* na = next.data() + 2 * d * (k * p + g);
        double* nb = na + d;
        sys.generators()[g].apply(space, a, na);
        sys.generators()[g].apply(space, b, nb);
        if (leaves(na, nb)) return j;
      }
    }
    frontier.swap(next);
  }
  return n + 1;
}

inline void check_group_budget(std::size_t p, std::size_t n, double budget) {
  const double need = group_word_count(p, n);
  if (need > budget) {
    std::ostringstream os;
    os << "group enumeration to depth " << n << " needs " << need << " words, budget is " << budget;
    throw BudgetError(os.str(), need, budget, static_cast<int>(n));
  }
}

/// y in B_n^G(x, eps): d(g x, g y) < eps for every g in G_j, 0 <= j <= n.
inline bool group_ball_contains(const SemigroupSystem& sys, const Point& x, const Point& y, double eps, std::size_t n,
                                double budget = 1e6) {
  require(eps > 0.0, "group ball radius must be > 0");
  sys.space().validate(x);
  sys.space().validate(y);
  check_group_budget(sys.arity(), n, budget);
  return group_exit_depth(sys, x.coords.data(), y.coords.data(), eps, n) > n;
}

/// Bernoulli measure on sequences of generator indices.
class RandomWalk {
 public:
  explicit RandomWalk(std::vector<double> probs) : probs_(std::move(probs)) {
    require(!probs_.empty(), "walk needs at least one probability");
    double sum = 0.0;
    for (double a : probs_) {
      require(std::isfinite(a) && a >= 0.0, "walk probabilities must be >= 0");
      sum += a;
    }
    require(std::fabs(sum - 1.0) <= 1e-9, "probabilities must sum to 1");
    cumulative_.resize(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
  }

  /// eta_p = (1/p, ..., 1/p)^N.
  static RandomWalk symmetric(std::size_t p) { return RandomWalk(std::vector<double>(p, 1.0 / static_cast<double>(p))); }

  const std::vector<double>& probs() const { return probs_; }
  std::size_t arity() const { return probs_.size(); }

  bool is_symmetric() const {
    for (double a : probs_) {
      if (std::fabs(a - probs_[0]) > 1e-15) return false;
    }
    return true;
  }

  /// Cylinder weight prod a_{w_i}.
  double weight(const Word& w) const {
    double p = 1.0;
    for (auto l : w.letters) {
      require(l < probs_.size(), "word letter outside the walk alphabet");
      p *= probs_[l];
    }
    return p;
  }

  /// n i.i.d. letters, deterministic in seed.
  Word sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    Word w;
    w.letters.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform() * cumulative_.back();
      std::size_t k = 0;
      // first k with u < a_1 + ... + a_k; zero-weight letters are never selected
      while (k + 1 < cumulative_.size() && u >= cumulative_[k]) ++k;
      w.letters.push_back(static_cast<std::uint32_t>(k));
    }
    return w;
  }

 private:
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

inline Word walk_sample(const RandomWalk& walk, std::size_t n, std::uint64_t seed) { return walk.sample(n, seed); }
inline double walk_weight(const RandomWalk& walk, const Word& w) { return walk.weight(w); }

/// T_G^n(omega, x) = (sigma^n omega, f_omega^n x) on a finite prefix of omega.
inline std::pair<Word, Point> skew_apply(const SemigroupSystem& sys, const Word& prefix, const Point& x, std::size_t n) {
  if (prefix.size() < n) {
    throw Error(ErrorKind::InvalidArgument, "skew_apply: prefix of length " + std::to_string(prefix.size()) +
                                                " is shorter than n = " + std::to_string(n));
  }
  sys.validate(prefix);
  sys.space().validate(x);
  Point cur = x;
  Point next(std::vector<double>(x.coords.size()));
  for (std::size_t j = 0; j < n; ++j) {
    sys.generators()[prefix.letters[j]].apply(sys.space(), cur.coords.data(), next.coords.data());
    std::swap(cur, next);
  }
  Word rest(std::vector<std::uint32_t>(prefix.letters.begin() + static_cast<std::ptrdiff_t>(n), prefix.letters.end()));
  return {std::move(rest), std::move(cur)};
}

}  // namespace mdim
