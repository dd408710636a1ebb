#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "mdim/error.hpp"
#include "mdim/fin_model.hpp"

namespace mdim {

/// Ball comparison for spanning: d <= eps (default) or d < eps.
enum class Comparison { NonStrict, Strict };

struct SeparatedSet {
  std::vector<std::size_t> centers;
  /// owner[i]: position in `centers` of a selected center within eps of point i, the first
  /// one met in the neighbor scan (a center owns itself).
  std::vector<std::uint32_t> owner;
};

namespace detail {

template <FiniteMetric M>
CellIndex index_for(const M& metric, double eps) {
  return CellIndex(metric.projections(), eps, metric.size());
}

}  // namespace detail

/// Greedy maximal eps-separated subset in index order: a point is kept iff its distance to
/// every kept point exceeds eps.
template <FiniteMetric M>
SeparatedSet maximal_separated(const M& metric, double eps) {
  require(metric.size() >= 1, "maximal_separated: empty model");
  require(eps > 0.0, "maximal_separated: eps must be > 0");
  SeparatedSet out;
  out.owner.resize(metric.size());
  CellIndex index = detail::index_for(metric, eps);
  for (std::size_t i = 0; i < metric.size(); ++i) {
    std::size_t found = SIZE_MAX;
    index.visit(i, [&](std::size_t c) {
      if (metric.within(i, c, eps, false)) {
        found = c;
        return false;
      }
      return true;
    });
    if (found == SIZE_MAX) {
      out.owner[i] = static_cast<std::uint32_t>(out.centers.size());
      out.centers.push_back(i);
      index.insert(i);
    } else {
      // centers are inserted in increasing order, so the owner slot is found by search
      auto it = std::lower_bound(out.centers.begin(), out.centers.end(), found);
      out.owner[i] = static_cast<std::uint32_t>(it - out.centers.begin());
    }
  }
  return out;
}

/// Member lists of a set system over points 0..universe-1.
struct SetFamily {
  std::size_t universe = 0;
  std::vector<std::vector<std::uint32_t>> sets;
};

/// Greedy set cover: repeatedly take the set covering most uncovered points, ties by lowest
/// index. Points in no set are left uncovered. Returns chosen set indices in pick order.
inline std::vector<std::size_t> greedy_cover_sequence(const SetFamily& family) {
  std::vector<std::vector<std::uint32_t>> holders(family.universe);
  for (std::size_t s = 0; s < family.sets.size(); ++s) {
    for (auto x : family.sets[s]) holders[x].push_back(static_cast<std::uint32_t>(s));
  }
  std::vector<std::size_t> gain(family.sets.size());
  for (std::size_t s = 0; s < family.sets.size(); ++s) gain[s] = family.sets[s].size();
  // lazy max-heap; a popped entry is current iff its key matches the live gain
  using Entry = std::pair<std::size_t, std::size_t>;
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t s = 0; s < gain.size(); ++s) {
    if (gain[s] > 0) heap.push({gain[s], s});
  }
  std::vector<char> covered(family.universe, 0);
  std::vector<std::size_t> picks;
  while (!heap.empty()) {
    auto [g, s] = heap.top();
    heap.pop();
    if (g != gain[s]) {
      if (gain[s] > 0) heap.push({gain[s], s});
      continue;
    }
    picks.push_back(s);
    for (auto x : family.sets[s]) {
      if (covered[x]) continue;
      covered[x] = 1;
      for (auto t : holders[x]) --gain[t];
    }
  }
  return picks;
}

struct SubcoverResult {
  std::size_t count = 0;
  std::vector<std::size_t> chosen;
};

/// Greedy minimal subcover; every point must lie in some set.
inline SubcoverResult min_subcover(const SetFamily& family) {
  std::vector<char> hit(family.universe, 0);
  for (const auto& s : family.sets) {
    for (auto x : s) {
      require(x < family.universe, "set member outside the model");
      hit[x] = 1;
    }
  }
  for (std::size_t x = 0; x < family.universe; ++x) {
    if (!hit[x]) throw Error(ErrorKind::NotACover, "not a cover: point " + std::to_string(x) + " lies in no set");
  }
  SubcoverResult r;
  r.chosen = greedy_cover_sequence(family);
  r.count = r.chosen.size();
  return r;
}

/// Fewest sets found greedily that leave uncovered weight < delta. Two greedy orders are
/// tried (by uncovered count and by uncovered weight) and the shorter kept; the count-order
/// candidate is a prefix of the min_subcover sequence, so the result never exceeds it and is
/// nonincreasing in delta.
inline SubcoverResult min_subcover_mass(const SetFamily& family, const std::vector<double>& weights, double delta) {
  require(delta > 0.0 && delta < 1.0, "min_subcover_mass: delta must lie in (0, 1)");
  require(weights.size() == family.universe, "one weight per model point", ErrorKind::DimensionMismatch);
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "weights must be >= 0");
    total += w;
  }
  require(std::fabs(total - 1.0) <= 1e-9, "weights must sum to 1");

  std::vector<char> hit(family.universe, 0);
  for (const auto& s : family.sets) {
    for (auto x : s) hit[x] = 1;
  }
  double unreachable = 0.0;
  std::size_t witness = SIZE_MAX;
  for (std::size_t x = 0; x < family.universe; ++x) {
    if (!hit[x]) {
      unreachable += weights[x];
      if (witness == SIZE_MAX && weights[x] > 0.0) witness = x;
    }
  }
  if (!(unreachable < delta)) {
    throw Error(ErrorKind::NotACover, "uncovered mass " + std::to_string(unreachable) + " is not below delta; point " +
                                          std::to_string(witness) + " lies in no set");
  }

  // count order
  SubcoverResult by_count;
  {
    double left = total;
    std::vector<char> covered(family.universe, 0);
    if (!(left < delta)) {
      for (auto s : greedy_cover_sequence(family)) {
        by_count.chosen.push_back(s);
        for (auto x : family.sets[s]) {
          if (!covered[x]) {
            covered[x] = 1;
            left -= weights[x];
          }
        }
        if (left < delta) break;
      }
    }
    by_count.count = by_count.chosen.size();
  }

  // weight order (quadratic in the number of sets; used as a refinement)
  SubcoverResult by_mass;
  {
    double left = total;
    std::vector<char> covered(family.universe, 0);
    std::vector<char> used(family.sets.size(), 0);
    while (!(left < delta)) {
      double best = 0.0;
      std::size_t pick = SIZE_MAX;
      for (std::size_t s = 0; s < family.sets.size(); ++s) {
        if (used[s]) continue;
        double g = 0.0;
        for (auto x : family.sets[s]) {
          if (!covered[x]) g += weights[x];
        }
        if (g > best) {
          best = g;
          pick = s;
        }
      }
      if (pick == SIZE_MAX) break;
      used[pick] = 1;
      by_mass.chosen.push_back(pick);
      for (auto x : family.sets[pick]) {
        if (!covered[x]) {
          covered[x] = 1;
          left -= weights[x];
        }
      }
      if (by_mass.chosen.size() >= by_count.count) break;
    }
    by_mass.count = by_mass.chosen.size();
  }
  return by_mass.count < by_count.count ? by_mass : by_count;
}

/// Closed (or open, per `cmp`) eps-ball member lists of every point.
template <FiniteMetric M>
SetFamily ball_family(const M& metric, double eps, Comparison cmp = Comparison::NonStrict) {
  SetFamily f;
  f.universe = metric.size();
  f.sets.resize(metric.size());
  CellIndex index = detail::index_for(metric, eps);
  for (std::size_t i = 0; i < metric.size(); ++i) index.insert(i);
  const bool strict = cmp == Comparison::Strict;
  for (std::size_t i = 0; i < metric.size(); ++i) {
    auto& s = f.sets[i];
    index.visit(i, [&](std::size_t j) {
      if (metric.within(i, j, eps, strict)) s.push_back(static_cast<std::uint32_t>(j));
      return true;
    });
    std::sort(s.begin(), s.end());
  }
  return f;
}

/// Greedy eps-spanning subset: greedy set cover over the eps-balls centered at model points.
template <FiniteMetric M>
std::vector<std::size_t> greedy_spanning(const M& metric, double eps, Comparison cmp = Comparison::NonStrict) {
  require(metric.size() >= 1, "greedy_spanning: empty model");
  require(eps > 0.0, "greedy_spanning: eps must be > 0");
  return greedy_cover_sequence(ball_family(metric, eps, cmp));
}

enum class OracleMode { Separated, Spanning, Subcover };

struct OracleResult {
  std::size_t optimum = 0;
  std::vector<std::size_t> witness;
};

namespace detail {

using Mask = std::uint32_t;

inline void max_independent(Mask candidates, Mask chosen, const std::vector<Mask>& conflict, OracleResult& best) {
  if (candidates == 0) {
    const auto size = static_cast<std::size_t>(std::popcount(chosen));
    if (size > best.optimum) {
      best.optimum = size;
      best.witness.clear();
      for (Mask m = chosen; m; m &= m - 1) best.witness.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    }
    return;
  }
  if (static_cast<std::size_t>(std::popcount(chosen) + std::popcount(candidates)) <= best.optimum) return;
  const int v = std::countr_zero(candidates);
  const Mask bit = Mask{1} << v;
  max_independent(candidates & ~conflict[v] & ~bit, chosen | bit, conflict, best);
  max_independent(candidates & ~bit, chosen, conflict, best);
}

inline void min_cover(Mask uncovered, std::vector<std::size_t>& chosen, const std::vector<Mask>& sets, OracleResult& best) {
  if (uncovered == 0) {
    if (chosen.size() < best.optimum) {
      best.optimum = chosen.size();
      best.witness = chosen;
    }
    return;
  }
  if (chosen.size() + 1 >= best.optimum) return;
  const Mask e = uncovered & (~uncovered + 1);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (!(sets[s] & e)) continue;
    chosen.push_back(s);
    min_cover(uncovered & ~sets[s], chosen, sets, best);
    chosen.pop_back();
  }
}

}  // namespace detail

/// Exact optimum by branch-and-bound: maximum eps-separated subset, minimum eps-spanning
/// subset, or minimum subcover of `family`. Capped at `cap` points (hard limit 32).
template <FiniteMetric M>
OracleResult exact_small_oracle(const M& metric, double eps, OracleMode mode, const SetFamily* family = nullptr,
                                Comparison cmp = Comparison::NonStrict, std::size_t cap = 20) {
  const std::size_t m = metric.size();
  require(m >= 1, "oracle: empty model");
  if (m > cap || m > 32) {
    throw BudgetError("oracle: " + std::to_string(m) + " points exceed the cap of " + std::to_string(cap),
                      static_cast<double>(m), static_cast<double>(cap), -1, ErrorKind::CapExceeded);
  }
  const detail::Mask all = m == 32 ? ~detail::Mask{0} : (detail::Mask{1} << m) - 1;
  OracleResult best;
  if (mode == OracleMode::Separated) {
    std::vector<detail::Mask> conflict(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j && metric.within(i, j, eps, false)) conflict[i] |= detail::Mask{1} << j;
      }
    }
    detail::max_independent(all, 0, conflict, best);
    return best;
  }
  std::vector<detail::Mask> sets;
  if (mode == OracleMode::Spanning) {
    const bool strict = cmp == Comparison::Strict;
    for (std::size_t i = 0; i < m; ++i) {
      detail::Mask b = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (metric.within(i, j, eps, strict)) b |= detail::Mask{1} << j;
      }
      sets.push_back(b);
    }
  } else {
    require(family != nullptr, "oracle: subcover mode needs a set family");
    require(family->universe == m, "oracle: set family does not match the model", ErrorKind::DimensionMismatch);
    detail::Mask hit = 0;
    for (const auto& s : family->sets) {
      detail::Mask b = 0;
      for (auto x : s) b |= detail::Mask{1} << x;
      sets.push_back(b);
      hit |= b;
    }
    if (hit != all) {
      const int x = std::countr_zero(all & ~hit);
      throw Error(ErrorKind::NotACover, "not a cover: point " + std::to_string(x) + " lies in no set");
    }
  }
  best.optimum = sets.size() + 1;
  std::vector<std::size_t> chosen;
  detail::min_cover(all, chosen, sets, best);
  return best;
}

/// Plain-text instance: distance matrix plus optional set family.
struct OracleInstance {
  OracleMode mode = OracleMode::Separated;
  double epsilon = 0.0;
  Comparison comparison = Comparison::NonStrict;
  std::vector<std::vector<double>> matrix;
  SetFamily family;
};

/// Writes the pairwise distances of a metric in the instance format read by read_instance.
template <FiniteMetric M>
void dump_instance(const M& metric, double eps, OracleMode mode, std::ostream& os, const SetFamily* family = nullptr) {
  static const char* names[] = {"separated", "spanning", "subcover"};
  char buf[64];
  os << "mode " << names[static_cast<int>(mode)] << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", eps);
  os << "epsilon " << buf << "\n";
  os << "matrix " << metric.size() << "\n";
  for (std::size_t i = 0; i < metric.size(); ++i) {
    for (std::size_t j = 0; j < metric.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", metric.distance(i, j));
      os << (j ? " " : "") << buf;
    }
    os << "\n";
  }
  if (family) {
    os << "sets " << family->sets.size() << "\n";
    for (const auto& s : family->sets) {
      for (std::size_t k = 0; k < s.size(); ++k) os << (k ? " " : "") << s[k];
      os << "\n";
    }
  }
}

/// Parses the instance format:
///   mode separated|spanning|subcover
///   epsilon <real>
///   comparison nonstrict|strict      (optional)
///   matrix <m>  followed by m rows of m distances
///   sets <k>    followed by k rows of member indices (subcover mode)
/// Blank lines and lines starting with '#' are ignored.
inline OracleInstance read_instance(std::istream& in) {
  OracleInstance inst;
  std::string line;
  std::size_t lineno = 0;
  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::Config, "instance line " + std::to_string(lineno) + ": " + what);
  };
  bool have_eps = false;
  while (next_data_line(line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "mode") {
      std::string v;
      ls >> v;
      if (v == "separated") inst.mode = OracleMode::Separated;
      else if (v == "spanning") inst.mode = OracleMode::Spanning;
      else if (v == "subcover") inst.mode = OracleMode::Subcover;
      else fail("unknown mode '" + v + "'");
    } else if (key == "epsilon") {
      if (!(ls >> inst.epsilon) || !(inst.epsilon > 0.0)) fail("epsilon must be a positive number");
      have_eps = true;
    } else if (key == "comparison") {
      std::string v;
      ls >> v;
      if (v == "strict") inst.comparison = Comparison::Strict;
      else if (v == "nonstrict") inst.comparison = Comparison::NonStrict;
      else fail("unknown comparison '" + v + "'");
    } else if (key == "matrix") {
      std::size_t m = 0;
      if (!(ls >> m) || m == 0) fail("matrix size must be >= 1");
      inst.matrix.assign(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) {
        std::string row;
        if (!next_data_line(row)) fail("matrix ends after " + std::to_string(i) + " rows");
        std::istringstream rs(row);
        for (std::size_t j = 0; j < m; ++j) {
          if (!(rs >> inst.matrix[i][j]) || inst.matrix[i][j] < 0.0) fail("bad distance in matrix row");
        }
      }
    } else if (key == "sets") {
      std::size_t k = 0;
      if (!(ls >> k)) fail("sets needs a count");
      inst.family.sets.assign(k, {});
      for (std::size_t s = 0; s < k; ++s) {
        std::string row;
        if (!next_data_line(row)) fail("set list ends early");
        std::istringstream rs(row);
        std::uint32_t x = 0;
        while (rs >> x) inst.family.sets[s].push_back(x);
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (inst.matrix.empty()) fail("missing matrix");
  if (!have_eps && inst.mode != OracleMode::Subcover) fail("missing epsilon");
  const std::size_t m = inst.matrix.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (inst.matrix[i][j] != inst.matrix[j][i]) fail("matrix is not symmetric");
    }
  }
  inst.family.universe = m;
  for (const auto& s : inst.family.sets) {
    for (auto x : s) {
      if (x >= m) fail("set member " + std::to_string(x) + " outside the matrix");
    }
  }
  return inst;
}

inline OracleResult solve_instance(const OracleInstance& inst, std::size_t cap = 20) {
  MatrixMetric metric(inst.matrix);
  return exact_small_oracle(metric, inst.epsilon > 0.0 ? inst.epsilon : 1.0, inst.mode, &inst.family, inst.comparison,
                            cap);
}

}  // namespace mdim
