#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mdim/entropy.hpp"
#include "mdim/error.hpp"
#include "mdim/mdim.hpp"
#include "mdim/semigroup.hpp"
#include "mdim/space.hpp"

namespace mdim {

/// Everything one run needs. Built by parse_config; defaults apply to absent keys.
struct ExperimentConfig {
  // [space]
  std::string space_kind = "torus";
  int dim = 1;
  double lo = 0.0, hi = 1.0;
  std::string base = "interval";
  double base_lo = 0.0, base_hi = 1.0;
  int depth = 8;
  double ratio = 0.5;
  bool adaptive_depth = true;

  // [generators]
  std::vector<std::string> generator_names;
  std::vector<std::string> generator_specs;

  // [walk]
  std::vector<double> probs;  // empty: symmetric

  // [grid]
  std::vector<double> eps_grid{0.1, 0.05, 0.02};
  std::size_t n_cap = 12;
  std::size_t tail = 3;
  double resolution = 16.0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> estimators{"walk"};

  // [budgets]
  std::size_t word_budget = 4096;
  double group_budget = 1e6;
  std::size_t point_budget = std::size_t{1} << 20;
  double group_points = double(std::size_t{1} << 24);
  std::size_t cover_budget = std::size_t{1} << 24;
  double skew_budget = 1e6;

  // [measures]
  std::vector<std::string> candidates{"uniform"};
  std::vector<double> atom;  // empty: the space origin
  std::size_t sample_size = 2000;
  std::size_t orbit_length = 1000;
  std::vector<double> deltas{0.1};
  /// Measure for the homogeneity diagnostics and theorems E, F: uniform | density2x.
  std::string reference = "uniform";
  bool homogeneity = false;
  double L_max = 2.5;

  // [comparators]
  std::vector<std::string> comparators;
  std::vector<std::string> gating;  // empty: every selected comparator gates
  std::vector<double> radii{0.5, 0.25, 0.1};
  std::size_t x_count = 20;
  std::vector<std::size_t> cover_n{1, 2, 3, 4};
  std::size_t cover_balls = 8;
  double cover_radius = 0.125;
  std::size_t cover_points = 256;
  std::vector<double> s_grid{0.0, 0.5, 1.0};
  std::size_t group_depth = 6;
  std::vector<double> ratios{0.5, 0.25, 0.125};
  double c_max = 1.5;
  double rate_rel = 0.1;
  double rate_abs = 0.05;
  double slope_tol = 0.15;

  // [output]
  std::string out_dir = "mdim-out";

  SpaceDescriptor make_space() const {
    if (space_kind == "interval") return SpaceDescriptor::interval(lo, hi);
    if (space_kind == "torus") return SpaceDescriptor::torus(dim);
    const auto b = base == "circle" ? SpaceDescriptor::torus(1) : SpaceDescriptor::interval(base_lo, base_hi);
    return SpaceDescriptor::sequence(b, depth, ratio);
  }

  SemigroupSystem make_system() const {
    std::vector<GeneratorMap> gens;
    for (const auto& s : generator_specs) gens.push_back(parse_generator(s));
    return SemigroupSystem(make_space(), gens, generator_names);
  }

  RandomWalk make_walk() const {
    if (probs.empty()) return RandomWalk::symmetric(generator_specs.size());
    return RandomWalk(probs);
  }

  SweepSpec make_sweep() const {
    SweepSpec s;
    s.eps_grid = eps_grid;
    s.n_cap = n_cap;
    s.tail = tail;
    s.point_budget = point_budget;
    s.resolution = resolution;
    s.adaptive_depth = adaptive_depth;
    s.group_points = group_points;
    s.group_budget = group_budget;
    return s;
  }

  EstimatorParams make_params(unsigned workers) const {
    EstimatorParams p;
    p.word_budget = word_budget;
    p.group_budget = group_budget;
    p.cover_budget = cover_budget;
    p.tail = tail;
    p.seed = seed.value_or(0);
    p.workers = workers;
    return p;
  }

  Tolerances make_tolerances() const { return {rate_rel, rate_abs, slope_tol}; }

  bool selected(const std::vector<std::string>& list, const std::string& name) const {
    for (const auto& s : list) {
      if (s == name) return true;
    }
    return false;
  }

  bool gates(const std::string& comparator) const { return gating.empty() || selected(gating, comparator); }

  /// Generator grammar: affine <k> [c] | rotation <a> [a ...] | tent <s> | shift | identity.
  static GeneratorMap parse_generator(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    std::vector<double> args;
    std::string tok;
    while (in >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      require(end != tok.c_str() && *end == '\0' && std::isfinite(v), "generator argument '" + tok + "' is not a number",
              ErrorKind::Config);
      args.push_back(v);
    }
    if (kind == "affine") {
      require(args.size() == 1 || args.size() == 2, "affine takes a slope and an optional offset", ErrorKind::Config);
      require(args[0] == std::floor(args[0]), "affine slope must be an integer", ErrorKind::Config);
      return GeneratorMap::affine(static_cast<int>(args[0]), args.size() == 2 ? args[1] : 0.0);
    }
    if (kind == "rotation") {
      require(!args.empty(), "rotation takes at least one angle", ErrorKind::Config);
      return GeneratorMap::rotation(args);
    }
    if (kind == "tent") {
      require(args.size() == 1, "tent takes one slope", ErrorKind::Config);
      return GeneratorMap::tent(args[0]);
    }
    if (kind == "shift" || kind == "identity") {
      require(args.empty(), kind + " takes no arguments", ErrorKind::Config);
      return kind == "shift" ? GeneratorMap::shift() : GeneratorMap::identity();
    }
    throw Error(ErrorKind::Config, "unknown generator kind '" + kind + "'");
  }
};

struct ConfigResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw Error(ErrorKind::Config, "'" + s + "' is not a number");
  }
  return v;
}

inline std::size_t parse_count(const std::string& s) {
  const double v = parse_double(s);
  if (v < 0.0 || v != std::floor(v) || v > 9.0e15) throw Error(ErrorKind::Config, "'" + s + "' is not a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw Error(ErrorKind::Config, "'" + s + "' is not a boolean");
}

inline std::vector<double> parse_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& t : split_list(v)) out.push_back(parse_double(t));
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
  return s;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

}  // namespace detail

/// Parses the sectioned key = value format. Every problem is collected with its line
/// number; the config is returned only when there are none.
inline ConfigResult parse_config(const std::string& text) {
  using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
  using namespace detail;
  const std::map<std::string, std::map<std::string, Setter>> keys = {
      {"space",
       {{"kind", [](ExperimentConfig& c, const std::string& v) { c.space_kind = v; }},
        {"dim", [](ExperimentConfig& c, const std::string& v) { c.dim = static_cast<int>(parse_count(v)); }},
        {"lo", [](ExperimentConfig& c, const std::string& v) { c.lo = parse_double(v); }},
        {"hi", [](ExperimentConfig& c, const std::string& v) { c.hi = parse_double(v); }},
        {"base", [](ExperimentConfig& c, const std::string& v) { c.base = v; }},
        {"base_lo", [](ExperimentConfig& c, const std::string& v) { c.base_lo = parse_double(v); }},
        {"base_hi", [](ExperimentConfig& c, const std::string& v) { c.base_hi = parse_double(v); }},
        {"depth", [](ExperimentConfig& c, const std::string& v) { c.depth = static_cast<int>(parse_count(v)); }},
        {"ratio", [](ExperimentConfig& c, const std::string& v) { c.ratio = parse_double(v); }},
        {"adaptive_depth", [](ExperimentConfig& c, const std::string& v) { c.adaptive_depth = parse_bool(v); }}}},
      {"walk", {{"probs", [](ExperimentConfig& c, const std::string& v) { c.probs = parse_doubles(v); }}}},
      {"grid",
       {{"eps", [](ExperimentConfig& c, const std::string& v) { c.eps_grid = parse_doubles(v); }},
        {"n_cap", [](ExperimentConfig& c, const std::string& v) { c.n_cap = parse_count(v); }},
        {"tail", [](ExperimentConfig& c, const std::string& v) { c.tail = parse_count(v); }},
        {"resolution", [](ExperimentConfig& c, const std::string& v) { c.resolution = parse_double(v); }},
        {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_count(v); }},
        {"estimators", [](ExperimentConfig& c, const std::string& v) { c.estimators = split_list(v); }}}},
      {"budgets",
       {{"word_budget", [](ExperimentConfig& c, const std::string& v) { c.word_budget = parse_count(v); }},
        {"group_budget", [](ExperimentConfig& c, const std::string& v) { c.group_budget = parse_double(v); }},
        {"point_budget", [](ExperimentConfig& c, const std::string& v) { c.point_budget = parse_count(v); }},
        {"group_points", [](ExperimentConfig& c, const std::string& v) { c.group_points = parse_double(v); }},
        {"cover_budget", [](ExperimentConfig& c, const std::string& v) { c.cover_budget = parse_count(v); }},
        {"skew_budget", [](ExperimentConfig& c, const std::string& v) { c.skew_budget = parse_double(v); }}}},
      {"measures",
       {{"candidates", [](ExperimentConfig& c, const std::string& v) { c.candidates = split_list(v); }},
        {"atom", [](ExperimentConfig& c, const std::string& v) { c.atom = parse_doubles(v); }},
        {"sample_size", [](ExperimentConfig& c, const std::string& v) { c.sample_size = parse_count(v); }},
        {"orbit_length", [](ExperimentConfig& c, const std::string& v) { c.orbit_length = parse_count(v); }},
        {"deltas", [](ExperimentConfig& c, const std::string& v) { c.deltas = parse_doubles(v); }},
        {"reference", [](ExperimentConfig& c, const std::string& v) { c.reference = v; }},
        {"homogeneity", [](ExperimentConfig& c, const std::string& v) { c.homogeneity = parse_bool(v); }},
        {"L_max", [](ExperimentConfig& c, const std::string& v) { c.L_max = parse_double(v); }}}},
      {"comparators",
       {{"run", [](ExperimentConfig& c, const std::string& v) { c.comparators = split_list(v); }},
        {"gating", [](ExperimentConfig& c, const std::string& v) { c.gating = split_list(v); }},
        {"radii", [](ExperimentConfig& c, const std::string& v) { c.radii = parse_doubles(v); }},
        {"x_count", [](ExperimentConfig& c, const std::string& v) { c.x_count = parse_count(v); }},
        {"cover_n",
         [](ExperimentConfig& c, const std::string& v) {
           c.cover_n.clear();
           for (const auto& t : split_list(v)) c.cover_n.push_back(parse_count(t));
         }},
        {"cover_balls", [](ExperimentConfig& c, const std::string& v) { c.cover_balls = parse_count(v); }},
        {"cover_radius", [](ExperimentConfig& c, const std::string& v) { c.cover_radius = parse_double(v); }},
        {"cover_points", [](ExperimentConfig& c, const std::string& v) { c.cover_points = parse_count(v); }},
        {"s_grid", [](ExperimentConfig& c, const std::string& v) { c.s_grid = parse_doubles(v); }},
        {"group_depth", [](ExperimentConfig& c, const std::string& v) { c.group_depth = parse_count(v); }},
        {"ratios", [](ExperimentConfig& c, const std::string& v) { c.ratios = parse_doubles(v); }},
        {"c_max", [](ExperimentConfig& c, const std::string& v) { c.c_max = parse_double(v); }},
        {"rate_rel", [](ExperimentConfig& c, const std::string& v) { c.rate_rel = parse_double(v); }},
        {"rate_abs", [](ExperimentConfig& c, const std::string& v) { c.rate_abs = parse_double(v); }},
        {"slope_tol", [](ExperimentConfig& c, const std::string& v) { c.slope_tol = parse_double(v); }}}},
      {"output", {{"dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; }}}},
  };

  ConfigResult res;
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> where;  // "section.key" -> line
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  auto err = [&](std::size_t line, const std::string& msg) {
    res.errors.push_back(line ? "line " + std::to_string(line) + ": " + msg : msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        err(line_no, "malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "generators" && !keys.count(section)) err(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err(line_no, "expected key = value, got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      err(line_no, "key '" + key + "' appears before any section");
      continue;
    }
    const std::string full = section + "." + key;
    if (seen.count(full)) {
      err(line_no, "duplicate key '" + key + "' in [" + section + "]");
      continue;
    }
    seen.insert(full);
    where[full] = line_no;
    if (section == "generators") {
      try {
        ExperimentConfig::parse_generator(value);
        cfg.generator_names.push_back(key);
        cfg.generator_specs.push_back(value);
      } catch (const Error& e) {
        err(line_no, "generator '" + key + "': " + e.what());
      }
      continue;
    }
    auto sec = keys.find(section);
    if (sec == keys.end()) continue;  // already reported
    auto k = sec->second.find(key);
    if (k == sec->second.end()) {
      err(line_no, "unknown key '" + key + "' in [" + section + "]");
      continue;
    }
    try {
      k->second(cfg, value);
    } catch (const Error& e) {
      err(line_no, key + ": " + e.what());
    }
  }

  auto at = [&](const std::string& full) {
    auto it = where.find(full);
    return it == where.end() ? std::size_t{0} : it->second;
  };
  auto check = [&](bool ok, const std::string& full, const std::string& msg) {
    if (!ok) err(at(full), msg);
  };

  // constraints, all collected
  check(cfg.space_kind == "interval" || cfg.space_kind == "torus" || cfg.space_kind == "sequence", "space.kind",
        "space kind must be interval, torus or sequence");
  if (cfg.space_kind == "interval") check(cfg.lo < cfg.hi, "space.hi", "interval needs lo < hi");
  if (cfg.space_kind == "torus") check(cfg.dim >= 1, "space.dim", "torus dimension must be >= 1");
  if (cfg.space_kind == "sequence") {
    check(cfg.base == "interval" || cfg.base == "circle", "space.base", "sequence base must be interval or circle");
    check(cfg.base_lo < cfg.base_hi, "space.base_hi", "sequence base needs base_lo < base_hi");
    check(cfg.depth >= 1, "space.depth", "sequence truncation depth must be >= 1");
    check(cfg.ratio > 0.0 && cfg.ratio < 1.0, "space.ratio", "sequence ratio must lie in (0, 1)");
  }
  if (cfg.generator_specs.empty()) err(0, "[generators] must list at least one generator");
  if (!cfg.probs.empty()) {
    check(cfg.probs.size() == cfg.generator_specs.size(), "walk.probs", "walk needs one probability per generator");
    double sum = 0.0;
    bool nonneg = true;
    for (double p : cfg.probs) {
      sum += p;
      nonneg = nonneg && p >= 0.0;
    }
    check(nonneg, "walk.probs", "walk probabilities must be >= 0");
    check(std::fabs(sum - 1.0) <= 1e-9, "walk.probs", "probabilities must sum to 1 (sum is " + fmt(sum) + ")");
  }
  {
    bool ok = !cfg.eps_grid.empty();
    for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
      ok = ok && cfg.eps_grid[i] > 0.0 && cfg.eps_grid[i] < 1.0 && (i == 0 || cfg.eps_grid[i] < cfg.eps_grid[i - 1]);
    }
    check(ok, "grid.eps", "eps grid {" + join(cfg.eps_grid) + "} must be strictly decreasing inside (0, 1)");
  }
  check(cfg.seed.has_value(), "grid.seed", "seed is mandatory ([grid] seed = <integer>)");
  check(cfg.tail >= 2, "grid.tail", "tail must be >= 2");
  check(cfg.n_cap >= 1, "grid.n_cap", "n_cap must be >= 1");
  check(cfg.resolution > 0.0, "grid.resolution", "resolution must be > 0");
  for (const auto& e : cfg.estimators) {
    check(e == "walk" || e == "glw" || e == "box", "grid.estimators", "unknown estimator '" + e + "'");
  }
  check(cfg.word_budget >= 2, "budgets.word_budget", "word_budget must be >= 2");
  check(cfg.group_budget > 0.0, "budgets.group_budget", "group_budget must be > 0");
  check(cfg.point_budget > 0, "budgets.point_budget", "point_budget must be > 0");
  check(cfg.group_points > 0.0, "budgets.group_points", "group_points must be > 0");
  check(cfg.cover_budget > 0, "budgets.cover_budget", "cover_budget must be > 0");
  check(cfg.skew_budget > 0.0, "budgets.skew_budget", "skew_budget must be > 0");
  for (const auto& c : cfg.candidates) {
    check(c == "uniform" || c == "atom" || c == "orbit" || c == "random", "measures.candidates",
          "unknown measure candidate '" + c + "'");
  }
  check(cfg.sample_size > 0, "measures.sample_size", "sample_size must be > 0");
  check(cfg.orbit_length > 0, "measures.orbit_length", "orbit_length must be > 0");
  for (double d : cfg.deltas) check(d > 0.0 && d < 1.0, "measures.deltas", "deltas must lie in (0, 1)");
  check(cfg.reference == "uniform" || cfg.reference == "density2x", "measures.reference",
        "reference measure must be uniform or density2x");
  check(cfg.L_max >= 1.0, "measures.L_max", "L_max must be >= 1");
  static const std::set<std::string> known = {"A", "B", "C", "D", "E", "F"};
  for (const auto& c : cfg.comparators) check(known.count(c) > 0, "comparators.run", "unknown comparator '" + c + "'");
  for (const auto& c : cfg.gating) {
    check(cfg.selected(cfg.comparators, c), "comparators.gating", "gating comparator '" + c + "' is not selected in run");
  }
  for (double r : cfg.radii) check(r > 0.0, "comparators.radii", "radii must be > 0");
  check(cfg.x_count > 0, "comparators.x_count", "x_count must be > 0");
  check(cfg.cover_balls > 0 && cfg.cover_radius > 0.0 && cfg.cover_points > 0, "comparators.cover_balls",
        "cover_balls, cover_radius and cover_points must be positive");
  check(cfg.c_max >= 1.0, "comparators.c_max", "c_max must be >= 1");
  for (double r : cfg.ratios) check(r > 0.0 && r <= 1.0, "comparators.ratios", "ratios must lie in (0, 1]");
  check(cfg.rate_rel >= 0.0 && cfg.rate_abs >= 0.0 && cfg.slope_tol >= 0.0, "comparators.slope_tol",
        "tolerances must be >= 0");
  check(!cfg.out_dir.empty(), "output.dir", "output dir must not be empty");

  if (res.errors.empty()) {
    try {
      cfg.make_system();
      cfg.make_walk();
    } catch (const Error& e) {
      err(0, e.what());
    }
  }
  if (res.errors.empty()) res.config = std::move(cfg);
  return res;
}

inline ConfigResult load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) return {std::nullopt, {"cannot open config file " + path}};
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Normalized text of a config; reparsing it yields the same config.
inline std::string canonical_config(const ExperimentConfig& c) {
  using detail::fmt;
  using detail::join;
  std::ostringstream o;
  o << "[space]\nkind = " << c.space_kind << "\n";
  if (c.space_kind == "interval") o << "lo = " << fmt(c.lo) << "\nhi = " << fmt(c.hi) << "\n";
  if (c.space_kind == "torus") o << "dim = " << c.dim << "\n";
  if (c.space_kind == "sequence") {
    o << "base = " << c.base << "\nbase_lo = " << fmt(c.base_lo) << "\nbase_hi = " << fmt(c.base_hi) << "\ndepth = " << c.depth
      << "\nratio = " << fmt(c.ratio) << "\nadaptive_depth = " << (c.adaptive_depth ? "true" : "false") << "\n";
  }
  o << "\n[generators]\n";
  for (std::size_t i = 0; i < c.generator_specs.size(); ++i) o << c.generator_names[i] << " = " << c.generator_specs[i] << "\n";
  o << "\n[walk]\n";
  if (!c.probs.empty()) o << "probs = " << join(c.probs) << "\n";
  o << "\n[grid]\neps = " << join(c.eps_grid) << "\nn_cap = " << c.n_cap << "\ntail = " << c.tail
    << "\nresolution = " << fmt(c.resolution) << "\nseed = " << c.seed.value_or(0) << "\nestimators = " << join(c.estimators)
    << "\n";
  o << "\n[budgets]\nword_budget = " << c.word_budget << "\ngroup_budget = " << fmt(c.group_budget)
    << "\npoint_budget = " << c.point_budget << "\ngroup_points = " << fmt(c.group_points)
    << "\ncover_budget = " << c.cover_budget << "\nskew_budget = " << fmt(c.skew_budget) << "\n";
  o << "\n[measures]\ncandidates = " << join(c.candidates) << "\n";
  if (!c.atom.empty()) o << "atom = " << join(c.atom) << "\n";
  o << "sample_size = " << c.sample_size << "\norbit_length = " << c.orbit_length << "\ndeltas = " << join(c.deltas)
    << "\nreference = " << c.reference << "\nhomogeneity = " << (c.homogeneity ? "true" : "false")
    << "\nL_max = " << fmt(c.L_max) << "\n";
  o << "\n[comparators]\n";
  if (!c.comparators.empty()) o << "run = " << join(c.comparators) << "\n";
  if (!c.gating.empty()) o << "gating = " << join(c.gating) << "\n";
  o << "radii = " << join(c.radii) << "\nx_count = " << c.x_count << "\ncover_n =";
  for (auto n : c.cover_n) o << " " << n;
  o << "\ncover_balls = " << c.cover_balls << "\ncover_radius = " << fmt(c.cover_radius)
    << "\ncover_points = " << c.cover_points << "\ns_grid = " << join(c.s_grid) << "\ngroup_depth = " << c.group_depth
    << "\nratios = " << join(c.ratios) << "\nc_max = " << fmt(c.c_max) << "\nrate_rel = " << fmt(c.rate_rel)
    << "\nrate_abs = " << fmt(c.rate_abs) << "\nslope_tol = " << fmt(c.slope_tol) << "\n";
  o << "\n[output]\ndir = " << c.out_dir << "\n";
  return o.str();
}

}  // namespace mdim
