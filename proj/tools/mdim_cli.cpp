#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mdim/mdim_all.hpp"

namespace {

int cmd_validate(const std::string& path) {
  const auto res = mdim::load_config(path);
  if (!res.ok()) {
    for (const auto& e : res.errors) std::cerr << path << ": " << e << '\n';
    return 2;
  }
  std::cout << path << ": ok\n";
  return 0;
}

int cmd_run(const std::string& path, const std::string& out_override, bool no_cache) {
  const auto res = mdim::load_config(path);
  if (!res.ok()) {
    for (const auto& e : res.errors) std::cerr << path << ": " << e << '\n';
    return 2;
  }
  auto cfg = *res.config;
  if (!out_override.empty()) cfg.out_dir = out_override;
  const unsigned workers = mdim::workers_from_env();
  const auto report = mdim::run_experiment(cfg, workers, !no_cache);
  try {
    mdim::emit_report(report, cfg.out_dir);
  } catch (const mdim::Error& e) {
    std::cerr << e.what() << '\n';
    return 3;
  }
  std::cout << mdim::summary_text(report).substr(0, mdim::summary_text(report).find("\nconfig:\n"));
  std::fprintf(stderr, "wall clock %.2f s, %u worker(s), reports in %s\n", report.wall_seconds, workers, cfg.out_dir.c_str());
  return report.success() ? 0 : 1;
}

int cmd_oracle(const std::string& path, std::size_t cap) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "cannot open instance file " << path << '\n';
    return 2;
  }
  try {
    const auto inst = mdim::read_instance(f);
    const auto r = mdim::solve_instance(inst, cap);
    static const char* modes[] = {"separated", "spanning", "subcover"};
    std::cout << "mode " << modes[static_cast<int>(inst.mode)] << "\noptimum " << r.optimum << "\nwitness";
    for (auto i : r.witness) std::cout << ' ' << i;
    std::cout << '\n';
  } catch (const mdim::Error& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy and metric mean dimension estimates for finitely generated semigroup actions"};
  app.require_subcommand(1);

  std::string run_path, out_dir;
  bool no_cache = false;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its reports");
  run->add_option("config", run_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
  run->add_flag("--no-cache", no_cache, "Disable the orbit cache");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and check a config, listing every error");
  validate->add_option("config", validate_path, "Experiment config file")->required();

  std::string oracle_path;
  std::size_t cap = 20;
  auto* oracle = app.add_subcommand("oracle", "Solve a small packing or covering instance exactly");
  oracle->add_option("instance", oracle_path, "Instance file")->required();
  oracle->add_option("--cap", cap, "Largest instance size accepted");

  auto* version = app.add_subcommand("version", "Print the tool version");

  CLI11_PARSE(app, argc, argv);
  if (*run) return cmd_run(run_path, out_dir, no_cache);
  if (*validate) return cmd_validate(validate_path);
  if (*oracle) return cmd_oracle(oracle_path, cap);
  if (*version) {
    std::cout << "mdim " << mdim::kVersion << '\n';
    return 0;
  }
  return 0;
}
