// Experiment driver: `segorun run --config exp.json [overrides]`.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "segopt/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-based optimization of noisy objectives"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  std::string problem, method, barrier, out_dir;
  long long nfe = -1;
  int runs = -1;
  long long seed = -1;
  double sigma_target = NAN, sigma_min = NAN, rhc = NAN, sigma_x = NAN;
  run_cmd->add_option("--problem", problem, "Problem name (1d, branin, hartman6, hartman6-hd, levy10, tmd)");
  run_cmd->add_option("--method", method, "Comma list of sego-adaptive, sego-constant, gbnm");
  run_cmd->add_option("--nfe", nfe, "Evaluation budget per run");
  run_cmd->add_option("--runs", runs, "Number of independent runs");
  run_cmd->add_option("--seed", seed, "Base seed (run i uses base + i)");
  run_cmd->add_option("--sigma-target", sigma_target,
                      "Target error variance (adaptive start / constant value / matched target)");
  run_cmd->add_option("--sigma-min", sigma_min, "Adaptive target floor");
  run_cmd->add_option("--rhc", rhc, "Closeness radius in normalized coordinates");
  run_cmd->add_option("--sigma-x", sigma_x, "Dispersion of the multiplicative noise");
  run_cmd->add_option("--barrier", barrier, "Drift barrier for tmd (h300, h400, h500)");
  run_cmd->add_option("--out", out_dir, "Output directory root");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    nlohmann::json j = nlohmann::json::parse(in);
    segopt::ExperimentConfig config = segopt::config_from_json(j);

    if (!problem.empty()) config.problem = problem;
    if (!method.empty()) {
      config.methods.clear();
      std::size_t pos = 0;
      while (pos <= method.size()) {
        std::size_t comma = method.find(',', pos);
        if (comma == std::string::npos) comma = method.size();
        std::string item = method.substr(pos, comma - pos);
        if (!item.empty()) config.methods.push_back(item);
        pos = comma + 1;
      }
    }
    if (nfe >= 0) config.nfe_budget = nfe;
    if (runs >= 0) config.runs = runs;
    if (seed >= 0) config.base_seed = static_cast<std::uint64_t>(seed);
    if (!std::isnan(sigma_x)) config.sigma_x = sigma_x;
    if (!std::isnan(sigma_target)) {
      config.sego.adaptive.sigma2_target = sigma_target;
      config.sego.constant_target = sigma_target;
      config.gbnm_matched_target = sigma_target;
    }
    if (!std::isnan(sigma_min)) config.sego.adaptive.sigma2_min = sigma_min;
    if (!std::isnan(rhc)) config.sego.adaptive.r_hc = rhc;
    if (!barrier.empty()) config.barrier = barrier;
    if (!out_dir.empty()) config.out_dir = out_dir;

    auto summaries = segopt::run_experiment(config);
    for (const auto& [name, sum] : summaries) {
      std::printf("%-14s best mean %.6g  p5 %.6g  p95 %.6g  mean NFE %.1f\n",
                  name.c_str(), sum.mean, sum.p5, sum.p95, sum.mean_nfe);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
