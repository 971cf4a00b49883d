#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semnet/config.hpp"
#include "semnet/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  int iters = 0;
  int devices = 0;
  int batch = 0;
  int rounds = 0;
  int groups = 0;
};

// Flags override the config file.
semnet::cli::ExperimentConfig resolve_config(const CommonOpts& opts,
                                             bool config_required) {
  semnet::cli::ExperimentConfig config;
  if (!opts.config_path.empty()) {
    auto result = semnet::cli::load_config(opts.config_path);
    if (!result.ok()) {
      for (const auto& e : result.errors) std::cerr << "config error: " << e << "\n";
      throw CLI::RuntimeError(1);
    }
    config = *result.config;
  } else if (config_required) {
    std::cerr << "error: this subcommand requires --config\n";
    throw CLI::RuntimeError(1);
  }
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.iters > 0) config.auction.iterations = opts.iters;
  if (opts.batch > 0) config.auction.batch_size = opts.batch;
  if (opts.devices > 0) config.wpcn.num_devices = opts.devices;
  if (opts.rounds > 0) config.fedse.rounds = opts.rounds;
  if (opts.groups > 0) config.fedse.groups = opts.groups;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semnet: semantic-aware energy allocation simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "experiment config file");
  app.add_option("--seed", opts.seed, "global experiment seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  app.add_option("--out", opts.out_dir, "output directory");

  auto* simulate = app.add_subcommand(
      "simulate", "run the energy-auction case study (or `simulate fedse`)");
  simulate->add_option("--iters", opts.iters, "training iterations override");
  simulate->add_option("--devices", opts.devices, "device count override");
  simulate->fallthrough();
  auto* fedse = simulate->add_subcommand("fedse", "run the federated SE orchestration");
  fedse->add_option("--rounds", opts.rounds, "federation rounds override");
  fedse->add_option("--groups", opts.groups, "communication group count override");
  fedse->fallthrough();

  auto* train = app.add_subcommand("train-auction", "train the learned auction");
  train->add_option("--iters", opts.iters, "training iterations override");
  train->add_option("--batch", opts.batch, "training batch size override");
  train->add_option("--devices", opts.devices, "device count override");
  train->fallthrough();

  semnet::cli::MetricsInputs metrics_inputs;
  auto* eval = app.add_subcommand("eval-metrics", "evaluate metrics over input files");
  eval->add_option("--candidates", metrics_inputs.candidates,
                   "candidate sentences, one per line");
  eval->add_option("--references", metrics_inputs.references,
                   "reference sentences, line-aligned with candidates");
  eval->add_option("--embeddings", metrics_inputs.embeddings,
                   "CSV float rows; consecutive rows are compared as pairs");
  eval->add_option("--trace", metrics_inputs.trace,
                   "state trace CSV (t,source,estimate,gen_time)");
  eval->add_option("--horizon", metrics_inputs.horizon,
                   "integration horizon in seconds (default: last event)");
  eval->fallthrough();

  auto* curves = app.add_subcommand("export-curves",
                                    "write the embedded encoder performance table");
  curves->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (fedse->parsed()) {
        const auto config = resolve_config(opts, true);
        semnet::cli::run_fedse(config);
      } else {
        const auto config = resolve_config(opts, true);
        semnet::cli::run_case_study(config);
      }
    } else if (train->parsed()) {
      const auto config = resolve_config(opts, true);
      semnet::cli::run_train_auction(config);
    } else if (eval->parsed()) {
      const auto config = resolve_config(opts, false);
      semnet::cli::run_metrics(metrics_inputs, config.out_dir);
    } else if (curves->parsed()) {
      const auto config = resolve_config(opts, false);
      semnet::cli::run_export_curves(config.out_dir);
    }
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
