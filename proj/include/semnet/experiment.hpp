#pragma once

#include <string>

#include "semnet/config.hpp"

// Seeded experiment runners behind the CLI subcommands. Each run is a pure
// function of (config, input files, seed): re-running writes byte-identical
// CSVs. The orchestrator is single-threaded.

namespace semnet::cli {

/// Writes curves.csv (the embedded encoder table) into out_dir.
void run_export_curves(const std::string& out_dir);

/// Trains the learned auction on the configured device population and writes
/// revenue_trace.csv plus auction_params.txt. Requires the [wpcn] and
/// [auction] blocks.
void run_train_auction(const ExperimentConfig& config);

/// End-to-end case study: curves.csv, devices.csv (one sampled population),
/// and the training outputs of run_train_auction.
void run_case_study(const ExperimentConfig& config);

/// Federated orchestration run; writes fedse_rounds.csv. Requires [fedse].
void run_fedse(const ExperimentConfig& config);

struct MetricsInputs {
  std::string candidates;  // text file, one sentence per line
  std::string references;  // line-aligned with candidates
  std::string embeddings;  // CSV float rows; consecutive rows form pairs
  std::string trace;       // t,source,estimate,gen_time CSV
  double horizon = 0.0;    // 0 = use the last event timestamp
};

/// Evaluates every configured metric over its inputs and writes
/// metrics_report.csv with one row per (metric, input) pair.
void run_metrics(const MetricsInputs& inputs, const std::string& out_dir);

}  // namespace semnet::cli
