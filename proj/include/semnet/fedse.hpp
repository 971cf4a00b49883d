#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "semnet/rng.hpp"

// Toy-scale federated orchestration of semantic-extraction training. Groups
// of devices behind edge servers fit a shared linear least-squares surrogate:
// each round the edge servers train locally, aggregate by sample count,
// broadcast the global model, and incorporate freshly labeled uploads.
//
// Group-local updates within a round are independent; aggregation is a
// barrier. Reduction order is fixed by group position for reproducibility.

namespace semnet::fedse {

using ModelParams = std::vector<double>;

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

struct CommGroup {
  int group_id = 0;
  int edge_server_id = 0;
  std::vector<int> device_ids;
  std::vector<Sample> dataset;
  ModelParams theta;
  std::int64_t knowledge_version = 0;  // monotone nondecreasing
};

struct WeightedModel {
  ModelParams theta;
  std::int64_t sample_count = 0;
};

/// Mean squared residual of x.theta against y over the samples.
double loss(const ModelParams& theta, std::span<const Sample> samples);

struct LocalUpdateResult {
  double loss_before = 0.0;
  double loss_after = 0.0;
};

/// `epochs` full-batch gradient-descent steps on the group's local loss.
/// lr = 0 leaves the model untouched. Throws on an empty dataset.
LocalUpdateResult local_update(CommGroup& group, int epochs, double lr);

/// Sample-count-weighted mean of the parameter vectors.
ModelParams federated_aggregate(std::span<const WeightedModel> models);

/// Overwrites every group's local model with the global one.
void broadcast(const ModelParams& global, std::span<CommGroup> groups);

struct UploadConfig {
  int batch = 2;             // newly labeled pairs per group per round
  double label_noise = 0.0;  // sigma of Gaussian labeling noise
};

/// Appends `batch` freshly labeled pairs (inputs standard normal, targets
/// from `generator` plus noise) and bumps the knowledge-set version, even
/// when the batch is empty.
void label_and_upload(CommGroup& group, Rng& rng, const ModelParams& generator,
                      const UploadConfig& upload);

struct RoundLog {
  int round = 0;
  std::vector<std::pair<double, double>> group_loss;  // (before, after) per group
  double global_loss = 0.0;
  std::int64_t uploads = 0;
};

struct FederationConfig {
  int epochs = 5;
  double lr = 0.05;
  UploadConfig upload;
  ModelParams generator;  // ground-truth labeling model
};

/// Runs the full per-round loop: local training, aggregation, broadcast,
/// labeling and upload. Global loss is measured after the broadcast on the
/// data the round trained on.
std::vector<RoundLog> run_rounds(std::span<CommGroup> groups, int num_rounds,
                                 const FederationConfig& config, Rng& rng);

}  // namespace semnet::fedse
