#include "semnet/fedse.hpp"

#include <stdexcept>

namespace semnet::fedse {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dims(const ModelParams& theta, std::span<const Sample> samples) {
  for (const auto& s : samples) {
    if (s.x.size() != theta.size()) {
      throw std::invalid_argument("sample dimension does not match model");
    }
  }
}

}  // namespace

double loss(const ModelParams& theta, std::span<const Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("empty dataset");
  check_dims(theta, samples);
  double total = 0.0;
  for (const auto& s : samples) {
    const double r = dot(s.x, theta) - s.y;
    total += r * r;
  }
  return total / static_cast<double>(samples.size());
}

LocalUpdateResult local_update(CommGroup& group, int epochs, double lr) {
  if (group.dataset.empty()) throw std::invalid_argument("empty dataset");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (lr < 0.0) throw std::invalid_argument("lr must be >= 0");
  check_dims(group.theta, group.dataset);

  LocalUpdateResult result;
  result.loss_before = loss(group.theta, group.dataset);
  const auto n = static_cast<double>(group.dataset.size());
  const auto dim = group.theta.size();
  std::vector<double> grad(dim);
  for (int e = 0; e < epochs; ++e) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& s : group.dataset) {
      const double r = dot(s.x, group.theta) - s.y;
      for (std::size_t d = 0; d < dim; ++d) grad[d] += 2.0 * r * s.x[d] / n;
    }
    for (std::size_t d = 0; d < dim; ++d) group.theta[d] -= lr * grad[d];
  }
  result.loss_after = loss(group.theta, group.dataset);
  return result;
}

ModelParams federated_aggregate(std::span<const WeightedModel> models) {
  if (models.empty()) throw std::invalid_argument("no models to aggregate");
  const auto dim = models.front().theta.size();
  double total_weight = 0.0;
  for (const auto& m : models) {
    if (m.theta.size() != dim) {
      throw std::invalid_argument("model dimension mismatch in aggregation");
    }
    if (m.sample_count <= 0) {
      throw std::invalid_argument("sample counts must be positive");
    }
    total_weight += static_cast<double>(m.sample_count);
  }
  ModelParams global(dim, 0.0);
  for (const auto& m : models) {
    const double w = static_cast<double>(m.sample_count) / total_weight;
    for (std::size_t d = 0; d < dim; ++d) global[d] += w * m.theta[d];
  }
  return global;
}

void broadcast(const ModelParams& global, std::span<CommGroup> groups) {
  for (auto& g : groups) {
    if (g.theta.size() != global.size()) {
      throw std::invalid_argument("broadcast dimension mismatch");
    }
    g.theta = global;
  }
}

void label_and_upload(CommGroup& group, Rng& rng, const ModelParams& generator,
                      const UploadConfig& upload) {
  if (upload.batch < 0) throw std::invalid_argument("upload batch must be >= 0");
  if (upload.label_noise < 0.0) throw std::invalid_argument("label noise must be >= 0");
  for (int b = 0; b < upload.batch; ++b) {
    Sample s;
    s.x.resize(generator.size());
    for (auto& v : s.x) v = rng.normal();
    s.y = dot(s.x, generator);
    if (upload.label_noise > 0.0) s.y += upload.label_noise * rng.normal();
    group.dataset.push_back(std::move(s));
  }
  group.knowledge_version += 1;
}

std::vector<RoundLog> run_rounds(std::span<CommGroup> groups, int num_rounds,
                                 const FederationConfig& config, Rng& rng) {
  if (groups.empty()) throw std::invalid_argument("no groups");
  if (num_rounds < 1) throw std::invalid_argument("num_rounds must be >= 1");

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(num_rounds));
  for (int round = 0; round < num_rounds; ++round) {
    RoundLog log;
    log.round = round;

    // Edge training and federated aggregation.
    std::vector<WeightedModel> models;
    models.reserve(groups.size());
    for (auto& g : groups) {
      const auto r = local_update(g, config.epochs, config.lr);
      log.group_loss.emplace_back(r.loss_before, r.loss_after);
      models.push_back({g.theta, static_cast<std::int64_t>(g.dataset.size())});
    }
    const ModelParams global = federated_aggregate(models);

    // Broadcast to every group.
    broadcast(global, groups);

    // Global loss of the broadcast model, sample-weighted over all groups.
    double sse = 0.0;
    double count = 0.0;
    for (const auto& g : groups) {
      sse += loss(global, g.dataset) * static_cast<double>(g.dataset.size());
      count += static_cast<double>(g.dataset.size());
    }
    log.global_loss = sse / count;

    // Devices label fresh data; edge servers fold it into the knowledge sets.
    for (auto& g : groups) {
      label_and_upload(g, rng, config.generator, config.upload);
      log.uploads += config.upload.batch;
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace semnet::fedse
