#include "semnet/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semnet/csv.hpp"
#include "semnet/fedse.hpp"
#include "semnet/metrics.hpp"
#include "semnet/perf_model.hpp"

namespace semnet::cli {

namespace {

std::string join(const std::string& dir, const std::string& file) {
  return dir + "/" + file;
}

void require_block(bool present, const std::string& block) {
  if (!present) {
    throw std::invalid_argument("config is missing the [" + block + "] block");
  }
}

std::string render_trace_csv(const std::vector<auction::TraceRow>& trace) {
  std::string out = "iteration,dl_revenue,spa_revenue\n";
  for (const auto& row : trace) {
    out += format_int(row.iteration);
    out += ',';
    out += format_float(row.dl_revenue);
    out += ',';
    out += format_float(row.spa_revenue);
    out += '\n';
  }
  return out;
}

auction::TrainResult train_from_config(const ExperimentConfig& config) {
  auction::TrainConfig tc = config.auction;
  tc.num_bidders = config.wpcn.num_devices;
  tc.seed = derive_seed(config.seed, SeedStream::kAuctionTrain);
  return auction::train(tc, auction::wpcn_profile_sampler(config.wpcn));
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<metrics::EmbeddingVec> read_embedding_rows(const std::string& path) {
  std::vector<metrics::EmbeddingVec> rows;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    metrics::EmbeddingVec row;
    for (const auto& field : split_csv_line(lines[i])) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0') {
        throw std::invalid_argument(path + ":" + std::to_string(i + 1) +
                                    ": malformed float '" + field + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void run_export_curves(const std::string& out_dir) {
  write_file(join(out_dir, "curves.csv"),
             perf::curve_to_csv(perf::PerfCurve::reference()));
}

void run_train_auction(const ExperimentConfig& config) {
  require_block(config.has_wpcn, "wpcn");
  require_block(config.has_auction, "auction");
  const auto result = train_from_config(config);
  write_file(join(config.out_dir, "revenue_trace.csv"),
             render_trace_csv(result.trace));
  write_file(join(config.out_dir, "auction_params.txt"),
             auction::nets_to_text(result.nets));
}

void run_case_study(const ExperimentConfig& config) {
  require_block(config.has_wpcn, "wpcn");
  require_block(config.has_auction, "auction");

  run_export_curves(config.out_dir);

  // One sampled device population, for inspection of the bid pipeline.
  Rng device_rng(derive_seed(config.seed, SeedStream::kDeviceSnapshot));
  const auto devices = wpcn::sample_device_profile(config.wpcn, device_rng);
  std::string csv =
      "id,channel_gain,harvested_j,bit_budget,dimension,similarity,bleu,"
      "valuation,bid\n";
  for (const auto& d : devices) {
    csv += format_int(d.id);
    csv += ',';
    csv += format_float(d.channel_gain);
    csv += ',';
    csv += format_float(d.harvested_energy_j);
    csv += ',';
    csv += format_int(d.bit_budget);
    csv += ',';
    csv += format_int(d.dimension ? *d.dimension : 0);  // 0 = no transmission
    csv += ',';
    csv += format_float(d.similarity);
    csv += ',';
    csv += format_float(d.bleu);
    csv += ',';
    csv += format_float(d.valuation);
    csv += ',';
    csv += format_float(d.bid);
    csv += '\n';
  }
  write_file(join(config.out_dir, "devices.csv"), csv);

  run_train_auction(config);
}

void run_fedse(const ExperimentConfig& config) {
  require_block(config.has_fedse, "fedse");
  const auto& fc = config.fedse;

  Rng rng(derive_seed(config.seed, SeedStream::kFedse));

  // Ground-truth linear labeler and synthetic group datasets.
  fedse::FederationConfig fed;
  fed.epochs = fc.epochs;
  fed.lr = fc.lr;
  fed.upload.batch = fc.upload_batch;
  fed.upload.label_noise = fc.label_noise;
  fed.generator.resize(static_cast<std::size_t>(fc.dim));
  for (auto& v : fed.generator) v = rng.normal();

  std::vector<fedse::CommGroup> groups(static_cast<std::size_t>(fc.groups));
  int next_device = 0;
  for (int g = 0; g < fc.groups; ++g) {
    auto& group = groups[static_cast<std::size_t>(g)];
    group.group_id = g;
    group.edge_server_id = g;
    for (int d = 0; d < fc.devices_per_group; ++d) {
      group.device_ids.push_back(next_device++);
    }
    group.theta.assign(static_cast<std::size_t>(fc.dim), 0.0);
    for (int s = 0; s < fc.samples_per_group; ++s) {
      fedse::Sample sample;
      sample.x.resize(static_cast<std::size_t>(fc.dim));
      for (auto& v : sample.x) v = rng.normal();
      sample.y = 0.0;
      for (std::size_t d = 0; d < sample.x.size(); ++d) {
        sample.y += sample.x[d] * fed.generator[d];
      }
      if (fc.label_noise > 0.0) sample.y += fc.label_noise * rng.normal();
      group.dataset.push_back(std::move(sample));
    }
  }

  const auto logs = fedse::run_rounds(groups, fc.rounds, fed, rng);
  std::string csv = "round,global_loss,uploads\n";
  for (const auto& log : logs) {
    csv += format_int(log.round);
    csv += ',';
    csv += format_float(log.global_loss);
    csv += ',';
    csv += format_int(log.uploads);
    csv += '\n';
  }
  write_file(join(config.out_dir, "fedse_rounds.csv"), csv);
}

void run_metrics(const MetricsInputs& inputs, const std::string& out_dir) {
  if (inputs.candidates.empty() && inputs.references.empty() &&
      inputs.embeddings.empty() && inputs.trace.empty()) {
    throw std::invalid_argument("eval-metrics needs at least one input file");
  }
  std::string csv = "metric,input,value\n";

  if (!inputs.candidates.empty() || !inputs.references.empty()) {
    if (inputs.candidates.empty() || inputs.references.empty()) {
      throw std::invalid_argument(
          "sentence metrics need both --candidates and --references");
    }
    const auto cand_lines = read_lines(inputs.candidates);
    const auto ref_lines = read_lines(inputs.references);
    if (cand_lines.size() != ref_lines.size()) {
      throw std::invalid_argument("candidate and reference files differ in length (" +
                                  std::to_string(cand_lines.size()) + " vs " +
                                  std::to_string(ref_lines.size()) + " lines)");
    }
    for (std::size_t i = 0; i < cand_lines.size(); ++i) {
      const auto cand = metrics::tokenize(cand_lines[i]);
      const auto ref = metrics::tokenize(ref_lines[i]);
      if (cand.empty()) {
        throw std::invalid_argument(inputs.candidates + ":" + std::to_string(i + 1) +
                                    ": empty sentence");
      }
      if (ref.empty()) {
        throw std::invalid_argument(inputs.references + ":" + std::to_string(i + 1) +
                                    ": empty sentence");
      }
      const int max_n = std::min<int>(4, static_cast<int>(cand.size()));
      const std::vector<metrics::TokenSeq> refs = {ref};
      const std::string pair = "pair_" + std::to_string(i);
      csv += "bleu," + pair + ',' + format_float(metrics::bleu(cand, refs, max_n)) + '\n';
      csv += "cider," + pair + ',' + format_float(metrics::cider(cand, refs, max_n)) + '\n';
    }
  }

  if (!inputs.embeddings.empty()) {
    const auto rows = read_embedding_rows(inputs.embeddings);
    if (rows.size() % 2 != 0) {
      throw std::invalid_argument(inputs.embeddings +
                                  ": expected an even number of rows (pairs)");
    }
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      csv += "similarity,emb_pair_" + std::to_string(i / 2) + ',' +
             format_float(metrics::sentence_similarity(rows[i], rows[i + 1])) + '\n';
    }
  }

  if (!inputs.trace.empty()) {
    std::ifstream in(inputs.trace, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + inputs.trace);
    const auto trace = metrics::parse_trace_csv(in, inputs.trace);
    if (trace.events.empty()) {
      throw std::invalid_argument(inputs.trace + ": no events");
    }
    const double horizon =
        inputs.horizon > 0.0 ? inputs.horizon : trace.events.back().t;
    csv += "aoi,trace," + format_float(metrics::average_aoi(trace, horizon)) + '\n';
    csv += "aoii,trace," + format_float(metrics::average_aoii(trace, horizon)) + '\n';
  }

  write_file(join(out_dir, "metrics_report.csv"), csv);
}

}  // namespace semnet::cli
