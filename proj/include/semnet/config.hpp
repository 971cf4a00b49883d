#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semnet/auction.hpp"
#include "semnet/wpcn.hpp"

// Experiment configuration: an INI-style file with a global `seed` and
// `out_dir` plus optional `[wpcn]`, `[auction]`, and `[fedse]` blocks.
// Validation collects every failure (with its field path) instead of
// stopping at the first.

namespace semnet::cli {

struct FedseConfig {
  int groups = 2;
  int devices_per_group = 4;
  int dim = 4;
  int samples_per_group = 40;
  int epochs = 5;
  double lr = 0.05;
  int rounds = 50;
  int upload_batch = 2;
  double label_noise = 0.0;
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  wpcn::NetworkConfig wpcn;
  auction::TrainConfig auction;  // num_bidders and seed are filled in at run time
  FedseConfig fedse;
  bool has_wpcn = false;
  bool has_auction = false;
  bool has_fedse = false;
};

struct ConfigResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

ConfigResult load_config(const std::string& path);
ConfigResult parse_config(std::istream& in, const std::string& name);

}  // namespace semnet::cli
