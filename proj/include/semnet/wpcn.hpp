#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semnet/perf_model.hpp"
#include "semnet/rng.hpp"

// Wireless powered network model: a hybrid access point beams energy to IoT
// devices over faded downlinks; each device turns its harvested energy into a
// bit budget, picks the largest feasible encoder dimension, and derives its
// valuation for the energy from the achievable semantic scores.
//
// All operations are pure given an explicit generator; profile sampling on
// multiple threads requires one independently seeded Rng per thread.

namespace semnet::wpcn {

enum class ChannelModel {
  kExponential,  // mean-1 exponential power fading (default)
  kConstant,     // gain fixed at 1
  kUniform,      // uniform on (0, 2), mean 1
};

struct NetworkConfig {
  int num_devices = 5;
  double harvest_efficiency = 0.7;  // eta, in (0, 1]
  double hap_power_w = 3.0;
  double slot_duration_s = 1.0;
  double energy_per_bit_j = 1e-4;
  ChannelModel channel = ChannelModel::kExponential;
  double w_sim = 0.5;   // valuation weight on sentence similarity
  double w_bleu = 0.5;  // valuation weight on 1-gram BLEU; w_sim + w_bleu = 1
  perf::PayloadModel payload;
};

struct DeviceState {
  int id = 0;
  double channel_gain = 0.0;
  double harvested_energy_j = 0.0;
  std::int64_t bit_budget = 0;
  std::optional<int> dimension;  // nullopt = no transmission
  double similarity = 0.0;
  double bleu = 0.0;
  double valuation = 0.0;
  double bid = 0.0;  // truthful: bid = valuation
};

/// N i.i.d. positive channel gains from the configured fading model.
std::vector<double> sample_channels(const NetworkConfig& config, Rng& rng);

/// Linear harvest: E = eta * P * h * tau. Throws on non-positive gain.
double harvested_energy(const NetworkConfig& config, double channel_gain);

/// Full per-device pipeline: energy -> bit budget -> feasible dimension ->
/// semantic scores -> valuation. No-transmission devices value the slot at 0.
DeviceState device_state(const NetworkConfig& config, int id, double channel_gain);

/// One sampled device population.
std::vector<DeviceState> sample_device_profile(const NetworkConfig& config, Rng& rng);

/// The valuation vector of one sampled population; the auction's type
/// distribution.
std::vector<double> sample_valuation_profile(const NetworkConfig& config, Rng& rng);

}  // namespace semnet::wpcn
