#include "semnet/wpcn.hpp"

#include <cmath>
#include <stdexcept>

namespace semnet::wpcn {

namespace {

void check_config(const NetworkConfig& c) {
  if (c.num_devices < 1) throw std::invalid_argument("num_devices must be >= 1");
  if (!(c.harvest_efficiency > 0.0) || c.harvest_efficiency > 1.0) {
    throw std::invalid_argument("harvest_efficiency must be in (0, 1]");
  }
  if (!(c.hap_power_w > 0.0)) throw std::invalid_argument("hap_power_w must be > 0");
  if (!(c.slot_duration_s > 0.0)) throw std::invalid_argument("slot_duration_s must be > 0");
  if (!(c.energy_per_bit_j > 0.0)) throw std::invalid_argument("energy_per_bit_j must be > 0");
  if (c.w_sim < 0.0 || c.w_bleu < 0.0 || std::abs(c.w_sim + c.w_bleu - 1.0) > 1e-12) {
    throw std::invalid_argument("bid weights must be non-negative and sum to 1");
  }
}

}  // namespace

std::vector<double> sample_channels(const NetworkConfig& config, Rng& rng) {
  check_config(config);
  std::vector<double> gains(static_cast<std::size_t>(config.num_devices));
  for (auto& g : gains) {
    switch (config.channel) {
      case ChannelModel::kExponential:
        g = rng.exponential(1.0);
        break;
      case ChannelModel::kConstant:
        g = 1.0;
        break;
      case ChannelModel::kUniform:
        g = 2.0 * rng.uniform01();
        break;
    }
  }
  return gains;
}

double harvested_energy(const NetworkConfig& config, double channel_gain) {
  if (!(channel_gain > 0.0)) {
    throw std::invalid_argument("channel gain must be positive");
  }
  return config.harvest_efficiency * config.hap_power_w * channel_gain *
         config.slot_duration_s;
}

DeviceState device_state(const NetworkConfig& config, int id, double channel_gain) {
  check_config(config);
  DeviceState s;
  s.id = id;
  s.channel_gain = channel_gain;
  s.harvested_energy_j = harvested_energy(config, channel_gain);
  s.bit_budget = static_cast<std::int64_t>(
      std::floor(s.harvested_energy_j / config.energy_per_bit_j));
  s.dimension = config.payload.feasible_dimension(s.bit_budget);
  if (s.dimension) {
    const auto point = perf::PerfCurve::reference().lookup(*s.dimension);
    s.similarity = point.similarity;
    s.bleu = point.bleu_1gram;
    s.valuation = config.w_sim * s.similarity + config.w_bleu * s.bleu;
  } else {
    s.valuation = 0.0;
  }
  s.bid = s.valuation;
  return s;
}

std::vector<DeviceState> sample_device_profile(const NetworkConfig& config, Rng& rng) {
  const auto gains = sample_channels(config, rng);
  std::vector<DeviceState> devices;
  devices.reserve(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    devices.push_back(device_state(config, static_cast<int>(i), gains[i]));
  }
  return devices;
}

std::vector<double> sample_valuation_profile(const NetworkConfig& config, Rng& rng) {
  const auto devices = sample_device_profile(config, rng);
  std::vector<double> valuations;
  valuations.reserve(devices.size());
  for (const auto& d : devices) valuations.push_back(d.valuation);
  return valuations;
}

}  // namespace semnet::wpcn
