#include "semnet/auction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>

namespace semnet::auction {

namespace {

void check_bids(std::span<const Bid> bids) {
  if (bids.empty()) throw std::invalid_argument("empty bid list");
  for (const auto& b : bids) {
    if (!std::isfinite(b.amount) || b.amount < 0.0) {
      throw std::invalid_argument("bids must be finite and non-negative");
    }
  }
}

// Index of the winner under lowest-bidder-id tie breaking.
std::size_t argmax_bid(std::span<const Bid> bids,
                       const std::vector<double>& keys) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (keys[i] > keys[best] ||
        (keys[i] == keys[best] && bids[i].bidder_id < bids[best].bidder_id)) {
      best = i;
    }
  }
  return best;
}

}  // namespace

AuctionOutcome second_price(std::span<const Bid> bids) {
  check_bids(bids);
  std::vector<double> amounts;
  amounts.reserve(bids.size());
  for (const auto& b : bids) amounts.push_back(b.amount);
  const std::size_t w = argmax_bid(bids, amounts);

  double second = 0.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i != w) second = std::max(second, bids[i].amount);
  }
  return AuctionOutcome{bids[w].bidder_id, second};
}

MonotoneNet MonotoneNet::identity() {
  MonotoneNet net;
  net.groups = 1;
  net.units = 1;
  net.log_weight = {0.0};
  net.bias = {0.0};
  return net;
}

double MonotoneNet::transform(double b) const {
  double out = std::numeric_limits<double>::infinity();
  for (int k = 0; k < groups; ++k) {
    double g = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < units; ++j) {
      const auto idx = static_cast<std::size_t>(k * units + j);
      g = std::max(g, std::exp(log_weight[idx]) * b + bias[idx]);
    }
    out = std::min(out, g);
  }
  return out;
}

double MonotoneNet::inverse(double y) const {
  double out = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < groups; ++k) {
    double g = std::numeric_limits<double>::infinity();
    for (int j = 0; j < units; ++j) {
      const auto idx = static_cast<std::size_t>(k * units + j);
      g = std::min(g, (y - bias[idx]) * std::exp(-log_weight[idx]));
    }
    out = std::max(out, g);
  }
  return out;
}

AuctionOutcome learned_auction(std::span<const MonotoneNet> nets,
                               std::span<const Bid> bids) {
  if (nets.size() != bids.size()) {
    throw std::invalid_argument("one net per bidder required");
  }
  check_bids(bids);

  std::vector<double> transformed(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    transformed[i] = nets[i].transform(bids[i].amount);
  }
  const std::size_t w = argmax_bid(bids, transformed);
  if (transformed[w] <= 0.0) {
    return AuctionOutcome{std::nullopt, 0.0};  // reserve not met
  }
  double competing = 0.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i != w) competing = std::max(competing, transformed[i]);
  }
  return AuctionOutcome{bids[w].bidder_id, nets[w].inverse(competing)};
}

ProfileSampler uniform_profile_sampler(int num_bidders) {
  return [num_bidders](Rng& rng) {
    std::vector<double> vals(static_cast<std::size_t>(num_bidders));
    for (auto& v : vals) v = rng.uniform01();
    return vals;
  };
}

ProfileSampler wpcn_profile_sampler(const wpcn::NetworkConfig& config) {
  return [config](Rng& rng) { return wpcn::sample_valuation_profile(config, rng); };
}

namespace {

std::vector<Bid> truthful_bids(const std::vector<double>& valuations) {
  std::vector<Bid> bids(valuations.size());
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    bids[i] = Bid{static_cast<int>(i), valuations[i]};
  }
  return bids;
}

}  // namespace

double mean_revenue(std::span<const MonotoneNet> nets,
                    std::span<const std::vector<double>> profiles) {
  double total = 0.0;
  for (const auto& profile : profiles) {
    total += learned_auction(nets, truthful_bids(profile)).payment;
  }
  return total / static_cast<double>(profiles.size());
}

double mean_spa_revenue(std::span<const std::vector<double>> profiles) {
  double total = 0.0;
  for (const auto& profile : profiles) {
    total += second_price(truthful_bids(profile)).payment;
  }
  return total / static_cast<double>(profiles.size());
}

double expected_revenue(std::span<const MonotoneNet> nets,
                        const ProfileSampler& sampler, int num_samples, Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  double total = 0.0;
  for (int s = 0; s < num_samples; ++s) {
    total += learned_auction(nets, truthful_bids(sampler(rng))).payment;
  }
  return total / static_cast<double>(num_samples);
}

double expected_revenue(std::span<const MonotoneNet> nets,
                        const wpcn::NetworkConfig& config, int num_samples,
                        Rng& rng) {
  return expected_revenue(nets, wpcn_profile_sampler(config), num_samples, rng);
}

std::vector<MonotoneNet> initial_nets(const TrainConfig& config) {
  Rng rng(derive_seed(config.seed, SeedStream::kAuctionInit));
  std::vector<MonotoneNet> nets(static_cast<std::size_t>(config.num_bidders));
  for (auto& net : nets) {
    net.groups = config.groups;
    net.units = config.units;
    net.log_weight.assign(static_cast<std::size_t>(config.groups * config.units), 0.0);
    net.bias.assign(static_cast<std::size_t>(config.groups * config.units), 0.0);
    for (int k = 0; k < config.groups; ++k) {
      for (int j = 1; j < config.units; ++j) {
        const auto idx = static_cast<std::size_t>(k * config.units + j);
        const double lw = config.init_noise * rng.normal();
        const double w = std::exp(lw);
        // Keep the unit strictly below the identity line on [0, 2] so the
        // initial transform and its inverse are exactly the identity there.
        net.log_weight[idx] = lw;
        net.bias[idx] =
            -0.1 - 0.05 * std::abs(rng.normal()) - 2.0 * std::max(0.0, w - 1.0);
      }
    }
  }
  return nets;
}

RevenueObjective build_revenue_objective(
    std::span<const MonotoneNet> nets,
    std::span<const std::vector<double>> profiles, double temperature) {
  if (nets.empty()) throw std::invalid_argument("no nets");
  if (profiles.empty()) throw std::invalid_argument("no profiles");
  const auto n = nets.size();

  RevenueObjective obj;
  grad::Tape& tape = obj.tape;
  obj.log_weight_nodes.resize(n);
  obj.bias_nodes.resize(n);

  // Parameters and per-bidder hoisted subexpressions shared by all samples.
  std::vector<std::vector<grad::Tape::NodeId>> pos_slope(n);  // exp(log_w)
  std::vector<std::vector<grad::Tape::NodeId>> inv_slope(n);  // exp(-log_w)
  std::vector<std::vector<grad::Tape::NodeId>> neg_bias(n);   // -bias
  const auto minus_one = tape.constant(-1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto count = nets[i].log_weight.size();
    for (std::size_t p = 0; p < count; ++p) {
      const auto lw = tape.parameter(nets[i].log_weight[p]);
      const auto bs = tape.parameter(nets[i].bias[p]);
      obj.log_weight_nodes[i].push_back(lw);
      obj.bias_nodes[i].push_back(bs);
      pos_slope[i].push_back(tape.exp(lw));
      inv_slope[i].push_back(tape.exp(tape.mul(minus_one, lw)));
      neg_bias[i].push_back(tape.mul(minus_one, bs));
    }
  }
  const auto zero = tape.constant(0.0);

  const auto emit_transform = [&](std::size_t i, grad::Tape::NodeId bid) {
    const int K = nets[i].groups;
    const int J = nets[i].units;
    std::vector<grad::Tape::NodeId> group_vals;
    std::vector<grad::Tape::NodeId> unit_vals;
    group_vals.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      unit_vals.clear();
      for (int j = 0; j < J; ++j) {
        const auto idx = static_cast<std::size_t>(k * J + j);
        unit_vals.push_back(
            tape.add(tape.mul(pos_slope[i][idx], bid), obj.bias_nodes[i][idx]));
      }
      group_vals.push_back(tape.max(unit_vals));
    }
    return tape.min(group_vals);
  };

  const auto emit_inverse = [&](std::size_t i, grad::Tape::NodeId y) {
    const int K = nets[i].groups;
    const int J = nets[i].units;
    std::vector<grad::Tape::NodeId> group_vals;
    std::vector<grad::Tape::NodeId> unit_vals;
    group_vals.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      unit_vals.clear();
      for (int j = 0; j < J; ++j) {
        const auto idx = static_cast<std::size_t>(k * J + j);
        unit_vals.push_back(
            tape.mul(tape.add(y, neg_bias[i][idx]), inv_slope[i][idx]));
      }
      group_vals.push_back(tape.min(unit_vals));
    }
    return tape.max(group_vals);
  };

  grad::Tape::NodeId total = zero;
  std::vector<grad::Tape::NodeId> transformed(n);
  std::vector<grad::Tape::NodeId> logits(n + 1);
  std::vector<grad::Tape::NodeId> competing;
  for (const auto& profile : profiles) {
    if (profile.size() != n) {
      throw std::invalid_argument("profile size does not match net count");
    }
    for (std::size_t i = 0; i < n; ++i) {
      transformed[i] = emit_transform(i, tape.constant(profile[i]));
    }
    logits[0] = zero;  // reserve slot
    for (std::size_t i = 0; i < n; ++i) logits[i + 1] = transformed[i];
    for (std::size_t i = 0; i < n; ++i) {
      competing.clear();
      competing.push_back(zero);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) competing.push_back(transformed[j]);
      }
      const auto threshold = tape.max(competing);
      const auto payment = emit_inverse(i, threshold);
      const auto alloc = tape.softmax_component(logits, i + 1, temperature);
      total = tape.add(total, tape.mul(alloc, payment));
    }
  }
  obj.root = tape.mul(tape.constant(1.0 / static_cast<double>(profiles.size())),
                      total);
  return obj;
}

TrainResult train(const TrainConfig& config, const ProfileSampler& sampler) {
  if (config.num_bidders < 1 || config.iterations < 1 || config.batch_size < 1 ||
      !(config.learning_rate > 0.0) || config.groups < 1 || config.units < 1 ||
      config.eval_samples < 1 || !(config.lambda_start > 0.0) ||
      !(config.lambda_end >= config.lambda_start)) {
    throw std::invalid_argument("invalid training configuration");
  }

  TrainResult result;
  result.nets = initial_nets(config);

  Rng eval_rng(derive_seed(config.seed, SeedStream::kAuctionEval));
  std::vector<std::vector<double>> eval_profiles;
  eval_profiles.reserve(static_cast<std::size_t>(config.eval_samples));
  for (int s = 0; s < config.eval_samples; ++s) {
    eval_profiles.push_back(sampler(eval_rng));
  }
  const double spa_revenue = mean_spa_revenue(eval_profiles);

  result.trace.reserve(static_cast<std::size_t>(config.iterations) + 1);
  result.trace.push_back({0, mean_revenue(result.nets, eval_profiles), spa_revenue});

  Rng batch_rng(derive_seed(config.seed, SeedStream::kAuctionBatch));
  std::vector<std::vector<double>> batch(static_cast<std::size_t>(config.batch_size));
  for (int it = 1; it <= config.iterations; ++it) {
    const double frac = config.iterations > 1
                            ? static_cast<double>(it - 1) / (config.iterations - 1)
                            : 0.0;
    const double lambda =
        config.lambda_start + (config.lambda_end - config.lambda_start) * frac;

    for (auto& profile : batch) profile = sampler(batch_rng);
    auto obj = build_revenue_objective(result.nets, batch, lambda);
    const double value = obj.tape.forward(obj.root);
    if (!std::isfinite(value)) {
      throw TrainDivergedError(it, "training diverged at iteration " +
                                       std::to_string(it));
    }
    obj.tape.backward(obj.root);

    for (std::size_t i = 0; i < result.nets.size(); ++i) {
      auto& net = result.nets[i];
      for (std::size_t p = 0; p < net.log_weight.size(); ++p) {
        net.log_weight[p] +=
            config.learning_rate * obj.tape.gradient(obj.log_weight_nodes[i][p]);
        net.bias[p] +=
            config.learning_rate * obj.tape.gradient(obj.bias_nodes[i][p]);
      }
    }
    result.trace.push_back({it, mean_revenue(result.nets, eval_profiles), spa_revenue});
  }
  return result;
}

std::string nets_to_text(std::span<const MonotoneNet> nets) {
  std::string out = "semnet-mononet 1\n";
  out += "nets " + std::to_string(nets.size()) + "\n";
  char buf[96];
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const auto& net = nets[i];
    std::snprintf(buf, sizeof(buf), "net %zu groups %d units %d\n", i, net.groups,
                  net.units);
    out += buf;
    for (int k = 0; k < net.groups; ++k) {
      for (int j = 0; j < net.units; ++j) {
        const auto idx = static_cast<std::size_t>(k * net.units + j);
        std::snprintf(buf, sizeof(buf), "w %zu %d %d %.17g %.17g\n", i, k, j,
                      net.log_weight[idx], net.bias[idx]);
        out += buf;
      }
    }
  }
  return out;
}

std::vector<MonotoneNet> nets_from_text(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "semnet-mononet" || version != 1) {
    throw std::invalid_argument("unrecognized net file header");
  }
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "nets") {
    throw std::invalid_argument("missing net count");
  }
  std::vector<MonotoneNet> nets(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx = 0;
    auto& net = nets[i];
    std::string g_tag, u_tag;
    if (!(in >> tag >> idx >> g_tag >> net.groups >> u_tag >> net.units) ||
        tag != "net" || idx != i || g_tag != "groups" || u_tag != "units" ||
        net.groups < 1 || net.units < 1) {
      throw std::invalid_argument("malformed net descriptor");
    }
    const auto total = static_cast<std::size_t>(net.groups * net.units);
    net.log_weight.resize(total);
    net.bias.resize(total);
    for (int k = 0; k < net.groups; ++k) {
      for (int j = 0; j < net.units; ++j) {
        std::size_t ni = 0;
        int kk = 0, jj = 0;
        double lw = 0.0, bs = 0.0;
        if (!(in >> tag >> ni >> kk >> jj >> lw >> bs) || tag != "w" || ni != i ||
            kk != k || jj != j) {
          throw std::invalid_argument("malformed net parameter line");
        }
        const auto p = static_cast<std::size_t>(k * net.units + j);
        net.log_weight[p] = lw;
        net.bias[p] = bs;
      }
    }
  }
  return nets;
}

}  // namespace semnet::auction
