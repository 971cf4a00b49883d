#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semnet/grad.hpp"
#include "semnet/rng.hpp"
#include "semnet/wpcn.hpp"

// Single-item energy auction at the access point. Two mechanisms share one
// outcome type: the second-price baseline, and a learned mechanism that maps
// each bid through a strictly increasing piecewise-linear transform, runs a
// second-price auction with a zero reserve in transform space, and charges
// threshold payments. Both are dominant-strategy incentive compatible and
// individually rational by construction.
//
// Mechanism evaluation is pure. Training is single-threaded.

namespace semnet::auction {

struct Bid {
  int bidder_id = 0;
  double amount = 0.0;  // in [0, 1] for semantic-score bids
};

struct AuctionOutcome {
  std::optional<int> winner;  // nullopt = no sale
  double payment = 0.0;
  double revenue() const { return payment; }  // single item
};

/// Highest bid wins and pays the second-highest bid; ties break toward the
/// lowest bidder id. A single bid pays 0. Throws on an empty bid list.
AuctionOutcome second_price(std::span<const Bid> bids);

/// Per-bidder monotone transform phi(b) = min over groups of max over units
/// of (exp(log_weight) * b + bias). Slopes are exp-parameterized, so phi is
/// strictly increasing, piecewise linear, and continuous.
struct MonotoneNet {
  int groups = 1;
  int units = 1;
  std::vector<double> log_weight;  // groups*units, unit j of group k at [k*units + j]
  std::vector<double> bias;

  /// phi(b) = b everywhere: a single unit with weight 1 and bias 0.
  static MonotoneNet identity();

  double transform(double b) const;

  /// Closed-form inverse: max over groups of min over units of
  /// (y - bias) * exp(-log_weight).
  double inverse(double y) const;
};

/// Transformed-bid auction: t_i = phi_i(b_i); no sale when max t_i <= 0
/// (zero reserve); otherwise the highest transformed bid wins (lowest-id tie
/// break) and pays phi_winner^{-1}(max(0, highest competing t)).
/// Throws when the net and bid counts differ or the bid list is empty.
AuctionOutcome learned_auction(std::span<const MonotoneNet> nets,
                               std::span<const Bid> bids);

/// Draws one valuation profile (one entry per bidder) per call.
using ProfileSampler = std::function<std::vector<double>(Rng&)>;

ProfileSampler uniform_profile_sampler(int num_bidders);
ProfileSampler wpcn_profile_sampler(const wpcn::NetworkConfig& config);

/// Mean learned-mechanism revenue over explicit truthful-bid profiles.
double mean_revenue(std::span<const MonotoneNet> nets,
                    std::span<const std::vector<double>> profiles);

/// Mean second-price revenue over the same kind of profile set.
double mean_spa_revenue(std::span<const std::vector<double>> profiles);

/// Monte-Carlo estimate of expected learned-mechanism revenue.
double expected_revenue(std::span<const MonotoneNet> nets,
                        const ProfileSampler& sampler, int num_samples, Rng& rng);
double expected_revenue(std::span<const MonotoneNet> nets,
                        const wpcn::NetworkConfig& config, int num_samples,
                        Rng& rng);

struct TrainConfig {
  int num_bidders = 2;
  int iterations = 2000;
  int batch_size = 128;
  double learning_rate = 0.05;
  double lambda_start = 10.0;  // softmax temperature, annealed linearly
  double lambda_end = 100.0;
  int groups = 5;   // K
  int units = 10;   // J
  double init_noise = 0.05;
  int eval_samples = 2048;  // held-out profiles for the revenue trace
  std::uint64_t seed = 0;
};

struct TraceRow {
  int iteration = 0;
  double dl_revenue = 0.0;   // hard-allocation learned revenue on the eval set
  double spa_revenue = 0.0;  // second-price revenue on the same eval set
};

struct TrainResult {
  std::vector<MonotoneNet> nets;
  std::vector<TraceRow> trace;  // rows 0..iterations; row 0 is the initial nets
};

class TrainDivergedError : public std::runtime_error {
 public:
  TrainDivergedError(int iteration, const std::string& what)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

/// Initial nets for training: every group carries an exact identity unit and
/// the remaining units are noise-perturbed but strictly dominated on [0, 2],
/// so the initial mechanism coincides with the second-price auction bid for
/// bid.
std::vector<MonotoneNet> initial_nets(const TrainConfig& config);

/// Gradient ascent on softmax-relaxed expected revenue. Allocation
/// probabilities are softmax(lambda * t) over the bidders plus a zero
/// reserve slot; each bidder's payment term is its inverse transform of the
/// clipped competing maximum. The trace records hard-allocation revenue on a
/// held-out evaluation set each iteration. Throws TrainDivergedError when
/// the objective turns non-finite.
TrainResult train(const TrainConfig& config, const ProfileSampler& sampler);

/// The training objective as a differentiable graph over one batch, exposed
/// so gradient checks can differentiate exactly what training optimizes.
struct RevenueObjective {
  grad::Tape tape;
  // Parameter node ids, [bidder][k*units + j].
  std::vector<std::vector<grad::Tape::NodeId>> log_weight_nodes;
  std::vector<std::vector<grad::Tape::NodeId>> bias_nodes;
  grad::Tape::NodeId root = 0;
};

RevenueObjective build_revenue_objective(
    std::span<const MonotoneNet> nets,
    std::span<const std::vector<double>> profiles, double temperature);

/// Plain-text versioned serialization of a trained net set.
std::string nets_to_text(std::span<const MonotoneNet> nets);
std::vector<MonotoneNet> nets_from_text(std::istream& in);

}  // namespace semnet::auction
