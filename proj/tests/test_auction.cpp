#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "semnet/auction.hpp"

using namespace semnet::auction;
using semnet::Rng;
using semnet::grad::check_gradients;

namespace {

std::vector<Bid> make_bids(const std::vector<double>& amounts) {
  std::vector<Bid> bids;
  for (std::size_t i = 0; i < amounts.size(); ++i) {
    bids.push_back({static_cast<int>(i), amounts[i]});
  }
  return bids;
}

MonotoneNet shifted_identity(double shift) {
  MonotoneNet net = MonotoneNet::identity();
  net.bias = {shift};
  return net;
}

MonotoneNet random_net(std::mt19937& gen, int groups, int units) {
  std::uniform_real_distribution<double> w(-0.5, 0.5);
  std::uniform_real_distribution<double> b(-0.5, 0.3);
  MonotoneNet net;
  net.groups = groups;
  net.units = units;
  for (int i = 0; i < groups * units; ++i) {
    net.log_weight.push_back(w(gen));
    net.bias.push_back(b(gen));
  }
  return net;
}

}  // namespace

TEST_CASE("second price follows the textbook definition") {
  const auto out = second_price(make_bids({0.3, 0.5, 0.2}));
  CHECK(out.winner == 1);
  CHECK(out.payment == 0.3);
  CHECK(out.revenue() == 0.3);
}

TEST_CASE("second price breaks ties toward the lowest bidder id") {
  const auto out = second_price(make_bids({0.4, 0.4, 0.4}));
  CHECK(out.winner == 0);
  CHECK(out.payment == 0.4);
}

TEST_CASE("a single bid pays zero") {
  const auto out = second_price(make_bids({0.7}));
  CHECK(out.winner == 0);
  CHECK(out.payment == 0.0);
}

TEST_CASE("second price rejects invalid bids") {
  CHECK_THROWS_AS(second_price({}), std::invalid_argument);
  CHECK_THROWS_AS(second_price(make_bids({0.2, -0.1})), std::invalid_argument);
}

TEST_CASE("transform evaluates max-min of linear units") {
  MonotoneNet net;
  net.groups = 1;
  net.units = 1;
  net.log_weight = {std::log(2.0)};
  net.bias = {1.0};
  CHECK(net.transform(2.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(net.inverse(5.0) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(MonotoneNet::identity().transform(0.37) == 0.37);
  CHECK(MonotoneNet::identity().inverse(0.37) == 0.37);

  MonotoneNet two;
  two.groups = 1;
  two.units = 2;
  two.log_weight = {0.0, std::log(2.0)};
  two.bias = {0.0, -1.0};
  CHECK(two.transform(0.5) == 0.5);  // max(0.5, 0.0)
}

TEST_CASE("transform inverse round-trips within 1e-9") {
  std::mt19937 gen(101);
  std::uniform_real_distribution<double> b_dist(0.0, 1.5);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto net = random_net(gen, 1 + trial % 3, 1 + trial % 4);
    const double b = b_dist(gen);
    CHECK(std::abs(net.inverse(net.transform(b)) - b) <= 1e-9);
  }
}

TEST_CASE("random transforms are strictly increasing on a grid") {
  std::mt19937 gen(103);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = random_net(gen, 3, 4);
    double prev = net.transform(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = net.transform(1.5 * i / 1000.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("learned auction with identity nets reduces to second price") {
  const std::vector<MonotoneNet> nets(2, MonotoneNet::identity());
  const auto out = learned_auction(nets, make_bids({0.5, 0.3}));
  CHECK(out.winner == 0);
  CHECK(out.payment == 0.3);
}

TEST_CASE("learned auction respects the transform-space reserve") {
  const std::vector<MonotoneNet> nets(2, shifted_identity(-0.5));

  SUBCASE("all below reserve: no sale") {
    const auto out = learned_auction(nets, make_bids({0.4, 0.3}));
    CHECK(out.winner == std::nullopt);
    CHECK(out.payment == 0.0);
  }

  SUBCASE("winner above, competitor below: pays the reserve") {
    const auto out = learned_auction(nets, make_bids({0.8, 0.3}));
    CHECK(out.winner == 0);
    CHECK(out.payment == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("learned auction validates its inputs") {
  const std::vector<MonotoneNet> nets(2, MonotoneNet::identity());
  CHECK_THROWS_AS(learned_auction(nets, make_bids({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(learned_auction(nets, {}), std::invalid_argument);
}

TEST_CASE("identity-initialized learned auction reproduces second price exactly") {
  Rng rng(7);
  TrainConfig config;
  config.num_bidders = 3;
  config.seed = 12345;
  const auto nets = initial_nets(config);
  for (int trial = 0; trial < 5000; ++trial) {
    std::vector<double> amounts(3);
    for (auto& a : amounts) a = rng.uniform01();
    const auto bids = make_bids(amounts);
    const auto spa = second_price(bids);
    const auto dl = learned_auction(nets, bids);
    CHECK(dl.winner == spa.winner);
    CHECK(dl.payment == spa.payment);
  }
}

TEST_CASE("all-zero bids: no sale under the reserve, zero revenue either way") {
  const std::vector<MonotoneNet> nets(2, MonotoneNet::identity());
  const auto bids = make_bids({0.0, 0.0});
  const auto dl = learned_auction(nets, bids);
  const auto spa = second_price(bids);
  CHECK(dl.winner == std::nullopt);
  CHECK(dl.payment == 0.0);
  CHECK(spa.winner == 0);
  CHECK(spa.payment == 0.0);
}

TEST_CASE("scaling all bids preserves the winner under identity nets") {
  std::mt19937 gen(107);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<MonotoneNet> nets(4, MonotoneNet::identity());
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> amounts(4);
    for (auto& a : amounts) a = u(gen) + 0.01;
    const double k = 0.1 + 3.0 * u(gen);
    auto scaled = amounts;
    for (auto& a : scaled) a *= k;
    CHECK(learned_auction(nets, make_bids(amounts)).winner ==
          learned_auction(nets, make_bids(scaled)).winner);
  }
}

TEST_CASE("expected revenue with identity nets equals SPA revenue exactly") {
  semnet::wpcn::NetworkConfig config;
  const std::vector<MonotoneNet> nets(static_cast<std::size_t>(config.num_devices),
                                      MonotoneNet::identity());
  const auto sampler = wpcn_profile_sampler(config);
  Rng a(55), b(55);
  std::vector<std::vector<double>> profiles;
  for (int i = 0; i < 2000; ++i) profiles.push_back(sampler(a));
  const double dl = mean_revenue(nets, profiles);
  const double spa = mean_spa_revenue(profiles);
  CHECK(dl == spa);

  // and through the sampling entry point with the same seed
  const double mc = expected_revenue(nets, sampler, 2000, b);
  CHECK(mc == dl);
}

TEST_CASE("constant valuations with identity nets return that value") {
  const std::vector<MonotoneNet> nets(3, MonotoneNet::identity());
  const std::vector<std::vector<double>> profiles(10, {0.6, 0.6, 0.6});
  CHECK(mean_revenue(nets, profiles) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("single bidder with a 0.5 reserve earns about a quarter") {
  const std::vector<MonotoneNet> nets(1, shifted_identity(-0.5));
  Rng rng(77);
  const double rev = expected_revenue(nets, uniform_profile_sampler(1), 400000, rng);
  CHECK(rev == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("IR and DSIC hold for random nets and profiles") {
  std::mt19937 gen(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 3;
  std::vector<MonotoneNet> nets;
  for (int i = 0; i < n; ++i) nets.push_back(random_net(gen, 2, 3));

  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> vals(n);
    for (auto& v : vals) v = u(gen);
    const auto bids = make_bids(vals);

    for (const bool learned : {false, true}) {
      const auto outcome = learned ? learned_auction(nets, bids) : second_price(bids);
      // IR: the winner never pays more than its bid.
      if (outcome.winner) {
        const double winning_bid = vals[static_cast<std::size_t>(*outcome.winner)];
        CHECK(outcome.payment <= winning_bid + 1e-9);
      } else {
        CHECK(outcome.payment == 0.0);
      }
      // DSIC: no deviation on an 11-point grid beats truthful bidding.
      for (int i = 0; i < n; ++i) {
        const double truthful_utility =
            (outcome.winner && *outcome.winner == i) ? vals[static_cast<std::size_t>(i)] - outcome.payment : 0.0;
        for (int g = 0; g <= 10; ++g) {
          auto dev = vals;
          dev[static_cast<std::size_t>(i)] = g / 10.0;
          const auto dev_bids = make_bids(dev);
          const auto dev_out =
              learned ? learned_auction(nets, dev_bids) : second_price(dev_bids);
          const double dev_utility =
              (dev_out.winner && *dev_out.winner == i) ? vals[static_cast<std::size_t>(i)] - dev_out.payment : 0.0;
          CHECK(truthful_utility + 1e-9 >= dev_utility);
        }
      }
    }
  }
}

TEST_CASE("training is deterministic and starts at SPA revenue") {
  TrainConfig config;
  config.num_bidders = 2;
  config.iterations = 30;
  config.batch_size = 32;
  config.eval_samples = 256;
  config.seed = 99;
  const auto sampler = uniform_profile_sampler(2);
  const auto a = train(config, sampler);
  const auto b = train(config, sampler);

  REQUIRE(a.trace.size() == 31);
  CHECK(a.trace.front().iteration == 0);
  CHECK(a.trace.front().dl_revenue == a.trace.front().spa_revenue);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].dl_revenue == b.trace[i].dl_revenue);
    CHECK(a.trace[i].spa_revenue == b.trace[i].spa_revenue);
  }
  for (std::size_t i = 0; i < a.nets.size(); ++i) {
    CHECK(a.nets[i].log_weight == b.nets[i].log_weight);
    CHECK(a.nets[i].bias == b.nets[i].bias);
  }
}

TEST_CASE("training diverges loudly on an absurd learning rate") {
  TrainConfig config;
  config.num_bidders = 2;
  config.iterations = 50;
  config.batch_size = 8;
  config.eval_samples = 16;
  config.learning_rate = 1e18;
  config.seed = 3;
  CHECK_THROWS_AS(train(config, uniform_profile_sampler(2)), TrainDivergedError);
}

TEST_CASE("trained transforms stay strictly monotone") {
  TrainConfig config;
  config.num_bidders = 2;
  config.iterations = 60;
  config.batch_size = 32;
  config.eval_samples = 128;
  config.seed = 17;
  const auto result = train(config, uniform_profile_sampler(2));
  for (const auto& net : result.nets) {
    double prev = net.transform(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = net.transform(i / 1000.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("objective gradients match finite differences away from kinks") {
  std::mt19937 gen(113);
  std::uniform_real_distribution<double> u(0.2, 0.95);
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 10; ++attempt) {
    std::vector<MonotoneNet> nets = {random_net(gen, 2, 2), random_net(gen, 2, 2)};
    std::vector<std::vector<double>> batch(6, std::vector<double>(2));
    for (auto& profile : batch) {
      for (auto& v : profile) v = u(gen);
    }
    auto obj = build_revenue_objective(nets, batch, 5.0);
    obj.tape.forward(obj.root);
    if (obj.tape.min_kink_margin(obj.root) < 1e-3) continue;  // resample
    std::vector<semnet::grad::Tape::NodeId> params;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      params.insert(params.end(), obj.log_weight_nodes[i].begin(),
                    obj.log_weight_nodes[i].end());
      params.insert(params.end(), obj.bias_nodes[i].begin(),
                    obj.bias_nodes[i].end());
    }
    CHECK(check_gradients(obj.tape, obj.root, params, 1e-5) < 1e-4);
    ++checked;
  }
  CHECK(checked == 10);
}

TEST_CASE("net serialization round-trips at full precision") {
  std::mt19937 gen(127);
  std::vector<MonotoneNet> nets = {random_net(gen, 2, 3), random_net(gen, 1, 4)};
  const auto text = nets_to_text(nets);
  std::istringstream in(text);
  const auto loaded = nets_from_text(in);
  REQUIRE(loaded.size() == nets.size());
  for (std::size_t i = 0; i < nets.size(); ++i) {
    CHECK(loaded[i].groups == nets[i].groups);
    CHECK(loaded[i].units == nets[i].units);
    CHECK(loaded[i].log_weight == nets[i].log_weight);
    CHECK(loaded[i].bias == nets[i].bias);
  }

  std::istringstream bad("not-a-net-file 1\n");
  CHECK_THROWS_AS(nets_from_text(bad), std::invalid_argument);
}
