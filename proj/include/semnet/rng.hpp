#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace semnet {

// Fixed per-module stream tags. A global experiment seed is combined with one
// of these so adding a module never perturbs another module's random stream.
enum class SeedStream : std::uint64_t {
  kWpcnProfile = 1,
  kAuctionInit = 2,
  kAuctionBatch = 3,
  kAuctionEval = 4,
  kFedse = 5,
  kDeviceSnapshot = 6,
  kAuctionTrain = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t global_seed, SeedStream stream) {
  return splitmix64(global_seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

// Deterministic generator with portable variate transforms. All sampling goes
// through uniform01() so results depend only on the mt19937_64 bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Strictly inside (0, 1).
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean = 1.0) { return -mean * std::log(uniform01()); }

  double normal(double mu = 0.0, double sigma = 1.0) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace semnet
