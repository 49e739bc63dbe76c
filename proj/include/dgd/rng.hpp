#pragma once

#include <cmath>
#include <cstdint>

namespace dgd {

// Counter-style splitmix64 generator. Streams are derived by hashing
// (master_seed, trial, server), so draws never depend on the order in which
// trials or servers are visited.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    return mix(base ^ ((stream + 1) * 0x9e3779b97f4a7c15ULL));
  }

  static std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive(derive(base, a), b);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate; 0 is a possible value.
  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  // Standard normal, Box-Muller.
  double normal() {
    constexpr double two_pi = 6.28318530717958647692528676655900577;
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace dgd
