#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace monfermi {

// Per-trajectory random stream. Trajectory i of an ensemble draws from the
// stream (seed ^ i); the raw stream id is whitened through splitmix64 before
// seeding the engine so that adjacent ids give decorrelated sequences.
//
// All variates are derived from mt19937_64 words through the explicit
// conversions below instead of std::*_distribution, which keeps output
// bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t stream) : eng_(splitmix64(stream)) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be positive and well below 2^53.
  std::int64_t uniform_int(std::int64_t n) {
    return static_cast<std::int64_t>(uniform() * static_cast<double>(n));
  }

  // Exponential waiting time with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace monfermi
