#pragma once
// Seeded, reproducible RNG streams.
//
// Every randomized quantity in the model lives on one of three independent
// factors (detector configuration, scheme draw, per-slot decisions), so each
// replicate derives three child streams from the master seed.  Derivation is
// a pure function of (master, domain, index); results never depend on thread
// count or evaluation order.

#include <cstdint>
#include <random>
#include <span>

namespace detcap {

// Stream domains mirror the product structure of the model's randomness.
enum class StreamDomain : std::uint64_t {
  Config = 1,    // iid detection-probability draws
  Scheme = 2,    // randomized detection scheme draws
  Decision = 3,  // Bernoulli detector decisions
  Generic = 4,
};

// splitmix64 finalizer; used only to spread seed material.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // Child stream for (domain, index); independent of any draws made so far.
  static RngStream derive(std::uint64_t master, StreamDomain domain,
                          std::uint64_t index) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ static_cast<std::uint64_t>(domain));
    s = mix64(s ^ index);
    return RngStream(s);
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n); fixed-point multiply keeps it portable and
  // deterministic (bias < n / 2^64, irrelevant at these scales).
  int uniform_index(int n) {
    return static_cast<int>(
        (static_cast<unsigned __int128>(next_u64()) *
         static_cast<unsigned __int128>(n)) >> 64);
  }

  // Draw from a categorical law given cumulative weights (last entry ~ 1).
  int categorical_from_cumulative(std::span<const double> cumulative) {
    const double u = uniform01();
    int lo = 0, hi = static_cast<int>(cumulative.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cumulative[static_cast<std::size_t>(mid)]) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace detcap
