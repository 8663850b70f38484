#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace symgame {

// Seedable random stream. Per-episode streams are derived from
// (master seed, episode index) with a splitmix64 mix, so serial and
// parallel runs over episodes produce identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  static Rng for_episode(std::uint64_t master_seed, std::uint64_t episode) {
    return Rng(mix(master_seed) ^ mix(episode + 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution; avoids the
  // implementation-defined std distributions for cross-platform determinism.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

  // Draws an index from an (unnormalized is tolerated) probability vector.
  int sample(std::span<const double> probs) {
    double u = uniform();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace symgame
