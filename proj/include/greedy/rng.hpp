#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace greedy {

/// One splitmix64 step; advances `state` and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and up to two stream tags.
/// Used so that replications, cells, and evaluation samples get
/// independent, machine-independent streams.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0) {
  std::uint64_t s = parent;
  s = splitmix64(s) ^ tag_a;
  s = splitmix64(s) ^ tag_b;
  return splitmix64(s);
}

/// Deterministic normal/uniform sampler. mt19937_64 has a
/// standard-specified output sequence and the transforms below avoid
/// std::normal_distribution, whose stream is implementation-defined, so
/// equal seeds give equal draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw on (0, 1].
  double uniform01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second value of each pair is
  /// cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, bound). Modulo bias is irrelevant at the
  /// bounds used here (fold shuffles).
  std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace greedy
