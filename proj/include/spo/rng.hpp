#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace spo {

// SplitMix64: cheap to seed, so every sample/draw/trial index can own an
// independent stream derived from (seed, index).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Generator for substream `index` of the stream family rooted at `seed`.
/// Optional `salt` separates streams used for different purposes.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  SplitMix64 mix(seed ^ (salt * 0xD1B54A32D192ED03ULL));
  std::uint64_t a = mix();
  SplitMix64 mix2(a + index * 0x9E3779B97F4A7C15ULL);
  mix2();
  return SplitMix64(mix2());
}

class Sampler {
 public:
  explicit Sampler(SplitMix64 gen) : gen_(gen) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return normal_(gen_); }
  /// Rademacher sign in {-1, +1}.
  double sign() { return (gen_() >> 63) ? 1.0 : -1.0; }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }

  Eigen::VectorXd gaussian(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  /// Uniform on the Euclidean unit sphere in R^d.
  Eigen::VectorXd unit_sphere(Eigen::Index d) {
    for (;;) {
      Eigen::VectorXd v = gaussian(d);
      const double nrm = v.norm();
      if (nrm > 1e-300) return v / nrm;
    }
  }

  SplitMix64& engine() { return gen_; }

 private:
  SplitMix64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spo
