// Copyright 2026 The roadeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Deterministic, splittable random streams.
//
// The generator is SplitMix64 (Steele, Lea, Flood; the java.util.SplittableRandom
// mixer). Substreams are derived by folding a key into the parent state through
// the same finalizer, so a stream is a pure function of (seed, key path) and
// never depends on how many draws sibling streams made. Gaussians use the
// Box-Muller transform; Poisson uses Knuth's product-of-uniforms method. The
// standard-library distributions are deliberately avoided: their output is
// implementation-defined and would break byte-identical reruns.
#ifndef ROADEVAL_RNG_HPP_
#define ROADEVAL_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "roadeval/types.hpp"

namespace roadeval {

namespace detail {

inline std::uint64_t splitmix64_mix(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class Rng
{
public:
  explicit Rng(std::uint64_t seed)
  : state_(detail::splitmix64_mix(seed + kGamma)) {}

  /// Child stream independent of this stream's draw position.
  Rng stream(std::uint64_t key) const
  {
    return Rng(state_ ^ detail::splitmix64_mix(key * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
  }

  Rng stream(std::uint64_t a, std::uint64_t b) const {return stream(a).stream(b);}

  std::uint64_t next_u64()
  {
    state_ += kGamma;
    return detail::splitmix64_mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform()
  {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform_open()
  {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {return lo + (hi - lo) * uniform();}

  /// Standard normal via Box-Muller. Two uniforms per draw, no caching, so a
  /// stream's n-th value depends only on n.
  double normal()
  {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sigma) {return mean + sigma * normal();}

  /// Normal resampled until >= lo (sigma == 0 collapses to the clamped mean).
  double truncated_normal(double mean, double sigma, double lo)
  {
    if (sigma <= 0.0) {return mean < lo ? lo : mean;}
    for (int attempt = 0; attempt < 256; ++attempt) {
      const double v = normal(mean, sigma);
      if (v >= lo) {return v;}
    }
    return lo;
  }

  /// Knuth's method; fine for the small lambdas the generator uses.
  int poisson(double lambda)
  {
    if (lambda <= 0.0) {return 0;}
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_open();
    } while (p > limit);
    return k - 1;
  }

  /// Index draw from non-negative weights (need not be normalized).
  std::size_t weighted_index(const std::vector<double> & weights)
  {
    double total = 0.0;
    for (double w : weights) {total += w;}
    double r = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) {return i;}
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t state_;
};

}  // namespace roadeval

#endif  // ROADEVAL_RNG_HPP_
