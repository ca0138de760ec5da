// Copyright 2026 The closetest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLOSETEST_RANDOM_HPP_
#define CLOSETEST_RANDOM_HPP_

// Seeded random streams with a documented derivation scheme.
//
// Reproducibility contract: all randomness flows through RandomStream, which
// wraps std::mt19937_64 (output sequence fully specified by the standard) and
// implements its own distributions.  Standard-library distribution objects are
// deliberately avoided because their algorithms are implementation-defined.
//
// Stream derivation: substream(root, {a, b, c}) folds the path elements into
// the root seed with splitmix64 finalization steps.  Callers give each logical
// unit of work (a trial, a calibration run, a walk batch) its own path, so
// results do not depend on scheduling or thread count.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

namespace closetest {

// splitmix64 finalizer (Vigna).  Good 64-bit mixing, cheap, stateless.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a root seed and a path of counters.
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root);
  for (std::uint64_t x : path) s = mix64(s ^ mix64(x));
  return s;
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(mix64(seed)) {}

  static RandomStream substream(std::uint64_t root,
                                std::initializer_list<std::uint64_t> path) {
    return RandomStream(derive_seed(root, path));
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n-1} by rejection (unbiased).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Poisson(mean).  Inversion by sequential search for small means, Hormann's
  // PTRD transformed-rejection for large ones.
  std::int64_t poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean))
      throw std::invalid_argument("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 12.0) return poisson_inversion(mean);
    return poisson_ptrd(mean);
  }

 private:
  std::int64_t poisson_inversion(double mean) {
    const double l = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }

  // Hormann's transformed rejection with squeeze (the PTRS variant of the
  // 1993 paper).  Valid for mean >= ~10; acceptance test uses the exact pmf.
  std::int64_t poisson_ptrd(double mu) {
    const double smu = std::sqrt(mu);
    const double logmu = std::log(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          k * logmu - mu - std::lgamma(k + 1.0)) {
        return static_cast<std::int64_t>(k);
      }
    }
  }

  std::mt19937_64 eng_;
};

// Inverse-CDF sampler over a fixed probability vector.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& probs) {
    if (probs.empty())
      throw std::invalid_argument("CategoricalSampler: empty support");
    cdf_.resize(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cdf_[i] = acc;
    }
    // Guard the top bin against accumulated rounding.
    cdf_.back() = 1.0;
  }

  std::size_t draw(RandomStream& rng) const {
    const double u = rng.uniform();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cdf_[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace closetest

#endif  // CLOSETEST_RANDOM_HPP_
