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

#ifndef CLOSETEST_MOMENTS_HPP_
#define CLOSETEST_MOMENTS_HPP_

// Closed-form moments of the count statistics under Poissonized sampling
// (X_i ~ Poisson(m1 p_i), Y_i ~ Poisson(m2 q_i), independent), and the
// Monte-Carlo machinery used to verify them.
//
// Watch the two z conventions: the W variance uses z_i = m2 p_i + m1 q_i,
// while the Z expectation uses z_i = m1 p_i + m2 q_i.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "closetest/distribution.hpp"
#include "closetest/parallel.hpp"
#include "closetest/statistics.hpp"

namespace closetest {

namespace detail {

inline void require_moment_args(const ProbabilityVector& p,
                                const ProbabilityVector& q, double m1,
                                double m2) {
  if (p.size() != q.size())
    throw std::invalid_argument("moments: p, q size mismatch");
  if (!(m1 > 0.0) || !(m2 > 0.0))
    throw std::invalid_argument("moments: m1, m2 must be > 0");
}

// (z - 1 + e^{-z}) / z^2, the attenuation factor in E[Z]; -> 1/2 as z -> 0.
inline double z_mean_factor(double z) {
  if (z <= 0.0) return 0.5;
  return (z + std::expm1(-z)) / (z * z);
}

// (1 - e^{-x}) / x with the limit value 1 at x = 0.
inline double one_minus_exp_over(double x) {
  if (x == 0.0) return 1.0;
  return -std::expm1(-x) / x;
}

}  // namespace detail

// E[W_A] = m1^2 m2^2 sum_A (p_i - q_i)^2
inline double expected_w(const ProbabilityVector& p, const ProbabilityVector& q,
                         double m1, double m2, const IndexSet& a) {
  detail::require_moment_args(p, q, m1, m2);
  long double acc = 0.0L;
  for (auto i : a) {
    const long double d = p[i] - q[i];
    acc += d * d;
  }
  return static_cast<double>(static_cast<long double>(m1) * m1 * m2 * m2 * acc);
}

// Var[W_A] = 2 m1^2 m2^2 sum_A z_i^2 + 4 m1^3 m2^3 sum_A z_i (p_i - q_i)^2,
// with z_i = m2 p_i + m1 q_i.
inline double variance_w(const ProbabilityVector& p, const ProbabilityVector& q,
                         double m1, double m2, const IndexSet& a) {
  detail::require_moment_args(p, q, m1, m2);
  long double sum_z2 = 0.0L, sum_zd2 = 0.0L;
  for (auto i : a) {
    const long double z = m2 * p[i] + m1 * q[i];
    const long double d = p[i] - q[i];
    sum_z2 += z * z;
    sum_zd2 += z * d * d;
  }
  const long double m1l = m1, m2l = m2;
  return static_cast<double>(2.0L * m1l * m1l * m2l * m2l * sum_z2 +
                             4.0L * m1l * m1l * m1l * m2l * m2l * m2l *
                                 sum_zd2);
}

// E[Z_A] = m1^2 m2^2 sum_A (q_i - p_i)^2 / z_i * (1 - (1 - e^{-z_i})/z_i),
// with z_i = m1 p_i + m2 q_i; elements with z_i = 0 contribute 0.
inline double expected_z(const ProbabilityVector& p, const ProbabilityVector& q,
                         double m1, double m2, const IndexSet& a) {
  detail::require_moment_args(p, q, m1, m2);
  long double acc = 0.0L;
  for (auto i : a) {
    const double z = m1 * p[i] + m2 * q[i];
    if (z <= 0.0) continue;
    const long double d = q[i] - p[i];
    acc += d * d * detail::z_mean_factor(z);
  }
  return static_cast<double>(static_cast<long double>(m1) * m1 * m2 * m2 * acc);
}

// E[R_A] = sum_A m2^2 q_i^2 (1 - e^{-m1 p_i}) e^{-m2 q_i} / (2 m1 p_i),
// taking the limit (1 - e^{-m1 p_i})/(m1 p_i) -> 1 as p_i -> 0.
inline double expected_r(const ProbabilityVector& p, const ProbabilityVector& q,
                         double m1, double m2, const IndexSet& a) {
  detail::require_moment_args(p, q, m1, m2);
  long double acc = 0.0L;
  for (auto i : a) {
    const double mq = m2 * q[i];
    acc += 0.5L * mq * mq * detail::one_minus_exp_over(m1 * p[i]) *
           std::exp(-mq);
  }
  return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Monte-Carlo verification.

enum class StatKind { kV, kW, kZ, kR };

inline std::string stat_name(StatKind k) {
  switch (k) {
    case StatKind::kV: return "v";
    case StatKind::kW: return "w";
    case StatKind::kZ: return "z";
    case StatKind::kR: return "r";
  }
  return "?";
}

inline double eval_stat(StatKind k, const CountVector& x, const CountVector& y,
                        const IndexSet& a) {
  switch (k) {
    case StatKind::kV: return stat_v(x, y, a);
    case StatKind::kW: return stat_w(x, y, a);
    case StatKind::kZ: return stat_z(x, y, a);
    case StatKind::kR: return stat_r(x, y, a);
  }
  throw std::logic_error("eval_stat: bad kind");
}

struct MonteCarloSummary {
  std::int64_t trials = 0;
  double mean = 0;
  double variance = 0;         // unbiased sample variance
  double stderr_mean = 0;      // s / sqrt(N)
  double stderr_variance = 0;  // SE of the sample variance via 4th moment
};

// Per-trial substreams: trial i uses substream(seed, {kMomentTag, i}).
inline constexpr std::uint64_t kMomentTag = 0x4d4f4d45ULL;

inline MonteCarloSummary summarize_values(const std::vector<double>& vals) {
  const std::int64_t n = static_cast<std::int64_t>(vals.size());
  if (n < 2) throw std::invalid_argument("summarize_values: need >= 2 values");
  long double mean = 0.0L;
  for (double v : vals) mean += v;
  mean /= n;
  long double m2 = 0.0L, m4 = 0.0L;
  for (double v : vals) {
    const long double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const long double var_unbiased = m2 / (n - 1);
  const long double m2n = m2 / n, m4n = m4 / n;
  // Var(s^2) ~ (m4 - (n-3)/(n-1) * m2^2) / n.
  long double var_of_var =
      (m4n - (static_cast<long double>(n - 3) / (n - 1)) * m2n * m2n) / n;
  if (var_of_var < 0.0L) var_of_var = 0.0L;
  MonteCarloSummary out;
  out.trials = n;
  out.mean = static_cast<double>(mean);
  out.variance = static_cast<double>(var_unbiased);
  out.stderr_mean = static_cast<double>(std::sqrt(var_unbiased /
                                                  static_cast<long double>(n)));
  out.stderr_variance = static_cast<double>(std::sqrt(var_of_var));
  return out;
}

inline MonteCarloSummary monte_carlo_stat(StatKind kind,
                                          const ProbabilityVector& p,
                                          const ProbabilityVector& q,
                                          double m1, double m2,
                                          const IndexSet& a,
                                          std::int64_t trials,
                                          std::uint64_t seed,
                                          int threads = 1) {
  detail::require_moment_args(p, q, m1, m2);
  if (trials < 2)
    throw std::invalid_argument("monte_carlo_stat: trials must be >= 2");
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t t) {
    RandomStream rng = RandomStream::substream(
        seed, {kMomentTag, static_cast<std::uint64_t>(t)});
    const CountVector x = sample_counts(p, m1, Sampling::kPoissonized, rng);
    const CountVector y = sample_counts(q, m2, Sampling::kPoissonized, rng);
    vals[static_cast<std::size_t>(t)] = eval_stat(kind, x, y, a);
  });
  return summarize_values(vals);
}

struct MomentReport {
  std::string stat;
  double closed_form_mean = 0;
  double mc_mean = 0;
  double mc_stderr = 0;
  std::int64_t trials = 0;
};

inline double closed_form_mean(StatKind kind, const ProbabilityVector& p,
                               const ProbabilityVector& q, double m1, double m2,
                               const IndexSet& a) {
  switch (kind) {
    case StatKind::kW: return expected_w(p, q, m1, m2, a);
    case StatKind::kZ: return expected_z(p, q, m1, m2, a);
    case StatKind::kR: return expected_r(p, q, m1, m2, a);
    case StatKind::kV:
      throw std::invalid_argument("closed_form_mean: V has no closed form");
  }
  throw std::logic_error("closed_form_mean: bad kind");
}

inline MomentReport moment_report(StatKind kind, const ProbabilityVector& p,
                                  const ProbabilityVector& q, double m1,
                                  double m2, const IndexSet& a,
                                  std::int64_t trials, std::uint64_t seed,
                                  int threads = 1) {
  MomentReport rep;
  rep.stat = stat_name(kind);
  rep.closed_form_mean = closed_form_mean(kind, p, q, m1, m2, a);
  const MonteCarloSummary mc =
      monte_carlo_stat(kind, p, q, m1, m2, a, trials, seed, threads);
  rep.mc_mean = mc.mean;
  rep.mc_stderr = mc.stderr_mean;
  rep.trials = mc.trials;
  return rep;
}

}  // namespace closetest

#endif  // CLOSETEST_MOMENTS_HPP_
