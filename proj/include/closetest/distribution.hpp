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

#ifndef CLOSETEST_DISTRIBUTION_HPP_
#define CLOSETEST_DISTRIBUTION_HPP_

// Discrete distributions over [n], deterministic generators for the test
// families used throughout, and count-vector sampling (Poissonized or fixed
// sample size).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "closetest/random.hpp"

namespace closetest {

inline constexpr double kProbabilitySumTolerance = 1e-9;

// A validated probability vector: entries nonnegative, summing to 1 within
// kProbabilitySumTolerance.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty())
      throw std::invalid_argument("ProbabilityVector: empty support");
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(
            "ProbabilityVector: entries must be finite and >= 0");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kProbabilitySumTolerance)
      throw std::invalid_argument(
          "ProbabilityVector: entries must sum to 1 (got " +
          std::to_string(sum) + ")");
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

 private:
  std::vector<double> p_;
};

inline ProbabilityVector make_uniform(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("make_uniform: n must be positive");
  return ProbabilityVector(
      std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

// Uniform over [n] with alternating +/- eps relative perturbation, starting
// with + at index 0.  Requires even n so the masses balance.
inline ProbabilityVector make_perturbed_uniform(std::int64_t n, double eps) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("make_perturbed_uniform: n must be even > 0");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("make_perturbed_uniform: eps must be in (0,1]");
  std::vector<double> p(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    p[static_cast<std::size_t>(i)] = (1.0 + sign * eps) / n;
  }
  return ProbabilityVector(std::move(p));
}

inline double l1_distance(const ProbabilityVector& p,
                          const ProbabilityVector& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("l1_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::fabs(p[i] - q[i]);
  return d;
}

// Hard instance pair: a heavy plateau of ~(1-delta)*m1 elements at mass 1/m1
// shared by p and q, plus a light block where q alternates (1 +/- eps) around
// p's mass.  delta is fixed at 1/4.  The light block size is floor(n/C)
// rounded down to even so the +/- alternation cancels; per-element light mass
// is delta/|B| (= delta*C/n up to rounding), which makes ||p-q||_1 equal
// delta*eps exactly.  Leftover mass from flooring |A| is spread uniformly over
// the heavy block, identically in p and q.
struct LowerBoundInstance {
  ProbabilityVector p;
  ProbabilityVector q;
  std::int64_t heavy_count = 0;       // |A|
  std::int64_t light_count = 0;       // |B|
  double heavy_mass_per_element = 0;  // b = 1/m1 (before residual spreading)
  double light_mass_per_element = 0;  // delta/|B| (~ delta*C/n)
  double separation = 0;              // ||p-q||_1 = delta*eps
};

inline constexpr double kLowerBoundDelta = 0.25;

inline LowerBoundInstance make_lower_bound_pair(std::int64_t n,
                                                std::int64_t m1, double eps,
                                                double C = 4.0) {
  if (n <= 0 || m1 <= 0)
    throw std::invalid_argument("make_lower_bound_pair: n, m1 must be > 0");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("make_lower_bound_pair: eps must be in [0,1]");
  if (!(C > 0.0))
    throw std::invalid_argument("make_lower_bound_pair: C must be > 0");
  const double delta = kLowerBoundDelta;
  const std::int64_t heavy =
      static_cast<std::int64_t>(std::floor((1.0 - delta) * m1));
  std::int64_t light = static_cast<std::int64_t>(std::floor(n / C));
  if (light % 2 != 0) --light;
  if (heavy < 1 || light < 2)
    throw std::invalid_argument(
        "make_lower_bound_pair: degenerate set sizes; increase n or m1");
  if (heavy + light > n)
    throw std::invalid_argument(
        "make_lower_bound_pair: support overflow (heavy + light > n)");

  const double b = 1.0 / m1;
  const double light_mass = delta / light;
  // Residual heavy mass so totals hit exactly 1.
  const double residual = (1.0 - delta) - b * heavy;
  const double heavy_mass = b + residual / heavy;

  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < heavy; ++i) {
    p[static_cast<std::size_t>(i)] = heavy_mass;
    q[static_cast<std::size_t>(i)] = heavy_mass;
  }
  for (std::int64_t j = 0; j < light; ++j) {
    const std::size_t idx = static_cast<std::size_t>(heavy + j);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    p[idx] = light_mass;
    q[idx] = light_mass * (1.0 + sign * eps);
  }

  LowerBoundInstance out{ProbabilityVector(std::move(p)),
                         ProbabilityVector(std::move(q)),
                         heavy,
                         light,
                         b,
                         light_mass,
                         delta * eps};
  return out;
}

// ---------------------------------------------------------------------------
// File and shorthand-spec parsing.

// One decimal per line; blank lines and lines starting with '#' are ignored.
inline ProbabilityVector load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_distribution_file: cannot open " + path);
  std::vector<double> p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(line.substr(start), &pos);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": not a number: " + line);
    }
    std::size_t rest = line.find_first_not_of(" \t\r", start + pos);
    if (rest != std::string::npos && line[rest] != '#')
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing junk: " + line);
    p.push_back(v);
  }
  if (p.empty())
    throw std::runtime_error("load_distribution_file: no entries in " + path);
  return ProbabilityVector(std::move(p));
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
  }
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad real for " + what + ": '" + s + "'");
  }
}

}  // namespace detail

// Shorthand specifiers:
//   uniform:<n>
//   perturbed:<n>:<eps>
//   lowerbound-p:<n>:<m1>:<eps>
//   lowerbound-q:<n>:<m1>:<eps>
// Anything else is treated as a path to a distribution file.
inline ProbabilityVector parse_distribution_spec(const std::string& spec) {
  const auto parts = detail::split(spec, ':');
  const std::string& kind = parts.empty() ? spec : parts[0];
  if (kind == "uniform") {
    if (parts.size() != 2)
      throw std::invalid_argument("spec: uniform:<n>");
    return make_uniform(detail::parse_int(parts[1], "n"));
  }
  if (kind == "perturbed") {
    if (parts.size() != 3)
      throw std::invalid_argument("spec: perturbed:<n>:<eps>");
    return make_perturbed_uniform(detail::parse_int(parts[1], "n"),
                                  detail::parse_real(parts[2], "eps"));
  }
  if (kind == "lowerbound-p" || kind == "lowerbound-q") {
    if (parts.size() != 4)
      throw std::invalid_argument("spec: " + kind + ":<n>:<m1>:<eps>");
    auto inst = make_lower_bound_pair(detail::parse_int(parts[1], "n"),
                                      detail::parse_int(parts[2], "m1"),
                                      detail::parse_real(parts[3], "eps"));
    return kind == "lowerbound-p" ? inst.p : inst.q;
  }
  return load_distribution_file(spec);
}

// ---------------------------------------------------------------------------
// Count sampling.

enum class Sampling { kPoissonized, kFixed };

struct CountVector {
  std::vector<std::int64_t> counts;
  double nominal_size = 0;        // the m parameter used to draw
  std::int64_t actual_total = 0;  // sum of counts
};

// Poissonized: counts[i] ~ Poisson(m * p_i), independent across i.
// Fixed: exactly floor(m) categorical draws.
inline CountVector sample_counts(const ProbabilityVector& p, double m,
                                 Sampling mode, RandomStream& rng) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw std::invalid_argument("sample_counts: m must be finite and > 0");
  CountVector out;
  out.nominal_size = m;
  out.counts.assign(p.size(), 0);
  if (mode == Sampling::kPoissonized) {
    for (std::size_t i = 0; i < p.size(); ++i)
      out.counts[i] = rng.poisson(m * p[i]);
  } else {
    const auto draws = static_cast<std::int64_t>(std::floor(m));
    const CategoricalSampler sampler(p.values());
    for (std::int64_t d = 0; d < draws; ++d) ++out.counts[sampler.draw(rng)];
  }
  out.actual_total =
      std::accumulate(out.counts.begin(), out.counts.end(), std::int64_t{0});
  return out;
}

}  // namespace closetest

#endif  // CLOSETEST_DISTRIBUTION_HPP_
