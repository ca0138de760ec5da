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

#ifndef CLOSETEST_STATISTICS_HPP_
#define CLOSETEST_STATISTICS_HPP_

// Count-vector statistics and the heavy/medium/light domain partition.
//
// Sample hygiene: partition_domain consumes only first-half counts; the
// statistics consume only second-half counts.  Callers keep the halves apart;
// the tester wiring enforces it structurally.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "closetest/distribution.hpp"

namespace closetest {

enum class Bucket : std::uint8_t { kHeavy, kMedium, kLight };

struct PartitionParams {
  std::int64_t n = 0;  // domain size
  double eps = 0;      // closeness parameter
  double m1 = 0;       // nominal size of the p-side sample halves
  double m2 = 0;       // nominal size of the q-side sample halves
  double kappa = 1.0;  // threshold scale
};

struct Partition {
  std::vector<Bucket> label;
  double b = 0;        // heavy threshold on empirical mass
  double b_prime = 0;  // medium threshold on empirical mass
  std::int64_t heavy_count = 0;
  std::int64_t medium_count = 0;
  std::int64_t light_count = 0;
};

inline double heavy_threshold(const PartitionParams& c) {
  return c.kappa * 256.0 * std::log(static_cast<double>(c.n)) /
         (c.eps * c.eps * c.m2);
}

inline double medium_threshold(const PartitionParams& c) {
  return c.kappa * 256.0 * std::log(static_cast<double>(c.n)) / c.m2;
}

// Buckets each element by its first-half empirical mass.  Heavy when either
// ratio strictly exceeds b; else medium when the larger ratio reaches b';
// else light.  Every element lands in exactly one bucket.
inline Partition partition_domain(const CountVector& s1, const CountVector& t1,
                                  const PartitionParams& c) {
  if (c.n <= 0) throw std::invalid_argument("partition_domain: n must be > 0");
  if (!(c.eps > 0.0))
    throw std::invalid_argument("partition_domain: eps must be > 0");
  if (!(c.m1 > 0.0) || !(c.m2 > 0.0))
    throw std::invalid_argument("partition_domain: m1, m2 must be > 0");
  if (!(c.kappa > 0.0))
    throw std::invalid_argument("partition_domain: kappa must be > 0");
  const auto n = static_cast<std::size_t>(c.n);
  if (s1.counts.size() != n || t1.counts.size() != n)
    throw std::invalid_argument("partition_domain: count length != n");

  Partition out;
  out.b = heavy_threshold(c);
  out.b_prime = medium_threshold(c);
  out.label.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rx = static_cast<double>(s1.counts[i]) / c.m1;
    const double ry = static_cast<double>(t1.counts[i]) / c.m2;
    if (rx > out.b || ry > out.b) {
      out.label[i] = Bucket::kHeavy;
      ++out.heavy_count;
    } else if (std::max(rx, ry) >= out.b_prime) {
      out.label[i] = Bucket::kMedium;
      ++out.medium_count;
    } else {
      out.label[i] = Bucket::kLight;
      ++out.light_count;
    }
  }
  return out;
}

using IndexSet = std::vector<std::uint32_t>;

inline IndexSet indices_of(const Partition& part, Bucket which) {
  IndexSet out;
  for (std::uint32_t i = 0; i < part.label.size(); ++i)
    if (part.label[i] == which) out.push_back(i);
  return out;
}

inline IndexSet all_indices(std::size_t n) {
  IndexSet out(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

inline IndexSet complement_of(const Partition& part, Bucket which) {
  IndexSet out;
  for (std::uint32_t i = 0; i < part.label.size(); ++i)
    if (part.label[i] != which) out.push_back(i);
  return out;
}

namespace detail {

inline void require_pair(const CountVector& x, const CountVector& y) {
  if (x.counts.size() != y.counts.size())
    throw std::invalid_argument("statistic: count length mismatch");
  if (!(x.nominal_size > 0.0) || !(y.nominal_size > 0.0))
    throw std::invalid_argument("statistic: nominal sizes must be > 0");
}

inline bool exact_int(double v) {
  return std::rint(v) == v && std::fabs(v) < 9.0e15;
}

}  // namespace detail

inline CountVector make_counts(std::vector<std::int64_t> counts, double m) {
  CountVector out;
  out.counts = std::move(counts);
  out.nominal_size = m;
  out.actual_total = 0;
  for (auto v : out.counts) out.actual_total += v;
  return out;
}

// sum_A |X_i/m1 - Y_i/m2|
inline double stat_v(const CountVector& x, const CountVector& y,
                     const IndexSet& a) {
  detail::require_pair(x, y);
  long double acc = 0.0L;
  for (auto i : a)
    acc += std::fabs(static_cast<double>(x.counts[i]) / x.nominal_size -
                     static_cast<double>(y.counts[i]) / y.nominal_size);
  return static_cast<double>(acc);
}

// sum_A (m2 X_i - m1 Y_i)^2 - (m2^2 X_i + m1^2 Y_i)
//
// Exact 128-bit integer arithmetic when m1, m2 are integral (the envelope
// m <= 1e7, counts <= 1e5 fits comfortably); extended-precision floats
// otherwise.
inline double stat_w(const CountVector& x, const CountVector& y,
                     const IndexSet& a) {
  detail::require_pair(x, y);
  const double m1 = x.nominal_size, m2 = y.nominal_size;
  if (detail::exact_int(m1) && detail::exact_int(m2)) {
    const auto im1 = static_cast<std::int64_t>(m1);
    const auto im2 = static_cast<std::int64_t>(m2);
    __int128 acc = 0;
    for (auto i : a) {
      const __int128 d = static_cast<__int128>(im2) * x.counts[i] -
                         static_cast<__int128>(im1) * y.counts[i];
      acc += d * d - (static_cast<__int128>(im2) * im2 * x.counts[i] +
                      static_cast<__int128>(im1) * im1 * y.counts[i]);
    }
    return static_cast<double>(acc);
  }
  long double acc = 0.0L;
  for (auto i : a) {
    const long double d = static_cast<long double>(m2) * x.counts[i] -
                          static_cast<long double>(m1) * y.counts[i];
    acc += d * d -
           (static_cast<long double>(m2) * m2 * x.counts[i] +
            static_cast<long double>(m1) * m1 * y.counts[i]);
  }
  return static_cast<double>(acc);
}

// sum_A [(m2 X_i - m1 Y_i)^2 - (m2^2 X_i + m1^2 Y_i)] / (X_i + Y_i),
// with empty elements (X_i + Y_i = 0) contributing 0.
inline double stat_z(const CountVector& x, const CountVector& y,
                     const IndexSet& a) {
  detail::require_pair(x, y);
  const double m1 = x.nominal_size, m2 = y.nominal_size;
  long double acc = 0.0L;
  if (detail::exact_int(m1) && detail::exact_int(m2)) {
    const auto im1 = static_cast<std::int64_t>(m1);
    const auto im2 = static_cast<std::int64_t>(m2);
    for (auto i : a) {
      const std::int64_t tot = x.counts[i] + y.counts[i];
      if (tot == 0) continue;
      const __int128 d = static_cast<__int128>(im2) * x.counts[i] -
                         static_cast<__int128>(im1) * y.counts[i];
      const __int128 w = d * d - (static_cast<__int128>(im2) * im2 * x.counts[i] +
                                  static_cast<__int128>(im1) * im1 * y.counts[i]);
      acc += static_cast<long double>(w) / static_cast<long double>(tot);
    }
  } else {
    for (auto i : a) {
      const std::int64_t tot = x.counts[i] + y.counts[i];
      if (tot == 0) continue;
      const long double d = static_cast<long double>(m2) * x.counts[i] -
                            static_cast<long double>(m1) * y.counts[i];
      const long double w = d * d -
                            (static_cast<long double>(m2) * m2 * x.counts[i] +
                             static_cast<long double>(m1) * m1 * y.counts[i]);
      acc += w / static_cast<long double>(tot);
    }
  }
  return static_cast<double>(acc);
}

// sum_A 1{Y_i = 2} / (X_i + 1)
inline double stat_r(const CountVector& x, const CountVector& y,
                     const IndexSet& a) {
  detail::require_pair(x, y);
  long double acc = 0.0L;
  for (auto i : a)
    if (y.counts[i] == 2)
      acc += 1.0L / static_cast<long double>(x.counts[i] + 1);
  return static_cast<double>(acc);
}

// stat_z over the full domain, scaled by m1^{3/2} m2.
inline double stat_z_normalized(const CountVector& x, const CountVector& y) {
  detail::require_pair(x, y);
  const double m1 = x.nominal_size, m2 = y.nominal_size;
  return stat_z(x, y, all_indices(x.counts.size())) /
         (m1 * std::sqrt(m1) * m2);
}

// Half L1 distance between the two empirical distributions, normalizing by
// the actual totals (not the nominal sizes).
inline double empirical_tv(const CountVector& x, const CountVector& y) {
  if (x.counts.size() != y.counts.size())
    throw std::invalid_argument("empirical_tv: count length mismatch");
  if (x.actual_total <= 0 || y.actual_total <= 0)
    throw std::invalid_argument("empirical_tv: empty sample");
  const double tx = static_cast<double>(x.actual_total);
  const double ty = static_cast<double>(y.actual_total);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.counts.size(); ++i)
    acc += std::fabs(static_cast<double>(x.counts[i]) / tx -
                     static_cast<double>(y.counts[i]) / ty);
  return static_cast<double>(acc / 2.0L);
}

// ---------------------------------------------------------------------------
// Faithfulness: does the empirical partition agree with the true masses?

struct FaithfulReport {
  bool heavy_ok = true;
  bool medium_ok = true;
  bool light_ok = true;
  std::int64_t first_bad_index = -1;
  bool ok() const { return heavy_ok && medium_ok && light_ok; }
};

// Heavy elements must be genuinely heavy (p_i > b/2 or q_i > b/2), medium
// ones must have b'/2 <= max(p_i, q_i) <= 2b, and light ones must satisfy
// p_i < 2b' and q_i < 2b'.
inline FaithfulReport check_faithful(const ProbabilityVector& p,
                                     const ProbabilityVector& q,
                                     const Partition& part) {
  if (p.size() != q.size() || p.size() != part.label.size())
    throw std::invalid_argument("check_faithful: size mismatch");
  FaithfulReport rep;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool good = true;
    switch (part.label[i]) {
      case Bucket::kHeavy:
        good = p[i] > part.b / 2.0 || q[i] > part.b / 2.0;
        if (!good) rep.heavy_ok = false;
        break;
      case Bucket::kMedium: {
        const double mx = std::max(p[i], q[i]);
        good = mx >= part.b_prime / 2.0 && mx <= 2.0 * part.b;
        if (!good) rep.medium_ok = false;
        break;
      }
      case Bucket::kLight:
        good = p[i] < 2.0 * part.b_prime && q[i] < 2.0 * part.b_prime;
        if (!good) rep.light_ok = false;
        break;
    }
    if (!good && rep.first_bad_index < 0)
      rep.first_bad_index = static_cast<std::int64_t>(i);
  }
  return rep;
}

}  // namespace closetest

#endif  // CLOSETEST_STATISTICS_HPP_
