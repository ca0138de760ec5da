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

#ifndef CLOSETEST_MARKOV_HPP_
#define CLOSETEST_MARKOV_HPP_

// Sparse row-stochastic chains behind a next-node query oracle, a mixing-time
// tester built on the closeness tester, a doubling estimator, and exact
// small-chain oracles (stationary distribution, t-step rows, mixing time).
//
// The tester draws a shared batch of reference samples from the average
// t-step distribution (start uniform, walk t steps) and, per state, fresh
// samples from that state's t-step distribution; each (reference, state)
// pairing feeds one closeness test, and states are judged by majority over
// the run index.  All walk randomness is keyed by (seed, role, indices), so
// results are identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "closetest/distribution.hpp"
#include "closetest/parallel.hpp"
#include "closetest/tester.hpp"

namespace closetest {

class MarkovChain {
 public:
  // rows[x] holds (destination, probability), deduplicated and sorted.
  MarkovChain(std::int64_t n,
              std::vector<std::vector<std::pair<std::uint32_t, double>>> rows)
      : rows_(std::move(rows)) {
    if (n <= 0) throw std::invalid_argument("MarkovChain: n must be > 0");
    if (rows_.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("MarkovChain: row count != n");
    cdf_.resize(rows_.size());
    for (std::size_t x = 0; x < rows_.size(); ++x) {
      if (rows_[x].empty())
        throw std::invalid_argument("MarkovChain: state " + std::to_string(x) +
                                    " has no outgoing transitions");
      double sum = 0.0;
      cdf_[x].reserve(rows_[x].size());
      for (const auto& [dst, pr] : rows_[x]) {
        if (dst >= rows_.size())
          throw std::invalid_argument("MarkovChain: destination out of range");
        if (!(pr > 0.0) || !std::isfinite(pr))
          throw std::invalid_argument(
              "MarkovChain: transition probabilities must be finite and > 0");
        sum += pr;
        cdf_[x].push_back(sum);
      }
      if (std::fabs(sum - 1.0) > kProbabilitySumTolerance)
        throw std::invalid_argument("MarkovChain: row " + std::to_string(x) +
                                    " sums to " + std::to_string(sum));
      cdf_[x].back() = 1.0;
    }
  }

  std::int64_t size() const { return static_cast<std::int64_t>(rows_.size()); }

  // One next-node oracle query.
  std::uint32_t next_node(std::uint32_t x, RandomStream& rng) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    const auto& cdf = cdf_[x];
    const double u = rng.uniform();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cdf[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return rows_[x][lo].first;
  }

  std::uint32_t walk(std::uint32_t start, std::int64_t steps,
                     RandomStream& rng) const {
    std::uint32_t s = start;
    for (std::int64_t i = 0; i < steps; ++i) s = next_node(s, rng);
    return s;
  }

  std::uint64_t query_count() const {
    return queries_.load(std::memory_order_relaxed);
  }
  void reset_query_count() const {
    queries_.store(0, std::memory_order_relaxed);
  }

  const std::vector<std::pair<std::uint32_t, double>>& row(
      std::uint32_t x) const {
    return rows_[x];
  }

 private:
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows_;
  std::vector<std::vector<double>> cdf_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

// ---------------------------------------------------------------------------
// Generators and file loading.

// Lazy cycle: stay with probability `laziness`, else step to a uniform
// neighbour.
inline MarkovChain make_cycle_chain(std::int64_t n, double laziness) {
  if (n <= 0) throw std::invalid_argument("make_cycle_chain: n must be > 0");
  if (laziness < 0.0 || laziness >= 1.0)
    throw std::invalid_argument("make_cycle_chain: laziness must be in [0,1)");
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(
      static_cast<std::size_t>(n));
  if (n == 1) {
    rows[0] = {{0, 1.0}};
    return MarkovChain(n, rows);
  }
  const double move = (1.0 - laziness) / 2.0;
  for (std::int64_t x = 0; x < n; ++x) {
    const auto left = static_cast<std::uint32_t>((x + n - 1) % n);
    const auto right = static_cast<std::uint32_t>((x + 1) % n);
    std::map<std::uint32_t, double> row;
    if (laziness > 0.0) row[static_cast<std::uint32_t>(x)] += laziness;
    row[left] += move;
    row[right] += move;
    rows[static_cast<std::size_t>(x)].assign(row.begin(), row.end());
  }
  return MarkovChain(n, rows);
}

// Two k-cliques (uniform over own clique, self included) whose facing
// endpoints swap sides with probability bridge_prob.
inline MarkovChain make_two_clique_chain(std::int64_t k, double bridge_prob) {
  if (k < 2) throw std::invalid_argument("make_two_clique_chain: k must be >= 2");
  if (!(bridge_prob > 0.0) || bridge_prob >= 1.0)
    throw std::invalid_argument(
        "make_two_clique_chain: bridge_prob must be in (0,1)");
  const std::int64_t n = 2 * k;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(
      static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < n; ++x) {
    const bool first = x < k;
    const std::int64_t base = first ? 0 : k;
    const bool bridge_end = (first && x == k - 1) || (!first && x == k);
    const double inside = bridge_end ? (1.0 - bridge_prob) / k : 1.0 / k;
    auto& row = rows[static_cast<std::size_t>(x)];
    for (std::int64_t d = 0; d < k; ++d)
      row.emplace_back(static_cast<std::uint32_t>(base + d), inside);
    if (bridge_end) {
      const auto other = static_cast<std::uint32_t>(first ? k : k - 1);
      row.emplace_back(other, bridge_prob);
      std::sort(row.begin(), row.end());
    }
  }
  return MarkovChain(n, rows);
}

inline MarkovChain make_complete_chain(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("make_complete_chain: n must be > 0");
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(
      static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < n; ++x) {
    auto& row = rows[static_cast<std::size_t>(x)];
    for (std::int64_t d = 0; d < n; ++d)
      row.emplace_back(static_cast<std::uint32_t>(d), 1.0 / n);
  }
  return MarkovChain(n, rows);
}

// TSV lines "src<TAB>dst<TAB>prob", 1-based state ids; duplicate (src,dst)
// entries sum.  Blank lines and '#' comments are skipped.
inline MarkovChain load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_chain_file: cannot open " + path);
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> entries;
  std::int64_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream row(line);
    long long src = 0, dst = 0;
    double pr = 0;
    if (!(row >> src >> dst >> pr))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'src dst prob'");
    if (src < 1 || dst < 1)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": state ids are 1-based");
    entries[{static_cast<std::uint32_t>(src - 1),
             static_cast<std::uint32_t>(dst - 1)}] += pr;
    n = std::max(n, static_cast<std::int64_t>(std::max(src, dst)));
  }
  if (n == 0) throw std::runtime_error("load_chain_file: no transitions in " + path);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(
      static_cast<std::size_t>(n));
  for (const auto& [key, pr] : entries)
    rows[key.first].emplace_back(key.second, pr);
  return MarkovChain(n, rows);
}

// Shorthand: cycle:<n>:<laziness> | cliques:<k>:<bridge_prob> | complete:<n>,
// else a path to a chain file.
inline MarkovChain parse_chain_spec(const std::string& spec) {
  const auto parts = detail::split(spec, ':');
  const std::string& kind = parts.empty() ? spec : parts[0];
  if (kind == "cycle") {
    if (parts.size() != 3)
      throw std::invalid_argument("spec: cycle:<n>:<laziness>");
    return make_cycle_chain(detail::parse_int(parts[1], "n"),
                            detail::parse_real(parts[2], "laziness"));
  }
  if (kind == "cliques") {
    if (parts.size() != 3)
      throw std::invalid_argument("spec: cliques:<k>:<bridge_prob>");
    return make_two_clique_chain(detail::parse_int(parts[1], "k"),
                                 detail::parse_real(parts[2], "bridge_prob"));
  }
  if (kind == "complete") {
    if (parts.size() != 2)
      throw std::invalid_argument("spec: complete:<n>");
    return make_complete_chain(detail::parse_int(parts[1], "n"));
  }
  return load_chain_file(spec);
}

// ---------------------------------------------------------------------------
// Exact oracles (dense; intended for chains of a few hundred states).

inline std::vector<double> step_distribution(const MarkovChain& chain,
                                             const std::vector<double>& in) {
  std::vector<double> out(in.size(), 0.0);
  for (std::uint32_t x = 0; x < in.size(); ++x) {
    const double mass = in[x];
    if (mass == 0.0) continue;
    for (const auto& [dst, pr] : chain.row(x)) out[dst] += mass * pr;
  }
  return out;
}

inline double tv_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return acc / 2.0;
}

// Exact row e_x P^t.
inline std::vector<double> exact_t_step_row(const MarkovChain& chain,
                                            std::uint32_t x, std::int64_t t) {
  std::vector<double> v(static_cast<std::size_t>(chain.size()), 0.0);
  v[x] = 1.0;
  for (std::int64_t i = 0; i < t; ++i) v = step_distribution(chain, v);
  return v;
}

inline std::vector<double> exact_average_t_step(const MarkovChain& chain,
                                                std::int64_t t) {
  const auto n = static_cast<std::size_t>(chain.size());
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  for (std::int64_t i = 0; i < t; ++i) v = step_distribution(chain, v);
  return v;
}

// Power iteration from uniform until successive iterates differ by <= tol in
// L1.  Periodic chains never settle and hit the iteration cap instead.
inline std::vector<double> stationary_distribution(const MarkovChain& chain,
                                                   double tol = 1e-12,
                                                   std::int64_t max_iter =
                                                       2000000) {
  const auto n = static_cast<std::size_t>(chain.size());
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  for (std::int64_t it = 0; it < max_iter; ++it) {
    std::vector<double> next = step_distribution(chain, v);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::fabs(next[i] - v[i]);
    v = std::move(next);
    if (diff <= tol) return v;
  }
  throw std::runtime_error(
      "stationary_distribution: no convergence (periodic or slowly mixing "
      "chain?)");
}

// Smallest t with sup_x TV(P^t_x, pi) <= delta, by stepping all rows at once.
inline std::int64_t exact_mixing_time(const MarkovChain& chain, double delta,
                                      std::int64_t t_cap = 1 << 20) {
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("exact_mixing_time: delta must be in (0,1)");
  const auto n = static_cast<std::size_t>(chain.size());
  const std::vector<double> pi = stationary_distribution(chain);
  std::vector<std::vector<double>> rows(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    rows[x].assign(n, 0.0);
    rows[x][x] = 1.0;
  }
  for (std::int64_t t = 1; t <= t_cap; ++t) {
    double worst = 0.0;
    for (std::uint32_t x = 0; x < n; ++x) {
      rows[x] = step_distribution(chain, rows[x]);
      worst = std::max(worst, tv_distance(rows[x], pi));
    }
    if (worst <= delta) return t;
  }
  throw std::runtime_error("exact_mixing_time: cap exceeded");
}

// ---------------------------------------------------------------------------
// Sampled counts from walk endpoints.

inline constexpr std::uint64_t kMixRefTag = 0x524546ULL;     // reference walks
inline constexpr std::uint64_t kMixStateTag = 0x535441ULL;   // per-state walks
inline constexpr std::uint64_t kMixCalibTag = 0x43414cULL;   // inner calibration
inline constexpr std::uint64_t kMixEstimateTag = 0x455354ULL;

// Pois(m) walk endpoints; start < 0 means a fresh uniform start per walk.
inline CountVector sample_walk_counts(const MarkovChain& chain,
                                      std::int64_t start, std::int64_t t,
                                      double m, RandomStream& rng) {
  if (t < 0)
    throw std::invalid_argument("sample_walk_counts: t must be >= 0");
  CountVector out;
  out.nominal_size = m;
  out.counts.assign(static_cast<std::size_t>(chain.size()), 0);
  const std::int64_t walks = rng.poisson(m);
  const auto n = static_cast<std::uint64_t>(chain.size());
  for (std::int64_t w = 0; w < walks; ++w) {
    const std::uint32_t s0 =
        start >= 0 ? static_cast<std::uint32_t>(start)
                   : static_cast<std::uint32_t>(rng.below(n));
    ++out.counts[chain.walk(s0, t, rng)];
  }
  out.actual_total = walks;
  return out;
}

// Pois(m) endpoints of t-step walks from uniformly random starts.
inline CountVector sample_avg_t_step(const MarkovChain& chain, std::int64_t t,
                                     double m, RandomStream& rng) {
  return sample_walk_counts(chain, -1, t, m, rng);
}

// Pois(m) endpoints of t-step walks from a fixed start state.
inline CountVector sample_t_step_from(const MarkovChain& chain,
                                      std::uint32_t start, std::int64_t t,
                                      double m, RandomStream& rng) {
  if (static_cast<std::int64_t>(start) >= chain.size())
    throw std::invalid_argument("sample_t_step_from: start out of range");
  return sample_walk_counts(chain, static_cast<std::int64_t>(start), t, m, rng);
}

// ---------------------------------------------------------------------------
// Mixing tester and estimator.

struct MixingConfig {
  double c1_scale = 1.0;     // reference sample sizes Pois(c1_scale * n)
  double state_scale = 1.0;  // per-state sizes Pois(state_scale * eps^-2 sqrt n)
  double kappa = 1.0;
  double alpha = 1.0 / 6.0;        // inner calibration level
  std::int64_t calib_trials = 200; // inner calibration trials
  std::optional<double> c_gamma;   // preset inner constants (skip calibration)
  std::optional<double> c_one;
  Regime regime = Regime::kAuto;
  std::uint64_t seed = 0;
  std::int64_t t0_cap = std::int64_t{1} << 20;
  int threads = 1;
};

struct MixDecision {
  Verdict verdict = Verdict::kAccept;
  std::int64_t t0 = 0;
  std::int64_t m1 = 0;            // reference sample nominal size
  std::int64_t m2 = 0;            // per-state sample nominal size
  std::int64_t runs_per_state = 0;
  std::int64_t rejected_states = 0;
  std::int64_t worst_state = -1;  // state with most rejecting runs
  std::int64_t worst_rejects = 0;
  std::uint64_t queries = 0;      // next-node queries consumed by this call
  std::uint64_t walks = 0;        // total walks taken (queries == walks * t0)
  double inner_c_gamma = 0;
  double inner_c_one = 0;
};

namespace detail {

inline std::int64_t mixing_runs(std::int64_t n) {
  return static_cast<std::int64_t>(
      std::ceil(3.0 * std::log(static_cast<double>(std::max<std::int64_t>(n, 3)))));
}

struct InnerSetup {
  TestConfig cfg;
  std::int64_t runs = 0;
};

inline InnerSetup make_inner_setup(const MarkovChain& chain, double eps,
                                   const MixingConfig& mix) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("mixing test: eps must be in (0,1]");
  InnerSetup s;
  const auto n = chain.size();
  s.runs = mixing_runs(n);
  s.cfg.n = n;
  s.cfg.eps = eps;
  s.cfg.m1 = static_cast<std::int64_t>(
      std::ceil(mix.c1_scale * static_cast<double>(n)));
  s.cfg.m2 = static_cast<std::int64_t>(
      std::ceil(mix.state_scale * std::sqrt(static_cast<double>(n)) /
                (eps * eps)));
  s.cfg.kappa = mix.kappa;
  s.cfg.regime = mix.regime;
  s.cfg.fidelity_warnings = false;
  if (mix.c_gamma && mix.c_one) {
    s.cfg.c_gamma = *mix.c_gamma;
    s.cfg.c_one = *mix.c_one;
  } else {
    const CalibrationResult cal = calibrate_constants(
        s.cfg.n, eps, s.cfg.m1, s.cfg.m2, mix.kappa, mix.calib_trials,
        mix.alpha, derive_seed(mix.seed, {kMixCalibTag}), mix.threads);
    s.cfg.c_gamma = cal.c_gamma;
    s.cfg.c_one = cal.c_one;
  }
  return s;
}

}  // namespace detail

// Closeness-tests every state's t0-step distribution against the average
// t0-step distribution.  `salt` keys this call's walk randomness (the
// estimator varies it per attempt).
inline MixDecision test_mixing_at(const MarkovChain& chain, std::int64_t t0,
                                  double eps, const MixingConfig& mix,
                                  std::uint64_t salt = 0) {
  if (t0 < 1) throw std::invalid_argument("test_mixing_at: t0 must be >= 1");
  if (chain.size() == 1) {
    // A single state equals its own average distribution; nothing to sample.
    MixDecision d;
    d.verdict = Verdict::kAccept;
    d.t0 = t0;
    return d;
  }
  const detail::InnerSetup setup = detail::make_inner_setup(chain, eps, mix);
  const auto n = chain.size();
  const std::int64_t runs = setup.runs;

  MixDecision d;
  d.t0 = t0;
  d.m1 = setup.cfg.m1;
  d.m2 = setup.cfg.m2;
  d.runs_per_state = runs;
  d.inner_c_gamma = setup.cfg.c_gamma;
  d.inner_c_one = setup.cfg.c_one;

  const std::uint64_t queries_before = chain.query_count();
  std::uint64_t walks = 0;

  // Shared reference halves, one pair per run index.
  std::vector<std::pair<CountVector, CountVector>> refs;
  refs.reserve(static_cast<std::size_t>(runs));
  const double m1d = static_cast<double>(setup.cfg.m1);
  for (std::int64_t i = 0; i < runs; ++i) {
    RandomStream rng = RandomStream::substream(
        mix.seed,
        {kMixRefTag, salt, static_cast<std::uint64_t>(t0),
         static_cast<std::uint64_t>(i)});
    CountVector h1 = sample_walk_counts(chain, -1, t0, m1d, rng);
    CountVector h2 = sample_walk_counts(chain, -1, t0, m1d, rng);
    walks += static_cast<std::uint64_t>(h1.actual_total + h2.actual_total);
    refs.emplace_back(std::move(h1), std::move(h2));
  }

  // Per-state majority over the run index.
  std::vector<std::int64_t> rejects(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> state_walks(static_cast<std::size_t>(n), 0);
  const double m2d = static_cast<double>(setup.cfg.m2);
  parallel_for(n, mix.threads, [&](std::int64_t x) {
    std::int64_t bad = 0;
    std::uint64_t w = 0;
    for (std::int64_t i = 0; i < runs; ++i) {
      RandomStream rng = RandomStream::substream(
          mix.seed,
          {kMixStateTag, salt, static_cast<std::uint64_t>(t0),
           static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(i)});
      const CountVector t1 = sample_walk_counts(chain, x, t0, m2d, rng);
      const CountVector t2 = sample_walk_counts(chain, x, t0, m2d, rng);
      w += static_cast<std::uint64_t>(t1.actual_total + t2.actual_total);
      const Decision inner = run_test(refs[static_cast<std::size_t>(i)].first,
                                      refs[static_cast<std::size_t>(i)].second,
                                      t1, t2, setup.cfg);
      if (inner.verdict == Verdict::kReject) ++bad;
    }
    rejects[static_cast<std::size_t>(x)] = bad;
    state_walks[static_cast<std::size_t>(x)] = w;
  });

  for (std::int64_t x = 0; x < n; ++x) {
    const std::int64_t bad = rejects[static_cast<std::size_t>(x)];
    walks += state_walks[static_cast<std::size_t>(x)];
    if (bad > d.worst_rejects) {
      d.worst_rejects = bad;
      d.worst_state = x;
    }
    if (2 * bad > runs) ++d.rejected_states;  // strict majority rejects
  }
  d.verdict =
      d.rejected_states == 0 ? Verdict::kAccept : Verdict::kReject;
  d.walks = walks;
  d.queries = chain.query_count() - queries_before;
  return d;
}

struct MixingEstimate {
  std::int64_t t_estimate = 0;
  std::uint64_t queries = 0;  // total next-node queries across all attempts
  std::int64_t exact_reference = -1;  // optional: filled by callers
  struct Attempt {
    std::int64_t t0 = 0;
    std::int64_t repeats = 0;
    std::int64_t accepts = 0;
    bool accepted = false;
  };
  std::vector<Attempt> attempts;
};

// Repeat count per t0: odd, grows ~ (log2 n + log2 t0) / 24, so desk-scale
// runs use one repeat and very long doublings get extra confirmation.
inline std::int64_t estimate_repeats(std::int64_t n, std::int64_t t0) {
  const double bits = std::log2(static_cast<double>(std::max<std::int64_t>(n, 2))) +
                      std::log2(static_cast<double>(t0 + 1));
  return 1 + 2 * static_cast<std::int64_t>(std::floor(bits / 24.0));
}

// Doubles t0 until the mixing test accepts (majority over repeats).  Inner
// constants are calibrated once and reused across attempts.
inline MixingEstimate estimate_mixing_time(const MarkovChain& chain, double eps,
                                           const MixingConfig& mix) {
  MixingConfig fixed = mix;
  if (!(fixed.c_gamma && fixed.c_one)) {
    const detail::InnerSetup setup = detail::make_inner_setup(chain, eps, mix);
    fixed.c_gamma = setup.cfg.c_gamma;
    fixed.c_one = setup.cfg.c_one;
  }
  MixingEstimate est;
  const std::uint64_t start_queries = chain.query_count();
  for (std::int64_t t0 = 1; t0 <= fixed.t0_cap; t0 *= 2) {
    const std::int64_t reps = estimate_repeats(chain.size(), t0);
    MixingEstimate::Attempt attempt;
    attempt.t0 = t0;
    attempt.repeats = reps;
    for (std::int64_t r = 0; r < reps; ++r) {
      const MixDecision d = test_mixing_at(
          chain, t0, eps, fixed,
          derive_seed(fixed.seed, {kMixEstimateTag,
                                   static_cast<std::uint64_t>(r)}));
      if (d.verdict == Verdict::kAccept) ++attempt.accepts;
    }
    attempt.accepted = 2 * attempt.accepts > reps;
    est.attempts.push_back(attempt);
    if (attempt.accepted) {
      est.t_estimate = t0;
      est.queries = chain.query_count() - start_queries;
      return est;
    }
  }
  throw std::runtime_error(
      "estimate_mixing_time: no acceptance up to the t0 cap (chain mixes too "
      "slowly for the configured budget)");
}

}  // namespace closetest

#endif  // CLOSETEST_MARKOV_HPP_
