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

#ifndef CLOSETEST_EXPERIMENTS_HPP_
#define CLOSETEST_EXPERIMENTS_HPP_

// Batch experiments: the (m1, m2) success-rate grid comparing the normalized
// collision statistic against the empirical-TV baseline, bigram-conditional
// word similarity curves, and a sample-size sweep on the hard two-block
// instance.  All of them use fixed-size draws where a real dataset would, and
// per-trial substreams so results are reproducible for any thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "closetest/distribution.hpp"
#include "closetest/moments.hpp"
#include "closetest/parallel.hpp"
#include "closetest/statistics.hpp"
#include "closetest/tester.hpp"

namespace closetest {

inline constexpr std::uint64_t kGridTag = 0x47524944ULL;
inline constexpr std::uint64_t kWordTag = 0x574f5244ULL;
inline constexpr std::uint64_t kSweepTag = 0x53574550ULL;
inline constexpr std::uint64_t kSweepCalTag = 0x53574341ULL;

// ---------------------------------------------------------------------------
// Success-rate grid.
//
// A trial draws three fixed-size samples: S of size m1 from p, S' of size m2
// from p, and T of size m2 from q.  A statistic succeeds when it ranks the
// same-distribution pair below the cross pair, stat(S, S') < stat(S, T); both
// comparisons share S, which is what a practitioner holding one reference
// sample would do.  Ties count as failures.

struct GridConfig {
  std::vector<std::int64_t> m1_values;
  std::vector<std::int64_t> m2_values;
  std::int64_t trials = 120;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct GridCell {
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  double z_success = 0;   // normalized collision statistic
  double tv_success = 0;  // empirical total variation
  std::int64_t trials = 0;
};

inline std::vector<GridCell> grid_experiment(const ProbabilityVector& p,
                                             const ProbabilityVector& q,
                                             const GridConfig& cfg) {
  if (p.size() != q.size())
    throw std::invalid_argument("grid_experiment: p and q sizes differ");
  if (cfg.trials < 1)
    throw std::invalid_argument("grid_experiment: trials must be >= 1");
  if (cfg.m1_values.empty() || cfg.m2_values.empty())
    throw std::invalid_argument("grid_experiment: empty m1/m2 grid");

  std::vector<GridCell> out;
  for (std::int64_t m1 : cfg.m1_values) {
    for (std::int64_t m2 : cfg.m2_values) {
      if (m1 < 1 || m2 < 1)
        throw std::invalid_argument("grid_experiment: sizes must be >= 1");
      GridCell cell;
      cell.m1 = m1;
      cell.m2 = m2;
      cell.trials = cfg.trials;
      std::vector<std::uint8_t> z_ok(static_cast<std::size_t>(cfg.trials));
      std::vector<std::uint8_t> tv_ok(static_cast<std::size_t>(cfg.trials));
      parallel_for(cfg.trials, cfg.threads, [&](std::int64_t t) {
        RandomStream rng = RandomStream::substream(
            cfg.seed, {kGridTag, static_cast<std::uint64_t>(m1),
                       static_cast<std::uint64_t>(m2),
                       static_cast<std::uint64_t>(t)});
        const CountVector s = sample_counts(p, static_cast<double>(m1),
                                            Sampling::kFixed, rng);
        const CountVector same = sample_counts(p, static_cast<double>(m2),
                                               Sampling::kFixed, rng);
        const CountVector cross = sample_counts(q, static_cast<double>(m2),
                                                Sampling::kFixed, rng);
        const auto ti = static_cast<std::size_t>(t);
        z_ok[ti] = stat_z_normalized(s, same) < stat_z_normalized(s, cross);
        tv_ok[ti] = empirical_tv(s, same) < empirical_tv(s, cross);
      });
      std::int64_t zc = 0, tc = 0;
      for (std::size_t i = 0; i < z_ok.size(); ++i) {
        zc += z_ok[i];
        tc += tv_ok[i];
      }
      cell.z_success = static_cast<double>(zc) / static_cast<double>(cfg.trials);
      cell.tv_success = static_cast<double>(tc) / static_cast<double>(cfg.trials);
      out.push_back(cell);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bigram table: head -> follower counts, loaded from a TSV corpus summary.

namespace detail {

inline int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

class BigramTable {
 public:
  // TSV lines "head<TAB>follower<TAB>count"; duplicate (head, follower) rows
  // sum; '#' comments and blank lines are skipped.
  static BigramTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("BigramTable: cannot open " + path);
    BigramTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream row(line);
      std::string head, follower;
      long long count = 0;
      if (!(std::getline(row, head, '\t') &&
            std::getline(row, follower, '\t') && (row >> count)))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected 'head<TAB>follower<TAB>count'");
      if (head.empty() || follower.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": empty head or follower");
      if (count <= 0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": count must be a positive integer");
      table.counts_[head][follower] += count;
      table.totals_[head] += count;
    }
    return table;
  }

  std::vector<std::string> heads() const {
    std::vector<std::string> out;
    out.reserve(counts_.size());
    for (const auto& [head, _] : counts_) out.push_back(head);
    return out;
  }

  bool contains(const std::string& head) const {
    return counts_.count(head) != 0;
  }

  std::int64_t head_total(const std::string& head) const {
    const auto it = totals_.find(head);
    return it == totals_.end() ? 0 : it->second;
  }

  std::int64_t total_bigrams() const {
    std::int64_t acc = 0;
    for (const auto& [_, t] : totals_) acc += t;
    return acc;
  }

  // Conditional follower distributions for two heads over the sorted union of
  // their follower vocabularies.
  struct PairDistributions {
    std::vector<std::string> vocab;
    ProbabilityVector p;
    ProbabilityVector q;
  };

  PairDistributions pair_distributions(const std::string& a,
                                       const std::string& b) const {
    require_head(a);
    require_head(b);
    const auto& fa = counts_.at(a);
    const auto& fb = counts_.at(b);
    std::set<std::string> vocab;
    for (const auto& [w, _] : fa) vocab.insert(w);
    for (const auto& [w, _] : fb) vocab.insert(w);
    std::vector<std::string> words(vocab.begin(), vocab.end());
    std::vector<double> pa, pb;
    pa.reserve(words.size());
    pb.reserve(words.size());
    const double ta = static_cast<double>(totals_.at(a));
    const double tb = static_cast<double>(totals_.at(b));
    for (const auto& w : words) {
      const auto ia = fa.find(w);
      const auto ib = fb.find(w);
      pa.push_back(ia == fa.end() ? 0.0 : static_cast<double>(ia->second) / ta);
      pb.push_back(ib == fb.end() ? 0.0 : static_cast<double>(ib->second) / tb);
    }
    return PairDistributions{std::move(words), ProbabilityVector(std::move(pa)),
                             ProbabilityVector(std::move(pb))};
  }

  // Throws with the closest known heads, so typos are easy to spot.
  void require_head(const std::string& head) const {
    if (contains(head)) return;
    std::vector<std::pair<int, std::string>> ranked;
    for (const auto& [h, _] : counts_)
      ranked.emplace_back(detail::levenshtein(head, h), h);
    std::sort(ranked.begin(), ranked.end());
    std::string msg = "unknown head '" + head + "'";
    if (!ranked.empty()) {
      msg += "; nearest:";
      for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
        msg += " " + ranked[i].second;
    }
    throw std::invalid_argument(msg);
  }

 private:
  std::map<std::string, std::map<std::string, std::int64_t>> counts_;
  std::map<std::string, std::int64_t> totals_;
};

// ---------------------------------------------------------------------------
// Word similarity: normalized collision statistic and empirical TV between
// conditional follower distributions, as a function of the smaller sample.

struct WordSimConfig {
  std::int64_t m1 = 1000;
  std::vector<std::int64_t> m2_values;
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct WordSimRow {
  std::string word_a;
  std::string word_b;
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  double mean_z = 0;
  double std_z = 0;
  double mean_tv = 0;
  double std_tv = 0;
  std::int64_t trials = 0;
};

inline std::vector<WordSimRow> word_similarity(
    const BigramTable& table,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const WordSimConfig& cfg) {
  if (cfg.trials < 2)
    throw std::invalid_argument("word_similarity: trials must be >= 2");
  if (cfg.m1 < 1)
    throw std::invalid_argument("word_similarity: m1 must be >= 1");
  if (cfg.m2_values.empty())
    throw std::invalid_argument("word_similarity: no m2 values");
  if (pairs.empty())
    throw std::invalid_argument("word_similarity: no word pairs");

  std::vector<WordSimRow> out;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const auto& [wa, wb] = pairs[pi];
    const BigramTable::PairDistributions dist =
        table.pair_distributions(wa, wb);
    for (std::int64_t m2 : cfg.m2_values) {
      if (m2 < 1)
        throw std::invalid_argument("word_similarity: m2 must be >= 1");
      std::vector<double> zs(static_cast<std::size_t>(cfg.trials));
      std::vector<double> tvs(static_cast<std::size_t>(cfg.trials));
      parallel_for(cfg.trials, cfg.threads, [&](std::int64_t t) {
        RandomStream rng = RandomStream::substream(
            cfg.seed, {kWordTag, static_cast<std::uint64_t>(pi),
                       static_cast<std::uint64_t>(m2),
                       static_cast<std::uint64_t>(t)});
        const CountVector x = sample_counts(
            dist.p, static_cast<double>(cfg.m1), Sampling::kFixed, rng);
        const CountVector y = sample_counts(dist.q, static_cast<double>(m2),
                                            Sampling::kFixed, rng);
        const auto ti = static_cast<std::size_t>(t);
        zs[ti] = stat_z_normalized(x, y);
        tvs[ti] = empirical_tv(x, y);
      });
      const MonteCarloSummary sz = summarize_values(zs);
      const MonteCarloSummary stv = summarize_values(tvs);
      WordSimRow row;
      row.word_a = wa;
      row.word_b = wb;
      row.m1 = cfg.m1;
      row.m2 = m2;
      row.mean_z = sz.mean;
      row.std_z = std::sqrt(sz.variance);
      row.mean_tv = stv.mean;
      row.std_tv = std::sqrt(stv.variance);
      row.trials = cfg.trials;
      out.push_back(row);
    }
  }
  return out;
}

inline std::vector<WordSimRow> word_similarity_curve(const BigramTable& table,
                                                     const std::string& word_a,
                                                     const std::string& word_b,
                                                     const WordSimConfig& cfg) {
  return word_similarity(table, {{word_a, word_b}}, cfg);
}

// ---------------------------------------------------------------------------
// Lower-bound sweep: reject rate on the hard two-block instance as the
// q-side budget shrinks below the planned size.

struct SweepConfig {
  std::int64_t n = 2000;
  std::int64_t m1 = 2000;
  double instance_eps = 1.0;  // light-block perturbation of the instance
  double planner_c = 4.0;     // scale for the planned m2 baseline
  std::vector<double> fractions = {0.1, 0.25, 0.5, 1.0};
  std::int64_t trials = 200;
  double kappa = 1.0;
  double alpha = 1.0 / 6.0;
  std::int64_t calib_trials = 200;
  Regime regime = Regime::kNonextreme;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SweepRow {
  double fraction = 0;
  std::int64_t m2 = 0;
  std::int64_t planned_m2 = 0;
  double reject_rate = 0;
  std::int64_t trials = 0;
};

struct SweepResult {
  double tester_eps = 0;  // exact separation of the instance
  std::int64_t planned_m2 = 0;
  std::vector<SweepRow> rows;
};

inline SweepResult lower_bound_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1)
    throw std::invalid_argument("lower_bound_sweep: trials must be >= 1");
  if (cfg.fractions.empty())
    throw std::invalid_argument("lower_bound_sweep: no fractions");
  const LowerBoundInstance inst =
      make_lower_bound_pair(cfg.n, cfg.m1, cfg.instance_eps);

  SweepResult out;
  out.tester_eps = inst.separation;
  out.planned_m2 = plan_sample_sizes(cfg.n, out.tester_eps, cfg.m1,
                                     cfg.planner_c, /*allow_small_m1=*/true);

  for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
    const double f = cfg.fractions[fi];
    if (!(f > 0.0))
      throw std::invalid_argument("lower_bound_sweep: fractions must be > 0");
    SweepRow row;
    row.fraction = f;
    row.planned_m2 = out.planned_m2;
    row.m2 = std::max<std::int64_t>(
        1, std::llround(f * static_cast<double>(out.planned_m2)));
    row.trials = cfg.trials;

    TestConfig tc;
    tc.n = cfg.n;
    tc.eps = out.tester_eps;
    tc.m1 = cfg.m1;
    tc.m2 = row.m2;
    tc.kappa = cfg.kappa;
    tc.fidelity_warnings = false;
    tc.seed = derive_seed(cfg.seed, {kSweepTag, static_cast<std::uint64_t>(fi)});
    const CalibrationResult cal = calibrate_constants(
        cfg.n, out.tester_eps, cfg.m1, row.m2, cfg.kappa, cfg.calib_trials,
        cfg.alpha,
        derive_seed(cfg.seed, {kSweepCalTag, static_cast<std::uint64_t>(fi)}),
        cfg.threads);
    tc.c_gamma = cal.c_gamma;
    tc.c_one = cal.c_one;

    // The instance pair is eps-far, so "correct" means reject.
    const TrialStats stats = run_trials(inst.p, inst.q, tc, cfg.trials,
                                        cfg.regime, cfg.threads);
    row.reject_rate = stats.success_rate;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace closetest

#endif  // CLOSETEST_EXPERIMENTS_HPP_
