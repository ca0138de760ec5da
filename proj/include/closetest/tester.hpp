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

#ifndef CLOSETEST_TESTER_HPP_
#define CLOSETEST_TESTER_HPP_

// The three closeness testers over unequal-size samples, the sample-size
// planner, null-quantile constant calibration, and a trial harness.
//
// A test consumes two half-samples from each side: (S1, S2) with nominal size
// m1 from p, (T1, T2) with nominal size m2 from q.  The first halves feed the
// heavy/medium/light partition only; every statistic (including the extreme
// regime's unbalanced-element scan) reads the second halves only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "closetest/distribution.hpp"
#include "closetest/parallel.hpp"
#include "closetest/statistics.hpp"

namespace closetest {

enum class Regime { kBasic, kNonextreme, kExtreme, kAuto };
enum class Verdict { kAccept, kReject };

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kBasic: return "basic";
    case Regime::kNonextreme: return "nonextreme";
    case Regime::kExtreme: return "extreme";
    case Regime::kAuto: return "auto";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "basic") return Regime::kBasic;
  if (s == "nonextreme") return Regime::kNonextreme;
  if (s == "extreme") return Regime::kExtreme;
  if (s == "auto") return Regime::kAuto;
  throw std::invalid_argument("unknown regime: " + s);
}

struct TestConfig {
  std::int64_t n = 0;
  double eps = 0;
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  double kappa = 1.0;
  double c_gamma = 1.0;
  double c_one = 1.0;
  double gamma = 0.0;  // informational regime exponent
  Regime regime = Regime::kAuto;
  std::uint64_t seed = 0;
  bool fidelity_warnings = true;

  PartitionParams partition_params() const {
    return PartitionParams{n, eps, static_cast<double>(m1),
                           static_cast<double>(m2), kappa};
  }

  // Extreme-regime unbalanced threshold: m1 eps^{2/3} / (10 m2 n^{1/3}).
  double lambda() const {
    return m1 * std::pow(eps, 2.0 / 3.0) /
           (10.0 * m2 * std::cbrt(static_cast<double>(n)));
  }
};

inline void validate_config(const TestConfig& c) {
  if (c.n <= 0) throw std::invalid_argument("config: n must be > 0");
  if (!(c.eps > 0.0) || c.eps > 1.0)
    throw std::invalid_argument("config: eps must be in (0,1]");
  if (c.m1 <= 0 || c.m2 <= 0)
    throw std::invalid_argument("config: m1, m2 must be > 0");
  if (!(c.kappa > 0.0)) throw std::invalid_argument("config: kappa must be > 0");
}

// Theoretical floor on m1 for the planner and fidelity warnings.
inline double m1_floor(std::int64_t n, double eps) {
  return std::pow(static_cast<double>(n), 2.0 / 3.0) /
         std::pow(eps, 4.0 / 3.0);
}

// m2 = ceil(c * max(n/(sqrt(m1) eps^2), sqrt(n)/eps^2)).
inline std::int64_t plan_sample_sizes(std::int64_t n, double eps,
                                      std::int64_t m1, double c = 1.0,
                                      bool allow_small_m1 = false) {
  if (n < 1) throw std::invalid_argument("plan_sample_sizes: n must be >= 1");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("plan_sample_sizes: eps must be in (0,1]");
  if (m1 < 1) throw std::invalid_argument("plan_sample_sizes: m1 must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("plan_sample_sizes: c must be > 0");
  if (!allow_small_m1 &&
      static_cast<double>(m1) < m1_floor(n, eps) - 1e-9) {
    throw std::invalid_argument(
        "plan_sample_sizes: m1 below n^{2/3}/eps^{4/3} floor (pass "
        "allow_small_m1 to override)");
  }
  const double nd = static_cast<double>(n);
  const double branch1 = nd / (std::sqrt(static_cast<double>(m1)) * eps * eps);
  const double branch2 = std::sqrt(nd) / (eps * eps);
  const double raw = c * std::max(branch1, branch2);
  return static_cast<std::int64_t>(std::ceil(raw - 1e-9));
}

// Which concrete tester `auto` resolves to: extreme when m1 clears the
// (n/eps^2)^{8/9} knee, else nonextreme.
inline Regime resolve_regime(const TestConfig& c) {
  if (c.regime != Regime::kAuto) return c.regime;
  const double knee =
      std::pow(static_cast<double>(c.n) / (c.eps * c.eps), 8.0 / 9.0);
  return static_cast<double>(c.m1) >= knee ? Regime::kExtreme
                                           : Regime::kNonextreme;
}

struct CheckRecord {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = true;
  bool applicable = false;
};

struct Decision {
  Verdict verdict = Verdict::kAccept;
  Regime regime = Regime::kNonextreme;  // concrete regime that ran
  std::vector<CheckRecord> checks;      // unbalanced, V_B, W_M, Z_H, R_H
  std::int64_t heavy_count = 0;
  std::int64_t medium_count = 0;
  std::int64_t light_count = 0;
  double b = 0;
  double b_prime = 0;
  std::vector<std::string> warnings;

  const CheckRecord& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
  }
};

namespace detail {

inline void append_fidelity_warnings(const TestConfig& cfg, Decision* d) {
  if (!cfg.fidelity_warnings) return;
  const double eps_floor =
      std::pow(static_cast<double>(cfg.n), -1.0 / 12.0);
  if (!(cfg.eps > eps_floor))
    d->warnings.push_back(
        "eps <= n^{-1/12}: below the guaranteed-accuracy floor");
  if (static_cast<double>(cfg.m1) < m1_floor(cfg.n, cfg.eps))
    d->warnings.push_back("m1 below n^{2/3}/eps^{4/3} floor");
}

// Ties (value == threshold) pass.
inline CheckRecord make_check(const std::string& name, double value,
                              double threshold, bool applicable) {
  CheckRecord c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.applicable = applicable;
  c.pass = !applicable || value <= threshold;
  return c;
}

inline void require_halves(const TestConfig& cfg, const CountVector& s1,
                           const CountVector& s2, const CountVector& t1,
                           const CountVector& t2) {
  const auto n = static_cast<std::size_t>(cfg.n);
  if (s1.counts.size() != n || s2.counts.size() != n ||
      t1.counts.size() != n || t2.counts.size() != n)
    throw std::invalid_argument("run_test: count length != n");
}

inline Decision run_test_impl(const CountVector& s1, const CountVector& s2,
                              const CountVector& t1, const CountVector& t2,
                              const TestConfig& cfg, Regime concrete) {
  validate_config(cfg);
  require_halves(cfg, s1, s2, t1, t2);

  Decision d;
  d.regime = concrete;
  append_fidelity_warnings(cfg, &d);

  const Partition part = partition_domain(s1, t1, cfg.partition_params());
  d.b = part.b;
  d.b_prime = part.b_prime;

  const double m1 = static_cast<double>(cfg.m1);
  const double m2 = static_cast<double>(cfg.m2);
  const double v_threshold = cfg.eps / 6.0;
  const double w_threshold = cfg.eps * cfg.eps * m1 * m1 * m2 *
                             std::log(static_cast<double>(cfg.n)) / 2.0;
  const double z_threshold = cfg.c_gamma * m1 * std::sqrt(m1) * m2;
  const double r_threshold = cfg.c_one * m2 * m2 / m1;

  const IndexSet heavy = indices_of(part, Bucket::kHeavy);

  if (concrete == Regime::kBasic) {
    // Single split: heavy set B and its complement.
    d.heavy_count = part.heavy_count;
    d.medium_count = 0;
    d.light_count = cfg.n - part.heavy_count;
    const IndexSet rest = complement_of(part, Bucket::kHeavy);
    d.checks.push_back(make_check("unbalanced", 0, 0, false));
    d.checks.push_back(
        make_check("V_B", stat_v(s2, t2, heavy), v_threshold, true));
    d.checks.push_back(make_check("W_M", 0, 0, false));
    d.checks.push_back(
        make_check("Z_H", stat_z(s2, t2, rest), z_threshold, true));
    d.checks.push_back(make_check("R_H", 0, 0, false));
  } else {
    d.heavy_count = part.heavy_count;
    d.medium_count = part.medium_count;
    d.light_count = part.light_count;
    const IndexSet medium = indices_of(part, Bucket::kMedium);
    const IndexSet light = indices_of(part, Bucket::kLight);

    const bool extreme = concrete == Regime::kExtreme;
    double trigger_count = 0;
    if (extreme) {
      const double lambda = cfg.lambda();
      for (std::size_t i = 0; i < t2.counts.size(); ++i)
        if (t2.counts[i] >= 3 &&
            static_cast<double>(s2.counts[i]) <= lambda)
          ++trigger_count;
    }
    d.checks.push_back(make_check("unbalanced", trigger_count, 0, extreme));
    d.checks.push_back(
        make_check("V_B", stat_v(s2, t2, heavy), v_threshold, true));
    d.checks.push_back(
        make_check("W_M", stat_w(s2, t2, medium), w_threshold, true));
    d.checks.push_back(
        make_check("Z_H", stat_z(s2, t2, light), z_threshold, true));
    d.checks.push_back(
        make_check("R_H", stat_r(s2, t2, light), r_threshold, extreme));
  }

  d.verdict = Verdict::kAccept;
  for (const auto& c : d.checks)
    if (c.applicable && !c.pass) d.verdict = Verdict::kReject;
  return d;
}

}  // namespace detail

inline Decision run_test_basic(const CountVector& s1, const CountVector& s2,
                               const CountVector& t1, const CountVector& t2,
                               const TestConfig& cfg) {
  return detail::run_test_impl(s1, s2, t1, t2, cfg, Regime::kBasic);
}

inline Decision run_test_nonextreme(const CountVector& s1,
                                    const CountVector& s2,
                                    const CountVector& t1,
                                    const CountVector& t2,
                                    const TestConfig& cfg) {
  return detail::run_test_impl(s1, s2, t1, t2, cfg, Regime::kNonextreme);
}

inline Decision run_test_extreme(const CountVector& s1, const CountVector& s2,
                                 const CountVector& t1, const CountVector& t2,
                                 const TestConfig& cfg) {
  return detail::run_test_impl(s1, s2, t1, t2, cfg, Regime::kExtreme);
}

inline Decision run_test(const CountVector& s1, const CountVector& s2,
                         const CountVector& t1, const CountVector& t2,
                         const TestConfig& cfg) {
  return detail::run_test_impl(s1, s2, t1, t2, cfg, resolve_regime(cfg));
}

// ---------------------------------------------------------------------------
// Calibration: empirical null quantiles of the normalized Z and R statistics.

struct CalibrationResult {
  double c_gamma = 0;
  double c_one = 0;
  double kappa_suggestion = 1.0;
  std::int64_t trials = 0;
};

inline constexpr std::uint64_t kCalibrationTag = 0x43414c49ULL;
inline constexpr std::uint64_t kTrialTag = 0x54524941ULL;

// Empirical quantile: smallest sorted value with at least level * N of the
// sample at or below it.
inline double empirical_quantile(std::vector<double> v, double level) {
  if (v.empty()) throw std::invalid_argument("empirical_quantile: empty");
  std::sort(v.begin(), v.end());
  const double rank = std::ceil(level * static_cast<double>(v.size()));
  std::size_t idx =
      rank < 1.0 ? 0 : static_cast<std::size_t>(rank - 1.0);
  if (idx >= v.size()) idx = v.size() - 1;
  return v[idx];
}

// Runs `trials` null simulations with p = q = uniform(n) and returns the
// (1-alpha) null quantiles of Z_H / (m1^{3/2} m2) and R_H / (m2^2/m1), plus a
// kappa that would put b' at twice the largest first-half empirical mass seen
// (useful when the default thresholds park every element in the light set).
inline CalibrationResult calibrate_constants(std::int64_t n, double eps,
                                             std::int64_t m1, std::int64_t m2,
                                             double kappa, std::int64_t trials,
                                             double alpha, std::uint64_t seed,
                                             int threads = 1) {
  if (trials < 100)
    throw std::invalid_argument("calibrate_constants: trials must be >= 100");
  if (!(alpha > 0.0) || alpha > 0.5)
    throw std::invalid_argument(
        "calibrate_constants: alpha must be in (0,0.5]");
  TestConfig probe;
  probe.n = n;
  probe.eps = eps;
  probe.m1 = m1;
  probe.m2 = m2;
  probe.kappa = kappa;
  validate_config(probe);

  const ProbabilityVector uniform = make_uniform(n);
  const double m1d = static_cast<double>(m1);
  const double m2d = static_cast<double>(m2);
  const double z_scale = m1d * std::sqrt(m1d) * m2d;
  const double r_scale = m2d * m2d / m1d;

  std::vector<double> zs(static_cast<std::size_t>(trials));
  std::vector<double> rs(static_cast<std::size_t>(trials));
  std::vector<double> max_ratio(static_cast<std::size_t>(trials), 0.0);
  const PartitionParams pp = probe.partition_params();

  parallel_for(trials, threads, [&](std::int64_t t) {
    RandomStream rng = RandomStream::substream(
        seed, {kCalibrationTag, static_cast<std::uint64_t>(t)});
    const CountVector s1 =
        sample_counts(uniform, m1d, Sampling::kPoissonized, rng);
    const CountVector s2 =
        sample_counts(uniform, m1d, Sampling::kPoissonized, rng);
    const CountVector t1 =
        sample_counts(uniform, m2d, Sampling::kPoissonized, rng);
    const CountVector t2 =
        sample_counts(uniform, m2d, Sampling::kPoissonized, rng);
    const Partition part = partition_domain(s1, t1, pp);
    const IndexSet light = indices_of(part, Bucket::kLight);
    const auto ti = static_cast<std::size_t>(t);
    zs[ti] = stat_z(s2, t2, light) / z_scale;
    rs[ti] = stat_r(s2, t2, light) / r_scale;
    double mr = 0.0;
    for (std::size_t i = 0; i < s1.counts.size(); ++i) {
      mr = std::max(mr, static_cast<double>(s1.counts[i]) / m1d);
      mr = std::max(mr, static_cast<double>(t1.counts[i]) / m2d);
    }
    max_ratio[ti] = mr;
  });

  CalibrationResult out;
  out.trials = trials;
  out.c_gamma = empirical_quantile(zs, 1.0 - alpha);
  out.c_one = empirical_quantile(rs, 1.0 - alpha);
  const double top = *std::max_element(max_ratio.begin(), max_ratio.end());
  const double logn = std::log(static_cast<double>(n));
  out.kappa_suggestion =
      (top > 0.0 && logn > 0.0) ? 2.0 * top * m2d / (256.0 * logn) : 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Trial harness.

struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t correct = 0;
  double success_rate = 0;
  std::vector<Verdict> verdicts;
};

// Poissonized draws per trial; trial t uses substream(cfg.seed, {kTrialTag,
// t}).  `tester` maps four half-samples to a Verdict, so harness-level tests
// can inject stubs.
template <typename TesterFn>
TrialStats run_trials_with(const ProbabilityVector& p,
                           const ProbabilityVector& q, const TestConfig& cfg,
                           std::int64_t trials, TesterFn tester,
                           int threads = 1) {
  if (trials < 1)
    throw std::invalid_argument("run_trials: trials must be >= 1");
  validate_config(cfg);
  const Verdict expected =
      l1_distance(p, q) <= 1e-12 ? Verdict::kAccept : Verdict::kReject;
  const double m1d = static_cast<double>(cfg.m1);
  const double m2d = static_cast<double>(cfg.m2);

  TrialStats out;
  out.trials = trials;
  out.verdicts.assign(static_cast<std::size_t>(trials), Verdict::kAccept);
  parallel_for(trials, threads, [&](std::int64_t t) {
    RandomStream rng = RandomStream::substream(
        cfg.seed, {kTrialTag, static_cast<std::uint64_t>(t)});
    const CountVector s1 = sample_counts(p, m1d, Sampling::kPoissonized, rng);
    const CountVector s2 = sample_counts(p, m1d, Sampling::kPoissonized, rng);
    const CountVector t1 = sample_counts(q, m2d, Sampling::kPoissonized, rng);
    const CountVector t2 = sample_counts(q, m2d, Sampling::kPoissonized, rng);
    out.verdicts[static_cast<std::size_t>(t)] = tester(s1, s2, t1, t2);
  });
  for (Verdict v : out.verdicts)
    if (v == expected) ++out.correct;
  out.success_rate =
      static_cast<double>(out.correct) / static_cast<double>(trials);
  return out;
}

inline TrialStats run_trials(const ProbabilityVector& p,
                             const ProbabilityVector& q, const TestConfig& cfg,
                             std::int64_t trials, Regime which,
                             int threads = 1) {
  TestConfig local = cfg;
  local.regime = which;
  return run_trials_with(
      p, q, local, trials,
      [&local](const CountVector& s1, const CountVector& s2,
               const CountVector& t1, const CountVector& t2) {
        return run_test(s1, s2, t1, t2, local).verdict;
      },
      threads);
}

}  // namespace closetest

#endif  // CLOSETEST_TESTER_HPP_
