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

#include "closetest/tester.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "closetest/distribution.hpp"
#include "doctest.h"

using namespace closetest;

namespace {

CountVector zeros(std::size_t n, double m) {
  return make_counts(std::vector<std::int64_t>(n, 0), m);
}

std::vector<std::string> check_names(const Decision& d) {
  std::vector<std::string> names;
  for (const auto& c : d.checks) names.push_back(c.name);
  return names;
}

std::vector<bool> applicable_flags(const Decision& d) {
  std::vector<bool> flags;
  for (const auto& c : d.checks) flags.push_back(c.applicable);
  return flags;
}

}  // namespace

TEST_CASE("config validation") {
  TestConfig cfg;
  cfg.n = 10;
  cfg.eps = 0.5;
  cfg.m1 = 4;
  cfg.m2 = 2;
  CHECK_NOTHROW(validate_config(cfg));
  TestConfig bad = cfg;
  bad.n = 0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.eps = 0.0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.eps = 1.5;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.m2 = 0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
  bad = cfg;
  bad.kappa = 0.0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
}

TEST_CASE("planner: frozen outputs") {
  CHECK(plan_sample_sizes(10000, 1.0, 10000) == 100);
  CHECK(plan_sample_sizes(5000, 0.25, 1857) == 1857);
  CHECK(plan_sample_sizes(5000, 0.25, 5000) == 1132);
  CHECK(plan_sample_sizes(5000, 0.25, 5000, 4.0) == 4526);
}

TEST_CASE("planner: m1 floor enforcement") {
  // n^{2/3}/eps^{4/3} at (5000, 0.25) is ~1856.64.
  CHECK(m1_floor(5000, 0.25) == doctest::Approx(1856.635533445111));
  CHECK_THROWS_AS(plan_sample_sizes(5000, 0.25, 1856), std::invalid_argument);
  CHECK_NOTHROW(plan_sample_sizes(5000, 0.25, 1856, 1.0, true));
  CHECK_THROWS_AS(plan_sample_sizes(0, 0.25, 100), std::invalid_argument);
  CHECK_THROWS_AS(plan_sample_sizes(100, 0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(plan_sample_sizes(100, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(plan_sample_sizes(100, 0.5, 100, 0.0), std::invalid_argument);
}

TEST_CASE("auto regime switches at the (n/eps^2)^{8/9} knee") {
  TestConfig cfg;
  cfg.n = 2000;
  cfg.eps = 0.5;
  cfg.m2 = 100;
  // knee ~ 2947.23
  cfg.m1 = 2947;
  CHECK(resolve_regime(cfg) == Regime::kNonextreme);
  cfg.m1 = 2948;
  CHECK(resolve_regime(cfg) == Regime::kExtreme);
  cfg.regime = Regime::kBasic;
  CHECK(resolve_regime(cfg) == Regime::kBasic);
  cfg.regime = Regime::kNonextreme;
  CHECK(resolve_regime(cfg) == Regime::kNonextreme);
}

TEST_CASE("regime names round-trip") {
  for (Regime r : {Regime::kBasic, Regime::kNonextreme, Regime::kExtreme,
                   Regime::kAuto})
    CHECK(parse_regime(regime_name(r)) == r);
  CHECK_THROWS_AS(parse_regime("bogus"), std::invalid_argument);
}

TEST_CASE("unbalanced-scan threshold formula") {
  TestConfig cfg;
  cfg.n = 2000;
  cfg.eps = 0.5;
  cfg.m1 = 16000;
  cfg.m2 = 500;
  // m1 eps^{2/3} / (10 m2 n^{1/3}).
  CHECK(cfg.lambda() == doctest::Approx(0.16));
}

TEST_CASE("check layout per regime") {
  TestConfig cfg;
  cfg.n = 20;
  cfg.eps = 0.5;
  cfg.m1 = 40;
  cfg.m2 = 20;
  const CountVector s = zeros(20, 40.0);
  const CountVector t = zeros(20, 20.0);
  const std::vector<std::string> names{"unbalanced", "V_B", "W_M", "Z_H",
                                       "R_H"};

  const Decision basic = run_test_basic(s, s, t, t, cfg);
  CHECK(basic.regime == Regime::kBasic);
  CHECK(check_names(basic) == names);
  CHECK(applicable_flags(basic) ==
        std::vector<bool>{false, true, false, true, false});

  const Decision nonex = run_test_nonextreme(s, s, t, t, cfg);
  CHECK(check_names(nonex) == names);
  CHECK(applicable_flags(nonex) ==
        std::vector<bool>{false, true, true, true, false});

  const Decision ext = run_test_extreme(s, s, t, t, cfg);
  CHECK(check_names(ext) == names);
  CHECK(applicable_flags(ext) ==
        std::vector<bool>{true, true, true, true, true});

  // All-zero second halves accept everywhere.
  CHECK(basic.verdict == Verdict::kAccept);
  CHECK(nonex.verdict == Verdict::kAccept);
  CHECK(ext.verdict == Verdict::kAccept);
  CHECK_NOTHROW(ext.check("Z_H"));
  CHECK_THROWS_AS(ext.check("nope"), std::out_of_range);
}

TEST_CASE("auto dispatch matches the resolved concrete tester") {
  TestConfig cfg;
  cfg.n = 2000;
  cfg.eps = 0.5;
  cfg.m1 = 2948;
  cfg.m2 = 100;
  cfg.fidelity_warnings = false;
  const CountVector s = zeros(2000, 2948.0);
  const CountVector t = zeros(2000, 100.0);
  CHECK(run_test(s, s, t, t, cfg).regime == Regime::kExtreme);
  cfg.m1 = 2947;
  const CountVector s2 = zeros(2000, 2947.0);
  CHECK(run_test(s2, s2, t, t, cfg).regime == Regime::kNonextreme);
}

TEST_CASE("threshold ties accept; just past the tie rejects") {
  // Huge kappa parks both elements in the light set, so Z_H is the worked
  // -8 example and the threshold is c_gamma * m1^{3/2} m2 = 16 c_gamma.
  TestConfig cfg;
  cfg.n = 2;
  cfg.eps = 1.0;
  cfg.m1 = 4;
  cfg.m2 = 2;
  cfg.kappa = 1e9;
  cfg.fidelity_warnings = false;
  const CountVector s1 = zeros(2, 4.0);
  const CountVector t1 = zeros(2, 2.0);
  const CountVector s2 = make_counts({2, 1}, 4.0);
  const CountVector t2 = make_counts({1, 0}, 2.0);

  cfg.c_gamma = -0.5;  // threshold exactly -8, tying the statistic
  const Decision tie = run_test_nonextreme(s1, s2, t1, t2, cfg);
  CHECK(tie.check("Z_H").value == doctest::Approx(-8.0));
  CHECK(tie.check("Z_H").threshold == doctest::Approx(-8.0));
  CHECK(tie.check("Z_H").pass);
  CHECK(tie.verdict == Verdict::kAccept);

  cfg.c_gamma = -0.51;  // threshold -8.16, now strictly below the statistic
  const Decision past = run_test_nonextreme(s1, s2, t1, t2, cfg);
  CHECK_FALSE(past.check("Z_H").pass);
  CHECK(past.verdict == Verdict::kReject);
}

TEST_CASE("unbalanced scan dominates every other check") {
  TestConfig cfg;
  cfg.n = 2;
  cfg.eps = 1.0;
  cfg.m1 = 4;
  cfg.m2 = 2;
  cfg.kappa = 1e9;       // everything light
  cfg.c_gamma = 1e18;    // other checks cannot fail
  cfg.c_one = 1e18;
  cfg.fidelity_warnings = false;
  const CountVector s1 = zeros(2, 4.0);
  const CountVector t1 = zeros(2, 2.0);
  const CountVector t2 = make_counts({3, 0}, 2.0);

  // Y = 3 against X = 0 <= lambda triggers no matter what else holds.
  const Decision hit =
      run_test_extreme(s1, make_counts({0, 5}, 4.0), t1, t2, cfg);
  CHECK(hit.check("unbalanced").applicable);
  CHECK(hit.check("unbalanced").value == doctest::Approx(1.0));
  CHECK_FALSE(hit.check("unbalanced").pass);
  CHECK(hit.verdict == Verdict::kReject);

  // X = 1 > lambda ~ 0.159 defuses the scan.
  const Decision miss =
      run_test_extreme(s1, make_counts({1, 5}, 4.0), t1, t2, cfg);
  CHECK(miss.check("unbalanced").value == 0.0);
  CHECK(miss.verdict == Verdict::kAccept);

  // Y = 2 is not enough to trigger.
  const Decision two = run_test_extreme(s1, make_counts({0, 5}, 4.0), t1,
                                        make_counts({2, 0}, 2.0), cfg);
  CHECK(two.check("unbalanced").value == 0.0);
  CHECK(two.verdict == Verdict::kAccept);

  // The nonextreme tester never runs the scan on the same data.
  const Decision nonex =
      run_test_nonextreme(s1, make_counts({0, 5}, 4.0), t1, t2, cfg);
  CHECK_FALSE(nonex.check("unbalanced").applicable);
  CHECK(nonex.verdict == Verdict::kAccept);
}

TEST_CASE("verdicts are monotone in the calibration constants") {
  TestConfig cfg;
  cfg.n = 100;
  cfg.eps = 0.5;
  cfg.m1 = 400;
  cfg.m2 = 40;
  cfg.fidelity_warnings = false;
  RandomStream rng(606);
  const ProbabilityVector u = make_uniform(100);
  const CountVector s1 = sample_counts(u, 400, Sampling::kPoissonized, rng);
  const CountVector s2 = sample_counts(u, 400, Sampling::kPoissonized, rng);
  const CountVector t1 = sample_counts(u, 40, Sampling::kPoissonized, rng);
  const CountVector t2 = sample_counts(u, 40, Sampling::kPoissonized, rng);

  bool accepted = false;
  for (double g : {-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 4.0}) {
    cfg.c_gamma = g;
    const bool accept =
        run_test_nonextreme(s1, s2, t1, t2, cfg).verdict == Verdict::kAccept;
    if (accepted) CHECK(accept);  // once passing, larger slack keeps passing
    accepted = accepted || accept;
  }

  cfg.c_gamma = 1e18;
  accepted = false;
  for (double c1 : {-1.0, 0.0, 0.001, 0.01, 0.1, 1.0, 10.0}) {
    cfg.c_one = c1;
    const bool accept =
        run_test_extreme(s1, s2, t1, t2, cfg).verdict == Verdict::kAccept;
    if (accepted) CHECK(accept);
    accepted = accepted || accept;
  }
}

TEST_CASE("partition reads first halves only; statistics read second halves") {
  TestConfig cfg;
  cfg.n = 50;
  cfg.eps = 0.5;
  cfg.m1 = 100;
  cfg.m2 = 50;
  cfg.fidelity_warnings = false;
  RandomStream rng(17);
  const ProbabilityVector u = make_uniform(50);
  const CountVector s1 = sample_counts(u, 100, Sampling::kPoissonized, rng);
  const CountVector t1 = sample_counts(u, 50, Sampling::kPoissonized, rng);
  const CountVector s2 = sample_counts(u, 100, Sampling::kPoissonized, rng);
  const CountVector t2 = sample_counts(u, 50, Sampling::kPoissonized, rng);

  const Decision base = run_test_nonextreme(s1, s2, t1, t2, cfg);

  // Wild second halves cannot move the partition.
  CountVector s2_wild = zeros(50, 100.0);
  s2_wild.counts[0] = 100000;
  const Decision wild = run_test_nonextreme(s1, s2_wild, t1, t2, cfg);
  CHECK(wild.heavy_count == base.heavy_count);
  CHECK(wild.medium_count == base.medium_count);
  CHECK(wild.light_count == base.light_count);
  CHECK(wild.b == base.b);

  // First halves with identical bucketing cannot move the statistics.
  const Decision relabeled =
      run_test_nonextreme(zeros(50, 100.0), s2, zeros(50, 50.0), t2, cfg);
  const Decision relabeled2 =
      run_test_nonextreme(s1, s2, t1, t2, cfg);
  if (base.heavy_count == 0 && base.medium_count == 0) {
    // Same all-light split: every check value must agree exactly.
    for (std::size_t i = 0; i < base.checks.size(); ++i)
      CHECK(relabeled.checks[i].value == relabeled2.checks[i].value);
  }
  CHECK(base.light_count == 50);  // uniform halves stay under both thresholds
}

TEST_CASE("fidelity warnings flag out-of-regime configurations") {
  TestConfig cfg;
  cfg.n = 5000;
  cfg.eps = 0.4;  // below n^{-1/12} ~ 0.492
  cfg.m1 = 900;   // below the ~992.5 floor at eps = 0.4
  cfg.m2 = 100;
  const CountVector s = zeros(5000, 900.0);
  const CountVector t = zeros(5000, 100.0);
  const Decision d = run_test_nonextreme(s, s, t, t, cfg);
  CHECK(d.warnings.size() == 2);
  cfg.fidelity_warnings = false;
  const Decision quiet = run_test_nonextreme(s, s, t, t, cfg);
  CHECK(quiet.warnings.empty());
}

TEST_CASE("empirical quantile: frozen ranks on 1..100") {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  CHECK(empirical_quantile(v, 5.0 / 6.0) == 84.0);
  CHECK(empirical_quantile(v, 0.5) == 50.0);
  CHECK(empirical_quantile(v, 0.999) == 100.0);
  CHECK(empirical_quantile(v, 0.01) == 1.0);
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("calibration argument checks") {
  CHECK_THROWS_AS(calibrate_constants(100, 0.5, 200, 100, 1.0, 99, 1.0 / 6, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_constants(100, 0.5, 200, 100, 1.0, 100, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_constants(100, 0.5, 200, 100, 1.0, 100, 0.6, 1),
                  std::invalid_argument);
  CHECK_NOTHROW(calibrate_constants(100, 0.5, 200, 100, 1.0, 100, 0.5, 1));
}

TEST_CASE("calibration: quantiles move the right way with alpha") {
  const CalibrationResult strict =
      calibrate_constants(100, 0.5, 200, 300, 1.0, 200, 1.0 / 6.0, 42);
  const CalibrationResult median =
      calibrate_constants(100, 0.5, 200, 300, 1.0, 200, 0.5, 42);
  // alpha = 0.5 keeps the median of the null sample, a lower cut than the
  // 5/6 quantile.
  CHECK(median.c_gamma <= strict.c_gamma);
  CHECK(median.c_one <= strict.c_one);
  CHECK(strict.trials == 200);
  CHECK(strict.kappa_suggestion > 0.0);
}

TEST_CASE("calibration is deterministic and thread-invariant") {
  const CalibrationResult a =
      calibrate_constants(50, 0.5, 100, 80, 1.0, 120, 1.0 / 6.0, 9, 1);
  const CalibrationResult b =
      calibrate_constants(50, 0.5, 100, 80, 1.0, 120, 1.0 / 6.0, 9, 4);
  CHECK(a.c_gamma == b.c_gamma);
  CHECK(a.c_one == b.c_one);
  CHECK(a.kappa_suggestion == b.kappa_suggestion);
}

TEST_CASE("calibration on a single-point domain yields zero constants") {
  // ln(1) = 0 empties the light set, so both null statistics vanish.
  const CalibrationResult c =
      calibrate_constants(1, 0.5, 50, 50, 1.0, 100, 1.0 / 6.0, 3);
  CHECK(c.c_gamma == 0.0);
  CHECK(c.c_one == 0.0);
}

TEST_CASE("trial harness: stub testers and determinism") {
  TestConfig cfg;
  cfg.n = 10;
  cfg.eps = 0.5;
  cfg.m1 = 50;
  cfg.m2 = 25;
  cfg.seed = 5;
  cfg.fidelity_warnings = false;
  const ProbabilityVector u = make_uniform(10);
  const ProbabilityVector v = make_perturbed_uniform(10, 0.5);

  const auto always_accept = [](const CountVector&, const CountVector&,
                                const CountVector&, const CountVector&) {
    return Verdict::kAccept;
  };
  // p = q: accepting is always correct.
  CHECK(run_trials_with(u, u, cfg, 50, always_accept).success_rate == 1.0);
  // far pair: accepting is always wrong.
  CHECK(run_trials_with(u, v, cfg, 50, always_accept).success_rate == 0.0);
  CHECK_THROWS_AS(run_trials_with(u, u, cfg, 0, always_accept),
                  std::invalid_argument);

  const TrialStats t1 = run_trials(u, v, cfg, 40, Regime::kNonextreme, 1);
  const TrialStats t3 = run_trials(u, v, cfg, 40, Regime::kNonextreme, 3);
  REQUIRE(t1.verdicts.size() == 40);
  CHECK(t1.verdicts == t3.verdicts);  // per-trial seeding, not scheduling
  CHECK(t1.correct == t3.correct);
}

TEST_CASE("end-to-end null and alternative rates at desk scale") {
  const std::int64_t n = 100, m1 = 400;
  const double eps = 0.5;
  const std::int64_t m2 = plan_sample_sizes(n, eps, m1);
  CHECK(m2 == 40);

  const CalibrationResult cal =
      calibrate_constants(n, eps, m1, m2, 1.0, 200, 1.0 / 6.0, 77);
  TestConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.m1 = m1;
  cfg.m2 = m2;
  cfg.c_gamma = cal.c_gamma;
  cfg.c_one = cal.c_one;
  cfg.seed = 101;
  cfg.fidelity_warnings = false;

  const ProbabilityVector u = make_uniform(n);
  const TrialStats null_stats =
      run_trials(u, u, cfg, 100, Regime::kNonextreme);
  CHECK(null_stats.success_rate >= 0.5);

  const ProbabilityVector far = make_perturbed_uniform(n, 1.0);
  const TrialStats alt_stats =
      run_trials(u, far, cfg, 100, Regime::kNonextreme);
  CHECK(alt_stats.success_rate >= 0.65);
}
