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

// Batch front end.  Exit codes: 0 accept/success, 1 reject, 2 error.
// Every CSV starts with '#' lines echoing the full configuration and seed,
// and identical invocations produce byte-identical files.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "closetest/closetest.hpp"

namespace {

using namespace closetest;

int effective_threads(int requested) {
  return requested > 0 ? requested : default_thread_count();
}

std::vector<std::int64_t> parse_int_list(const std::string& s,
                                         const std::string& what) {
  std::vector<std::int64_t> out;
  for (const auto& part : detail::split(s, ','))
    out.push_back(detail::parse_int(part, what));
  if (out.empty()) throw std::invalid_argument("empty list for " + what);
  return out;
}

std::vector<double> parse_real_list(const std::string& s,
                                    const std::string& what) {
  std::vector<double> out;
  for (const auto& part : detail::split(s, ','))
    out.push_back(detail::parse_real(part, what));
  if (out.empty()) throw std::invalid_argument("empty list for " + what);
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_word_pairs(
    const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& part : detail::split(s, ',')) {
    const auto words = detail::split(part, ':');
    if (words.size() != 2 || words[0].empty() || words[1].empty())
      throw std::invalid_argument("bad word pair '" + part +
                                  "' (expected a:b)");
    out.emplace_back(words[0], words[1]);
  }
  if (out.empty()) throw std::invalid_argument("no word pairs given");
  return out;
}

// k log-spaced integers from lo to hi inclusive, deduplicated.
std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi, int k) {
  std::vector<std::int64_t> out;
  if (lo >= hi || k <= 1) return {hi};
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < k; ++i) {
    const double v = std::exp(llo + (lhi - llo) * i / (k - 1));
    const auto r = static_cast<std::int64_t>(std::llround(v));
    if (out.empty() || r > out.back()) out.push_back(r);
  }
  return out;
}

std::string join_int_list(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_real_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_real(v[i]);
  }
  return s;
}

void emit(const CsvBuilder& csv, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(csv.str().c_str(), stdout);
  else
    csv.write_file(out_path);
}

std::string verdict_name(Verdict v) {
  return v == Verdict::kAccept ? "accept" : "reject";
}

// ---------------------------------------------------------------------------
// test

struct TestOpts {
  std::string p_spec, q_spec, regime = "auto", out;
  double eps = 0, kappa = 1.0, c_gamma = 1.0, c_one = 1.0, planner_c = 1.0;
  double alpha = 1.0 / 6.0;
  std::int64_t m1 = 0, m2 = 0, trials = 1, calib_trials = 200;
  std::uint64_t seed = 0;
  bool calibrate = false, no_fidelity = false;
};

int run_test_cmd(const TestOpts& o, int threads) {
  const ProbabilityVector p = parse_distribution_spec(o.p_spec);
  const ProbabilityVector q = parse_distribution_spec(o.q_spec);
  if (p.size() != q.size())
    throw std::invalid_argument("p and q must share a domain size");

  TestConfig cfg;
  cfg.n = p.size();
  cfg.eps = o.eps;
  cfg.m1 = o.m1;
  cfg.m2 = o.m2 > 0 ? o.m2
                    : plan_sample_sizes(cfg.n, o.eps, o.m1, o.planner_c,
                                        /*allow_small_m1=*/true);
  cfg.kappa = o.kappa;
  cfg.c_gamma = o.c_gamma;
  cfg.c_one = o.c_one;
  cfg.regime = parse_regime(o.regime);
  cfg.seed = o.seed;
  cfg.fidelity_warnings = !o.no_fidelity;
  validate_config(cfg);

  if (o.calibrate) {
    const CalibrationResult cal = calibrate_constants(
        cfg.n, cfg.eps, cfg.m1, cfg.m2, cfg.kappa, o.calib_trials, o.alpha,
        derive_seed(o.seed, {kCalibrationTag}), threads);
    cfg.c_gamma = cal.c_gamma;
    cfg.c_one = cal.c_one;
  }

  CsvBuilder csv;
  csv.comment("tool=closetest test");
  csv.config("p", o.p_spec);
  csv.config("q", o.q_spec);
  csv.config("n", cfg.n);
  csv.config("eps", cfg.eps);
  csv.config("m1", cfg.m1);
  csv.config("m2", cfg.m2);
  csv.config("kappa", cfg.kappa);
  csv.config("c_gamma", cfg.c_gamma);
  csv.config("c_one", cfg.c_one);
  csv.config("regime", o.regime);
  csv.config("trials", o.trials);
  csv.config("seed", std::to_string(o.seed));

  if (o.trials > 1) {
    const TrialStats stats =
        run_trials(p, q, cfg, o.trials, cfg.regime, threads);
    const std::string expected =
        l1_distance(p, q) <= 1e-12 ? "accept" : "reject";
    csv.config("expected", expected);
    csv.header("trials,correct,success_rate");
    csv.row()
        .cell(stats.trials)
        .cell(stats.correct)
        .cell(stats.success_rate);
    emit(csv, o.out);
    if (!o.out.empty())
      std::printf("trials=%lld correct=%lld success_rate=%s (expected %s)\n",
                  static_cast<long long>(stats.trials),
                  static_cast<long long>(stats.correct),
                  format_real(stats.success_rate).c_str(), expected.c_str());
    return 0;
  }

  RandomStream rng = RandomStream::substream(cfg.seed, {kTrialTag, 0});
  const double m1d = static_cast<double>(cfg.m1);
  const double m2d = static_cast<double>(cfg.m2);
  const CountVector s1 = sample_counts(p, m1d, Sampling::kPoissonized, rng);
  const CountVector s2 = sample_counts(p, m1d, Sampling::kPoissonized, rng);
  const CountVector t1 = sample_counts(q, m2d, Sampling::kPoissonized, rng);
  const CountVector t2 = sample_counts(q, m2d, Sampling::kPoissonized, rng);
  const Decision d = run_test(s1, s2, t1, t2, cfg);

  csv.comment("verdict=" + verdict_name(d.verdict));
  csv.comment("concrete_regime=" + regime_name(d.regime));
  csv.comment("partition: heavy=" + std::to_string(d.heavy_count) +
              " medium=" + std::to_string(d.medium_count) +
              " light=" + std::to_string(d.light_count) +
              " b=" + format_real(d.b) + " b_prime=" + format_real(d.b_prime));
  for (const auto& w : d.warnings) csv.comment("warning: " + w);
  csv.header("check,value,threshold,pass,applicable");
  for (const auto& c : d.checks)
    csv.row()
        .cell(c.name)
        .cell(c.value)
        .cell(c.threshold)
        .cell(static_cast<std::int64_t>(c.pass))
        .cell(static_cast<std::int64_t>(c.applicable));
  emit(csv, o.out);
  if (!o.out.empty())
    std::printf("verdict=%s regime=%s\n", verdict_name(d.verdict).c_str(),
                regime_name(d.regime).c_str());
  return d.verdict == Verdict::kAccept ? 0 : 1;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOpts {
  std::int64_t n = 0, m1 = 0, m2 = 0, trials = 1000;
  double eps = 0, kappa = 1.0, alpha = 1.0 / 6.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_calibrate_cmd(const CalibrateOpts& o, int threads) {
  const CalibrationResult cal =
      calibrate_constants(o.n, o.eps, o.m1, o.m2, o.kappa, o.trials, o.alpha,
                          o.seed, threads);
  CsvBuilder csv;
  csv.comment("tool=closetest calibrate");
  csv.config("n", o.n);
  csv.config("eps", o.eps);
  csv.config("m1", o.m1);
  csv.config("m2", o.m2);
  csv.config("kappa", o.kappa);
  csv.config("alpha", o.alpha);
  csv.config("trials", o.trials);
  csv.config("seed", std::to_string(o.seed));
  csv.header("c_gamma,c_one,kappa_suggestion,trials");
  csv.row()
      .cell(cal.c_gamma)
      .cell(cal.c_one)
      .cell(cal.kappa_suggestion)
      .cell(cal.trials);
  emit(csv, o.out);
  if (!o.out.empty())
    std::printf("c_gamma=%s c_one=%s kappa_suggestion=%s\n",
                format_real(cal.c_gamma).c_str(),
                format_real(cal.c_one).c_str(),
                format_real(cal.kappa_suggestion).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// moments

struct MomentsOpts {
  std::string check = "all", p_spec, q_spec, out;
  std::int64_t m1 = 0, m2 = 0, trials = 100000;
  std::uint64_t seed = 0;
};

int run_moments_cmd(const MomentsOpts& o, int threads) {
  const ProbabilityVector p = parse_distribution_spec(o.p_spec);
  const ProbabilityVector q = parse_distribution_spec(o.q_spec);
  if (p.size() != q.size())
    throw std::invalid_argument("p and q must share a domain size");
  if (o.m1 < 1 || o.m2 < 1)
    throw std::invalid_argument("m1 and m2 must be >= 1");

  std::vector<StatKind> kinds;
  if (o.check == "w") kinds = {StatKind::kW};
  else if (o.check == "z") kinds = {StatKind::kZ};
  else if (o.check == "r") kinds = {StatKind::kR};
  else if (o.check == "all")
    kinds = {StatKind::kW, StatKind::kZ, StatKind::kR};
  else
    throw std::invalid_argument("--check must be one of w, z, r, all");

  const IndexSet domain = all_indices(static_cast<std::size_t>(p.size()));
  CsvBuilder csv;
  csv.comment("tool=closetest moments");
  csv.config("check", o.check);
  csv.config("p", o.p_spec);
  csv.config("q", o.q_spec);
  csv.config("n", static_cast<std::int64_t>(p.size()));
  csv.config("m1", o.m1);
  csv.config("m2", o.m2);
  csv.config("trials", o.trials);
  csv.config("seed", std::to_string(o.seed));
  csv.header("stat,closed_form_mean,mc_mean,mc_stderr,trials");
  for (StatKind kind : kinds) {
    const MomentReport rep = moment_report(
        kind, p, q, static_cast<double>(o.m1), static_cast<double>(o.m2),
        domain, o.trials, o.seed, threads);
    csv.row()
        .cell(rep.stat)
        .cell(rep.closed_form_mean)
        .cell(rep.mc_mean)
        .cell(rep.mc_stderr)
        .cell(rep.trials);
  }
  emit(csv, o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// grid

struct GridOpts {
  std::int64_t n = 5000, trials = 120;
  double eps = 0.25;
  std::string m1_grid, m2_grid, out;
  std::uint64_t seed = 0;
};

int run_grid_cmd(const GridOpts& o, int threads) {
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  if (o.eps < 0.0 || o.eps > 1.0)
    throw std::invalid_argument("--eps must be in [0,1]");
  const ProbabilityVector p = make_uniform(o.n);
  const ProbabilityVector q =
      o.eps == 0.0 ? p : make_perturbed_uniform(o.n, o.eps);

  GridConfig cfg;
  const double nd = static_cast<double>(o.n);
  cfg.m1_values =
      o.m1_grid.empty()
          ? log_spaced(static_cast<std::int64_t>(std::ceil(std::pow(nd, 2.0 / 3.0))),
                       o.n, 4)
          : parse_int_list(o.m1_grid, "m1");
  cfg.m2_values =
      o.m2_grid.empty()
          ? log_spaced(static_cast<std::int64_t>(std::ceil(std::sqrt(nd))), o.n, 4)
          : parse_int_list(o.m2_grid, "m2");
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = threads;

  const std::vector<GridCell> cells = grid_experiment(p, q, cfg);
  CsvBuilder csv;
  csv.comment("tool=closetest grid");
  csv.config("n", o.n);
  csv.config("eps", o.eps);
  csv.config("m1_grid", join_int_list(cfg.m1_values));
  csv.config("m2_grid", join_int_list(cfg.m2_values));
  csv.config("trials", o.trials);
  csv.config("seed", std::to_string(o.seed));
  csv.header("m1,m2,statistic,success_rate,trials");
  for (const auto& c : cells) {
    csv.row()
        .cell(c.m1)
        .cell(c.m2)
        .cell(std::string("z_normalized"))
        .cell(c.z_success)
        .cell(c.trials);
    csv.row()
        .cell(c.m1)
        .cell(c.m2)
        .cell(std::string("empirical_tv"))
        .cell(c.tv_success)
        .cell(c.trials);
  }
  emit(csv, o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// words

struct WordsOpts {
  std::string corpus, pairs, m2_grid = "50,100,200,400,700,1000", out;
  std::int64_t m1 = 1000, trials = 200;
  std::uint64_t seed = 0;
};

int run_words_cmd(const WordsOpts& o, int threads) {
  const BigramTable table = BigramTable::load(o.corpus);
  WordSimConfig cfg;
  cfg.m1 = o.m1;
  cfg.m2_values = parse_int_list(o.m2_grid, "m2");
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = threads;
  const auto rows = word_similarity(table, parse_word_pairs(o.pairs), cfg);

  CsvBuilder csv;
  csv.comment("tool=closetest words");
  csv.config("corpus", o.corpus);
  csv.config("pairs", o.pairs);
  csv.config("m1", o.m1);
  csv.config("m2_grid", join_int_list(cfg.m2_values));
  csv.config("trials", o.trials);
  csv.config("seed", std::to_string(o.seed));
  csv.header("word_a,word_b,m1,m2,mean_z,std_z,mean_tv,std_tv,trials");
  for (const auto& r : rows)
    csv.row()
        .cell(r.word_a)
        .cell(r.word_b)
        .cell(r.m1)
        .cell(r.m2)
        .cell(r.mean_z)
        .cell(r.std_z)
        .cell(r.mean_tv)
        .cell(r.std_tv)
        .cell(r.trials);
  emit(csv, o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::int64_t n = 2000, m1 = 2000, trials = 200, calib_trials = 200;
  double instance_eps = 1.0, planner_c = 4.0, kappa = 1.0, alpha = 1.0 / 6.0;
  std::string fractions = "0.1,0.25,0.5,1", regime = "nonextreme", out;
  std::uint64_t seed = 0;
};

int run_sweep_cmd(const SweepOpts& o, int threads) {
  SweepConfig cfg;
  cfg.n = o.n;
  cfg.m1 = o.m1;
  cfg.instance_eps = o.instance_eps;
  cfg.planner_c = o.planner_c;
  cfg.fractions = parse_real_list(o.fractions, "fraction");
  cfg.trials = o.trials;
  cfg.kappa = o.kappa;
  cfg.alpha = o.alpha;
  cfg.calib_trials = o.calib_trials;
  cfg.regime = parse_regime(o.regime);
  cfg.seed = o.seed;
  cfg.threads = threads;
  const SweepResult res = lower_bound_sweep(cfg);

  CsvBuilder csv;
  csv.comment("tool=closetest sweep");
  csv.config("n", o.n);
  csv.config("m1", o.m1);
  csv.config("instance_eps", o.instance_eps);
  csv.config("tester_eps", res.tester_eps);
  csv.config("planner_c", o.planner_c);
  csv.config("fractions", join_real_list(cfg.fractions));
  csv.config("trials", o.trials);
  csv.config("kappa", o.kappa);
  csv.config("alpha", o.alpha);
  csv.config("calib_trials", o.calib_trials);
  csv.config("regime", o.regime);
  csv.config("seed", std::to_string(o.seed));
  csv.header("m2,planned_m2,fraction,reject_rate,trials");
  for (const auto& r : res.rows)
    csv.row()
        .cell(r.m2)
        .cell(r.planned_m2)
        .cell(r.fraction)
        .cell(r.reject_rate)
        .cell(r.trials);
  emit(csv, o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// markov test-at / estimate

struct MarkovOpts {
  std::string chain, regime = "auto", out;
  double eps = 0.25, c1_scale = 1.0, state_scale = 1.0, kappa = 1.0;
  double alpha = 1.0 / 6.0;
  std::int64_t t0 = 1, calib_trials = 200;
  std::int64_t t0_cap = std::int64_t{1} << 20;
  std::optional<double> c_gamma, c_one;
  std::uint64_t seed = 0;
};

MixingConfig make_mixing_config(const MarkovOpts& o, int threads) {
  MixingConfig mix;
  mix.c1_scale = o.c1_scale;
  mix.state_scale = o.state_scale;
  mix.kappa = o.kappa;
  mix.alpha = o.alpha;
  mix.calib_trials = o.calib_trials;
  mix.c_gamma = o.c_gamma;
  mix.c_one = o.c_one;
  mix.regime = parse_regime(o.regime);
  mix.seed = o.seed;
  mix.t0_cap = o.t0_cap;
  mix.threads = threads;
  return mix;
}

void echo_markov_config(CsvBuilder* csv, const MarkovOpts& o) {
  csv->config("chain", o.chain);
  csv->config("eps", o.eps);
  csv->config("c1_scale", o.c1_scale);
  csv->config("state_scale", o.state_scale);
  csv->config("kappa", o.kappa);
  csv->config("alpha", o.alpha);
  csv->config("calib_trials", o.calib_trials);
  csv->config("regime", o.regime);
  csv->config("seed", std::to_string(o.seed));
}

int run_markov_test_at_cmd(const MarkovOpts& o, int threads) {
  const MarkovChain chain = parse_chain_spec(o.chain);
  const MixDecision d =
      test_mixing_at(chain, o.t0, o.eps, make_mixing_config(o, threads));

  CsvBuilder csv;
  csv.comment("tool=closetest markov test-at");
  echo_markov_config(&csv, o);
  csv.config("t0", o.t0);
  csv.comment("verdict=" + verdict_name(d.verdict));
  csv.header(
      "t0,verdict,rejected_states,worst_state,worst_rejects,m1,m2,"
      "runs_per_state,walks,queries");
  csv.row()
      .cell(d.t0)
      .cell(verdict_name(d.verdict))
      .cell(d.rejected_states)
      .cell(d.worst_state)
      .cell(d.worst_rejects)
      .cell(d.m1)
      .cell(d.m2)
      .cell(d.runs_per_state)
      .cell(std::to_string(d.walks))
      .cell(std::to_string(d.queries));
  emit(csv, o.out);
  if (!o.out.empty())
    std::printf("verdict=%s rejected_states=%lld queries=%llu\n",
                verdict_name(d.verdict).c_str(),
                static_cast<long long>(d.rejected_states),
                static_cast<unsigned long long>(d.queries));
  return d.verdict == Verdict::kAccept ? 0 : 1;
}

int run_markov_estimate_cmd(const MarkovOpts& o, int threads) {
  const MarkovChain chain = parse_chain_spec(o.chain);
  const MixingEstimate est =
      estimate_mixing_time(chain, o.eps, make_mixing_config(o, threads));

  CsvBuilder csv;
  csv.comment("tool=closetest markov estimate");
  echo_markov_config(&csv, o);
  csv.config("t0_cap", o.t0_cap);
  csv.config("t_estimate", est.t_estimate);
  csv.config("total_queries", std::to_string(est.queries));
  csv.header("t0,repeats,accepts,accepted");
  for (const auto& a : est.attempts)
    csv.row()
        .cell(a.t0)
        .cell(a.repeats)
        .cell(a.accepts)
        .cell(static_cast<std::int64_t>(a.accepted));
  emit(csv, o.out);
  if (!o.out.empty())
    std::printf("t_estimate=%lld queries=%llu\n",
                static_cast<long long>(est.t_estimate),
                static_cast<unsigned long long>(est.queries));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closeness testing of discrete distributions, batch tools"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker threads (0 = hardware default)");

  TestOpts test_o;
  auto* test_cmd = app.add_subcommand("test", "run one closeness test");
  test_cmd->add_option("--p", test_o.p_spec, "first distribution spec")
      ->required();
  test_cmd->add_option("--q", test_o.q_spec, "second distribution spec")
      ->required();
  test_cmd->add_option("--eps", test_o.eps, "closeness parameter")->required();
  test_cmd->add_option("--m1", test_o.m1, "p-side sample size")->required();
  test_cmd->add_option("--m2", test_o.m2, "q-side sample size (0 = planner)");
  test_cmd->add_option("--planner-c", test_o.planner_c, "planner scale");
  test_cmd->add_option("--kappa", test_o.kappa, "partition threshold scale");
  test_cmd->add_option("--c-gamma", test_o.c_gamma, "Z threshold constant");
  test_cmd->add_option("--c-one", test_o.c_one, "R threshold constant");
  test_cmd->add_flag("--calibrate", test_o.calibrate,
                     "calibrate c-gamma and c-one from null simulations");
  test_cmd->add_option("--alpha", test_o.alpha, "calibration level");
  test_cmd->add_option("--calib-trials", test_o.calib_trials,
                       "calibration trials");
  test_cmd->add_option("--regime", test_o.regime,
                       "basic|nonextreme|extreme|auto");
  test_cmd->add_option("--trials", test_o.trials,
                       "repeat and report a success rate instead");
  test_cmd->add_option("--seed", test_o.seed, "root seed");
  test_cmd->add_flag("--no-fidelity-warnings", test_o.no_fidelity,
                     "suppress small-sample warnings");
  test_cmd->add_option("--out", test_o.out, "CSV output path");

  CalibrateOpts cal_o;
  auto* cal_cmd = app.add_subcommand("calibrate", "null-quantile constants");
  cal_cmd->add_option("--n", cal_o.n, "domain size")->required();
  cal_cmd->add_option("--eps", cal_o.eps, "closeness parameter")->required();
  cal_cmd->add_option("--m1", cal_o.m1, "p-side sample size")->required();
  cal_cmd->add_option("--m2", cal_o.m2, "q-side sample size")->required();
  cal_cmd->add_option("--kappa", cal_o.kappa, "partition threshold scale");
  cal_cmd->add_option("--alpha", cal_o.alpha, "quantile level");
  cal_cmd->add_option("--trials", cal_o.trials, "null simulations");
  cal_cmd->add_option("--seed", cal_o.seed, "root seed");
  cal_cmd->add_option("--out", cal_o.out, "CSV output path");

  MomentsOpts mom_o;
  auto* mom_cmd =
      app.add_subcommand("moments", "closed-form vs Monte-Carlo moments");
  mom_cmd->add_option("--check", mom_o.check, "w|z|r|all");
  mom_cmd->add_option("--p", mom_o.p_spec, "first distribution spec")
      ->required();
  mom_cmd->add_option("--q", mom_o.q_spec, "second distribution spec")
      ->required();
  mom_cmd->add_option("--m1", mom_o.m1, "p-side sample size")->required();
  mom_cmd->add_option("--m2", mom_o.m2, "q-side sample size")->required();
  mom_cmd->add_option("--trials", mom_o.trials, "Monte-Carlo trials");
  mom_cmd->add_option("--seed", mom_o.seed, "root seed");
  mom_cmd->add_option("--out", mom_o.out, "CSV output path");

  GridOpts grid_o;
  auto* grid_cmd =
      app.add_subcommand("grid", "paired-comparison success-rate grid");
  grid_cmd->add_option("--n", grid_o.n, "domain size");
  grid_cmd->add_option("--eps", grid_o.eps, "perturbation (0 = null grid)");
  grid_cmd->add_option("--trials", grid_o.trials, "trials per cell");
  grid_cmd->add_option("--m1-grid", grid_o.m1_grid, "comma list of m1 values");
  grid_cmd->add_option("--m2-grid", grid_o.m2_grid, "comma list of m2 values");
  grid_cmd->add_option("--seed", grid_o.seed, "root seed");
  grid_cmd->add_option("--out", grid_o.out, "CSV output path");

  WordsOpts words_o;
  auto* words_cmd =
      app.add_subcommand("words", "bigram word-similarity curves");
  words_cmd->add_option("--corpus", words_o.corpus, "bigram TSV path")
      ->required();
  words_cmd->add_option("--pairs", words_o.pairs, "word pairs a:b,c:d")
      ->required();
  words_cmd->add_option("--m1", words_o.m1, "first-word sample size");
  words_cmd->add_option("--m2-grid", words_o.m2_grid,
                        "comma list of m2 values");
  words_cmd->add_option("--trials", words_o.trials, "trials per point");
  words_cmd->add_option("--seed", words_o.seed, "root seed");
  words_cmd->add_option("--out", words_o.out, "CSV output path");

  SweepOpts sweep_o;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "lower-bound m2 degradation sweep");
  sweep_cmd->add_option("--n", sweep_o.n, "domain size");
  sweep_cmd->add_option("--m1", sweep_o.m1, "p-side sample size");
  sweep_cmd->add_option("--instance-eps", sweep_o.instance_eps,
                        "instance perturbation");
  sweep_cmd->add_option("--planner-c", sweep_o.planner_c, "planner scale");
  sweep_cmd->add_option("--fractions", sweep_o.fractions,
                        "comma list of m2 fractions");
  sweep_cmd->add_option("--trials", sweep_o.trials, "trials per fraction");
  sweep_cmd->add_option("--kappa", sweep_o.kappa, "partition threshold scale");
  sweep_cmd->add_option("--alpha", sweep_o.alpha, "calibration level");
  sweep_cmd->add_option("--calib-trials", sweep_o.calib_trials,
                        "calibration trials");
  sweep_cmd->add_option("--regime", sweep_o.regime,
                        "basic|nonextreme|extreme|auto");
  sweep_cmd->add_option("--seed", sweep_o.seed, "root seed");
  sweep_cmd->add_option("--out", sweep_o.out, "CSV output path");

  MarkovOpts markov_o;
  auto* markov_cmd = app.add_subcommand("markov", "mixing-time analysis");
  markov_cmd->require_subcommand(1);
  auto add_markov_common = [&](CLI::App* cmd) {
    cmd->add_option("--chain", markov_o.chain,
                    "cycle:<n>:<laziness> | cliques:<k>:<p> | complete:<n> | "
                    "file")
        ->required();
    cmd->add_option("--eps", markov_o.eps, "closeness parameter");
    cmd->add_option("--c1-scale", markov_o.c1_scale, "reference sample scale");
    cmd->add_option("--state-scale", markov_o.state_scale,
                    "per-state sample scale");
    cmd->add_option("--kappa", markov_o.kappa, "partition threshold scale");
    cmd->add_option("--alpha", markov_o.alpha, "inner calibration level");
    cmd->add_option("--calib-trials", markov_o.calib_trials,
                    "inner calibration trials");
    cmd->add_option("--c-gamma", markov_o.c_gamma,
                    "preset Z constant (skips inner calibration)");
    cmd->add_option("--c-one", markov_o.c_one, "preset R constant");
    cmd->add_option("--regime", markov_o.regime, "inner tester regime");
    cmd->add_option("--seed", markov_o.seed, "root seed");
    cmd->add_option("--out", markov_o.out, "CSV output path");
  };
  auto* markov_test_cmd =
      markov_cmd->add_subcommand("test-at", "mixing test at a fixed t0");
  add_markov_common(markov_test_cmd);
  markov_test_cmd->add_option("--t0", markov_o.t0, "step count")->required();
  auto* markov_est_cmd =
      markov_cmd->add_subcommand("estimate", "doubling mixing-time estimate");
  add_markov_common(markov_est_cmd);
  markov_est_cmd->add_option("--t0-cap", markov_o.t0_cap,
                             "doubling cap (error past this)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const int threads = effective_threads(threads_flag);
  try {
    if (test_cmd->parsed()) return run_test_cmd(test_o, threads);
    if (cal_cmd->parsed()) return run_calibrate_cmd(cal_o, threads);
    if (mom_cmd->parsed()) return run_moments_cmd(mom_o, threads);
    if (grid_cmd->parsed()) return run_grid_cmd(grid_o, threads);
    if (words_cmd->parsed()) return run_words_cmd(words_o, threads);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_o, threads);
    if (markov_cmd->parsed()) {
      if (markov_test_cmd->parsed())
        return run_markov_test_at_cmd(markov_o, threads);
      if (markov_est_cmd->parsed())
        return run_markov_estimate_cmd(markov_o, threads);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}
