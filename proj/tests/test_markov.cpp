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

#include "closetest/markov.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

using namespace closetest;

namespace {

using Rows = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

MarkovChain lazy_two_state() {
  return MarkovChain(2, Rows{{{0, 0.75}, {1, 0.25}}, {{0, 0.25}, {1, 0.75}}});
}

}  // namespace

TEST_CASE("chain construction validation") {
  CHECK_THROWS_AS(MarkovChain(0, Rows{}), std::invalid_argument);
  CHECK_THROWS_AS(MarkovChain(2, Rows{{{0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(MarkovChain(1, Rows{{}}), std::invalid_argument);
  CHECK_THROWS_AS(MarkovChain(1, Rows{{{0, 0.9}}}), std::invalid_argument);
  CHECK_THROWS_AS(MarkovChain(1, Rows{{{1, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(MarkovChain(1, Rows{{{0, -1.0}, {0, 2.0}}}),
                  std::invalid_argument);
  CHECK_NOTHROW(MarkovChain(1, Rows{{{0, 1.0}}}));
}

TEST_CASE("walks respect the structure of deterministic chains") {
  RandomStream rng(1);
  // An absorbing state never leaves.
  const MarkovChain absorbing(2, Rows{{{0, 1.0}}, {{0, 1.0}}});
  CHECK(absorbing.walk(0, 100, rng) == 0);
  CHECK(absorbing.walk(1, 1, rng) == 0);

  // Directed 3-cycle: three steps return home.
  const MarkovChain cycle(3, Rows{{{1, 1.0}}, {{2, 1.0}}, {{0, 1.0}}});
  CHECK(cycle.walk(0, 1, rng) == 1);
  CHECK(cycle.walk(0, 2, rng) == 2);
  CHECK(cycle.walk(0, 3, rng) == 0);
  CHECK(cycle.walk(2, 0, rng) == 2);  // zero steps stay put
}

TEST_CASE("query counter charges one per step") {
  RandomStream rng(2);
  const MarkovChain chain = make_complete_chain(4);
  chain.reset_query_count();
  chain.walk(0, 0, rng);
  CHECK(chain.query_count() == 0);
  chain.walk(0, 7, rng);
  CHECK(chain.query_count() == 7);
  chain.next_node(1, rng);
  CHECK(chain.query_count() == 8);
  chain.reset_query_count();
  CHECK(chain.query_count() == 0);
}

TEST_CASE("next_node frequencies match a fair row") {
  const MarkovChain fair(2, Rows{{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}});
  RandomStream rng(33);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += fair.next_node(0, rng);
  const double se = std::sqrt(n * 0.25);
  CHECK(std::fabs(ones - n * 0.5) < 4.0 * se);
}

TEST_CASE("five-step walk distribution matches the exact power") {
  const MarkovChain chain = lazy_two_state();
  // p00(5) = 1/2 + 1/2 * (1/2)^5, exactly representable.
  const std::vector<double> row = exact_t_step_row(chain, 0, 5);
  CHECK(row[0] == doctest::Approx(0.515625).epsilon(1e-14));
  CHECK(row[1] == doctest::Approx(0.484375).epsilon(1e-14));

  RandomStream rng(71);
  const int reps = 20000;
  int at_zero = 0;
  for (int i = 0; i < reps; ++i) at_zero += chain.walk(0, 5, rng) == 0;
  const double se = std::sqrt(reps * 0.515625 * 0.484375);
  CHECK(std::fabs(at_zero - reps * 0.515625) < 4.0 * se);
}

TEST_CASE("cycle generator merges neighbours at small n") {
  const MarkovChain c5 = make_cycle_chain(5, 0.5);
  const auto& row0 = c5.row(0);
  REQUIRE(row0.size() == 3);
  CHECK(row0[0] == std::pair<std::uint32_t, double>{0, 0.5});
  CHECK(row0[1].first == 1);
  CHECK(row0[1].second == doctest::Approx(0.25));
  CHECK(row0[2].first == 4);

  // n = 2 with no laziness: both neighbours are the same state.
  const MarkovChain c2 = make_cycle_chain(2, 0.0);
  REQUIRE(c2.row(0).size() == 1);
  CHECK(c2.row(0)[0].first == 1);
  CHECK(c2.row(0)[0].second == doctest::Approx(1.0));

  const MarkovChain c1 = make_cycle_chain(1, 0.0);
  CHECK(c1.row(0)[0].first == 0);

  CHECK_THROWS_AS(make_cycle_chain(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_cycle_chain(5, 1.0), std::invalid_argument);
}

TEST_CASE("two-clique generator wires the bridge endpoints") {
  const MarkovChain chain = make_two_clique_chain(3, 0.1);
  CHECK(chain.size() == 6);
  // Interior state: uniform over its own clique.
  REQUIRE(chain.row(0).size() == 3);
  for (const auto& [dst, pr] : chain.row(0)) {
    CHECK(dst < 3);
    CHECK(pr == doctest::Approx(1.0 / 3.0));
  }
  // Bridge endpoint 2 keeps 0.9 inside and sends 0.1 to state 3.
  REQUIRE(chain.row(2).size() == 4);
  double to_other = 0.0;
  for (const auto& [dst, pr] : chain.row(2))
    if (dst >= 3) to_other += pr;
  CHECK(to_other == doctest::Approx(0.1));

  CHECK_THROWS_AS(make_two_clique_chain(1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_two_clique_chain(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_two_clique_chain(3, 1.0), std::invalid_argument);
}

TEST_CASE("chain files: 1-based ids, duplicate rows sum, line errors") {
  const TempFile good("tmp_chain_good.tsv",
                      "# comment\n1\t2\t0.5\n1\t1\t0.25\n1\t1\t0.25\n"
                      "\n2\t1\t1.0\n");
  const MarkovChain chain = load_chain_file(good.path);
  CHECK(chain.size() == 2);
  REQUIRE(chain.row(0).size() == 2);
  CHECK(chain.row(0)[0].second == doctest::Approx(0.5));  // merged duplicates

  const TempFile zero_based("tmp_chain_zero.tsv", "0\t1\t1.0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_chain_file(zero_based.path)),
                       doctest::Contains("tmp_chain_zero.tsv:1"),
                       std::runtime_error);

  const TempFile short_row("tmp_chain_short.tsv", "1\t2\t0.5\n2\t1\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_chain_file(short_row.path)),
                       doctest::Contains(":2"), std::runtime_error);

  const TempFile bad_sum("tmp_chain_sum.tsv", "1\t1\t0.4\n2\t2\t1.0\n");
  CHECK_THROWS_AS(static_cast<void>(load_chain_file(bad_sum.path)),
                  std::invalid_argument);

  const TempFile blank("tmp_chain_blank.tsv", "# nothing\n");
  CHECK_THROWS_AS(static_cast<void>(load_chain_file(blank.path)),
                  std::runtime_error);
  CHECK_THROWS_AS(static_cast<void>(load_chain_file("no_such_chain.tsv")),
                  std::runtime_error);
}

TEST_CASE("chain shorthand specs") {
  CHECK(parse_chain_spec("cycle:6:0.5").size() == 6);
  CHECK(parse_chain_spec("cliques:4:0.2").size() == 8);
  CHECK(parse_chain_spec("complete:3").size() == 3);
  CHECK_THROWS_AS(parse_chain_spec("cycle:6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_chain_spec("complete:0"), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(parse_chain_spec("missing_chain.tsv")),
                  std::runtime_error);
}

TEST_CASE("exact oracles: stationary distribution and mixing time") {
  const std::vector<double> pi = stationary_distribution(make_complete_chain(4));
  for (double v : pi) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

  // One step of the complete chain is already exactly uniform.
  CHECK(exact_mixing_time(make_complete_chain(2), 0.25) == 1);
  // Lazy two-state: TV from either corner is (1/2)^{t+1}, so delta = 1/4
  // is reached at t = 1.
  CHECK(exact_mixing_time(lazy_two_state(), 0.25) == 1);
  CHECK(exact_mixing_time(lazy_two_state(), 0.05) == 4);
  CHECK_THROWS_AS(exact_mixing_time(lazy_two_state(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("periodic swap chain: uniform is stationary but rows never mix") {
  const MarkovChain swap(2, Rows{{{1, 1.0}}, {{0, 1.0}}});
  // The uniform start is already stationary, so power iteration returns it.
  const std::vector<double> pi = stationary_distribution(swap);
  CHECK(pi[0] == doctest::Approx(0.5));
  // Row-wise distributions alternate forever and never approach it.
  CHECK_THROWS_AS(exact_mixing_time(swap, 0.25, 1000), std::runtime_error);
}

TEST_CASE("average t-step distribution: exact stepping") {
  const MarkovChain chain(2, Rows{{{0, 0.9}, {1, 0.1}}, {{0, 0.6}, {1, 0.4}}});
  const std::vector<double> avg0 = exact_average_t_step(chain, 0);
  CHECK(avg0[0] == doctest::Approx(0.5));
  const std::vector<double> avg1 = exact_average_t_step(chain, 1);
  CHECK(avg1[0] == doctest::Approx(0.75));
  CHECK(avg1[1] == doctest::Approx(0.25));

  // Identical rows collapse the average to that row after one step.
  const MarkovChain rank_one(
      4, Rows{{{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}},
              {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}},
              {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}},
              {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}}});
  const std::vector<double> once = exact_average_t_step(rank_one, 1);
  const std::vector<double> many = exact_average_t_step(rank_one, 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(once[i] == doctest::Approx(0.1 * (i + 1)).epsilon(1e-12));
    CHECK(many[i] == doctest::Approx(once[i]).epsilon(1e-12));
  }
}

TEST_CASE("sampled average t-step matches the exact oracle") {
  const MarkovChain chain(2, Rows{{{0, 0.9}, {1, 0.1}}, {{0, 0.6}, {1, 0.4}}});
  RandomStream rng(12);
  // t = 0 should reproduce the uniform starting law.
  const CountVector start = sample_avg_t_step(chain, 0, 40000.0, rng);
  CHECK(std::fabs(static_cast<double>(start.counts[0]) - 20000.0) <
        4.0 * std::sqrt(20000.0));

  const std::vector<double> exact = exact_average_t_step(chain, 3);
  const CountVector sampled = sample_avg_t_step(chain, 3, 50000.0, rng);
  for (int i = 0; i < 2; ++i) {
    const double lambda = 50000.0 * exact[static_cast<std::size_t>(i)];
    CHECK(std::fabs(static_cast<double>(sampled.counts[i]) - lambda) <
          4.0 * std::sqrt(lambda));
  }

  CHECK_THROWS_AS(sample_t_step_from(chain, 5, 1, 10.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_avg_t_step(chain, -1, 10.0, rng),
                  std::invalid_argument);
}

TEST_CASE("mixing test: single-state chains accept without sampling") {
  const MarkovChain single(1, Rows{{{0, 1.0}}});
  single.reset_query_count();
  MixingConfig mix;
  mix.seed = 4;
  const MixDecision d = test_mixing_at(single, 1, 0.5, mix);
  CHECK(d.verdict == Verdict::kAccept);
  CHECK(d.queries == 0);
  CHECK(single.query_count() == 0);
}

TEST_CASE("mixing test: query accounting identity and determinism") {
  const MarkovChain chain = make_two_clique_chain(4, 0.2);
  MixingConfig mix;
  mix.seed = 11;
  const MixDecision a = test_mixing_at(chain, 2, 0.5, mix);
  CHECK(a.queries == a.walks * 2);
  CHECK(a.runs_per_state == 7);  // ceil(3 ln 8)
  CHECK(a.m1 == 8);
  CHECK(a.m2 == 12);  // ceil(sqrt(8)/0.25)

  const MixDecision b = test_mixing_at(chain, 2, 0.5, mix);
  CHECK(b.verdict == a.verdict);
  CHECK(b.walks == a.walks);
  CHECK(b.rejected_states == a.rejected_states);

  MixingConfig threaded = mix;
  threaded.threads = 3;
  const MixDecision c = test_mixing_at(chain, 2, 0.5, threaded);
  CHECK(c.verdict == a.verdict);
  CHECK(c.walks == a.walks);
  CHECK(c.rejected_states == a.rejected_states);

  CHECK_THROWS_AS(test_mixing_at(chain, 0, 0.5, mix), std::invalid_argument);
  CHECK_THROWS_AS(test_mixing_at(chain, 1, 0.0, mix), std::invalid_argument);
}

TEST_CASE("mixing test accepts an instantly mixing chain") {
  const MarkovChain chain = make_complete_chain(2);
  MixingConfig mix;
  int accepts = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    mix.seed = 100 + seed;
    accepts += test_mixing_at(chain, 1, 0.5, mix).verdict == Verdict::kAccept;
  }
  CHECK(accepts >= 4);
}

TEST_CASE("mixing test rejects two weakly joined 25-cliques at t0 = 1") {
  const MarkovChain chain = make_two_clique_chain(25, 0.04);
  // The instance really is far at t0 = 1: every state's one-step law stays
  // inside its own clique while the average straddles both.
  const std::vector<double> avg = exact_average_t_step(chain, 1);
  double worst = 0.0;
  for (std::uint32_t x = 0; x < 50; ++x) {
    const std::vector<double> row = exact_t_step_row(chain, x, 1);
    double l1 = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
      l1 += std::fabs(row[i] - avg[i]);
    worst = std::max(worst, l1);
  }
  CHECK(worst >= 0.5);

  MixingConfig mix;
  int rejects = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    mix.seed = static_cast<std::uint64_t>(900 + t);
    rejects += test_mixing_at(chain, 1, 0.5, mix).verdict == Verdict::kReject;
  }
  CHECK(3 * rejects >= 2 * trials);
}

TEST_CASE("estimator repeat schedule is odd and grows slowly") {
  CHECK(estimate_repeats(100, 1) == 1);
  CHECK(estimate_repeats(100, std::int64_t{1} << 20) == 3);
  CHECK(estimate_repeats(2, 1) == 1);
  for (std::int64_t t0 = 1; t0 <= (std::int64_t{1} << 22); t0 *= 8)
    CHECK(estimate_repeats(1000, t0) % 2 == 1);
}

TEST_CASE("estimator lands on t = 1 for the complete chain") {
  const MarkovChain chain = make_complete_chain(4);
  chain.reset_query_count();
  MixingConfig mix;
  mix.seed = 21;
  const MixingEstimate est = estimate_mixing_time(chain, 0.5, mix);
  CHECK(est.t_estimate == 1);
  REQUIRE(est.attempts.size() == 1);
  CHECK(est.attempts[0].accepted);
  CHECK(est.queries > 0);

  const MixingEstimate again = estimate_mixing_time(chain, 0.5, mix);
  CHECK(again.t_estimate == est.t_estimate);
  CHECK(again.queries == est.queries);
}

TEST_CASE("estimator returns a power of two beyond the slow start") {
  const MarkovChain chain = make_two_clique_chain(4, 0.2);
  MixingConfig mix;
  mix.seed = 33;
  const MixingEstimate est = estimate_mixing_time(chain, 0.5, mix);
  CHECK(est.t_estimate >= 2);  // far at t = 1, so the first attempt rejects
  CHECK((est.t_estimate & (est.t_estimate - 1)) == 0);
  CHECK(est.attempts.size() >= 2);
  CHECK_FALSE(est.attempts.front().accepted);
  CHECK(est.attempts.back().accepted);
}

TEST_CASE("estimator throws when the cap is too small") {
  const MarkovChain chain = make_two_clique_chain(25, 0.04);
  MixingConfig mix;
  mix.seed = 5;
  mix.t0_cap = 1;  // two 25-cliques cannot mix in one step
  CHECK_THROWS_AS(estimate_mixing_time(chain, 0.5, mix), std::runtime_error);
}
