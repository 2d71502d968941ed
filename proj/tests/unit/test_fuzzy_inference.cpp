// Copyright 2026 The drivebehave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "drivebehave/errors.hpp"
#include "drivebehave/fuzzy_inference.hpp"
#include "oracles.hpp"

namespace drivebehave {
namespace {

using testing::literal_bonferroni;

FuzzyPair random_pair(std::mt19937_64& rng, double q) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mu = u(rng);
  const double nu = std::pow(u(rng) * (1.0 - std::pow(mu, q)), 1.0 / q);
  return {mu, nu};
}

LevelPairs random_levels(std::mt19937_64& rng, double q) {
  return {random_pair(rng, q), random_pair(rng, q), random_pair(rng, q)};
}

LevelPairs pure(Level level, double q) {
  LevelPairs p;
  for (std::size_t l = 0; l < 3; ++l) {
    const double mu = l == static_cast<std::size_t>(level) ? 1.0 : 0.0;
    p[l] = {mu, non_membership(mu, q)};
  }
  return p;
}

std::vector<double> uniform(std::size_t m) { return std::vector<double>(m, 1.0 / static_cast<double>(m)); }

TEST(Membership, BieGoldenValues) {
  const FuzzyConfig c;
  EXPECT_NEAR(membership(0.15, Criterion::Bie, c)[0], 0.5, 1e-12);
  const auto mid = membership(0.5, Criterion::Bie, c);
  EXPECT_EQ(mid[0], 0.0);
  EXPECT_EQ(mid[1], 1.0);
  EXPECT_EQ(mid[2], 0.0);
}

TEST(Membership, BfeGoldenValues) {
  const auto m = membership(0.70, Criterion::Bfe, FuzzyConfig{});
  EXPECT_NEAR(m[1], 0.2, 1e-12);
  EXPECT_NEAR(m[2], 0.05 / 0.35, 1e-12);
  EXPECT_EQ(m[0], 0.0);
}

TEST(Membership, BreakpointsAreExact) {
  const FuzzyConfig c;
  for (Criterion criterion : {Criterion::Bie, Criterion::Bfe, Criterion::Score}) {
    const MembershipSet& set = criterion == Criterion::Bie ? c.bie : criterion == Criterion::Bfe ? c.bfe : c.score;
    for (std::size_t l = 0; l < 3; ++l) {
      const Trapezoid& t = set.levels[l];
      EXPECT_EQ(membership(t.b, criterion, c)[l], 1.0);
      EXPECT_EQ(membership(t.c, criterion, c)[l], 1.0);
      if (t.a > 0.0) { EXPECT_EQ(membership(t.a, criterion, c)[l], 0.0); }
      if (t.d < 1.0) { EXPECT_EQ(membership(t.d, criterion, c)[l], 0.0); }
    }
  }
}

TEST(Membership, DefaultShapes) {
  const auto score = MembershipSet::default_score();
  EXPECT_EQ(score.levels[0].c, 0.2);
  EXPECT_EQ(score.levels[2].b, 0.8);
  EXPECT_NEAR(score.levels[0].centroid(), 0.4667 / 3.0, 1e-4);
  EXPECT_NEAR(score.levels[1].centroid(), 0.5, 1e-12);
  EXPECT_NEAR(score.levels[2].centroid(), 0.8, 1e-12);
}

TEST(Membership, OutOfRangeThrows) {
  EXPECT_THROW(membership(1.2, Criterion::Bie, FuzzyConfig{}), InputError);
  EXPECT_THROW(membership(-0.01, Criterion::Bfe, FuzzyConfig{}), InputError);
  EXPECT_THROW(membership(NAN, Criterion::Bfe, FuzzyConfig{}), InputError);
}

TEST(NonMembership, Boundaries) {
  EXPECT_EQ(non_membership(1.0, 2.0), 0.0);
  EXPECT_EQ(non_membership(0.0, 2.0), 1.0);
  EXPECT_NEAR(non_membership(0.6, 2.0), 0.8, 1e-15);
}

TEST(FireRules, TableCorners) {
  const FuzzyConfig c;
  const RuleTable table = RuleTable::standard();
  const Level expected[3][3] = {{Level::Low, Level::Low, Level::Medium},
                                {Level::Medium, Level::Medium, Level::High},
                                {Level::High, Level::High, Level::High}};
  for (int b = 0; b < 3; ++b) {
    for (int f = 0; f < 3; ++f) {
      const auto firing = fire_rules(pure(static_cast<Level>(b), c.q), pure(static_cast<Level>(f), c.q), table, c);
      const auto out = static_cast<std::size_t>(expected[b][f]);
      EXPECT_EQ(firing.activations[out].mu, 1.0);
      EXPECT_EQ(firing.activations[out].nu, 0.0);
      for (std::size_t l = 0; l < 3; ++l) {
        if (l != out) { EXPECT_EQ(firing.activations[l].mu, 0.0); }
      }
      EXPECT_NEAR(std::pow(firing.aggregated.mu, c.q), c.score.levels[out].centroid(), 1e-12);
    }
  }
}

TEST(FireRules, VacuousFiring) {
  const FuzzyConfig c;
  const LevelPairs zero{FuzzyPair{0.0, 1.0}, FuzzyPair{0.0, 1.0}, FuzzyPair{0.0, 1.0}};
  const auto firing = fire_rules(zero, zero, RuleTable::standard(), c);
  for (const auto& a : firing.activations) EXPECT_EQ(a.mu, 0.0);
  EXPECT_TRUE(firing.aggregated.valid(c.q, 1e-12));
}

TEST(FireRules, Closure) {
  std::mt19937_64 rng(1);
  for (double q : {1.0, 2.0, 3.0}) {
    FuzzyConfig c;
    c.q = q;
    for (int k = 0; k < 3000; ++k) {
      const auto firing = fire_rules(random_levels(rng, q), random_levels(rng, q), RuleTable::standard(), c);
      for (const auto& a : firing.activations) EXPECT_TRUE(a.valid(q, 1e-9));
      EXPECT_TRUE(firing.aggregated.valid(q, 1e-9));
    }
  }
}

TEST(FireRules, AggregatedScoreIsMonotoneInCrispInputs) {
  const FuzzyConfig c;
  auto aggregated_score = [&](double bie_x, double bfe_x) {
    const auto firing =
        fire_rules(fuzzify(bie_x, c.bie, c.q), fuzzify(bfe_x, c.bfe, c.q), RuleTable::standard(), c);
    return pair_score(firing.aggregated, c.q);
  };
  for (int j = 0; j <= 20; ++j) {
    double previous = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double s = aggregated_score(i / 200.0, j / 20.0);
      EXPECT_GE(s, previous - 1e-12) << "bie " << i / 200.0 << " bfe " << j / 20.0;
      previous = s;
    }
  }
}

TEST(ClippedUnionCentroid, MatchesDenseIntegration) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MembershipSet sets = MembershipSet::default_score();
  for (int k = 0; k < 200; ++k) {
    const std::array<double, 3> h{u(rng), u(rng), u(rng)};
    double area = 0.0, moment = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      double v = 0.0;
      for (std::size_t l = 0; l < 3; ++l) v = std::max(v, std::min(h[l], sets.levels[l](x)));
      area += v;
      moment += v * x;
    }
    EXPECT_NEAR(clipped_union_centroid(sets, h), moment / area, 1e-7);
  }
  EXPECT_TRUE(std::isnan(clipped_union_centroid(sets, {0.0, 0.0, 0.0})));
}

TEST(TimeDecay, NoDecayLimit) {
  const std::vector<double> t{0.0, 0.2, 0.4, 0.6};
  const std::vector<double> base{1.0, 2.0, 3.0, 4.0};
  const auto w = time_decay_weights(t, 0.6, 1e-12, base);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(w[i], base[i] / 10.0, 1e-9);
}

TEST(TimeDecay, HalvingPerSecond) {
  const std::vector<double> t{1.0, 2.0};
  const auto w = time_decay_weights(t, 2.0, std::numbers::ln2);
  EXPECT_NEAR(w[1] / w[0], 2.0, 1e-12);
}

TEST(TimeDecay, SumsToOneAndFavoursRecentSamples) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> t(12);
    for (double& x : t) x = u(rng);
    const auto w = time_decay_weights(t, 10.0, 0.1 + u(rng));
    double sum = 0.0;
    for (double x : w) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[i] > t[j]) { EXPECT_GE(w[i], w[j]); }
      }
    }
  }
}

TEST(TimeDecay, Errors) {
  EXPECT_THROW(time_decay_weights({}, 0.0, 0.5), InputError);
  const std::vector<double> t{0.0, 1.0};
  EXPECT_THROW(time_decay_weights(t, 0.5, 0.5), InputError);
  EXPECT_THROW(time_decay_weights(t, 1.0, 0.0), InputError);
}

TEST(Qrofwebm, AllZeroMembershipScoresZero) {
  const std::vector<FuzzyPair> p(4, FuzzyPair{0.0, 1.0});
  EXPECT_EQ(qrofwebm_defuzzify(p, uniform(4), p, uniform(4), {}), 0.0);
}

TEST(Qrofwebm, Idempotent) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const FuzzyPair p = random_pair(rng, 2.0);
    const std::vector<FuzzyPair> pairs(2, p);
    const auto out = qrofwebm(pairs, uniform(2), pairs, uniform(2), {2.0, 1.0, 1.0}).output;
    EXPECT_NEAR(out.mu, p.mu, 1e-6);
    EXPECT_NEAR(out.nu, p.nu, 1e-6);
  }
}

TEST(Qrofwebm, MatchesLiteralEvaluation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double q = 1.0 + 2.0 * u(rng);
    const double o = 0.2 + 2.0 * u(rng);
    const double h = 0.2 + 2.0 * u(rng);
    const std::size_t m = 2 + static_cast<std::size_t>(u(rng) * 8);
    std::vector<FuzzyPair> a(m), b(m);
    std::vector<double> wa(m), wb(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = random_pair(rng, q);
      b[i] = random_pair(rng, q);
      wa[i] = u(rng) * 2.0 / static_cast<double>(m);
      wb[i] = u(rng) * 2.0 / static_cast<double>(m);
    }
    const auto trace = qrofwebm(a, wa, b, wb, {q, o, h});
    const auto oracle = literal_bonferroni(a, wa, b, wb, q, o, h);
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_NEAR(trace.x_bie[i], oracle.x_bie[i], 1e-9);
      EXPECT_NEAR(trace.y_bfe[i], oracle.y_bfe[i], 1e-9);
    }
    EXPECT_NEAR(trace.a1, oracle.a1, 1e-9);
    EXPECT_NEAR(trace.b2, oracle.b2, 1e-9);
    EXPECT_NEAR(trace.u1, oracle.u1, 1e-9);
    EXPECT_NEAR(trace.v1, oracle.v1, 1e-9);
    EXPECT_NEAR(trace.output.mu, oracle.mu, 1e-9);
    EXPECT_NEAR(trace.output.nu, oracle.nu, 1e-9);
    EXPECT_NEAR(trace.score, oracle.score, 1e-9);
  }
}

TEST(Qrofwebm, Closure) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double q : {1.0, 2.0, 3.0}) {
    for (int k = 0; k < 2000; ++k) {
      const std::size_t m = 2 + k % 10;
      std::vector<FuzzyPair> a(m), b(m);
      std::vector<double> wa(m), wb(m);
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = random_pair(rng, q);
        b[i] = random_pair(rng, q);
        wa[i] = u(rng);
        wb[i] = u(rng);
      }
      const auto out = qrofwebm(a, wa, b, wb, {q, 1.0, 1.0});
      EXPECT_LE(std::pow(out.output.mu, q) + std::pow(out.output.nu, q), 1.0 + 1e-9);
      EXPECT_GE(out.score, 0.0);
      EXPECT_LE(out.score, 1.0);
    }
  }
}

TEST(Qrofwebm, NearUnitMembershipWithHeavyWeights) {
  // Scaled memberships round to one here; the result must stay a valid pair.
  for (double q : {1.0, 2.0, 3.0}) {
    const std::size_t m = 11;
    std::vector<FuzzyPair> a(m, FuzzyPair{0.99999, 0.0}), b(m, FuzzyPair{0.3, 0.5});
    a[0] = {0.999999, std::pow(1e-7, 1.0 / q)};
    const std::vector<double> w(m, 1.0);
    const auto t = qrofwebm(a, w, b, w, {q, 0.65, 1.09});
    EXPECT_GT(t.a2, 0.0);
    EXPECT_LE(std::pow(t.output.mu, q) + std::pow(t.output.nu, q), 1.0 + 1e-9);
    EXPECT_LT(t.output.mu, 1.0);
  }
}

TEST(Qrofwebm, MonotoneInBieMembership) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int counterexamples = 0;
  for (int k = 0; k < 2000; ++k) {
    const double q = 1.0 + 2.0 * u(rng);
    const std::size_t m = 2 + k % 8;
    std::vector<FuzzyPair> a(m), b(m);
    std::vector<double> wa(m), wb(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = random_pair(rng, q);
      a[i].mu *= 0.95;
      b[i] = random_pair(rng, q);
      wa[i] = u(rng) / static_cast<double>(m);
      wb[i] = u(rng) / static_cast<double>(m);
    }
    const double delta = 0.01 * u(rng) + 1e-4;
    std::vector<FuzzyPair> raised = a;
    for (auto& p : raised) {
      p.mu += delta;
      p.nu = std::min(p.nu, non_membership(p.mu, q));
    }
    const QrofwebmParams params{q, 1.0, 1.0};
    if (qrofwebm_defuzzify(raised, wa, b, wb, params) < qrofwebm_defuzzify(a, wa, b, wb, params) - 1e-12) {
      ++counterexamples;
    }
  }
  EXPECT_EQ(counterexamples, 0);
}

TEST(Qrofwebm, Errors) {
  const std::vector<FuzzyPair> one{{0.5, 0.5}};
  const std::vector<double> w1{1.0};
  EXPECT_THROW(qrofwebm(one, w1, one, w1, {}), InputError);
  const std::vector<FuzzyPair> two{{0.5, 0.5}, {0.9, 0.9}};
  EXPECT_THROW(qrofwebm(two, uniform(2), two, uniform(2), {}), InputError);
  const std::vector<FuzzyPair> ok{{0.5, 0.5}, {0.2, 0.1}};
  EXPECT_THROW(qrofwebm(ok, uniform(3), ok, uniform(2), {}), InputError);
  const std::vector<double> negative{-0.1, 0.5};
  EXPECT_THROW(qrofwebm(ok, negative, ok, uniform(2), {}), InputError);
}

TEST(ClassifyLevel, Thresholds) {
  const LevelThresholds t;
  EXPECT_EQ(classify_level(0.2, t), Level::Low);
  EXPECT_EQ(classify_level(0.5, t), Level::Medium);
  EXPECT_EQ(classify_level(0.9, t), Level::High);
  EXPECT_EQ(classify_level(0.3, t), Level::Medium);
  EXPECT_EQ(classify_level(0.7, t), Level::High);
}

TEST(ScoreAgent, OrdersConstantInputs) {
  const FuzzyConfig c;
  std::vector<double> t;
  for (int k = 0; k < 15; ++k) t.push_back(0.2 * k);
  auto score = [&](double x) {
    const std::vector<double> in(15, x);
    return score_agent(in, in, t, t.back(), c);
  };
  const auto low = score(0.0), mid = score(0.5), high = score(1.0);
  EXPECT_LT(low.score, mid.score);
  EXPECT_LT(mid.score, high.score);
  EXPECT_EQ(low.level, Level::Low);
  EXPECT_EQ(mid.level, Level::Medium);
  EXPECT_TRUE(high.pair_trace.valid(c.q, 1e-9));
}

TEST(ScoreAgent, Errors) {
  const std::vector<double> one{0.1};
  EXPECT_THROW(score_agent(one, one, one, 0.1, FuzzyConfig{}), InputError);
  const std::vector<double> two{0.1, 0.2}, three{0.1, 0.2, 0.3};
  EXPECT_THROW(score_agent(two, three, two, 0.2, FuzzyConfig{}), InputError);
}

TEST(FuzzyConfig, Validation) {
  FuzzyConfig c;
  c.q = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FuzzyConfig{};
  c.w_bie_base = 0.3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FuzzyConfig{};
  c.thresholds = {0.8, 0.2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = FuzzyConfig{};
  c.bie.levels[1] = {0.6, 0.5, 0.5, 0.8};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Calibrate, ThreeTightClusters) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> samples;
  for (double centre : {0.1, 0.5, 0.9}) {
    for (int k = 0; k < 100; ++k) samples.push_back(centre + noise(rng));
  }
  const auto cal = calibrate_boundaries(samples, 1, 6);
  ASSERT_EQ(cal.ks.size(), 6u);
  const auto& c3 = cal.centroids[2];
  EXPECT_NEAR(c3[0], 0.1, 0.02);
  EXPECT_NEAR(c3[1], 0.5, 0.02);
  EXPECT_NEAR(c3[2], 0.9, 0.02);
  EXPECT_EQ(cal.elbow_k, 3);
  for (std::size_t i = 1; i < cal.sse.size(); ++i) EXPECT_LE(cal.sse[i], cal.sse[i - 1] + 1e-12);
}

TEST(Calibrate, SingleClusterIsMean) {
  const std::vector<double> samples{0.1, 0.2, 0.6, 0.7};
  const auto cal = calibrate_boundaries(samples, 1, 1);
  EXPECT_NEAR(cal.centroids[0][0], 0.4, 1e-15);
}

TEST(Calibrate, DuplicatesHaveZeroError) {
  const std::vector<double> samples(20, 0.37);
  EXPECT_NEAR(calibrate_boundaries(samples, 1, 2).sse[0], 0.0, 1e-28);
}

TEST(Calibrate, TooFewSamples) {
  const std::vector<double> samples{0.1, 0.2};
  EXPECT_THROW(calibrate_boundaries(samples, 1, 3), InputError);
}

TEST(Calibrate, DeterministicForSeed) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> samples(300);
  for (double& s : samples) s = u(rng);
  const auto a = calibrate_boundaries(samples, 1, 5, 21);
  const auto b = calibrate_boundaries(samples, 1, 5, 21);
  EXPECT_EQ(a.sse, b.sse);
  EXPECT_EQ(a.centroids, b.centroids);
}

}  // namespace
}  // namespace drivebehave
