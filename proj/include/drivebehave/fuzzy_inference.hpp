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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drivebehave {

enum class Level { Low = 0, Medium = 1, High = 2 };
enum class Criterion { Bie, Bfe, Score };

const char* to_string(Level level);
Level level_from_string(const std::string& name);

/// Piecewise-linear membership: 0 outside [a, d], rising on (a, b), 1 on
/// [b, c], falling on (c, d). a == b or c == d give shoulders.
struct Trapezoid {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  double operator()(double x) const;
  /// Centroid of the membership curve over [a, d].
  double centroid() const;
};

/// Low / Medium / High fuzzy sets of one criterion over [0, 1].
struct MembershipSet {
  std::array<Trapezoid, 3> levels;

  const Trapezoid& operator[](Level level) const { return levels[static_cast<std::size_t>(level)]; }
  void validate(const char* name) const;

  static MembershipSet default_bie();
  static MembershipSet default_bfe();
  static MembershipSet default_score();
};

struct LevelThresholds {
  double low = 0.3;   // s < low -> L
  double high = 0.7;  // s >= high -> H
};

struct FuzzyConfig {
  double q = 2.0;
  double o = 1.0;
  double h = 1.0;
  double beta = 0.5;  // 1/s
  double w_bie_base = 0.6;
  double w_bfe_base = 0.4;
  MembershipSet bie = MembershipSet::default_bie();
  MembershipSet bfe = MembershipSet::default_bfe();
  MembershipSet score = MembershipSet::default_score();
  LevelThresholds thresholds;

  void validate() const;
};

/// q-rung orthopair fuzzy number; valid when mu^q + nu^q <= 1.
struct FuzzyPair {
  double mu = 0.0;
  double nu = 1.0;

  bool valid(double q, double slack = 1e-12) const;
};

using LevelPairs = std::array<FuzzyPair, 3>;

/// (mu_L, mu_M, mu_H) of `value` in [0, 1]. InputError outside [0, 1].
std::array<double, 3> membership(double value, const MembershipSet& set);
std::array<double, 3> membership(double value, Criterion criterion, const FuzzyConfig& config);

/// nu = (1 - mu^q)^(1/q).
double non_membership(double mu, double q);

/// Memberships of a crisp value turned into q-ROF pairs per level.
LevelPairs fuzzify(double value, const MembershipSet& set, double q);

/// Consequent level for every (BIE level, BFE level) antecedent.
struct RuleTable {
  std::array<std::array<Level, 3>, 3> consequent{};  // [bie][bfe]

  Level operator()(Level bie, Level bfe) const {
    return consequent[static_cast<std::size_t>(bie)][static_cast<std::size_t>(bfe)];
  }
  /// The nine driver-aggressiveness rules.
  static RuleTable standard();
};

struct RuleFiring {
  /// Per output level: max over rules of min(mu), min over rules of max(nu).
  LevelPairs activations;
  /// Activations projected onto the aggressiveness axis (see fire_rules).
  FuzzyPair aggregated;
};

/// Fires every rule with AND = (min mu, max nu) and aggregates per output
/// level with (max mu, min nu). Each score set is clipped at its level's
/// activation mu, the clipped sets are joined by max, and the centroid c of
/// that union becomes the saturated pair mu^q = c, nu^q = 1 - c. With no
/// activation at all c falls back to the centroid of the L set.
RuleFiring fire_rules(const LevelPairs& bie, const LevelPairs& bfe, const RuleTable& table,
                      const FuzzyConfig& config);

/// Centroid of max_l min(height_l, set_l(x)) over [0, 1], exact for
/// trapezoids. NaN when every height is zero.
double clipped_union_centroid(const MembershipSet& sets, const std::array<double, 3>& heights);

/// Normalized decay weights: w_i proportional to exp(-beta (now - t_i)) * base_i,
/// summing to one. `base` may be empty (uniform).
std::vector<double> time_decay_weights(std::span<const double> timestamps, double now, double beta,
                                       std::span<const double> base = {});

struct QrofwebmParams {
  double q = 2.0;
  double o = 1.0;
  double h = 1.0;
};

/// Every intermediate of the weighted Einstein Bonferroni mean, kept for audit
/// and for checking against an independent evaluation.
struct QrofwebmTrace {
  std::vector<double> x_bie, x_bfe, y_bie, y_bfe;
  double a1 = 0.0, a2 = 0.0;  // a', a''
  double b1 = 0.0, b2 = 0.0;  // b', b''
  double u1 = 0.0, u2 = 0.0;  // u', u''
  double v1 = 0.0, v2 = 0.0;  // v', v''
  FuzzyPair output;
  double score = 0.0;
};

/// Weighted Einstein Bonferroni mean of two equally long pair sequences.
/// Index i runs over `bie`, index j over `bfe`, i != j. Weights must be
/// nonnegative and finite; the caller decides their normalization. Throws
/// InputError for fewer than two pairs per side or mismatched lengths.
QrofwebmTrace qrofwebm(std::span<const FuzzyPair> bie, std::span<const double> bie_weights,
                       std::span<const FuzzyPair> bfe, std::span<const double> bfe_weights,
                       const QrofwebmParams& params);

/// Crisp score of the operator output: mu^q / (mu^q + nu^q), 0 when both vanish.
double qrofwebm_defuzzify(std::span<const FuzzyPair> bie, std::span<const double> bie_weights,
                          std::span<const FuzzyPair> bfe, std::span<const double> bfe_weights,
                          const QrofwebmParams& params);

double pair_score(const FuzzyPair& pair, double q);

Level classify_level(double score, const LevelThresholds& thresholds);

struct AggressivenessScore {
  double score = 0.0;
  Level level = Level::Low;
  FuzzyPair pair_trace;
};

/// Full inference for one agent: fuzzify each timestep's BIE/BFE inputs, fire
/// the rules, weight the aggregated pairs by time decay, and defuzzify.
/// Inputs are normalized criteria in [0, 1]; at least two timesteps.
AggressivenessScore score_agent(std::span<const double> bie_inputs, std::span<const double> bfe_inputs,
                                std::span<const double> timestamps, double now, const FuzzyConfig& config,
                                const RuleTable& table = RuleTable::standard());

struct Calibration {
  std::vector<int> ks;
  std::vector<double> sse;
  /// Sorted centroids for every k in `ks`.
  std::vector<std::vector<double>> centroids;
  /// k of largest curvature of the SSE curve, both axes scaled to [0, 1].
  int elbow_k = 1;
  std::vector<double> elbow_centroids;
};

/// 1-D k-means (Lloyd) for k in [k_min, k_max] with seeded k-means++ restarts.
Calibration calibrate_boundaries(std::span<const double> samples, int k_min, int k_max, std::uint64_t seed = 7,
                                 int restarts = 8);

}  // namespace drivebehave
