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

#include "drivebehave/fuzzy_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "drivebehave/errors.hpp"

namespace drivebehave {

const char* to_string(Level level) {
  switch (level) {
    case Level::Low:
      return "L";
    case Level::Medium:
      return "M";
    case Level::High:
      return "H";
  }
  return "?";
}

Level level_from_string(const std::string& name) {
  if (name == "L") return Level::Low;
  if (name == "M") return Level::Medium;
  if (name == "H") return Level::High;
  throw InputError("unknown aggressiveness level '" + name + "'");
}

double Trapezoid::operator()(double x) const {
  if (x < a || x > d) return 0.0;
  if (x >= b && x <= c) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (d - x) / (d - c);
}

double Trapezoid::centroid() const {
  const double rise = 0.5 * (b - a);
  const double flat = c - b;
  const double fall = 0.5 * (d - c);
  const double area = rise + flat + fall;
  if (!(area > 0.0)) return a;
  const double moment = rise * (a + 2.0 * (b - a) / 3.0) + flat * 0.5 * (b + c) + fall * (c + (d - c) / 3.0);
  return moment / area;
}

void MembershipSet::validate(const char* name) const {
  for (const auto& t : levels) {
    if (!(0.0 <= t.a && t.a <= t.b && t.b <= t.c && t.c <= t.d && t.d <= 1.0)) {
      throw ConfigError(std::string("fuzzy: breakpoints of '") + name + "' must satisfy 0 <= a <= b <= c <= d <= 1");
    }
  }
  for (std::size_t l = 1; l < levels.size(); ++l) {
    if (levels[l].a < levels[l - 1].a || levels[l].d < levels[l - 1].d) {
      throw ConfigError(std::string("fuzzy: levels of '") + name + "' must be sorted L <= M <= H");
    }
  }
}

MembershipSet MembershipSet::default_bie() {
  return {{Trapezoid{0.0, 0.0, 0.0, 0.3}, Trapezoid{0.2, 0.5, 0.5, 0.8}, Trapezoid{0.7, 1.0, 1.0, 1.0}}};
}

MembershipSet MembershipSet::default_bfe() {
  return {{Trapezoid{0.0, 0.0, 0.0, 0.35}, Trapezoid{0.3, 0.5, 0.5, 0.75}, Trapezoid{0.65, 1.0, 1.0, 1.0}}};
}

MembershipSet MembershipSet::default_score() {
  return {{Trapezoid{0.0, 0.0, 0.2, 0.4}, Trapezoid{0.3, 0.5, 0.5, 0.7}, Trapezoid{0.6, 0.8, 0.8, 1.0}}};
}

void FuzzyConfig::validate() const {
  if (!(q >= 1.0) || !std::isfinite(q)) throw ConfigError("fuzzy: q must be >= 1");
  if (!(o >= 0.0) || !(h >= 0.0) || !(o + h > 0.0)) throw ConfigError("fuzzy: need o, h >= 0 and o + h > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("fuzzy: beta must be positive");
  if (!(w_bfe_base > 0.0) || !(w_bie_base > w_bfe_base) || !std::isfinite(w_bie_base)) {
    throw ConfigError("fuzzy: base weights must satisfy w_bie > w_bfe > 0");
  }
  if (!(0.0 < thresholds.low && thresholds.low <= thresholds.high && thresholds.high <= 1.0)) {
    throw ConfigError("fuzzy: level thresholds must satisfy 0 < low <= high <= 1");
  }
  bie.validate("bie");
  bfe.validate("bfe");
  score.validate("score");
}

bool FuzzyPair::valid(double q, double slack) const {
  return mu >= 0.0 && mu <= 1.0 && nu >= 0.0 && nu <= 1.0 && std::pow(mu, q) + std::pow(nu, q) <= 1.0 + slack;
}

std::array<double, 3> membership(double value, const MembershipSet& set) {
  if (!(value >= 0.0 && value <= 1.0)) throw InputError("membership: value outside [0, 1]");
  return {set[Level::Low](value), set[Level::Medium](value), set[Level::High](value)};
}

std::array<double, 3> membership(double value, Criterion criterion, const FuzzyConfig& config) {
  switch (criterion) {
    case Criterion::Bie:
      return membership(value, config.bie);
    case Criterion::Bfe:
      return membership(value, config.bfe);
    case Criterion::Score:
      return membership(value, config.score);
  }
  return {};
}

double non_membership(double mu, double q) {
  const double mq = std::clamp(std::pow(mu, q), 0.0, 1.0);
  return std::pow(1.0 - mq, 1.0 / q);
}

LevelPairs fuzzify(double value, const MembershipSet& set, double q) {
  const auto mu = membership(value, set);
  LevelPairs pairs;
  for (std::size_t l = 0; l < 3; ++l) pairs[l] = {mu[l], non_membership(mu[l], q)};
  return pairs;
}

RuleTable RuleTable::standard() {
  using enum Level;
  RuleTable table;
  // Rows: BIE level; columns: BFE level (L, M, H).
  table.consequent[0] = {Low, Low, Medium};
  table.consequent[1] = {Medium, Medium, High};
  table.consequent[2] = {High, High, High};
  return table;
}

namespace {

struct Line {
  double slope;
  double intercept;
};

// Rising and falling edges of a trapezoid as lines; vertical edges are skipped.
void edge_lines(const Trapezoid& t, std::vector<Line>& out) {
  if (t.b > t.a) out.push_back({1.0 / (t.b - t.a), -t.a / (t.b - t.a)});
  if (t.d > t.c) out.push_back({-1.0 / (t.d - t.c), t.d / (t.d - t.c)});
}

}  // namespace

double clipped_union_centroid(const MembershipSet& sets, const std::array<double, 3>& heights) {
  auto f = [&](double x) {
    double v = 0.0;
    for (std::size_t l = 0; l < 3; ++l) v = std::max(v, std::min(heights[l], sets.levels[l](x)));
    return v;
  };
  // Between consecutive candidates every clipped set and their maximum are
  // linear, so integrating piecewise is exact.
  std::vector<double> xs{0.0, 1.0};
  std::vector<Line> lines;
  for (std::size_t l = 0; l < 3; ++l) {
    const Trapezoid& t = sets.levels[l];
    xs.insert(xs.end(), {t.a, t.b, t.c, t.d});
    edge_lines(t, lines);
  }
  for (double h : heights) lines.push_back({0.0, h});
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double ds = lines[i].slope - lines[j].slope;
      if (ds == 0.0) continue;
      xs.push_back((lines[j].intercept - lines[i].intercept) / ds);
    }
  }
  std::erase_if(xs, [](double x) { return !(x >= 0.0 && x <= 1.0); });
  std::sort(xs.begin(), xs.end());
  double area = 0.0, moment = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double x0 = xs[k - 1], x1 = xs[k];
    const double w = x1 - x0;
    if (w <= 0.0) continue;
    // Sampled inside the piece so a vertical edge at either end does not leak in.
    const double g1 = f(x0 + w / 3.0), g2 = f(x0 + 2.0 * w / 3.0);
    const double f0 = 2.0 * g1 - g2, f1 = 2.0 * g2 - g1;
    area += 0.5 * w * (f0 + f1);
    moment += w / 6.0 * (f0 * (2.0 * x0 + x1) + f1 * (x0 + 2.0 * x1));
  }
  if (!(area > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return moment / area;
}

RuleFiring fire_rules(const LevelPairs& bie, const LevelPairs& bfe, const RuleTable& table,
                      const FuzzyConfig& config) {
  RuleFiring firing;
  firing.activations.fill(FuzzyPair{0.0, 1.0});
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t f = 0; f < 3; ++f) {
      const double mu = std::min(bie[b].mu, bfe[f].mu);
      const double nu = std::max(bie[b].nu, bfe[f].nu);
      auto& out = firing.activations[static_cast<std::size_t>(table(static_cast<Level>(b), static_cast<Level>(f)))];
      out.mu = std::max(out.mu, mu);
      out.nu = std::min(out.nu, nu);
    }
  }

  std::array<double, 3> heights{};
  for (std::size_t l = 0; l < 3; ++l) heights[l] = firing.activations[l].mu;
  double c = clipped_union_centroid(config.score, heights);
  if (std::isnan(c)) c = config.score.levels[0].centroid();
  c = std::clamp(c, 0.0, 1.0);
  firing.aggregated = {std::pow(c, 1.0 / config.q), std::pow(1.0 - c, 1.0 / config.q)};
  return firing;
}

std::vector<double> time_decay_weights(std::span<const double> timestamps, double now, double beta,
                                       std::span<const double> base) {
  if (timestamps.empty()) throw InputError("time decay: no timestamps");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("time decay: beta must be positive");
  if (!base.empty() && base.size() != timestamps.size()) throw InputError("time decay: base weight count mismatch");
  double latest = -std::numeric_limits<double>::infinity();
  for (double t : timestamps) {
    if (!std::isfinite(t) || t > now + 1e-9) throw InputError("time decay: timestamp after the current time");
    latest = std::max(latest, t);
  }
  std::vector<double> weights(timestamps.size());
  double total = 0.0;
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    const double b = base.empty() ? 1.0 : base[i];
    if (!(b >= 0.0) || !std::isfinite(b)) throw InputError("time decay: base weights must be nonnegative");
    // Measured from the latest sample; the common factor cancels on normalization.
    weights[i] = std::exp(-beta * (latest - timestamps[i])) * b;
    total += weights[i];
  }
  if (!(total > 0.0)) throw InputError("time decay: base weights sum to zero");
  for (double& w : weights) w /= total;
  return weights;
}

namespace {

// Einstein operations on q-th powers: a = mu^q, b = nu^q.
double scale_membership(double a, double lambda) {
  const double p = std::pow(1.0 + a, lambda);
  const double m = std::pow(1.0 - a, lambda);
  return (p - m) / (p + m);
}

double power_membership(double a, double k) {
  const double z = std::pow(a, k);
  return 2.0 * z / (std::pow(2.0 - a, k) + z);
}

double scale_non_membership(double b, double lambda) {
  const double z = std::pow(b, lambda);
  return 2.0 * z / (std::pow(2.0 - b, lambda) + z);
}

double power_non_membership(double b, double k) {
  const double p = std::pow(1.0 + b, k);
  const double m = std::pow(1.0 - b, k);
  return (p - m) / (p + m);
}

void check_side(std::span<const FuzzyPair> pairs, std::span<const double> weights, double q, const char* side) {
  if (pairs.size() != weights.size()) {
    throw InputError(std::string("q-ROFWEBM: ") + side + " pair and weight counts differ");
  }
  for (const auto& p : pairs) {
    if (!p.valid(q, 1e-9)) throw InputError(std::string("q-ROFWEBM: invalid q-ROF pair on ") + side + " side");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError(std::string("q-ROFWEBM: bad weight on ") + side + " side");
  }
}

}  // namespace

QrofwebmTrace qrofwebm(std::span<const FuzzyPair> bie, std::span<const double> bie_weights,
                       std::span<const FuzzyPair> bfe, std::span<const double> bfe_weights,
                       const QrofwebmParams& params) {
  const double q = params.q;
  const double o = params.o;
  const double h = params.h;
  if (!(q >= 1.0)) throw InputError("q-ROFWEBM: q must be >= 1");
  if (!(o >= 0.0) || !(h >= 0.0) || !(o + h > 0.0)) throw InputError("q-ROFWEBM: need o, h >= 0, o + h > 0");
  if (bie.size() != bfe.size()) throw InputError("q-ROFWEBM: BIE and BFE sequences differ in length");
  if (bie.size() < 2) throw InputError("q-ROFWEBM: need at least two pairs per side");
  check_side(bie, bie_weights, q, "BIE");
  check_side(bfe, bfe_weights, q, "BFE");

  const std::size_t m = bie.size();
  const double md = static_cast<double>(m);
  QrofwebmTrace trace;
  trace.x_bie.resize(m);
  trace.x_bfe.resize(m);
  trace.y_bie.resize(m);
  trace.y_bfe.resize(m);
  // Memberships near one are also carried as complements 1 - x: the
  // complement of each membership operation is its non-membership twin
  // applied to the complement. Without this, 1 - x_i x_j rounds to zero and
  // the fractional root turns that into a collapse of a''.
  std::vector<double> cx_bie(m), cx_bfe(m);
  auto complement_of_power = [q](double mu) { return mu > 0.0 ? -std::expm1(q * std::log(mu)) : 1.0; };
  for (std::size_t i = 0; i < m; ++i) {
    trace.x_bie[i] = power_membership(scale_membership(std::pow(bie[i].mu, q), md * bie_weights[i]), o);
    trace.x_bfe[i] = power_membership(scale_membership(std::pow(bfe[i].mu, q), md * bfe_weights[i]), h);
    cx_bie[i] = power_non_membership(scale_non_membership(complement_of_power(bie[i].mu), md * bie_weights[i]), o);
    cx_bfe[i] = power_non_membership(scale_non_membership(complement_of_power(bfe[i].mu), md * bfe_weights[i]), h);
    trace.y_bie[i] = power_non_membership(scale_non_membership(std::pow(bie[i].nu, q), md * bie_weights[i]), o);
    trace.y_bfe[i] = power_non_membership(scale_non_membership(std::pow(bfe[i].nu, q), md * bfe_weights[i]), h);
  }

  // Products over i != j with exponent 1/(m(m-1)), accumulated as log sums.
  const double lambda = 1.0 / (md * (md - 1.0));
  double log_a1 = 0.0, log_a2 = 0.0, log_b1 = 0.0, log_b2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double xi = trace.x_bie[i];
      const double xj = trace.x_bfe[j];
      log_a1 += std::log1p(xi * xj / (1.0 + (1.0 - xi) * (1.0 - xj)));
      // 1 - x_i x_j / (1 + (1 - x_i)(1 - x_j)) in terms of the complements.
      log_a2 += std::log(cx_bie[i] + cx_bfe[j]) - std::log1p(cx_bie[i] * cx_bfe[j]);
      const double yi = trace.y_bie[i];
      const double yj = trace.y_bfe[j];
      const double sum = (yi + yj) / (1.0 + yi * yj);
      log_b1 += std::log(sum);
      log_b2 += std::log(2.0 - sum);
    }
  }
  trace.a1 = std::exp(lambda * log_a1);
  trace.a2 = std::exp(lambda * log_a2);
  trace.b1 = std::exp(lambda * log_b1);
  trace.b2 = std::exp(lambda * log_b2);

  // The averaging exponent is already inside a', a'', b', b''.
  const double mean_mu = std::clamp((trace.a1 - trace.a2) / (trace.a1 + trace.a2), 0.0, 1.0);
  const double mean_mu_complement = std::clamp(2.0 * trace.a2 / (trace.a1 + trace.a2), 0.0, 1.0);
  const double mean_nu = std::clamp(2.0 * trace.b1 / (trace.b1 + trace.b2), 0.0, 1.0);
  trace.u1 = 1.0 + mean_mu;
  trace.u2 = 1.0 - mean_mu;
  trace.v1 = mean_nu;
  trace.v2 = 2.0 - mean_nu;

  const double root = 1.0 / (o + h);
  const double mu_q_complement = power_non_membership(mean_mu_complement, root);
  const double mu_q =
      mu_q_complement < 0.5 ? 1.0 - mu_q_complement : power_membership(mean_mu, root);
  const double nu_q =
      power_non_membership(std::clamp(2.0 * trace.v1 / (trace.v1 + trace.v2), 0.0, 1.0), root);
  trace.output = {std::clamp(std::pow(mu_q, 1.0 / q), 0.0, 1.0), std::clamp(std::pow(nu_q, 1.0 / q), 0.0, 1.0)};
  trace.score = pair_score(trace.output, q);
  return trace;
}

double qrofwebm_defuzzify(std::span<const FuzzyPair> bie, std::span<const double> bie_weights,
                          std::span<const FuzzyPair> bfe, std::span<const double> bfe_weights,
                          const QrofwebmParams& params) {
  return qrofwebm(bie, bie_weights, bfe, bfe_weights, params).score;
}

double pair_score(const FuzzyPair& pair, double q) {
  const double mu_q = std::pow(pair.mu, q);
  const double denom = std::max(mu_q + std::pow(pair.nu, q), 1e-300);
  if (mu_q == 0.0) return 0.0;
  return std::clamp(mu_q / denom, 0.0, 1.0);
}

Level classify_level(double score, const LevelThresholds& thresholds) {
  if (score < thresholds.low) return Level::Low;
  if (score >= thresholds.high) return Level::High;
  return Level::Medium;
}

AggressivenessScore score_agent(std::span<const double> bie_inputs, std::span<const double> bfe_inputs,
                                std::span<const double> timestamps, double now, const FuzzyConfig& config,
                                const RuleTable& table) {
  config.validate();
  const std::size_t m = bie_inputs.size();
  if (bfe_inputs.size() != m || timestamps.size() != m) throw InputError("score: input lengths differ");
  if (m < 2) throw InputError("score: need at least two timesteps");

  std::vector<FuzzyPair> aggregated(m);
  for (std::size_t i = 0; i < m; ++i) {
    const LevelPairs bie_pairs = fuzzify(bie_inputs[i], config.bie, config.q);
    const LevelPairs bfe_pairs = fuzzify(bfe_inputs[i], config.bfe, config.q);
    aggregated[i] = fire_rules(bie_pairs, bfe_pairs, table, config).aggregated;
  }

  // Scaled so that the two weight vectors average to a distribution.
  const std::vector<double> decay = time_decay_weights(timestamps, now, config.beta);
  const double total = config.w_bie_base + config.w_bfe_base;
  std::vector<double> w_bie(m), w_bfe(m);
  for (std::size_t i = 0; i < m; ++i) {
    w_bie[i] = decay[i] * 2.0 * config.w_bie_base / total;
    w_bfe[i] = decay[i] * 2.0 * config.w_bfe_base / total;
  }

  const QrofwebmTrace trace = qrofwebm(aggregated, w_bie, aggregated, w_bfe, {config.q, config.o, config.h});
  return {trace.score, classify_level(trace.score, config.thresholds), trace.output};
}

namespace {

struct KMeansResult {
  std::vector<double> centroids;
  double sse = 0.0;
};

KMeansResult lloyd_1d(std::span<const double> samples, std::vector<double> centroids) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> assignment(samples.size(), k);
  for (int iter = 0; iter < 500; ++iter) {
    bool changed = false;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (std::abs(samples[s] - centroids[c]) < std::abs(samples[s] - centroids[best])) best = c;
      }
      if (assignment[s] != best) {
        assignment[s] = best;
        changed = true;
      }
    }
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      sum[assignment[s]] += samples[s];
      ++count[assignment[s]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) centroids[c] = sum[c] / static_cast<double>(count[c]);
    }
    if (!changed) break;
  }
  KMeansResult result;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double d = samples[s] - centroids[assignment[s]];
    result.sse += d * d;
  }
  std::sort(centroids.begin(), centroids.end());
  result.centroids = std::move(centroids);
  return result;
}

std::vector<double> kmeans_plus_plus(std::span<const double> samples, std::size_t k, std::mt19937_64& rng) {
  std::vector<double> centroids;
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  centroids.push_back(samples[pick(rng)]);
  std::vector<double> d2(samples.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centroids) best = std::min(best, (samples[s] - c) * (samples[s] - c));
      d2[s] = best;
      total += best;
    }
    if (!(total > 0.0)) {
      centroids.push_back(samples[pick(rng)]);
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    std::size_t chosen = samples.size() - 1;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      target -= d2[s];
      if (target <= 0.0) {
        chosen = s;
        break;
      }
    }
    centroids.push_back(samples[chosen]);
  }
  return centroids;
}

}  // namespace

Calibration calibrate_boundaries(std::span<const double> samples, int k_min, int k_max, std::uint64_t seed,
                                 int restarts) {
  if (k_min < 1 || k_max < k_min) throw InputError("calibrate: need 1 <= k_min <= k_max");
  if (samples.size() < static_cast<std::size_t>(k_max)) {
    throw InputError("calibrate: fewer samples than clusters");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw InputError("calibrate: non-finite sample");
  }
  std::mt19937_64 rng(seed);
  Calibration out;
  for (int k = k_min; k <= k_max; ++k) {
    KMeansResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, restarts); ++r) {
      KMeansResult trial = lloyd_1d(samples, kmeans_plus_plus(samples, static_cast<std::size_t>(k), rng));
      if (trial.sse < best.sse) best = std::move(trial);
    }
    out.ks.push_back(k);
    out.sse.push_back(best.sse);
    out.centroids.push_back(best.centroids);
  }
  // Curvature of the SSE curve with both axes scaled to [0, 1], so the pick
  // does not depend on the sample count or spread.
  std::size_t elbow = 0;
  const auto [lo, hi] = std::minmax_element(out.sse.begin(), out.sse.end());
  if (out.sse.size() >= 3 && *hi > *lo) {
    const double step = 1.0 / static_cast<double>(out.sse.size() - 1);
    auto y = [&](std::size_t i) { return (out.sse[i] - *lo) / (*hi - *lo); };
    double best_curvature = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < out.sse.size(); ++i) {
      const double slope = (y(i + 1) - y(i - 1)) / (2.0 * step);
      const double bend = (y(i - 1) - 2.0 * y(i) + y(i + 1)) / (step * step);
      const double curvature = bend / std::pow(1.0 + slope * slope, 1.5);
      if (curvature > best_curvature) {
        best_curvature = curvature;
        elbow = i;
      }
    }
  }
  out.elbow_k = out.ks[elbow];
  out.elbow_centroids = out.centroids[elbow];
  return out;
}

}  // namespace drivebehave
