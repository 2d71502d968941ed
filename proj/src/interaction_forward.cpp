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

#include "drivebehave/interaction_forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drivebehave/errors.hpp"
#include "drivebehave/numeric.hpp"

namespace drivebehave {

namespace {

void expect_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError(std::string("interaction: ") + name + " is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void InteractionWeights::validate() const {
  if (d_model <= 0 || d_model % 2 != 0) throw ConfigError("interaction: d_model must be positive and even");
  if (heads <= 0 || d_model % heads != 0) throw ConfigError("interaction: d_model must be divisible by heads");
  if (neighbors < 0) throw ConfigError("interaction: negative neighbor count");
  const Eigen::Index d = d_model;
  const Eigen::Index n = neighbors;
  const Eigen::Index h = heads;
  if (query_position.size() != static_cast<std::size_t>(heads) ||
      key_position.size() != static_cast<std::size_t>(heads)) {
    throw InputError("interaction: need one position term per head");
  }
  for (const auto& k : key_position) expect_shape(k, n, n, "key position mixing");
  expect_shape(output, d_k(), d, "output projection");
  expect_shape(gate, d, h + n + 1, "gate weights");
  expect_shape(gate_bias, d, 1, "gate bias");
  expect_shape(ffn1, d, d, "W1");
  expect_shape(ffn1_bias, 1, d, "b1");
  expect_shape(ffn2, h, n + 1, "W2");
  expect_shape(ffn2_bias, 1, n + 1, "b2");
  expect_shape(mlp, d, d, "MLP weights");
  expect_shape(mlp_bias, 1, d, "MLP bias");
}

InteractionWeights InteractionWeights::seeded(int d_model, int heads, int neighbors, std::uint64_t seed) {
  InteractionWeights w;
  w.d_model = d_model;
  w.heads = heads;
  w.neighbors = neighbors;
  if (d_model <= 0 || d_model % 2 != 0) throw ConfigError("interaction: d_model must be positive and even");
  if (heads <= 0 || d_model % heads != 0) throw ConfigError("interaction: d_model must be divisible by heads");
  if (neighbors < 0) throw ConfigError("interaction: negative neighbor count");
  const Eigen::Index d = d_model;
  const Eigen::Index n = neighbors;
  const Eigen::Index h = heads;
  const double sd = 1.0 / std::sqrt(static_cast<double>(d));
  std::uint64_t stream = seed * 0x100000001b3ULL;
  auto next = [&stream](Eigen::Index rows, Eigen::Index cols, double scale) {
    return seeded_matrix(rows, cols, ++stream, scale);
  };
  for (int i = 0; i < heads; ++i) {
    w.query_position.push_back(next(1, 1, 1.0)(0, 0));
    w.key_position.push_back(next(n, n, 1.0 / std::sqrt(static_cast<double>(std::max(neighbors, 1)))));
  }
  w.output = next(w.d_k(), d, 1.0 / std::sqrt(static_cast<double>(w.d_k())));
  w.gate = next(d, h + n + 1, 1.0 / std::sqrt(static_cast<double>(h + n + 1)));
  w.gate_bias = next(d, 1, sd).col(0);
  w.ffn1 = next(d, d, sd);
  w.ffn1_bias = next(1, d, sd).row(0);
  w.ffn2 = next(h, n + 1, 1.0 / std::sqrt(static_cast<double>(h)));
  w.ffn2_bias = next(1, n + 1, sd).row(0);
  w.mlp = next(d, d, sd);
  w.mlp_bias = next(1, d, sd).row(0);
  return w;
}

Eigen::MatrixXd sinusoid_table(const Eigen::MatrixXd& tokens) {
  const Eigen::Index d = tokens.cols();
  if (d % 2 != 0) throw ConfigError("positional encoding: d_model must be even");
  Eigen::MatrixXd table(tokens.rows(), d);
  for (Eigen::Index k = 0; 2 * k < d; ++k) {
    const double scale = std::pow(10000.0, static_cast<double>(2 * k) / static_cast<double>(d));
    for (Eigen::Index r = 0; r < tokens.rows(); ++r) {
      table(r, 2 * k) = std::sin(tokens(r, 2 * k) / scale);
      table(r, 2 * k + 1) = std::cos(tokens(r, 2 * k + 1) / scale);
    }
  }
  return table;
}

Eigen::MatrixXd positional_encoding(const Eigen::MatrixXd& tokens) { return tokens + sinusoid_table(tokens); }

AttentionResult multi_head_attention(const Eigen::MatrixXd& tokens, const Eigen::MatrixXd& positions,
                                     const InteractionWeights& weights) {
  weights.validate();
  const Eigen::Index n = weights.neighbors;
  if (n == 0 || tokens.rows() < 2) throw InputError("attention: empty neighborhood");
  expect_shape(tokens, n + 1, weights.d_model, "tokens");
  expect_shape(positions, n + 1, weights.d_model, "positions");

  const Eigen::Index dk = weights.d_k();
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
  AttentionResult result;
  result.weights.resize(weights.heads, n);
  Eigen::MatrixXd heads(weights.heads, dk);
  for (int i = 0; i < weights.heads; ++i) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(i) * dk;
    const Eigen::RowVectorXd query =
        tokens.block(0, c0, 1, dk) + weights.query_position[static_cast<std::size_t>(i)] * positions.block(0, c0, 1, dk);
    const Eigen::MatrixXd keys =
        tokens.block(1, c0, n, dk) + weights.key_position[static_cast<std::size_t>(i)] * positions.block(1, c0, n, dk);
    const Eigen::VectorXd logits = keys * query.transpose() * inv_sqrt_dk;
    const Eigen::VectorXd attn = stable_softmax(logits);
    result.weights.row(i) = attn.transpose();
    heads.row(i) = attn.transpose() * tokens.block(1, c0, n, dk);
  }
  result.features = heads * weights.output;
  return result;
}

GatedFfnResult gated_ffn(const Eigen::MatrixXd& attended, const Eigen::MatrixXd& positions,
                         const InteractionWeights& weights) {
  weights.validate();
  const Eigen::Index d = weights.d_model;
  const Eigen::Index n = weights.neighbors;
  expect_shape(attended, weights.heads, d, "attended features");
  expect_shape(positions, n + 1, d, "positions");

  Eigen::MatrixXd stacked(weights.heads + n + 1, d);
  stacked << attended, positions;
  GatedFfnResult result;
  const Eigen::MatrixXd pre_gate = (weights.gate * stacked).colwise() + weights.gate_bias;
  result.gate = pre_gate.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  const Eigen::MatrixXd hidden = ((attended * weights.ffn1).rowwise() + weights.ffn1_bias).transpose();
  const Eigen::MatrixXd activated = (result.gate * hidden).cwiseMax(0.0);
  result.features = (activated * weights.ffn2).rowwise() + weights.ffn2_bias;
  return result;
}

Eigen::MatrixXd interaction_output(const Eigen::MatrixXd& ffn_features, const InteractionWeights& weights) {
  weights.validate();
  expect_shape(ffn_features, weights.d_model, weights.neighbors + 1, "FFN features");
  return (ffn_features.transpose() * weights.mlp).rowwise() + weights.mlp_bias;
}

InteractionForward interaction_forward(const Eigen::MatrixXd& tokens, const InteractionWeights& weights) {
  InteractionForward out;
  out.positions = positional_encoding(tokens);
  out.attention = multi_head_attention(tokens, out.positions, weights);
  out.ffn = gated_ffn(out.attention.features, out.positions, weights);
  out.output = interaction_output(out.ffn.features, weights);
  return out;
}

}  // namespace drivebehave
