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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace drivebehave {

/// Fixed parameters of the interaction encoder for `neighbors` surrounding
/// agents. Token matrices have neighbors + 1 rows with the ego in row 0.
struct InteractionWeights {
  int d_model = 0;
  int heads = 0;
  int neighbors = 0;
  /// Per head: scalar scaling of the ego position slice added to the query.
  std::vector<double> query_position;
  /// Per head: neighbors x neighbors mixing of the neighbor position slices added to the keys.
  std::vector<Eigen::MatrixXd> key_position;
  Eigen::MatrixXd output;       // d_k x d_model
  Eigen::MatrixXd gate;         // d_model x (heads + neighbors + 1)
  Eigen::VectorXd gate_bias;    // d_model, added to every gate column
  Eigen::MatrixXd ffn1;         // d_model x d_model
  Eigen::RowVectorXd ffn1_bias; // d_model
  Eigen::MatrixXd ffn2;         // heads x (neighbors + 1)
  Eigen::RowVectorXd ffn2_bias; // neighbors + 1
  Eigen::MatrixXd mlp;          // d_model x d_model
  Eigen::RowVectorXd mlp_bias;  // d_model

  int d_k() const { return heads > 0 ? d_model / heads : 0; }
  /// ConfigError unless d_model is even and divisible by heads, InputError on
  /// inconsistent parameter shapes.
  void validate() const;

  static InteractionWeights seeded(int d_model, int heads, int neighbors, std::uint64_t seed);
};

/// Sinusoidal table evaluated at each token value: column 2k holds
/// sin(x / 10000^(2k/d)), column 2k+1 the matching cosine. ConfigError for odd d.
Eigen::MatrixXd sinusoid_table(const Eigen::MatrixXd& tokens);

/// Position vectors: tokens plus their sinusoid table.
Eigen::MatrixXd positional_encoding(const Eigen::MatrixXd& tokens);

struct AttentionResult {
  Eigen::MatrixXd features;  // heads x d_model, concatenated heads times the output projection
  Eigen::MatrixXd weights;   // heads x neighbors; every row sums to one
};

/// Ego-query attention over the neighbors. Head i reads columns
/// [i d_k, (i+1) d_k) of `tokens` (features) and `positions` (position terms).
/// InputError when there are no neighbors or shapes disagree with `weights`.
AttentionResult multi_head_attention(const Eigen::MatrixXd& tokens, const Eigen::MatrixXd& positions,
                                     const InteractionWeights& weights);

struct GatedFfnResult {
  Eigen::MatrixXd gate;      // d_model x d_model, entries in (0, 1)
  Eigen::MatrixXd features;  // d_model x (neighbors + 1)
};

/// Gate from the stacked [attended; positions] rows, then
/// max(0, gate * (attended W1 + b1)^T) W2 + b2.
GatedFfnResult gated_ffn(const Eigen::MatrixXd& attended, const Eigen::MatrixXd& positions,
                         const InteractionWeights& weights);

/// Final affine map of the transposed FFN output: (neighbors + 1) x d_model.
Eigen::MatrixXd interaction_output(const Eigen::MatrixXd& ffn_features, const InteractionWeights& weights);

struct InteractionForward {
  Eigen::MatrixXd positions;
  AttentionResult attention;
  GatedFfnResult ffn;
  Eigen::MatrixXd output;
};

/// positional_encoding -> multi_head_attention -> gated_ffn -> interaction_output.
InteractionForward interaction_forward(const Eigen::MatrixXd& tokens, const InteractionWeights& weights);

}  // namespace drivebehave
