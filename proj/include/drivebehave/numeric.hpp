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

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace drivebehave {

/// Fixed parameter matrix with entries uniform in [-scale, scale], drawn
/// row-major from a 64-bit Mersenne Twister seeded with `seed`.
inline Eigen::MatrixXd seeded_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      // 53-bit mantissa from one draw; avoids the library-specific distribution classes.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      m(r, c) = scale * (2.0 * u - 1.0);
    }
  }
  return m;
}

/// Softmax with max subtraction.
inline Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) return logits;
  const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace drivebehave
