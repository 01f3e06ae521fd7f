// Copyright 2026 The dynlayout Authors.
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
#include <optional>
#include <vector>

#include "dynlayout/graph.hpp"
#include "dynlayout/rng.hpp"

namespace dynlayout::sbm {

struct SbmConfig {
  int n = 30;
  int k = 4;
  Matrix P;  // k x k symmetric edge probabilities
  int T = 20;
  std::optional<int> change_step;
  double change_fraction = 0.0;
  // Near-equal group sizes instead of independent uniform labels.
  bool balanced = false;
  std::uint64_t seed = 0;

  // Two-level block matrix: p_in on the diagonal, p_out elsewhere.
  static Matrix two_level(int k, double p_in, double p_out);
  // 30 nodes, 4 groups, p_in 0.6, p_out 0.2, 20 steps, a quarter of the
  // nodes reassigned at t = 10.
  static SbmConfig protocol(std::uint64_t seed);
};

struct SbmSequence {
  DynamicNetwork network;
  // truth[t][i]: planted label in {1..k} of node i (registry order) at t.
  std::vector<std::vector<int>> truth;
};

// Independent Bernoulli(P[label_i, label_j]) edges per unordered pair.
// Labels are 1-based.
Matrix sbm_sample(const Matrix& P, const std::vector<int>& labels, Rng& rng);

// Full sequence with every node active at every step and the planted labels
// attached as known groups. Node identifiers are "1".."n".
SbmSequence sbm_sequence(const SbmConfig& config);

// Number of nodes reassigned at the change step.
int reassigned_count(const SbmConfig& config);

}  // namespace dynlayout::sbm
