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

#include <vector>

#include "dynlayout/layout.hpp"

namespace dynlayout::mds {

struct SmacofOptions {
  double epsilon = 1e-4;
  int max_iterations = 1000;
};

struct SmacofReport {
  int iterations = 0;
  // Objective at the start point followed by the value after every iteration.
  std::vector<double> stress_trace;
  bool hit_iteration_cap = false;
};

struct MdsResult {
  Layout layout;
  SmacofReport report;
};

// (1/2) sum_ij v_ij (delta_ij - ||x_i - x_j||)^2. Pairs with v_ij = 0 are
// skipped, so unreachable (infinite) distances are allowed there.
double stress(const Matrix& X, const Matrix& delta, const Matrix& V);

// r_ij = -v_ij off the diagonal, r_ii = sum_{k != i} v_ik.
Matrix build_R(const Matrix& V);

// s_ij = -v_ij delta_ij / ||z_i - z_j|| off the diagonal (0 for coincident
// rows), diagonal chosen so rows sum to zero.
Matrix build_S(const Matrix& V, const Matrix& delta, const Matrix& Z);

// Group-augmented weights [[V, aC], [aC^T, 0]] and zero-filled distances.
struct AugmentedMdsSystem {
  Matrix V;
  Matrix delta;
  int nodes = 0;
  int groups = 0;
};
AugmentedMdsSystem augment_mds(const Matrix& V, const Matrix& delta, const Matrix& C, double alpha);

// Static stress MDS by SMACOF from `initial`, with row 0 pinned at the origin
// to remove translation freedom. Rows without any weight keep their start
// position. Throws NumericalFailure if the reduced system is singular (a
// weight component without an anchor).
MdsResult smacof_static(const Matrix& delta, const Matrix& V, const Matrix& initial, const SmacofOptions& options = {});

// Stress + alpha * grouping cost + beta * temporal cost. `augmented` and
// `previous` are (n+k) x s; `presence` has n entries.
double modified_stress(const Matrix& augmented, const Matrix& delta, const Matrix& V, const Matrix& C, double alpha,
                       double beta, const Vector& presence, const Matrix& previous);

// Dynamic MDS: majorizes the modified stress, solving
// (R~ + beta E~) x_a = S~(X~) x_a + beta E~ x_a[t-1] per dimension with a
// single Cholesky factorization. `previous` is the (n+k) x s previous layout
// and also the start point (rows of new nodes pre-initialized by the caller).
// Without any temporally anchored node, row 0 is pinned at the origin.
MdsResult dmds_layout(const Matrix& delta, const Matrix& V, const Matrix& C, double alpha, double beta,
                      const Vector& presence, const Matrix& previous, const SmacofOptions& options = {});

// On-line stabilized MDS: localized per-node updates
// x_ia = (sum_j v_ij (x_ja + delta_ij (x_ia - x_ja)/d_ij) + beta e_i x_ia[t-1])
//        / (sum_j v_ij + beta e_i), all from the previous iterate.
MdsResult stabilized_mds_online(const Matrix& delta, const Matrix& V, double beta, const Vector& presence,
                                const Matrix& previous, const SmacofOptions& options = {});

}  // namespace dynlayout::mds
