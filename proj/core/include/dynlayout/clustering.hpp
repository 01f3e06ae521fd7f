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
#include <span>
#include <vector>

#include "dynlayout/graph.hpp"

namespace dynlayout::clustering {

// Labels are 1-based cluster ids in {1..k}.
using Labels = std::vector<int>;

struct KMeansOptions {
  int restarts = 100;
  int max_iterations = 300;
};

struct KMeansResult {
  Labels labels;
  Matrix centroids;
  double within_ss = 0.0;
};

// Seeded k-means on the rows of `points`: each restart starts from a
// furthest-first seeding whose first center is drawn at random; the restart
// with the lowest within-cluster sum of squares is kept.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

// Normalized-cut spectral clustering: rows of the k smallest generalized
// eigenvectors of (L, D) of the (floored) affinity, unit-normalized, then
// seeded k-means. Isolated nodes embed at the origin.
Labels spectral_cluster(const Matrix& affinity, int k, std::uint64_t seed);

// Forgetting-factor estimate from block sample means and variances of W over
// the clusters in `labels` (diagonal entries excluded), clipped to [0, 1].
double affect_alpha(const Matrix& smoothed_prev, const Matrix& W, std::span<const int> labels);

// alpha * prev + (1 - alpha) * W.
Matrix affect_smooth(const Matrix& smoothed_prev, const Matrix& W, double alpha);

struct AffectStep {
  Labels labels;
  Matrix smoothed;
  double alpha = 0.0;
  int refinements = 0;
};

// One AFFECT step. Without history (`smoothed_prev` empty) alpha = 0 and the
// labels come from static clustering of W. Otherwise clusters start from
// `prev_labels`, and alpha estimation alternates with spectral clustering of
// the smoothed matrix until labels stop changing or `max_refine` rounds.
// Returned labels are matched to `prev_labels` by maximum overlap.
AffectStep affect_cluster_step(const Matrix& smoothed_prev, const Matrix& W, std::span<const int> prev_labels, int k,
                               std::uint64_t seed, int max_refine = 10);

// Permutation of {1..k} applied to `labels` that maximizes agreement with
// `reference` (Hungarian assignment on the overlap table).
Labels match_labels(std::span<const int> labels, std::span<const int> reference, int k);

// The permutation behind match_labels: entry l-1 is the new id of label l.
std::vector<int> label_permutation(std::span<const int> labels, std::span<const int> reference, int k);

// True when both labelings induce the same partition.
bool same_partition(std::span<const int> a, std::span<const int> b);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace dynlayout::clustering
