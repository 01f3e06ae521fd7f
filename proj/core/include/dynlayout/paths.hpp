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

#include "dynlayout/graph.hpp"

namespace dynlayout {

// All-pairs desired distances. Unreachable pairs hold +infinity and are
// false in `reachable`.
struct DistanceMatrix {
  Matrix delta;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> reachable;

  [[nodiscard]] int size() const { return static_cast<int>(delta.rows()); }
};

// Shortest-path lengths over an adjacency matrix whose positive entries are
// dissimilarity edge lengths. Breadth-first search when every edge has unit
// length, Dijkstra otherwise. Throws InvalidInput on negative weights.
DistanceMatrix shortest_path_distances(const Matrix& W_dissimilarity);

// Kamada-Kawai MDS weights v_ij = delta_ij^-2; zero on the diagonal and for
// unreachable pairs. Throws InvalidInput when distinct nodes are at distance 0.
Matrix kk_weights(const DistanceMatrix& distances);

// Builds a DistanceMatrix directly from a dense matrix of desired distances
// (all finite entries are treated as reachable).
DistanceMatrix distances_from_matrix(const Matrix& delta);

enum class DissimilarityMode {
  kLinear,   // w / w_max
  kInverse,  // w_max / w
};

// Converts similarity edge weights into dissimilarity edge lengths; zero
// entries stay zero (no edge). Throws InvalidInput for an all-zero matrix or
// negative entries.
Matrix similarity_to_dissimilarity(const Matrix& W_similarity, DissimilarityMode mode);

enum class TopMWeighting {
  kRankDescending,  // m for the best peer down to 1 for the m-th
  kUnit,
};

// Connects every node to its m highest-scoring peers (positive scores only),
// then symmetrizes by max. Ties are broken by ascending index.
// Throws InvalidInput when m >= n or m < 1.
Matrix top_m_graph(const Matrix& scores, int m, TopMWeighting weighting);

}  // namespace dynlayout
