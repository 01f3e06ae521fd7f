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

#include "dynlayout/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "dynlayout/error.hpp"

namespace dynlayout {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency adjacency_lists(const Matrix& W) {
  const auto n = static_cast<int>(W.rows());
  Adjacency adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && W(i, j) > 0.0) adj[static_cast<std::size_t>(i)].emplace_back(j, W(i, j));
    }
  }
  return adj;
}

void bfs_from(const Adjacency& adj, int source, Eigen::Ref<Vector> dist) {
  dist.setConstant(kInf);
  dist(source) = 0.0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (dist(v) == kInf) {
        dist(v) = dist(u) + 1.0;
        queue.push_back(v);
      }
    }
  }
}

void dijkstra_from(const Adjacency& adj, int source, Eigen::Ref<Vector> dist) {
  dist.setConstant(kInf);
  dist(source) = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist(u)) continue;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (const double candidate = d + w; candidate < dist(v)) {
        dist(v) = candidate;
        heap.emplace(candidate, v);
      }
    }
  }
}

}  // namespace

DistanceMatrix shortest_path_distances(const Matrix& W) {
  if (W.rows() != W.cols()) throw InvalidInput("adjacency matrix must be square");
  if ((W.array() < 0.0).any()) throw InvalidInput("shortest paths require nonnegative edge weights");
  const auto n = static_cast<int>(W.rows());
  const Adjacency adj = adjacency_lists(W);
  bool unit = true;
  for (const auto& row : adj) {
    for (const auto& [v, w] : row) unit = unit && (w == 1.0);
  }

  DistanceMatrix out;
  out.delta.resize(n, n);
  Vector dist(n);
  for (int s = 0; s < n; ++s) {
    if (unit) {
      bfs_from(adj, s, dist);
    } else {
      dijkstra_from(adj, s, dist);
    }
    out.delta.row(s) = dist.transpose();
  }
  // Directed-input asymmetries are removed upstream; keep the result exactly
  // symmetric regardless of floating-point path order.
  out.delta = out.delta.cwiseMin(out.delta.transpose()).eval();
  out.reachable = out.delta.array().isFinite();
  return out;
}

DistanceMatrix distances_from_matrix(const Matrix& delta) {
  DistanceMatrix out;
  out.delta = delta;
  out.reachable = delta.array().isFinite();
  return out;
}

Matrix kk_weights(const DistanceMatrix& distances) {
  const int n = distances.size();
  Matrix V = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !distances.reachable(i, j)) continue;
      const double d = distances.delta(i, j);
      if (d == 0.0) {
        throw InvalidInput("zero desired distance between distinct nodes " + std::to_string(i + 1) + " and " +
                           std::to_string(j + 1));
      }
      V(i, j) = 1.0 / (d * d);
    }
  }
  return V;
}

Matrix similarity_to_dissimilarity(const Matrix& W, DissimilarityMode mode) {
  if ((W.array() < 0.0).any()) throw InvalidInput("similarity weights must be nonnegative");
  const double w_max = W.size() == 0 ? 0.0 : W.maxCoeff();
  if (w_max <= 0.0) throw InvalidInput("similarity matrix is all zero");
  Matrix out = Matrix::Zero(W.rows(), W.cols());
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      const double w = W(i, j);
      if (w <= 0.0) continue;
      out(i, j) = mode == DissimilarityMode::kLinear ? w / w_max : w_max / w;
    }
  }
  return out;
}

Matrix top_m_graph(const Matrix& scores, int m, TopMWeighting weighting) {
  if (scores.rows() != scores.cols()) throw InvalidInput("score matrix must be square");
  const auto n = static_cast<int>(scores.rows());
  if (m < 1 || m >= n) throw InvalidInput("top-m graph requires 1 <= m < n");
  if ((scores.array() < 0.0).any()) throw InvalidInput("scores must be nonnegative");

  Matrix directed = Matrix::Zero(n, n);
  std::vector<int> peers;
  for (int i = 0; i < n; ++i) {
    peers.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i && scores(i, j) > 0.0) peers.push_back(j);
    }
    std::stable_sort(peers.begin(), peers.end(), [&](int a, int b) { return scores(i, a) > scores(i, b); });
    const int take = std::min<int>(m, static_cast<int>(peers.size()));
    for (int r = 0; r < take; ++r) {
      directed(i, peers[static_cast<std::size_t>(r)]) =
          weighting == TopMWeighting::kRankDescending ? static_cast<double>(m - r) : 1.0;
    }
  }
  return symmetrize_max(directed);
}

}  // namespace dynlayout
