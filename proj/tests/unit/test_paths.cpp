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


#include <cmath>
#include <limits>

#include "doctest.h"
#include "dynlayout/error.hpp"
#include "dynlayout/paths.hpp"
#include "dynlayout/rng.hpp"
#include "oracles.hpp"

using namespace dynlayout;

TEST_SUITE("paths") {
  TEST_CASE("shortest paths on small graphs") {
    Matrix path(3, 3);
    path << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    const auto d = shortest_path_distances(path);
    CHECK(d.delta(0, 2) == 2.0);
    CHECK(d.reachable(0, 2));

    Matrix edge(2, 2);
    edge << 0, 0.5, 0.5, 0;
    CHECK(shortest_path_distances(edge).delta(0, 1) == 0.5);

    const auto apart = shortest_path_distances(Matrix::Zero(2, 2));
    CHECK(!apart.reachable(0, 1));
    CHECK(std::isinf(apart.delta(0, 1)));

    Matrix neg(2, 2);
    neg << 0, -1, -1, 0;
    CHECK_THROWS_AS(shortest_path_distances(neg), InvalidInput);
  }

  TEST_CASE("shortest paths match Floyd-Warshall") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_index(7));
      const bool unit = trial % 2 == 0;
      Matrix W = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (rng.bernoulli(0.4)) W(i, j) = W(j, i) = unit ? 1.0 : rng.uniform(0.1, 3.0);
        }
      }
      const auto d = shortest_path_distances(W);
      const Matrix ref = oracles::floyd_warshall(W);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (std::isinf(ref(i, j))) {
            CHECK(!d.reachable(i, j));
          } else {
            CHECK(d.delta(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-12));
          }
        }
      }
    }
  }

  TEST_CASE("Kamada-Kawai weights") {
    Matrix path(3, 3);
    path << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    const Matrix V = kk_weights(shortest_path_distances(path));
    CHECK(V(0, 2) == 0.25);
    CHECK(V(0, 1) == 1.0);
    CHECK(V(1, 1) == 0.0);
    CHECK(kk_weights(shortest_path_distances(Matrix::Zero(2, 2)))(0, 1) == 0.0);
    Matrix zero(2, 2);
    zero << 0, 0, 0, 0;
    CHECK_THROWS_AS(kk_weights(distances_from_matrix(zero)), InvalidInput);
  }

  TEST_CASE("KK weights of unweighted connected graphs lie in (0, 1]") {
    Rng rng(3);
    const int n = 7;
    Matrix W = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) {
      const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i)));
      W(i, j) = W(j, i) = 1.0;
    }
    const Matrix V = kk_weights(shortest_path_distances(W));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        CHECK(V(i, j) > 0.0);
        CHECK(V(i, j) <= 1.0);
        CHECK((V(i, j) == 1.0) == (W(i, j) == 1.0));
      }
    }
  }

  TEST_CASE("similarity conversion") {
    Matrix W(2, 2);
    W << 0, 4, 4, 0;
    CHECK(similarity_to_dissimilarity(W, DissimilarityMode::kLinear)(0, 1) == 1.0);
    CHECK(similarity_to_dissimilarity(W, DissimilarityMode::kInverse)(0, 1) == 1.0);
    Matrix W2(3, 3);
    W2 << 0, 4, 1, 4, 0, 0, 1, 0, 0;
    const Matrix inv = similarity_to_dissimilarity(W2, DissimilarityMode::kInverse);
    CHECK(inv(0, 2) == 4.0);
    CHECK(inv(1, 2) == 0.0);
    CHECK_THROWS_AS(similarity_to_dissimilarity(Matrix::Zero(2, 2), DissimilarityMode::kInverse), InvalidInput);
  }

  TEST_CASE("top-m graph") {
    Matrix scores(3, 3);
    scores << 0, 5, 1, 0, 0, 0, 1, 5, 0;
    const Matrix G = top_m_graph(scores, 1, TopMWeighting::kUnit);
    CHECK(G(0, 1) == 1.0);
    CHECK(G(2, 1) == 1.0);
    CHECK(G(0, 2) == 0.0);
    CHECK(G == G.transpose());

    Matrix ranks = Matrix::Zero(5, 5);
    for (int j = 1; j < 5; ++j) ranks(0, j) = 5 - j;  // node 0 prefers 1 > 2 > 3 > 4
    const Matrix R = top_m_graph(ranks, 4, TopMWeighting::kRankDescending);
    CHECK(R(0, 1) == 4.0);
    CHECK(R(0, 2) == 3.0);
    CHECK(R(0, 3) == 2.0);
    CHECK(R(0, 4) == 1.0);

    Matrix conflict = Matrix::Zero(4, 4);
    conflict(0, 1) = 3;
    conflict(0, 2) = 2;
    conflict(0, 3) = 1;
    conflict(1, 2) = 3;
    conflict(1, 3) = 2;
    conflict(1, 0) = 1;
    CHECK(top_m_graph(conflict, 3, TopMWeighting::kRankDescending)(0, 1) == 3.0);
    CHECK_THROWS_AS(top_m_graph(scores, 3, TopMWeighting::kUnit), InvalidInput);
  }
}
