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


#include <vector>

#include "doctest.h"
#include "dynlayout/error.hpp"
#include "dynlayout/rng.hpp"
#include "dynlayout/sbm.hpp"

using namespace dynlayout;
using namespace dynlayout::sbm;

TEST_SUITE("sbm") {
  TEST_CASE("degenerate probabilities") {
    Rng rng(1);
    const std::vector<int> labels{1, 2, 1, 2, 2};
    const Matrix full = sbm_sample(Matrix::Ones(2, 2), labels, rng);
    CHECK(full == Matrix::Ones(5, 5) - Matrix::Identity(5, 5));
    CHECK(sbm_sample(Matrix::Zero(2, 2), labels, rng) == Matrix::Zero(5, 5));
  }

  TEST_CASE("within-block density concentrates") {
    Rng rng(2);
    std::vector<int> labels(30);
    for (int i = 0; i < 30; ++i) labels[i] = 1 + i % 4;
    const Matrix P = SbmConfig::two_level(4, 0.6, 0.2);
    double within = 0.0, pairs = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
      const Matrix W = sbm_sample(P, labels, rng);
      CHECK(W == W.transpose());
      CHECK(W.diagonal() == Vector::Zero(30));
      for (int i = 0; i < 30; ++i) {
        for (int j = i + 1; j < 30; ++j) {
          if (labels[i] != labels[j]) continue;
          within += W(i, j);
          pairs += 1.0;
        }
      }
    }
    const double sigma = std::sqrt(0.6 * 0.4 / pairs);
    CHECK(std::abs(within / pairs - 0.6) <= 3.0 * sigma);
  }

  TEST_CASE("protocol sequence") {
    const auto cfg = SbmConfig::protocol(7);
    CHECK(cfg.n == 30);
    CHECK(cfg.k == 4);
    CHECK(cfg.T == 20);
    CHECK(cfg.change_step == 10);
    CHECK(reassigned_count(cfg) == 8);
    const auto seq = sbm_sequence(cfg);
    CHECK(seq.network.size() == 20);
    CHECK(seq.network.registry().id(0) == "1");
    int changed = 0;
    for (int i = 0; i < 30; ++i) {
      for (int t = 1; t < 20; ++t) {
        if (t != 10) CHECK(seq.truth[t][i] == seq.truth[t - 1][i]);
      }
      if (seq.truth[10][i] != seq.truth[9][i]) ++changed;
    }
    CHECK(changed == 8);
    const auto& groups = seq.network[12].groups;
    REQUIRE(groups.has_value());
    CHECK(*groups->labels[3] == seq.truth[12][3]);
  }

  TEST_CASE("no change keeps labels constant and seeds reproduce") {
    auto cfg = SbmConfig::protocol(3);
    cfg.change_fraction = 0.0;
    const auto seq = sbm_sequence(cfg);
    for (int t = 1; t < cfg.T; ++t) CHECK(seq.truth[t] == seq.truth[0]);
    const auto a = sbm_sequence(SbmConfig::protocol(5)), b = sbm_sequence(SbmConfig::protocol(5));
    for (std::size_t t = 0; t < a.network.size(); ++t) CHECK(a.network[t].W == b.network[t].W);
    CHECK(a.truth == b.truth);
  }

  TEST_CASE("balanced sizes") {
    auto cfg = SbmConfig::protocol(4);
    cfg.balanced = true;
    const auto seq = sbm_sequence(cfg);
    std::vector<int> sizes(4, 0);
    for (int label : seq.truth[0]) ++sizes[label - 1];
    for (int s : sizes) CHECK((s == 7 || s == 8));
  }

  TEST_CASE("snapshots are independent draws") {
    double cross = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto cfg = SbmConfig::protocol(seed);
      cfg.change_step.reset();
      const auto seq = sbm_sequence(cfg);
      const Matrix& A = seq.network[3].W;
      const Matrix& B = seq.network[4].W;
      const double ma = A.sum() / 870.0, mb = B.sum() / 870.0;
      cross += ((A.array() - ma) * (B.array() - mb)).sum() / 870.0 / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
      ++count;
    }
    // Off-diagonal edge correlation is driven by shared block structure
    // only; it stays well below a copying process.
    CHECK(cross / count < 0.3);
  }

  TEST_CASE("invalid configurations") {
    auto cfg = SbmConfig::protocol(1);
    cfg.change_step = 20;
    CHECK_THROWS_AS(sbm_sequence(cfg), InvalidInput);
    cfg = SbmConfig::protocol(1);
    cfg.P(0, 1) = 1.5;
    CHECK_THROWS_AS(sbm_sequence(cfg), InvalidInput);
  }
}
