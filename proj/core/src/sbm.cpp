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

#include "dynlayout/sbm.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "dynlayout/error.hpp"

namespace dynlayout::sbm {
namespace {

void validate(const SbmConfig& c) {
  if (c.n < 1 || c.k < 1 || c.T < 1) throw InvalidInput("SBM needs n, k and T >= 1");
  if (c.P.rows() != c.k || c.P.cols() != c.k) throw InvalidInput("SBM probability matrix must be k x k");
  for (int a = 0; a < c.k; ++a) {
    for (int b = 0; b < c.k; ++b) {
      const double p = c.P(a, b);
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("SBM probabilities must lie in [0, 1]");
      if (p != c.P(b, a)) throw InvalidInput("SBM probability matrix must be symmetric");
    }
  }
  if (!(c.change_fraction >= 0.0 && c.change_fraction <= 1.0)) {
    throw InvalidInput("change fraction must lie in [0, 1]");
  }
  if (c.change_step && (*c.change_step < 0 || *c.change_step >= c.T)) {
    throw InvalidInput("change step must lie in [0, T)");
  }
  if (c.change_step && c.change_fraction > 0.0 && c.k < 2) {
    throw InvalidInput("reassignment to a different group needs k >= 2");
  }
}

void shuffle(std::vector<int>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

Matrix SbmConfig::two_level(int k, double p_in, double p_out) {
  Matrix P = Matrix::Constant(k, k, p_out);
  P.diagonal().setConstant(p_in);
  return P;
}

SbmConfig SbmConfig::protocol(std::uint64_t seed) {
  SbmConfig c;
  c.P = two_level(4, 0.6, 0.2);
  c.change_step = 10;
  c.change_fraction = 0.25;
  c.seed = seed;
  return c;
}

int reassigned_count(const SbmConfig& config) {
  return static_cast<int>(std::lround(config.n * config.change_fraction));
}

Matrix sbm_sample(const Matrix& P, const std::vector<int>& labels, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix W = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (rng.bernoulli(P(labels[static_cast<std::size_t>(i)] - 1, labels[static_cast<std::size_t>(j)] - 1))) {
        W(i, j) = W(j, i) = 1.0;
      }
    }
  }
  return W;
}

SbmSequence sbm_sequence(const SbmConfig& config) {
  validate(config);
  Rng rng(config.seed);
  std::vector<int> labels(static_cast<std::size_t>(config.n));
  if (config.balanced) {
    for (int i = 0; i < config.n; ++i) labels[static_cast<std::size_t>(i)] = i % config.k + 1;
    shuffle(labels, rng);
  } else {
    for (int& l : labels) l = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(config.k))) + 1;
  }

  NodeRegistry registry;
  std::vector<NodeIndex> active;
  for (int i = 1; i <= config.n; ++i) active.push_back(registry.intern(std::to_string(i)));

  SbmSequence out{DynamicNetwork(std::move(registry)), {}};
  for (int t = 0; t < config.T; ++t) {
    if (config.change_step && t == *config.change_step) {
      std::vector<int> order(labels.size());
      std::iota(order.begin(), order.end(), 0);
      const int moved = reassigned_count(config);
      // Partial Fisher-Yates: the first `moved` entries form a uniform subset.
      for (int i = 0; i < moved; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(rng.uniform_index(order.size() - static_cast<std::size_t>(i)));
        std::swap(order[static_cast<std::size_t>(i)], order[j]);
        int& label = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        const int draw = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(config.k - 1))) + 1;
        label = draw >= label ? draw + 1 : draw;
      }
    }
    Snapshot snap;
    snap.t = t;
    snap.W = sbm_sample(config.P, labels, rng);
    snap.active = active;
    snap.groups = GroupAssignment::from_labels(std::vector<std::optional<int>>(labels.begin(), labels.end()), config.k);
    out.network.append(std::move(snap));
    out.truth.push_back(labels);
  }
  return out;
}

}  // namespace dynlayout::sbm
