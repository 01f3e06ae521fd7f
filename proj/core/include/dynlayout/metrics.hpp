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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynlayout/graph.hpp"

namespace dynlayout::metrics {

// Stress divided by the number of unordered pairs with positive weight.
double static_cost_mds(const Matrix& X, const Matrix& delta, const Matrix& V);

// tr(X^T L X) divided by the centered spread of X: tr(Xc^T D Xc) with
// degree-weighted centering when `normalized`, tr(Xc^T Xc) with ordinary
// centering otherwise. Spectral layouts score the mean of their eigenvalues.
// 0 for a layout without spread.
double static_cost_gll(const Matrix& X, const Matrix& L, const Vector& degrees, bool normalized);

// Mean squared distance from each labeled node to the arithmetic mean of its
// group's members. Unlabeled nodes are ignored; 0 when nothing is labeled.
double centroid_cost(const Matrix& X, std::span<const std::optional<int>> labels);

// Mean squared displacement over persisting nodes (presence 1); 0 when none
// persist. `previous` is aligned row-by-row with X.
double temporal_cost(const Matrix& X, const Matrix& previous, const Vector& presence);

// Sum of squared displacements between consecutive steps where the node is
// present at both.
double cumulative_movement(std::span<const std::optional<Vector>> trajectory);

struct CostRecord {
  int t = 0;
  double static_cost = 0.0;
  double centroid_cost = 0.0;
  std::optional<double> temporal_cost;  // absent at the first step
  std::optional<int> iterations;        // MDS family only
};

struct CostReport {
  std::string method;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<CostRecord> records;

  [[nodiscard]] double mean_static() const;
  [[nodiscard]] double mean_centroid() const;
  // Mean over steps that carry a temporal cost.
  [[nodiscard]] double mean_temporal() const;
  [[nodiscard]] double mean_iterations() const;
};

}  // namespace dynlayout::metrics
