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

#include "dynlayout/metrics.hpp"

#include <map>

#include "dynlayout/error.hpp"
#include "dynlayout/mds.hpp"

namespace dynlayout::metrics {

double static_cost_mds(const Matrix& X, const Matrix& delta, const Matrix& V) {
  long pairs = 0;
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < V.cols(); ++j) {
      if (V(i, j) > 0.0) ++pairs;
    }
  }
  if (pairs == 0) return 0.0;
  return mds::stress(X, delta, V) / static_cast<double>(pairs);
}

double static_cost_gll(const Matrix& X, const Matrix& L, const Vector& degrees, bool normalized) {
  const Vector weights = normalized ? degrees : Vector::Ones(X.rows());
  const double total = weights.sum();
  if (total <= 0.0) return 0.0;
  const Eigen::RowVectorXd mean = (weights.transpose() * X) / total;
  const Matrix centered = X.rowwise() - mean;
  const double spread = (centered.transpose() * weights.asDiagonal() * centered).trace();
  if (spread <= 0.0) return 0.0;
  return (X.transpose() * L * X).trace() / spread;
}

double centroid_cost(const Matrix& X, std::span<const std::optional<int>> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != X.rows()) {
    throw InvalidInput("centroid cost needs one label slot per layout row");
  }
  std::map<int, std::pair<Vector, int>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    auto [it, inserted] = groups.try_emplace(*labels[i], Vector::Zero(X.cols()), 0);
    it->second.first += X.row(static_cast<Eigen::Index>(i)).transpose();
    it->second.second += 1;
  }
  double total = 0.0;
  int labeled = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    const auto& [sum, count] = groups.at(*labels[i]);
    total += (X.row(static_cast<Eigen::Index>(i)).transpose() - sum / count).squaredNorm();
    ++labeled;
  }
  return labeled == 0 ? 0.0 : total / labeled;
}

double temporal_cost(const Matrix& X, const Matrix& previous, const Vector& presence) {
  if (previous.rows() != X.rows() || previous.cols() != X.cols() || presence.size() != X.rows()) {
    throw InvalidInput("temporal cost needs aligned layouts and presence");
  }
  double total = 0.0;
  double persisting = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (presence(i) == 0.0) continue;
    total += presence(i) * (X.row(i) - previous.row(i)).squaredNorm();
    persisting += presence(i);
  }
  return persisting == 0.0 ? 0.0 : total / persisting;
}

double cumulative_movement(std::span<const std::optional<Vector>> trajectory) {
  double total = 0.0;
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    if (trajectory[t] && trajectory[t - 1]) total += (*trajectory[t] - *trajectory[t - 1]).squaredNorm();
  }
  return total;
}

namespace {

template <typename Get>
double mean_of(const std::vector<CostRecord>& records, Get get) {
  double total = 0.0;
  int count = 0;
  for (const CostRecord& r : records) {
    if (auto v = get(r)) {
      total += *v;
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / count;
}

}  // namespace

double CostReport::mean_static() const {
  return mean_of(records, [](const CostRecord& r) { return std::optional<double>(r.static_cost); });
}

double CostReport::mean_centroid() const {
  return mean_of(records, [](const CostRecord& r) { return std::optional<double>(r.centroid_cost); });
}

double CostReport::mean_temporal() const {
  return mean_of(records, [](const CostRecord& r) { return r.temporal_cost; });
}

double CostReport::mean_iterations() const {
  return mean_of(records, [](const CostRecord& r) {
    return r.iterations ? std::optional<double>(*r.iterations) : std::nullopt;
  });
}

}  // namespace dynlayout::metrics
