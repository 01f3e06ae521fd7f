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

#include "dynlayout/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynlayout/error.hpp"

namespace dynlayout {

NodeIndex NodeRegistry::intern(std::string_view id) {
  std::string key(id);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto index = static_cast<NodeIndex>(ids_.size());
  ids_.push_back(key);
  index_.emplace(std::move(key), index);
  return index;
}

std::optional<NodeIndex> NodeRegistry::find(std::string_view id) const {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  return std::nullopt;
}

GroupAssignment GroupAssignment::from_labels(std::vector<std::optional<int>> labels, int k) {
  GroupAssignment out;
  out.C = build_membership_matrix(labels, k);
  out.labels = std::move(labels);
  out.k = k;
  return out;
}

int GroupAssignment::labeled_count() const {
  return static_cast<int>(std::count_if(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); }));
}

std::optional<int> Snapshot::row_of(NodeIndex node) const {
  auto it = std::lower_bound(active.begin(), active.end(), node);
  if (it == active.end() || *it != node) return std::nullopt;
  return static_cast<int>(it - active.begin());
}

void DynamicNetwork::append(Snapshot snapshot) {
  const int expected_t = snapshots_.empty() ? 0 : snapshots_.back().t + 1;
  if (snapshots_.empty() && snapshot.t != 0) {
    throw InvalidInput("first snapshot must have t = 0, got t = " + std::to_string(snapshot.t));
  }
  if (!snapshots_.empty() && snapshot.t < expected_t) {
    throw InvalidInput("snapshot time indices must be strictly increasing (got t = " + std::to_string(snapshot.t) +
                       " after t = " + std::to_string(snapshots_.back().t) + ")");
  }
  if (snapshot.active.empty()) {
    throw InvalidInput("snapshot at t = " + std::to_string(snapshot.t) + " has no active nodes");
  }
  if (!std::is_sorted(snapshot.active.begin(), snapshot.active.end()) ||
      std::adjacent_find(snapshot.active.begin(), snapshot.active.end()) != snapshot.active.end()) {
    throw InvalidInput("active node list must be strictly ascending");
  }
  for (NodeIndex node : snapshot.active) {
    if (node < 0 || node >= registry_.size()) {
      throw InvalidInput("node index " + std::to_string(node) + " is not in the registry");
    }
  }
  if (snapshot.W.rows() != snapshot.size() || snapshot.W.cols() != snapshot.size()) {
    throw InvalidInput("adjacency matrix dimension does not match active node count at t = " +
                       std::to_string(snapshot.t));
  }
  if (auto violations = validate_snapshot(snapshot.W); !violations.empty()) {
    throw InvalidInput("invalid adjacency at t = " + std::to_string(snapshot.t) + ": " + violations.front().describe());
  }
  if (snapshot.groups && static_cast<int>(snapshot.groups->labels.size()) != snapshot.size()) {
    throw InvalidInput("group labels do not match active node count at t = " + std::to_string(snapshot.t));
  }
  snapshots_.push_back(std::move(snapshot));
}

DynamicNetwork DynamicNetwork::prefix(std::size_t count) const {
  DynamicNetwork out(registry_);
  out.snapshots_.assign(snapshots_.begin(), snapshots_.begin() + static_cast<std::ptrdiff_t>(std::min(count, size())));
  return out;
}

std::string SnapshotViolation::describe() const {
  std::ostringstream os;
  // Reported positions are 1-based.
  switch (kind) {
    case Kind::NotSquare: os << "matrix is not square"; break;
    case Kind::Asymmetric: os << "asymmetry at (" << row + 1 << "," << col + 1 << ")"; break;
    case Kind::NonzeroDiagonal: os << "nonzero diagonal at (" << row + 1 << "," << row + 1 << ")"; break;
    case Kind::Negative: os << "negative weight at (" << row + 1 << "," << col + 1 << ")"; break;
    case Kind::NonFinite: os << "non-finite weight at (" << row + 1 << "," << col + 1 << ")"; break;
  }
  return os.str();
}

std::vector<SnapshotViolation> validate_snapshot(const Matrix& W) {
  using Kind = SnapshotViolation::Kind;
  std::vector<SnapshotViolation> out;
  if (W.rows() != W.cols()) {
    out.push_back({Kind::NotSquare, 0, 0});
    return out;
  }
  const auto n = static_cast<int>(W.rows());
  for (int i = 0; i < n; ++i) {
    if (W(i, i) != 0.0) out.push_back({Kind::NonzeroDiagonal, i, i});
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(W(i, j))) {
        out.push_back({Kind::NonFinite, i, j});
      } else if (W(i, j) < 0.0) {
        out.push_back({Kind::Negative, i, j});
      }
      if (j > i && W(i, j) != W(j, i)) out.push_back({Kind::Asymmetric, i, j});
    }
  }
  return out;
}

Matrix build_membership_matrix(std::span<const std::optional<int>> labels, int k) {
  if (k < 0) throw InvalidInput("group count must be nonnegative");
  Matrix C = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    const int label = *labels[i];
    if (label < 1 || label > k) {
      throw InvalidInput("group label " + std::to_string(label) + " outside {1.." + std::to_string(k) + "}");
    }
    C(static_cast<Eigen::Index>(i), label - 1) = 1.0;
  }
  return C;
}

Vector build_presence_matrix(std::span<const NodeIndex> active_t, std::span<const NodeIndex> active_prev) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(active_t.size()));
  for (std::size_t i = 0; i < active_t.size(); ++i) {
    if (std::binary_search(active_prev.begin(), active_prev.end(), active_t[i])) e(static_cast<Eigen::Index>(i)) = 1.0;
  }
  return e;
}

Matrix symmetrize_max(const Matrix& W) {
  Matrix out = W.cwiseMax(W.transpose());
  out.diagonal().setZero();
  return out;
}

}  // namespace dynlayout
