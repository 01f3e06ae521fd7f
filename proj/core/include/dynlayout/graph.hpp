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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace dynlayout {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense index of a node in the registry. Stable across all time steps.
using NodeIndex = int;

// Bijection between external node identifiers and dense indices. Indices are
// assigned in order of first registration.
class NodeRegistry {
 public:
  NodeIndex intern(std::string_view id);
  [[nodiscard]] std::optional<NodeIndex> find(std::string_view id) const;
  [[nodiscard]] const std::string& id(NodeIndex index) const { return ids_.at(static_cast<std::size_t>(index)); }
  [[nodiscard]] int size() const { return static_cast<int>(ids_.size()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
};

// Per-node optional labels in {1..k} and the derived n x k membership
// matrix C (c_il = 1 iff labels[i] == l).
struct GroupAssignment {
  std::vector<std::optional<int>> labels;
  int k = 0;
  Matrix C;

  static GroupAssignment from_labels(std::vector<std::optional<int>> labels, int k);
  [[nodiscard]] int labeled_count() const;
};

struct Snapshot {
  int t = 0;
  Matrix W;                     // |active| x |active|, rows in active order
  std::vector<NodeIndex> active;  // ascending registry indices
  std::optional<GroupAssignment> groups;

  [[nodiscard]] int size() const { return static_cast<int>(active.size()); }
  // Row of a registry index in this snapshot, if active.
  [[nodiscard]] std::optional<int> row_of(NodeIndex node) const;
};

class DynamicNetwork {
 public:
  DynamicNetwork() = default;
  explicit DynamicNetwork(NodeRegistry registry) : registry_(std::move(registry)) {}

  // Appends a snapshot after validating every Snapshot and DynamicNetwork
  // invariant. Throws InvalidInput on violation.
  void append(Snapshot snapshot);

  [[nodiscard]] const NodeRegistry& registry() const { return registry_; }
  NodeRegistry& registry() { return registry_; }
  [[nodiscard]] std::span<const Snapshot> snapshots() const { return snapshots_; }
  [[nodiscard]] const Snapshot& operator[](std::size_t i) const { return snapshots_.at(i); }
  [[nodiscard]] std::size_t size() const { return snapshots_.size(); }
  [[nodiscard]] bool empty() const { return snapshots_.empty(); }

  // The first `count` snapshots, sharing the registry.
  [[nodiscard]] DynamicNetwork prefix(std::size_t count) const;

 private:
  NodeRegistry registry_;
  std::vector<Snapshot> snapshots_;
};

struct SnapshotViolation {
  enum class Kind { NotSquare, Asymmetric, NonzeroDiagonal, Negative, NonFinite };
  Kind kind;
  int row = 0;
  int col = 0;

  [[nodiscard]] std::string describe() const;
  friend bool operator==(const SnapshotViolation&, const SnapshotViolation&) = default;
};

// Lists every violated adjacency invariant (empty when valid). Violations are
// data, not failures.
std::vector<SnapshotViolation> validate_snapshot(const Matrix& W);

// n x k binary membership matrix. Absent labels give all-zero rows.
// Throws InvalidInput for labels outside {1..k}.
Matrix build_membership_matrix(std::span<const std::optional<int>> labels, int k);

// Diagonal presence indicators in the ordering of `active_t`: entry i is 1
// iff active_t[i] is contained in `active_prev`. Both inputs ascending.
Vector build_presence_matrix(std::span<const NodeIndex> active_t, std::span<const NodeIndex> active_prev);

// Symmetrizes a (possibly directed) weight matrix by max(w_ij, w_ji) and
// clears the diagonal.
Matrix symmetrize_max(const Matrix& W);

}  // namespace dynlayout
