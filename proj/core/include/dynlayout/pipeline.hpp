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
#include <string>
#include <string_view>
#include <vector>

#include "dynlayout/graph.hpp"
#include "dynlayout/layout.hpp"
#include "dynlayout/mds.hpp"
#include "dynlayout/metrics.hpp"
#include "dynlayout/paths.hpp"

namespace dynlayout {

enum class Method { kDmds, kMdsStatic, kMdsStabilized, kDgll, kSpectral, kCcdr, kBfp };
enum class GroupMode { kNone, kKnown, kLearned };

std::string_view to_string(Method method);
std::string_view to_string(GroupMode mode);
// Throws InvalidInput for unknown names.
Method parse_method(std::string_view name);
GroupMode parse_group_mode(std::string_view name);
bool is_mds_family(Method method);

// n evenly spaced points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);
// n points evenly spaced on a log scale between lo and hi.
std::vector<double> log_grid(double lo, double hi, int count);

struct RunConfig {
  Method method = Method::kDmds;
  double alpha = 1.0;
  double beta = 1.0;
  double epsilon = 1e-4;
  int max_iterations = 1000;
  int dims = 2;
  GroupMode groups = GroupMode::kNone;
  int k = 0;  // cluster count for learned groups
  std::uint64_t seed = 0;
  bool normalized = false;
  int restarts = 0;
  std::vector<double> lambda_grid = linear_grid(0.0, 1.0, 21);
  DissimilarityMode dissimilarity = DissimilarityMode::kInverse;
  // Anchor re-entering nodes to their last known position.
  bool reentry_anchor = false;
  int max_refine = 10;
};

struct StepLayout {
  int t = 0;
  std::vector<NodeIndex> nodes;
  Layout layout;
  // Per-node group used for the layout (and for coloring).
  std::vector<std::optional<int>> labels;
  // Group label of each representative row of layout.Y.
  std::vector<int> group_ids;
  std::optional<double> forgetting_factor;  // learned groups only
  std::optional<double> lambda;             // BFP only
  std::optional<mds::SmacofReport> report;  // MDS family only
};

struct LayoutSequence {
  RunConfig config;
  std::vector<std::string> ids;  // registry order
  std::vector<StepLayout> steps;
};

struct RunResult {
  LayoutSequence sequence;
  metrics::CostReport costs;
};

// On-line pipeline: for each snapshot, optionally learn groups, lay out with
// the configured method from the previous step's state, and score. Engine
// failures are rethrown with the failing time step in the message.
RunResult run_sequence(const DynamicNetwork& network, const RunConfig& config);

// Recomputes the per-step costs of a stored sequence against `network`:
// MDS stress or GLL energy by the sequence's method, centroid cost against
// the network's known groups when present (else the stored labels), and
// temporal cost against the previous stored step.
metrics::CostReport score_sequence(const LayoutSequence& sequence, const DynamicNetwork& network);

struct ClusterStep {
  int t = 0;
  std::vector<NodeIndex> nodes;
  std::vector<int> labels;
  double forgetting_factor = 0.0;
};

// Evolutionary clustering of every snapshot, labels matched across steps.
std::vector<ClusterStep> cluster_sequence(const DynamicNetwork& network, int k, std::uint64_t seed,
                                          int max_refine = 10);

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double mean_static = 0.0;
  double mean_centroid = 0.0;
  double mean_temporal = 0.0;
  double mean_iterations = 0.0;
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<SweepCell> cells;  // alpha-major
  [[nodiscard]] const SweepCell& at(std::size_t a, std::size_t b) const { return cells.at(a * betas.size() + b); }
};

// Full-factorial alpha x beta evaluation. Cell means average the per-run
// means over all networks; network i runs with seed seeds[i]. Cells are
// distributed over `threads` workers (0 = hardware concurrency).
SweepResult parameter_sweep(std::span<const DynamicNetwork> networks, std::span<const std::uint64_t> seeds,
                            const RunConfig& base, std::span<const double> alphas, std::span<const double> betas,
                            int threads = 1);

}  // namespace dynlayout
