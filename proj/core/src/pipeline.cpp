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

#include "dynlayout/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "dynlayout/clustering.hpp"
#include "dynlayout/error.hpp"
#include "dynlayout/gll.hpp"
#include "dynlayout/rng.hpp"

namespace dynlayout {
namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kClusterStream = 1'000'000;
constexpr std::uint64_t kOffsetStream = 2'000'000;
constexpr std::uint64_t kRestartStream = 3'000'000;

using RowVector = Eigen::RowVectorXd;

// Cross-step state, keyed by registry index.
struct PipelineState {
  bool started = false;
  std::vector<NodeIndex> prev_active;
  Matrix prev_W;
  std::unordered_map<NodeIndex, RowVector> last_position;
  std::map<int, RowVector> last_representative;
  Matrix prev_smoothed;
  std::unordered_map<NodeIndex, int> prev_learned;
};

struct StepGroups {
  std::vector<std::optional<int>> labels;  // per node, for the layout
  std::vector<int> group_ids;              // compacted, ascending
  Matrix C;                                // n x group_ids.size()
};

StepGroups compact_groups(std::vector<std::optional<int>> labels) {
  StepGroups g;
  std::set<int> ids;
  for (const auto& l : labels) {
    if (l) ids.insert(*l);
  }
  g.group_ids.assign(ids.begin(), ids.end());
  g.C = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(g.group_ids.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    const auto col = std::lower_bound(g.group_ids.begin(), g.group_ids.end(), *labels[i]) - g.group_ids.begin();
    g.C(static_cast<Eigen::Index>(i), col) = 1.0;
  }
  g.labels = std::move(labels);
  return g;
}

std::vector<std::optional<int>> learn_groups(const Snapshot& snap, const RunConfig& config, PipelineState& state,
                                             std::optional<double>& forgetting_factor) {
  if (config.k < 1) throw InvalidInput("learned groups need a cluster count k >= 1");
  const int n = snap.size();
  Matrix smoothed_prev;
  std::vector<int> prev_labels;
  std::vector<int> prev_rows(static_cast<std::size_t>(n), -1);
  bool all_persist = state.started;
  if (state.started && state.prev_smoothed.size() > 0) {
    for (int i = 0; i < n; ++i) {
      const auto it = std::lower_bound(state.prev_active.begin(), state.prev_active.end(), snap.active[i]);
      if (it != state.prev_active.end() && *it == snap.active[i]) {
        prev_rows[static_cast<std::size_t>(i)] = static_cast<int>(it - state.prev_active.begin());
      } else {
        all_persist = false;
      }
    }
    smoothed_prev = snap.W;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int pi = prev_rows[static_cast<std::size_t>(i)];
        const int pj = prev_rows[static_cast<std::size_t>(j)];
        if (pi >= 0 && pj >= 0) smoothed_prev(i, j) = state.prev_smoothed(pi, pj);
      }
    }
    if (all_persist) {
      for (int i = 0; i < n; ++i) prev_labels.push_back(state.prev_learned.at(snap.active[i]));
    }
  }
  const std::uint64_t seed = Rng(config.seed).fork(kClusterStream + static_cast<std::uint64_t>(snap.t)).next();
  clustering::AffectStep step =
      clustering::affect_cluster_step(smoothed_prev, snap.W, prev_labels, config.k, seed, config.max_refine);

  if (!prev_labels.empty() || !state.started) {
    // Already matched (or nothing to match).
  } else {
    std::vector<int> current, reference;
    for (int i = 0; i < n; ++i) {
      const auto it = state.prev_learned.find(snap.active[i]);
      if (it == state.prev_learned.end()) continue;
      current.push_back(step.labels[static_cast<std::size_t>(i)]);
      reference.push_back(it->second);
    }
    if (!current.empty()) {
      const auto permutation = clustering::label_permutation(current, reference, config.k);
      for (int& l : step.labels) l = permutation[static_cast<std::size_t>(l - 1)];
    }
  }

  state.prev_smoothed = step.smoothed;
  state.prev_learned.clear();
  for (int i = 0; i < n; ++i) state.prev_learned[snap.active[i]] = step.labels[static_cast<std::size_t>(i)];
  forgetting_factor = step.alpha;
  return {step.labels.begin(), step.labels.end()};
}

// Start positions (n + k) x s for this step: previous positions by identity,
// new nodes placed near their group, their neighbors, or the layout centroid.
Matrix start_positions(const Snapshot& snap, const StepGroups& groups, const PipelineState& state,
                       const RunConfig& config) {
  const int n = snap.size();
  const int k = static_cast<int>(groups.group_ids.size());
  const int s = config.dims;
  Matrix start = Matrix::Zero(n + k, s);
  std::vector<bool> placed(static_cast<std::size_t>(n), false);

  if (!state.started) {
    Rng rng = Rng(config.seed).fork(kInitStream);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < s; ++a) start(i, a) = rng.uniform(-1.0, 1.0);
    }
  } else {
    RowVector centroid = RowVector::Zero(s);
    int known = 0;
    for (NodeIndex node : state.prev_active) {
      centroid += state.last_position.at(node);
      ++known;
    }
    if (known > 0) centroid /= known;
    Rng rng = Rng(config.seed).fork(kOffsetStream + static_cast<std::uint64_t>(snap.t));
    std::vector<int> fresh;
    for (int i = 0; i < n; ++i) {
      const auto it = state.last_position.find(snap.active[i]);
      if (it != state.last_position.end()) {
        start.row(i) = it->second;
        placed[static_cast<std::size_t>(i)] = true;
      } else {
        fresh.push_back(i);
      }
    }
    for (int i : fresh) {
      const auto& label = groups.labels[static_cast<std::size_t>(i)];
      if (label) {
        const auto rep = state.last_representative.find(*label);
        if (rep != state.last_representative.end()) {
          start.row(i) = rep->second;
          continue;
        }
      }
      RowVector sum = RowVector::Zero(s);
      int count = 0;
      for (int j = 0; j < n; ++j) {
        if (snap.W(i, j) > 0.0 && placed[static_cast<std::size_t>(j)]) {
          sum += start.row(j);
          ++count;
        }
      }
      if (count > 0) {
        start.row(i) = sum / count;
      } else {
        start.row(i) = centroid;
        for (int a = 0; a < s; ++a) start(i, a) += rng.uniform(-0.1, 0.1);
      }
    }
  }

  for (int g = 0; g < k; ++g) {
    const int id = groups.group_ids[static_cast<std::size_t>(g)];
    const auto rep = state.last_representative.find(id);
    if (rep != state.last_representative.end()) {
      start.row(n + g) = rep->second;
      continue;
    }
    RowVector sum = RowVector::Zero(s);
    const double members = groups.C.col(g).sum();
    for (int i = 0; i < n; ++i) {
      if (groups.C(i, g) > 0.0) sum += start.row(i);
    }
    start.row(n + g) = sum / members;
  }
  return start;
}

Vector presence_for(const Snapshot& snap, const PipelineState& state, bool reentry_anchor) {
  Vector e = build_presence_matrix(snap.active, state.prev_active);
  if (reentry_anchor && state.started) {
    for (int i = 0; i < snap.size(); ++i) {
      if (state.last_position.contains(snap.active[i])) e(i) = 1.0;
    }
  }
  return e;
}

// Previous adjacency re-indexed onto the current node set; rows of nodes
// absent at t-1 are zero.
Matrix previous_adjacency(const Snapshot& snap, const PipelineState& state) {
  const int n = snap.size();
  std::vector<int> rows(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const auto it = std::lower_bound(state.prev_active.begin(), state.prev_active.end(), snap.active[i]);
    if (it != state.prev_active.end() && *it == snap.active[i]) {
      rows[static_cast<std::size_t>(i)] = static_cast<int>(it - state.prev_active.begin());
    }
  }
  Matrix W = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int pi = rows[static_cast<std::size_t>(i)];
      const int pj = rows[static_cast<std::size_t>(j)];
      if (pi >= 0 && pj >= 0) W(i, j) = state.prev_W(pi, pj);
    }
  }
  return W;
}

struct MdsInputs {
  Matrix delta;
  Matrix V;
};

MdsInputs mds_inputs(const Matrix& W, DissimilarityMode mode) {
  const Matrix lengths = W.isZero(0.0) ? W : similarity_to_dissimilarity(W, mode);
  DistanceMatrix distances = shortest_path_distances(lengths);
  Matrix V = kk_weights(distances);
  Matrix delta = distances.reachable.select(distances.delta, Matrix::Zero(W.rows(), W.cols()));
  return {std::move(delta), std::move(V)};
}

struct StepOutcome {
  Layout layout;
  std::optional<mds::SmacofReport> report;
  std::optional<double> lambda;
  double static_cost = 0.0;
};

StepOutcome lay_out(const Snapshot& snap, const StepGroups& groups, const Matrix& start, const Vector& presence,
                    const Vector& cost_presence, const std::vector<std::optional<int>>& cost_labels,
                    const PipelineState& state, const RunConfig& config) {
  const int n = snap.size();
  const int s = config.dims;
  StepOutcome out;
  const mds::SmacofOptions smacof{config.epsilon, config.max_iterations};

  if (is_mds_family(config.method)) {
    const MdsInputs in = mds_inputs(snap.W, config.dissimilarity);
    mds::MdsResult result;
    const Matrix start_nodes = start.topRows(n);
    switch (config.method) {
      case Method::kMdsStatic:
        result = mds::smacof_static(in.delta, in.V, start_nodes, smacof);
        break;
      case Method::kMdsStabilized:
        result = state.started ? mds::stabilized_mds_online(in.delta, in.V, config.beta, presence, start_nodes, smacof)
                               : mds::smacof_static(in.delta, in.V, start_nodes, smacof);
        break;
      default:
        result = mds::dmds_layout(in.delta, in.V, groups.C, config.alpha, config.beta, presence, start, smacof);
        break;
    }
    if (result.layout.Y.size() == 0) result.layout.Y = Matrix(0, s);
    out.static_cost = metrics::static_cost_mds(result.layout.X, in.delta, in.V);
    out.layout = std::move(result.layout);
    out.report = std::move(result.report);
    return out;
  }

  const gll::LaplacianPair current = gll::laplacian(snap.W);
  const Matrix previous_nodes = start.topRows(n);
  auto aligned = [&](Layout layout) {
    if (state.started) gll::align_to_previous(layout, previous_nodes, cost_presence);
    return layout;
  };
  switch (config.method) {
    case Method::kSpectral:
      out.layout = aligned(gll::spectral_layout(snap.W, s, config.normalized));
      break;
    case Method::kCcdr:
      out.layout = aligned(gll::ccdr_layout(snap.W, groups.C, config.alpha, s, config.normalized));
      break;
    case Method::kBfp: {
      if (!state.started) {
        out.layout = gll::spectral_layout(snap.W, s, config.normalized);
        break;
      }
      const Matrix L_prev = gll::laplacian(previous_adjacency(snap, state)).L;
      auto layout_at = [&](double lambda) {
        return aligned(gll::bfp_layout(L_prev, current.L, lambda, s, config.normalized));
      };
      const double lambda = gll::bfp_lambda_select(config.lambda_grid, config.alpha, config.beta, [&](double lambda) {
        gll::CompositeCost cost;
        try {
          const Layout layout = layout_at(lambda);
          cost.static_cost = metrics::static_cost_gll(layout.X, current.L, current.degrees, config.normalized);
          cost.centroid_cost = metrics::centroid_cost(layout.X, cost_labels);
          cost.temporal_cost = metrics::temporal_cost(layout.X, previous_nodes, cost_presence);
        } catch (const InvalidInput&) {
          // The blend is unusable at this lambda (e.g. disconnected).
          cost.static_cost = std::numeric_limits<double>::infinity();
        }
        return cost;
      });
      out.layout = layout_at(lambda);
      out.lambda = lambda;
      break;
    }
    default: {
      if (!state.started) {
        out.layout = gll::ccdr_layout(snap.W, groups.C, config.alpha, s, config.normalized);
        break;
      }
      gll::DgllOptions options;
      options.restarts = config.restarts;
      options.seed = Rng(config.seed).fork(kRestartStream + static_cast<std::uint64_t>(snap.t)).next();
      const gll::DgllSolution solution =
          gll::dgll_layout(snap.W, groups.C, config.alpha, config.beta, presence, start, s, config.normalized, options);
      out.layout = Layout::split(solution.augmented, n);
      break;
    }
  }
  if (out.layout.Y.size() == 0) out.layout.Y = Matrix(0, s);
  out.static_cost = metrics::static_cost_gll(out.layout.X, current.L, current.degrees, config.normalized);
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kDmds: return "dmds";
    case Method::kMdsStatic: return "mds-static";
    case Method::kMdsStabilized: return "mds-stabilized";
    case Method::kDgll: return "dgll";
    case Method::kSpectral: return "spectral";
    case Method::kCcdr: return "ccdr";
    case Method::kBfp: return "bfp";
  }
  return "unknown";
}

std::string_view to_string(GroupMode mode) {
  switch (mode) {
    case GroupMode::kNone: return "none";
    case GroupMode::kKnown: return "known";
    case GroupMode::kLearned: return "learned";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kDmds, Method::kMdsStatic, Method::kMdsStabilized, Method::kDgll, Method::kSpectral,
                   Method::kCcdr, Method::kBfp}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown layout method '" + std::string(name) + "'");
}

GroupMode parse_group_mode(std::string_view name) {
  for (GroupMode g : {GroupMode::kNone, GroupMode::kKnown, GroupMode::kLearned}) {
    if (to_string(g) == name) return g;
  }
  throw InvalidInput("unknown group mode '" + std::string(name) + "'");
}

bool is_mds_family(Method method) {
  return method == Method::kDmds || method == Method::kMdsStatic || method == Method::kMdsStabilized;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return grid;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> grid;
  for (double e : linear_grid(std::log10(lo), std::log10(hi), count)) grid.push_back(std::pow(10.0, e));
  return grid;
}

RunResult run_sequence(const DynamicNetwork& network, const RunConfig& config) {
  if (config.dims < 1) throw InvalidInput("layout dimension must be at least 1");
  if (config.alpha < 0.0 || config.beta < 0.0) throw InvalidInput("alpha and beta must be nonnegative");
  RunResult result;
  result.sequence.config = config;
  for (int i = 0; i < network.registry().size(); ++i) result.sequence.ids.push_back(network.registry().id(i));
  result.costs.method = std::string(to_string(config.method));
  result.costs.alpha = config.alpha;
  result.costs.beta = config.beta;

  PipelineState state;
  for (const Snapshot& snap : network.snapshots()) {
    try {
      const int n = snap.size();
      StepLayout step;
      step.t = snap.t;
      step.nodes = snap.active;

      std::vector<std::optional<int>> layout_labels(static_cast<std::size_t>(n));
      if (config.groups == GroupMode::kKnown) {
        if (!snap.groups) throw InvalidInput("known groups requested but none are given");
        layout_labels = snap.groups->labels;
      } else if (config.groups == GroupMode::kLearned) {
        layout_labels = learn_groups(snap, config, state, step.forgetting_factor);
      }
      const bool uses_groups = config.method != Method::kMdsStatic && config.method != Method::kMdsStabilized &&
                               config.method != Method::kSpectral && config.method != Method::kBfp;
      StepGroups groups = compact_groups(uses_groups ? layout_labels : std::vector<std::optional<int>>(n));
      const std::vector<std::optional<int>> cost_labels = snap.groups ? snap.groups->labels : layout_labels;

      const Matrix start = start_positions(snap, groups, state, config);
      const Vector cost_presence = build_presence_matrix(snap.active, state.prev_active);
      const Vector presence = presence_for(snap, state, config.reentry_anchor);

      StepOutcome outcome = lay_out(snap, groups, start, presence, cost_presence, cost_labels, state, config);

      metrics::CostRecord record;
      record.t = snap.t;
      record.static_cost = outcome.static_cost;
      record.centroid_cost = metrics::centroid_cost(outcome.layout.X, cost_labels);
      if (state.started) record.temporal_cost = metrics::temporal_cost(outcome.layout.X, start.topRows(n), cost_presence);
      if (outcome.report) record.iterations = outcome.report->iterations;
      result.costs.records.push_back(record);

      state.started = true;
      state.prev_active = snap.active;
      state.prev_W = snap.W;
      for (int i = 0; i < n; ++i) state.last_position[snap.active[i]] = outcome.layout.X.row(i);
      for (std::size_t g = 0; g < groups.group_ids.size(); ++g) {
        state.last_representative[groups.group_ids[g]] = outcome.layout.Y.row(static_cast<Eigen::Index>(g));
      }

      step.layout = std::move(outcome.layout);
      step.labels = std::any_of(layout_labels.begin(), layout_labels.end(), [](const auto& l) { return l.has_value(); })
                        ? layout_labels
                        : cost_labels;
      step.group_ids = groups.group_ids;
      step.lambda = outcome.lambda;
      step.report = std::move(outcome.report);
      result.sequence.steps.push_back(std::move(step));
    } catch (const gll::DgllNonConvergence& e) {
      throw NumericalFailure("time step " + std::to_string(snap.t) + ": " + e.what());
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("time step " + std::to_string(snap.t) + ": " + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput("time step " + std::to_string(snap.t) + ": " + e.what());
    }
  }
  return result;
}

metrics::CostReport score_sequence(const LayoutSequence& sequence, const DynamicNetwork& network) {
  metrics::CostReport report;
  report.method = std::string(to_string(sequence.config.method));
  report.alpha = sequence.config.alpha;
  report.beta = sequence.config.beta;
  const StepLayout* prev = nullptr;
  for (const StepLayout& step : sequence.steps) {
    const Snapshot* snap = nullptr;
    for (const Snapshot& candidate : network.snapshots()) {
      if (candidate.t == step.t) snap = &candidate;
    }
    if (!snap) throw InvalidInput("no snapshot for layout step t=" + std::to_string(step.t));
    if (snap->active != step.nodes) throw InvalidInput("layout step t=" + std::to_string(step.t) + " node set differs");
    metrics::CostRecord record;
    record.t = step.t;
    if (is_mds_family(sequence.config.method)) {
      const MdsInputs in = mds_inputs(snap->W, sequence.config.dissimilarity);
      record.static_cost = metrics::static_cost_mds(step.layout.X, in.delta, in.V);
    } else {
      const gll::LaplacianPair pair = gll::laplacian(snap->W);
      record.static_cost = metrics::static_cost_gll(step.layout.X, pair.L, pair.degrees, sequence.config.normalized);
    }
    record.centroid_cost = metrics::centroid_cost(step.layout.X, snap->groups ? snap->groups->labels : step.labels);
    if (prev) {
      const Vector presence = build_presence_matrix(step.nodes, prev->nodes);
      Matrix previous = Matrix::Zero(step.layout.X.rows(), step.layout.X.cols());
      for (std::size_t i = 0; i < step.nodes.size(); ++i) {
        const auto it = std::lower_bound(prev->nodes.begin(), prev->nodes.end(), step.nodes[i]);
        if (it != prev->nodes.end() && *it == step.nodes[i]) {
          previous.row(static_cast<Eigen::Index>(i)) = prev->layout.X.row(it - prev->nodes.begin());
        }
      }
      record.temporal_cost = metrics::temporal_cost(step.layout.X, previous, presence);
    }
    if (step.report) record.iterations = step.report->iterations;
    report.records.push_back(record);
    prev = &step;
  }
  return report;
}

std::vector<ClusterStep> cluster_sequence(const DynamicNetwork& network, int k, std::uint64_t seed, int max_refine) {
  RunConfig config;
  config.k = k;
  config.seed = seed;
  config.max_refine = max_refine;
  PipelineState state;
  std::vector<ClusterStep> out;
  for (const Snapshot& snap : network.snapshots()) {
    try {
      std::optional<double> alpha;
      const auto labels = learn_groups(snap, config, state, alpha);
      ClusterStep step{snap.t, snap.active, {}, alpha.value_or(0.0)};
      for (const auto& l : labels) step.labels.push_back(*l);
      out.push_back(std::move(step));
      state.started = true;
      state.prev_active = snap.active;
    } catch (const InvalidInput& e) {
      throw InvalidInput("time step " + std::to_string(snap.t) + ": " + e.what());
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("time step " + std::to_string(snap.t) + ": " + e.what());
    }
  }
  return out;
}

SweepResult parameter_sweep(std::span<const DynamicNetwork> networks, std::span<const std::uint64_t> seeds,
                            const RunConfig& base, std::span<const double> alphas, std::span<const double> betas,
                            int threads) {
  if (networks.size() != seeds.size()) throw InvalidInput("sweep needs one seed per network");
  SweepResult out;
  out.alphas.assign(alphas.begin(), alphas.end());
  out.betas.assign(betas.begin(), betas.end());
  out.cells.resize(alphas.size() * betas.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t cell = next++; cell < out.cells.size(); cell = next++) {
      try {
        RunConfig config = base;
        config.alpha = alphas[cell / betas.size()];
        config.beta = betas[cell % betas.size()];
        SweepCell c{config.alpha, config.beta};
        for (std::size_t r = 0; r < networks.size(); ++r) {
          config.seed = seeds[r];
          const metrics::CostReport costs = run_sequence(networks[r], config).costs;
          c.mean_static += costs.mean_static();
          c.mean_centroid += costs.mean_centroid();
          c.mean_temporal += costs.mean_temporal();
          c.mean_iterations += costs.mean_iterations();
        }
        const auto runs = static_cast<double>(std::max<std::size_t>(1, networks.size()));
        c.mean_static /= runs;
        c.mean_centroid /= runs;
        c.mean_temporal /= runs;
        c.mean_iterations /= runs;
        out.cells[cell] = c;
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned count = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, static_cast<unsigned>(std::max<std::size_t>(1, out.cells.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace dynlayout
