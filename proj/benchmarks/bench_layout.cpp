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

#include <benchmark/benchmark.h>

#include "dynlayout/clustering.hpp"
#include "dynlayout/gll.hpp"
#include "dynlayout/mds.hpp"
#include "dynlayout/paths.hpp"
#include "dynlayout/pipeline.hpp"
#include "dynlayout/rng.hpp"
#include "dynlayout/sbm.hpp"

namespace {

using namespace dynlayout;

Matrix sbm_adjacency(int n, std::uint64_t seed) {
  sbm::SbmConfig c = sbm::SbmConfig::protocol(seed);
  c.n = n;
  c.T = 1;
  c.change_step.reset();
  return sbm::sbm_sequence(c).network[0].W;
}

Matrix random_start(int rows, int s, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(rows, s);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-1.0, 1.0);
  return X;
}

void BM_ShortestPaths(benchmark::State& state) {
  const Matrix W = sbm_adjacency(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(shortest_path_distances(W));
}
BENCHMARK(BM_ShortestPaths)->Arg(30)->Arg(120);

void BM_SmacofStatic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DistanceMatrix d = shortest_path_distances(sbm_adjacency(n, 2));
  const Matrix V = kk_weights(d);
  const Matrix X0 = random_start(n, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mds::smacof_static(d.delta, V, X0));
}
BENCHMARK(BM_SmacofStatic)->Arg(30)->Arg(120);

void BM_DmdsStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DistanceMatrix d = shortest_path_distances(sbm_adjacency(n, 4));
  const Matrix V = kk_weights(d);
  std::vector<std::optional<int>> labels;
  for (int i = 0; i < n; ++i) labels.push_back(i % 4 + 1);
  const Matrix C = build_membership_matrix(labels, 4);
  const Matrix prev = random_start(n + 4, 2, 5);
  const Vector presence = Vector::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(mds::dmds_layout(d.delta, V, C, 1.0, 1.0, presence, prev));
}
BENCHMARK(BM_DmdsStep)->Arg(30)->Arg(120);

void BM_SpectralNormalized(benchmark::State& state) {
  const Matrix W = sbm_adjacency(static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(gll::spectral_layout(W, 2, true));
}
BENCHMARK(BM_SpectralNormalized)->Arg(30)->Arg(120);

void BM_DgllStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix W = sbm_adjacency(n, 7);
  std::vector<std::optional<int>> labels;
  for (int i = 0; i < n; ++i) labels.push_back(i % 4 + 1);
  const Matrix C = build_membership_matrix(labels, 4);
  const Layout start = gll::ccdr_layout(sbm_adjacency(n, 8), C, 1.0, 2, true);
  const Vector presence = Vector::Ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gll::dgll_layout(W, C, 1.0, 1.0, presence, start.augmented(), 2, true));
  }
}
BENCHMARK(BM_DgllStep)->Arg(30);

void BM_AffectStep(benchmark::State& state) {
  const Matrix W0 = sbm_adjacency(30, 9);
  const Matrix W1 = sbm_adjacency(30, 10);
  const auto first = clustering::affect_cluster_step(Matrix(), W0, {}, 4, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clustering::affect_cluster_step(first.smoothed, W1, first.labels, 4, 11));
  }
}
BENCHMARK(BM_AffectStep);

void BM_SbmSequenceDmds(benchmark::State& state) {
  const auto seq = sbm::sbm_sequence(sbm::SbmConfig::protocol(12));
  RunConfig config;
  config.groups = GroupMode::kKnown;
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(seq.network, config));
}
BENCHMARK(BM_SbmSequenceDmds)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
