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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynlayout/graph.hpp"
#include "dynlayout/metrics.hpp"
#include "dynlayout/paths.hpp"
#include "dynlayout/pipeline.hpp"

namespace dynlayout::io {

enum class InputKind { kEdgeTsv, kRankMatrix, kCountMatrix };
InputKind parse_input_kind(std::string_view name);

struct IngestOptions {
  InputKind kind = InputKind::kEdgeTsv;
  // Peers kept per node for rank/count inputs.
  int m = 4;
  TopMWeighting weighting = TopMWeighting::kRankDescending;
};

// Records are "t<TAB>u<TAB>v<TAB>w" (edge weight, rank position or
// proximity count depending on the kind); a two-field line "t<TAB>u" marks
// an active node without edges. Lines starting with '#' are comments. Node
// identifiers are registered in order of first appearance. Duplicate
// undirected edges are merged by max and reported in `warnings`. Malformed
// lines raise InvalidInput naming the line.
DynamicNetwork read_snapshots(std::istream& in, const IngestOptions& options, std::vector<std::string>* warnings = nullptr);
DynamicNetwork ingest_snapshots(const std::filesystem::path& path, const IngestOptions& options,
                                std::vector<std::string>* warnings = nullptr);

// Canonical edge TSV: per step, node-only lines for nodes first seen at that
// step or without edges, then edges in row order with 17 significant digits.
void write_snapshots(std::ostream& out, const DynamicNetwork& network);

// Lines "t<TAB>u<TAB>label". Returns a copy of `network` with the labels
// attached; nodes without a line have unknown membership. k defaults to the
// largest label.
DynamicNetwork read_groups(std::istream& in, const DynamicNetwork& network, int k = 0);
DynamicNetwork attach_groups(const std::filesystem::path& path, const DynamicNetwork& network, int k = 0);
void write_groups(std::ostream& out, const DynamicNetwork& network);
// Per-step labels from a layout sequence in the groups format.
void write_sequence_groups(std::ostream& out, const LayoutSequence& sequence);

void write_layout_json(std::ostream& out, const LayoutSequence& sequence);
LayoutSequence read_layout_json(std::istream& in);
// Long form "t,id,x1..xs,group".
void write_layout_csv(std::ostream& out, const LayoutSequence& sequence);
// "t,static_cost,centroid_cost,temporal_cost,iterations"; absent values are
// empty fields.
void write_costs_csv(std::ostream& out, const metrics::CostReport& report);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Formats a double with 17 significant digits.
std::string format_double(double value);

// Opens for reading or writing; failures raise InvalidInput.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace dynlayout::io
