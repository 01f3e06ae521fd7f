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
#include "dynlayout/pipeline.hpp"

namespace dynlayout::render {

struct RenderOptions {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double node_radius = 6.0;
  double max_edge_width = 3.0;
  // Ghost nodes at the previous positions joined to the current ones.
  bool movement = false;
};

// Pixel transform fitted to every node position of the whole sequence, so
// all frames share one viewport.
struct Viewport {
  double min_x = 0.0, min_y = 0.0, scale = 1.0, offset_x = 0.0, offset_y = 0.0;
  static Viewport fit(const LayoutSequence& sequence, const RenderOptions& options);
  [[nodiscard]] double px(double x) const { return offset_x + (x - min_x) * scale; }
  [[nodiscard]] double py(double y) const { return offset_y + (y - min_y) * scale; }
};

std::string group_color(const std::optional<int>& group);

// One SVG document for a step of a 2-D sequence. `network` supplies edges and
// may be null.
void write_frame(std::ostream& out, const LayoutSequence& sequence, std::size_t step, const DynamicNetwork* network,
                 const Viewport& viewport, const RenderOptions& options);

// Writes frame_0000.svg... into `out_dir`, one per step; returns the paths.
// Throws InvalidInput unless the layout is 2-D.
std::vector<std::filesystem::path> render_frames(const LayoutSequence& sequence, const DynamicNetwork* network,
                                                 const std::filesystem::path& out_dir, const RenderOptions& options = {});

// Time plot of a 1-D sequence: time on the horizontal axis, coordinate on the
// vertical; segment t -> t+1 is colored by the node's group at t.
void write_timeplot(std::ostream& out, const LayoutSequence& sequence, const RenderOptions& options = {});
void render_timeplot(const LayoutSequence& sequence, const std::filesystem::path& out_file,
                     const RenderOptions& options = {});

}  // namespace dynlayout::render
