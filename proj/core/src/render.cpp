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

#include "dynlayout/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "dynlayout/error.hpp"
#include "dynlayout/io.hpp"

namespace dynlayout::render {
namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", v);
  return buffer;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostream& out, const RenderOptions& options) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(options.width) << "\" height=\""
      << num(options.height) << "\" viewBox=\"0 0 " << num(options.width) << ' ' << num(options.height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string group_color(const std::optional<int>& group) {
  if (!group) return "#999999";
  return kPalette[static_cast<std::size_t>(*group - 1) % kPalette.size()];
}

Viewport Viewport::fit(const LayoutSequence& sequence, const RenderOptions& options) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const StepLayout& step : sequence.steps) {
    const Matrix& X = step.layout.X;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      min_x = std::min(min_x, X(i, 0));
      max_x = std::max(max_x, X(i, 0));
      const double y = X.cols() > 1 ? X(i, 1) : 0.0;
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  Viewport v;
  if (!std::isfinite(min_x)) return v;
  const double span_x = std::max(max_x - min_x, 1e-12);
  const double span_y = std::max(max_y - min_y, 1e-12);
  const double inner_w = options.width - 2.0 * options.margin;
  const double inner_h = options.height - 2.0 * options.margin;
  v.scale = std::min(inner_w / span_x, inner_h / span_y);
  if (max_x == min_x && max_y == min_y) v.scale = 1.0;
  v.min_x = min_x;
  v.min_y = min_y;
  v.offset_x = options.margin + 0.5 * (inner_w - (max_x - min_x) * v.scale);
  v.offset_y = options.margin + 0.5 * (inner_h - (max_y - min_y) * v.scale);
  return v;
}

void write_frame(std::ostream& out, const LayoutSequence& sequence, std::size_t index, const DynamicNetwork* network,
                 const Viewport& viewport, const RenderOptions& options) {
  const StepLayout& step = sequence.steps.at(index);
  const Matrix& X = step.layout.X;
  if (X.cols() != 2) throw InvalidInput("frame rendering needs a 2-D layout; use the time plot for 1-D");
  header(out, options);
  out << "<g id=\"t" << step.t << "\">\n";

  if (network) {
    const Snapshot* snap = nullptr;
    for (const Snapshot& s : network->snapshots()) {
      if (s.t == step.t) snap = &s;
    }
    if (snap && snap->active == step.nodes) {
      const double w_max = snap->W.size() > 0 ? snap->W.maxCoeff() : 0.0;
      out << "<g stroke=\"#555555\" stroke-opacity=\"0.5\">\n";
      for (int i = 0; i < snap->size(); ++i) {
        for (int j = i + 1; j < snap->size(); ++j) {
          if (snap->W(i, j) <= 0.0) continue;
          out << "<line x1=\"" << num(viewport.px(X(i, 0))) << "\" y1=\"" << num(viewport.py(X(i, 1))) << "\" x2=\""
              << num(viewport.px(X(j, 0))) << "\" y2=\"" << num(viewport.py(X(j, 1))) << "\" stroke-width=\""
              << num(options.max_edge_width * snap->W(i, j) / w_max) << "\"/>\n";
        }
      }
      out << "</g>\n";
    }
  }

  if (options.movement && index > 0) {
    const StepLayout& prev = sequence.steps[index - 1];
    std::map<NodeIndex, Eigen::Index> prev_row;
    for (std::size_t i = 0; i < prev.nodes.size(); ++i) prev_row[prev.nodes[i]] = static_cast<Eigen::Index>(i);
    out << "<g class=\"movement\">\n";
    for (std::size_t i = 0; i < step.nodes.size(); ++i) {
      const auto it = prev_row.find(step.nodes[i]);
      if (it == prev_row.end()) continue;
      const auto r = static_cast<Eigen::Index>(i);
      const std::string color = group_color(step.labels.size() > i ? step.labels[i] : std::nullopt);
      out << "<line x1=\"" << num(viewport.px(prev.layout.X(it->second, 0))) << "\" y1=\""
          << num(viewport.py(prev.layout.X(it->second, 1))) << "\" x2=\"" << num(viewport.px(X(r, 0))) << "\" y2=\""
          << num(viewport.py(X(r, 1))) << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
      out << "<circle cx=\"" << num(viewport.px(prev.layout.X(it->second, 0))) << "\" cy=\""
          << num(viewport.py(prev.layout.X(it->second, 1))) << "\" r=\"" << num(options.node_radius)
          << "\" fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"" << color << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g class=\"nodes\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < step.nodes.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << "<circle cx=\"" << num(viewport.px(X(r, 0))) << "\" cy=\"" << num(viewport.py(X(r, 1))) << "\" r=\""
        << num(options.node_radius) << "\" fill=\""
        << group_color(step.labels.size() > i ? step.labels[i] : std::nullopt) << "\"><title>"
        << escape(sequence.ids.at(static_cast<std::size_t>(step.nodes[i]))) << "</title></circle>\n";
  }
  out << "</g>\n</g>\n</svg>\n";
}

std::vector<std::filesystem::path> render_frames(const LayoutSequence& sequence, const DynamicNetwork* network,
                                                 const std::filesystem::path& out_dir, const RenderOptions& options) {
  if (sequence.config.dims != 2) throw InvalidInput("frame rendering needs a 2-D layout; use the time plot for 1-D");
  std::filesystem::create_directories(out_dir);
  const Viewport viewport = Viewport::fit(sequence, options);
  std::vector<std::filesystem::path> paths;
  for (std::size_t i = 0; i < sequence.steps.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", i);
    paths.push_back(out_dir / name);
    std::ofstream out = io::open_output(paths.back());
    write_frame(out, sequence, i, network, viewport, options);
  }
  return paths;
}

void write_timeplot(std::ostream& out, const LayoutSequence& sequence, const RenderOptions& options) {
  if (sequence.config.dims != 1) throw InvalidInput("time plots need a 1-D layout");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const StepLayout& step : sequence.steps) {
    if (step.layout.X.size() == 0) continue;
    lo = std::min(lo, step.layout.X.minCoeff());
    hi = std::max(hi, step.layout.X.maxCoeff());
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const double inner_w = options.width - 2.0 * options.margin;
  const double inner_h = options.height - 2.0 * options.margin;
  const std::size_t T = sequence.steps.size();
  auto px = [&](std::size_t s) { return options.margin + (T > 1 ? inner_w * static_cast<double>(s) / (T - 1) : 0.5 * inner_w); };
  auto py = [&](double x) { return options.margin + (hi > lo ? inner_h * (hi - x) / (hi - lo) : 0.5 * inner_h); };

  header(out, options);
  out << "<g class=\"segments\" stroke-width=\"1.5\" fill=\"none\">\n";
  for (std::size_t s = 0; s + 1 < T; ++s) {
    const StepLayout& a = sequence.steps[s];
    const StepLayout& b = sequence.steps[s + 1];
    std::map<NodeIndex, Eigen::Index> next_row;
    for (std::size_t i = 0; i < b.nodes.size(); ++i) next_row[b.nodes[i]] = static_cast<Eigen::Index>(i);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      const auto it = next_row.find(a.nodes[i]);
      if (it == next_row.end()) continue;
      out << "<line x1=\"" << num(px(s)) << "\" y1=\"" << num(py(a.layout.X(static_cast<Eigen::Index>(i), 0)))
          << "\" x2=\"" << num(px(s + 1)) << "\" y2=\"" << num(py(b.layout.X(it->second, 0))) << "\" stroke=\""
          << group_color(a.labels.size() > i ? a.labels[i] : std::nullopt) << "\"/>\n";
    }
  }
  out << "</g>\n<g class=\"points\">\n";
  for (std::size_t s = 0; s < T; ++s) {
    const StepLayout& a = sequence.steps[s];
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      out << "<circle cx=\"" << num(px(s)) << "\" cy=\"" << num(py(a.layout.X(static_cast<Eigen::Index>(i), 0)))
          << "\" r=\"2\" fill=\"" << group_color(a.labels.size() > i ? a.labels[i] : std::nullopt) << "\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
}

void render_timeplot(const LayoutSequence& sequence, const std::filesystem::path& out_file,
                     const RenderOptions& options) {
  std::ofstream out = io::open_output(out_file);
  write_timeplot(out, sequence, options);
}

}  // namespace dynlayout::render
