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

#include "dynlayout/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dynlayout/error.hpp"

namespace dynlayout::io {
namespace {

using json = nlohmann::json;

std::string line_error(int line, const std::string& what) { return "line " + std::to_string(line) + ": " + what; }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
  } else {
    std::stringstream ss(line);
    std::string field;
    while (ss >> field) fields.push_back(field);
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

int parse_time(const std::string& s, int line) {
  int t = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), t);
  if (ec != std::errc() || ptr != s.data() + s.size() || t < 0) {
    throw InvalidInput(line_error(line, "time step must be a nonnegative integer, got '" + s + "'"));
  }
  return t;
}

double parse_number(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidInput(line_error(line, "expected a number, got '" + s + "'"));
  }
  return v;
}

struct RawStep {
  std::vector<NodeIndex> nodes;
  // Keyed by the (min, max) registry pair; value and first line seen.
  std::map<std::pair<NodeIndex, NodeIndex>, double> undirected;
  std::map<std::pair<NodeIndex, NodeIndex>, double> directed;
};

}  // namespace

InputKind parse_input_kind(std::string_view name) {
  if (name == "edge_tsv") return InputKind::kEdgeTsv;
  if (name == "rank_matrix") return InputKind::kRankMatrix;
  if (name == "count_matrix") return InputKind::kCountMatrix;
  throw InvalidInput("unknown input kind '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  return out;
}

DynamicNetwork read_snapshots(std::istream& in, const IngestOptions& options, std::vector<std::string>* warnings) {
  NodeRegistry registry;
  std::map<int, RawStep> steps;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    const auto fields = split_fields(text);
    if (fields.size() != 2 && fields.size() != 4) {
      throw InvalidInput(line_error(line, "expected 't u' or 't u v value', got " + std::to_string(fields.size()) +
                                              " fields"));
    }
    const int t = parse_time(fields[0], line);
    if (fields[1].empty()) throw InvalidInput(line_error(line, "empty node identifier"));
    RawStep& step = steps[t];
    const NodeIndex u = registry.intern(fields[1]);
    step.nodes.push_back(u);
    if (fields.size() == 2) continue;
    if (fields[2].empty()) throw InvalidInput(line_error(line, "empty node identifier"));
    const NodeIndex v = registry.intern(fields[2]);
    step.nodes.push_back(v);
    if (u == v) throw InvalidInput(line_error(line, "self-loop on node '" + fields[1] + "'"));
    const double value = parse_number(fields[3], line);

    switch (options.kind) {
      case InputKind::kEdgeTsv: {
        if (value <= 0.0) throw InvalidInput(line_error(line, "edge weight must be positive"));
        const auto key = std::minmax(u, v);
        auto [it, inserted] = step.undirected.try_emplace({key.first, key.second}, value);
        if (!inserted) {
          if (warnings) {
            warnings->push_back(line_error(line, "duplicate edge " + fields[1] + "-" + fields[2] + " at t=" +
                                                     fields[0] + " merged by max"));
          }
          it->second = std::max(it->second, value);
        }
        break;
      }
      case InputKind::kRankMatrix:
        if (value < 1.0 || value != std::floor(value)) {
          throw InvalidInput(line_error(line, "rank must be a positive integer"));
        }
        [[fallthrough]];
      case InputKind::kCountMatrix: {
        if (value < 0.0) throw InvalidInput(line_error(line, "count must be nonnegative"));
        auto [it, inserted] = step.directed.try_emplace({u, v}, value);
        if (!inserted) {
          if (warnings) warnings->push_back(line_error(line, "duplicate record " + fields[1] + "->" + fields[2]));
          it->second = options.kind == InputKind::kRankMatrix ? std::min(it->second, value)
                                                              : std::max(it->second, value);
        }
        break;
      }
    }
  }

  DynamicNetwork network(std::move(registry));
  for (auto& [t, raw] : steps) {
    std::sort(raw.nodes.begin(), raw.nodes.end());
    raw.nodes.erase(std::unique(raw.nodes.begin(), raw.nodes.end()), raw.nodes.end());
    std::map<NodeIndex, int> row;
    for (std::size_t i = 0; i < raw.nodes.size(); ++i) row[raw.nodes[i]] = static_cast<int>(i);
    const auto n = static_cast<Eigen::Index>(raw.nodes.size());
    Snapshot snap;
    snap.t = t;
    snap.active = raw.nodes;
    if (options.kind == InputKind::kEdgeTsv) {
      snap.W = Matrix::Zero(n, n);
      for (const auto& [key, w] : raw.undirected) snap.W(row[key.first], row[key.second]) = snap.W(row[key.second], row[key.first]) = w;
    } else {
      Matrix scores = Matrix::Zero(n, n);
      double max_rank = 0.0;
      for (const auto& [key, value] : raw.directed) max_rank = std::max(max_rank, value);
      for (const auto& [key, value] : raw.directed) {
        scores(row[key.first], row[key.second]) =
            options.kind == InputKind::kRankMatrix ? max_rank + 1.0 - value : value;
      }
      const TopMWeighting weighting = options.kind == InputKind::kRankMatrix ? options.weighting : TopMWeighting::kUnit;
      if (n <= options.m) throw InvalidInput("time step " + std::to_string(t) + ": fewer nodes than m + 1");
      snap.W = top_m_graph(scores, options.m, weighting);
    }
    network.append(std::move(snap));
  }
  return network;
}

DynamicNetwork ingest_snapshots(const std::filesystem::path& path, const IngestOptions& options,
                                std::vector<std::string>* warnings) {
  std::ifstream in = open_input(path);
  return read_snapshots(in, options, warnings);
}

void write_snapshots(std::ostream& out, const DynamicNetwork& network) {
  const NodeRegistry& registry = network.registry();
  std::vector<bool> seen(static_cast<std::size_t>(registry.size()), false);
  for (const Snapshot& snap : network.snapshots()) {
    const int n = snap.size();
    for (int i = 0; i < n; ++i) {
      const NodeIndex node = snap.active[static_cast<std::size_t>(i)];
      const bool isolated = (snap.W.row(i).array() == 0.0).all();
      if (!seen[static_cast<std::size_t>(node)] || isolated) out << snap.t << '\t' << registry.id(node) << '\n';
      seen[static_cast<std::size_t>(node)] = true;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (snap.W(i, j) == 0.0) continue;
        out << snap.t << '\t' << registry.id(snap.active[static_cast<std::size_t>(i)]) << '\t'
            << registry.id(snap.active[static_cast<std::size_t>(j)]) << '\t' << format_double(snap.W(i, j)) << '\n';
      }
    }
  }
}

DynamicNetwork read_groups(std::istream& in, const DynamicNetwork& network, int k) {
  std::map<int, std::map<NodeIndex, int>> labels;
  int max_label = 0;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    const auto fields = split_fields(text);
    if (fields.size() != 3) throw InvalidInput(line_error(line, "expected 't u label'"));
    const int t = parse_time(fields[0], line);
    const auto node = network.registry().find(fields[1]);
    if (!node) throw InvalidInput(line_error(line, "unknown node '" + fields[1] + "'"));
    const double value = parse_number(fields[2], line);
    if (value < 1.0 || value != std::floor(value)) throw InvalidInput(line_error(line, "label must be a positive integer"));
    const int label = static_cast<int>(value);
    if (k > 0 && label > k) throw InvalidInput(line_error(line, "label exceeds k = " + std::to_string(k)));
    labels[t][*node] = label;
    max_label = std::max(max_label, label);
  }
  const int groups = k > 0 ? k : max_label;
  DynamicNetwork out(network.registry());
  for (const Snapshot& snap : network.snapshots()) {
    Snapshot copy = snap;
    std::vector<std::optional<int>> per_node(static_cast<std::size_t>(snap.size()));
    if (const auto it = labels.find(snap.t); it != labels.end()) {
      for (const auto& [node, label] : it->second) {
        const auto row = snap.row_of(node);
        if (!row) {
          throw InvalidInput("groups: node '" + network.registry().id(node) + "' is not active at t=" +
                             std::to_string(snap.t));
        }
        per_node[static_cast<std::size_t>(*row)] = label;
      }
    }
    copy.groups = GroupAssignment::from_labels(std::move(per_node), groups);
    out.append(std::move(copy));
  }
  return out;
}

DynamicNetwork attach_groups(const std::filesystem::path& path, const DynamicNetwork& network, int k) {
  std::ifstream in = open_input(path);
  return read_groups(in, network, k);
}

void write_groups(std::ostream& out, const DynamicNetwork& network) {
  for (const Snapshot& snap : network.snapshots()) {
    if (!snap.groups) continue;
    for (int i = 0; i < snap.size(); ++i) {
      const auto& label = snap.groups->labels[static_cast<std::size_t>(i)];
      if (label) out << snap.t << '\t' << network.registry().id(snap.active[static_cast<std::size_t>(i)]) << '\t' << *label << '\n';
    }
  }
}

void write_sequence_groups(std::ostream& out, const LayoutSequence& sequence) {
  for (const StepLayout& step : sequence.steps) {
    for (std::size_t i = 0; i < step.nodes.size(); ++i) {
      if (step.labels.size() > i && step.labels[i]) {
        out << step.t << '\t' << sequence.ids.at(static_cast<std::size_t>(step.nodes[i])) << '\t' << *step.labels[i]
            << '\n';
      }
    }
  }
}

namespace {

json row_json(const Matrix& X, Eigen::Index i) {
  json r = json::array();
  for (Eigen::Index a = 0; a < X.cols(); ++a) r.push_back(X(i, a));
  return r;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void write_layout_json(std::ostream& out, const LayoutSequence& sequence) {
  const RunConfig& c = sequence.config;
  json doc;
  doc["metadata"] = {
      {"method", std::string(to_string(c.method))},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"epsilon", c.epsilon},
      {"dims", c.dims},
      {"seed", c.seed},
      {"groups", std::string(to_string(c.groups))},
      {"k", c.k},
      {"normalized", c.normalized},
      {"restarts", c.restarts},
      {"lambda_grid", c.lambda_grid},
      {"dissimilarity", c.dissimilarity == DissimilarityMode::kInverse ? "inverse" : "linear"},
  };
  doc["ids"] = sequence.ids;
  doc["steps"] = json::array();
  for (const StepLayout& step : sequence.steps) {
    json s;
    s["t"] = step.t;
    s["nodes"] = json::array();
    for (std::size_t i = 0; i < step.nodes.size(); ++i) {
      s["nodes"].push_back({{"id", sequence.ids.at(static_cast<std::size_t>(step.nodes[i]))},
                            {"x", row_json(step.layout.X, static_cast<Eigen::Index>(i))},
                            {"group", step.labels.size() > i ? optional_json(step.labels[i]) : json(nullptr)}});
    }
    s["representatives"] = json::array();
    for (std::size_t g = 0; g < step.group_ids.size(); ++g) {
      s["representatives"].push_back(
          {{"group", step.group_ids[g]}, {"x", row_json(step.layout.Y, static_cast<Eigen::Index>(g))}});
    }
    s["forgetting_factor"] = optional_json(step.forgetting_factor);
    s["lambda"] = optional_json(step.lambda);
    s["iterations"] = step.report ? json(step.report->iterations) : json(nullptr);
    doc["steps"].push_back(std::move(s));
  }
  out << doc.dump(1) << '\n';
}

LayoutSequence read_layout_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
    LayoutSequence seq;
    const json& m = doc.at("metadata");
    RunConfig& c = seq.config;
    c.method = parse_method(m.at("method").get<std::string>());
    c.alpha = m.at("alpha").get<double>();
    c.beta = m.at("beta").get<double>();
    c.epsilon = m.at("epsilon").get<double>();
    c.dims = m.at("dims").get<int>();
    c.seed = m.at("seed").get<std::uint64_t>();
    c.groups = parse_group_mode(m.at("groups").get<std::string>());
    c.k = m.value("k", 0);
    c.normalized = m.value("normalized", false);
    c.restarts = m.value("restarts", 0);
    if (m.contains("lambda_grid")) c.lambda_grid = m.at("lambda_grid").get<std::vector<double>>();
    c.dissimilarity = m.value("dissimilarity", std::string("inverse")) == "linear" ? DissimilarityMode::kLinear
                                                                                 : DissimilarityMode::kInverse;
    seq.ids = doc.at("ids").get<std::vector<std::string>>();
    std::map<std::string, NodeIndex> index;
    for (std::size_t i = 0; i < seq.ids.size(); ++i) index[seq.ids[i]] = static_cast<NodeIndex>(i);

    for (const json& s : doc.at("steps")) {
      StepLayout step;
      step.t = s.at("t").get<int>();
      const json& nodes = s.at("nodes");
      step.layout.X = Matrix(static_cast<Eigen::Index>(nodes.size()), c.dims);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto id = nodes[i].at("id").get<std::string>();
        const auto it = index.find(id);
        if (it == index.end()) throw InvalidInput("layout document: unknown node '" + id + "'");
        step.nodes.push_back(it->second);
        const auto x = nodes[i].at("x").get<std::vector<double>>();
        if (static_cast<int>(x.size()) != c.dims) throw InvalidInput("layout document: coordinate length mismatch");
        for (int a = 0; a < c.dims; ++a) step.layout.X(static_cast<Eigen::Index>(i), a) = x[static_cast<std::size_t>(a)];
        const json& g = nodes[i].at("group");
        step.labels.push_back(g.is_null() ? std::nullopt : std::optional<int>(g.get<int>()));
      }
      const json& reps = s.at("representatives");
      step.layout.Y = Matrix(static_cast<Eigen::Index>(reps.size()), c.dims);
      for (std::size_t g = 0; g < reps.size(); ++g) {
        step.group_ids.push_back(reps[g].at("group").get<int>());
        const auto x = reps[g].at("x").get<std::vector<double>>();
        if (static_cast<int>(x.size()) != c.dims) throw InvalidInput("layout document: coordinate length mismatch");
        for (int a = 0; a < c.dims; ++a) step.layout.Y(static_cast<Eigen::Index>(g), a) = x[static_cast<std::size_t>(a)];
      }
      if (!s.at("forgetting_factor").is_null()) step.forgetting_factor = s.at("forgetting_factor").get<double>();
      if (!s.at("lambda").is_null()) step.lambda = s.at("lambda").get<double>();
      if (!s.at("iterations").is_null()) {
        step.report = mds::SmacofReport{};
        step.report->iterations = s.at("iterations").get<int>();
      }
      seq.steps.push_back(std::move(step));
    }
    return seq;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed layout document: ") + e.what());
  }
}

void write_layout_csv(std::ostream& out, const LayoutSequence& sequence) {
  out << "t,id";
  for (int a = 1; a <= sequence.config.dims; ++a) out << ",x" << a;
  out << ",group\n";
  for (const StepLayout& step : sequence.steps) {
    for (std::size_t i = 0; i < step.nodes.size(); ++i) {
      out << step.t << ',' << sequence.ids.at(static_cast<std::size_t>(step.nodes[i]));
      for (Eigen::Index a = 0; a < step.layout.X.cols(); ++a) {
        out << ',' << format_double(step.layout.X(static_cast<Eigen::Index>(i), a));
      }
      out << ',';
      if (step.labels.size() > i && step.labels[i]) out << *step.labels[i];
      out << '\n';
    }
  }
}

void write_costs_csv(std::ostream& out, const metrics::CostReport& report) {
  out << "t,static_cost,centroid_cost,temporal_cost,iterations\n";
  for (const metrics::CostRecord& r : report.records) {
    out << r.t << ',' << format_double(r.static_cost) << ',' << format_double(r.centroid_cost) << ',';
    if (r.temporal_cost) out << format_double(*r.temporal_cost);
    out << ',';
    if (r.iterations) out << *r.iterations;
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "alpha,beta,mean_static,mean_centroid,mean_temporal,mean_iterations\n";
  for (const SweepCell& c : sweep.cells) {
    out << format_double(c.alpha) << ',' << format_double(c.beta) << ',' << format_double(c.mean_static) << ','
        << format_double(c.mean_centroid) << ',' << format_double(c.mean_temporal) << ','
        << format_double(c.mean_iterations) << '\n';
  }
}

}  // namespace dynlayout::io
