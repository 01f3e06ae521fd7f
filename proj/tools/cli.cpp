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

#include "dynlayout_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynlayout/error.hpp"
#include "dynlayout/io.hpp"
#include "dynlayout/metrics.hpp"
#include "dynlayout/pipeline.hpp"
#include "dynlayout/render.hpp"
#include "dynlayout/sbm.hpp"

namespace dynlayout::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kMethods = {"dmds", "mds-static", "mds-stabilized", "dgll", "spectral", "ccdr", "bfp"};
const std::vector<std::string> kKinds = {"edge_tsv", "rank_matrix", "count_matrix"};

struct InputArgs {
  std::string path;
  std::string kind = "edge_tsv";
  int top_m = 4;
  std::string weighting = "rank_descending";
};

struct LayoutArgs {
  std::string method = "dmds";
  double alpha = 1.0;
  double beta = 1.0;
  double epsilon = 1e-4;
  int max_iterations = 1000;
  int dims = 2;
  std::string groups = "none";
  int k = 0;
  std::uint64_t seed = 0;
  bool normalized = false;
  int restarts = 0;
  std::string lambda_grid = "21";
  std::string dissimilarity = "inverse";
  bool reentry_anchor = false;
};

void add_input(CLI::App* cmd, InputArgs& a, bool required) {
  auto* opt = cmd->add_option("input", a.path, "Snapshot file");
  if (required) opt->required();
  cmd->add_option("--kind", a.kind, "Input kind")->check(CLI::IsMember(kKinds))->capture_default_str();
  cmd->add_option("--top-m", a.top_m, "Peers kept per node for rank/count inputs")->capture_default_str();
  cmd->add_option("--weighting", a.weighting, "Top-m edge weights")
      ->check(CLI::IsMember({"rank_descending", "unit"}))
      ->capture_default_str();
}

void add_layout(CLI::App* cmd, LayoutArgs& a, bool with_weights) {
  cmd->add_option("--method", a.method, "Layout method")->check(CLI::IsMember(kMethods))->capture_default_str();
  if (with_weights) {
    cmd->add_option("--alpha", a.alpha, "Grouping penalty weight")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--beta", a.beta, "Temporal penalty weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  }
  cmd->add_option("--epsilon", a.epsilon, "Relative stress decrease tolerance")->capture_default_str();
  cmd->add_option("--max-iterations", a.max_iterations, "Majorization iteration cap")->capture_default_str();
  cmd->add_option("--dims", a.dims, "Layout dimension")->check(CLI::Range(1, 3))->capture_default_str();
  cmd->add_option("--groups", a.groups, "Group source: a groups file, 'learn' or 'none'")->capture_default_str();
  cmd->add_option("--k", a.k, "Cluster count for learned groups (or group count for a groups file)");
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--normalized", a.normalized, "Degree-normalized Laplacian layouts");
  cmd->add_option("--restarts", a.restarts, "Random restarts for the constrained solver")->capture_default_str();
  cmd->add_option("--lambda-grid", a.lambda_grid, "Smoothing grid: a point count on [0,1] or a comma list")
      ->capture_default_str();
  cmd->add_option("--dissimilarity", a.dissimilarity, "Similarity to distance conversion")
      ->check(CLI::IsMember({"inverse", "linear"}))
      ->capture_default_str();
  cmd->add_flag("--reentry-anchor", a.reentry_anchor, "Anchor re-entering nodes to their last position");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("not a number: '" + item + "'");
    }
  }
  return values;
}

std::vector<double> parse_lambda_grid(const std::string& text) {
  if (text.find(',') == std::string::npos && text.find('.') == std::string::npos) {
    const auto values = parse_list(text);
    const int count = static_cast<int>(values.at(0));
    if (count < 1) throw InvalidInput("lambda grid needs at least one point");
    return linear_grid(0.0, 1.0, count);
  }
  auto grid = parse_list(text);
  for (double l : grid) {
    if (l < 0.0 || l > 1.0) throw InvalidInput("lambda grid values must lie in [0, 1]");
  }
  return grid;
}

// "lo:hi:count" on a log scale, or a comma list.
std::vector<double> parse_sweep_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item).at(0));
  if (parts.size() != 3 || parts[0] <= 0.0 || parts[1] <= 0.0 || parts[2] < 1.0) {
    throw InvalidInput("grid must be 'lo:hi:count' with positive bounds");
  }
  return log_grid(parts[0], parts[1], static_cast<int>(parts[2]));
}

DynamicNetwork load_network(const InputArgs& a, std::ostream& err) {
  io::IngestOptions options;
  options.kind = io::parse_input_kind(a.kind);
  options.m = a.top_m;
  options.weighting = a.weighting == "unit" ? TopMWeighting::kUnit : TopMWeighting::kRankDescending;
  std::vector<std::string> warnings;
  DynamicNetwork network = io::ingest_snapshots(a.path, options, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return network;
}

// Resolves --groups into a run mode, attaching a groups file when given.
RunConfig make_config(const LayoutArgs& a, DynamicNetwork& network) {
  RunConfig c;
  c.method = parse_method(a.method);
  c.alpha = a.alpha;
  c.beta = a.beta;
  c.epsilon = a.epsilon;
  c.max_iterations = a.max_iterations;
  c.dims = a.dims;
  c.k = a.k;
  c.seed = a.seed;
  c.normalized = a.normalized;
  c.restarts = a.restarts;
  c.lambda_grid = parse_lambda_grid(a.lambda_grid);
  c.dissimilarity = a.dissimilarity == "linear" ? DissimilarityMode::kLinear : DissimilarityMode::kInverse;
  c.reentry_anchor = a.reentry_anchor;
  if (a.groups == "none") {
    c.groups = GroupMode::kNone;
  } else if (a.groups == "learn") {
    c.groups = GroupMode::kLearned;
    if (a.k < 1) throw InvalidInput("--groups learn needs --k");
  } else {
    network = io::attach_groups(a.groups, network, a.k);
    c.groups = GroupMode::kKnown;
  }
  return c;
}

template <typename Write>
void write_file(const fs::path& path, Write write) {
  std::ofstream out = io::open_output(path);
  write(out);
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

int run_layout(const InputArgs& in, const LayoutArgs& a, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  DynamicNetwork network = load_network(in, err);
  const RunConfig config = make_config(a, network);
  const RunResult result = run_sequence(network, config);
  const fs::path dir(out_dir);
  write_file(dir / "layout.json", [&](std::ostream& o) { io::write_layout_json(o, result.sequence); });
  write_file(dir / "layout.csv", [&](std::ostream& o) { io::write_layout_csv(o, result.sequence); });
  write_file(dir / "costs.csv", [&](std::ostream& o) { io::write_costs_csv(o, result.costs); });
  out << "wrote " << result.sequence.steps.size() << " steps to " << dir.string() << '\n';
  return 0;
}

int run_cluster(const InputArgs& in, int k, std::uint64_t seed, int max_refine, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
  const DynamicNetwork network = load_network(in, err);
  const auto steps = cluster_sequence(network, k, seed, max_refine);
  const fs::path dir(out_dir);
  write_file(dir / "groups.tsv", [&](std::ostream& o) {
    for (const ClusterStep& s : steps) {
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        o << s.t << '\t' << network.registry().id(s.nodes[i]) << '\t' << s.labels[i] << '\n';
      }
    }
  });
  write_file(dir / "forgetting.csv", [&](std::ostream& o) {
    o << "t,alpha\n";
    for (const ClusterStep& s : steps) o << s.t << ',' << io::format_double(s.forgetting_factor) << '\n';
  });
  out << "clustered " << steps.size() << " steps into " << dir.string() << '\n';
  return 0;
}

LayoutSequence load_sequence(const std::string& path) {
  std::ifstream in = io::open_input(path);
  return io::read_layout_json(in);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic graph layout with grouping and temporal regularization"};
  app.name("dynlayout");
  app.require_subcommand(1);

  InputArgs layout_in;
  LayoutArgs layout_args;
  std::string layout_out;
  auto* layout = app.add_subcommand("layout", "Lay out a snapshot sequence");
  add_input(layout, layout_in, true);
  add_layout(layout, layout_args, true);
  layout->add_option("--out", layout_out, "Output directory")->required();

  InputArgs cluster_in;
  int cluster_k = 0;
  std::uint64_t cluster_seed = 0;
  int max_refine = 10;
  std::string cluster_out;
  auto* cluster = app.add_subcommand("cluster", "Evolutionary spectral clustering of a snapshot sequence");
  add_input(cluster, cluster_in, true);
  cluster->add_option("--k", cluster_k, "Cluster count")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--seed", cluster_seed, "Random seed");
  cluster->add_option("--max-refine", max_refine, "Refinement rounds per step")->capture_default_str();
  cluster->add_option("--out", cluster_out, "Output directory")->required();

  sbm::SbmConfig sbm_config = sbm::SbmConfig::protocol(0);
  double p_in = 0.6, p_out = 0.2;
  int change_step = 10;
  std::string sbm_out, sbm_groups_out;
  auto* simulate = app.add_subcommand("simulate-sbm", "Sample a stochastic block model sequence");
  simulate->add_option("--n", sbm_config.n, "Nodes")->capture_default_str();
  simulate->add_option("--k", sbm_config.k, "Groups")->capture_default_str();
  simulate->add_option("--p-in", p_in, "Within-group edge probability")->capture_default_str();
  simulate->add_option("--p-out", p_out, "Between-group edge probability")->capture_default_str();
  simulate->add_option("--steps", sbm_config.T, "Time steps")->capture_default_str();
  simulate->add_option("--change-step", change_step, "Reassignment step (negative for none)")->capture_default_str();
  simulate->add_option("--change-fraction", sbm_config.change_fraction, "Fraction of nodes reassigned")
      ->capture_default_str();
  simulate->add_flag("--balanced", sbm_config.balanced, "Near-equal initial group sizes");
  simulate->add_option("--seed", sbm_config.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sbm_out, "Snapshot file to write")->required();
  simulate->add_option("--groups-out", sbm_groups_out, "Planted groups file to write");

  InputArgs sweep_in;
  LayoutArgs sweep_args;
  std::string alpha_grid = "0.1:10:10", beta_grid = "0.1:10:10", sweep_out;
  int sbm_runs = 0, threads = 1;
  auto* sweep = app.add_subcommand("sweep", "Mean costs over an alpha x beta grid");
  add_input(sweep, sweep_in, false);
  add_layout(sweep, sweep_args, false);
  sweep->add_option("--alpha-grid", alpha_grid, "'lo:hi:count' (log scale) or a comma list")->capture_default_str();
  sweep->add_option("--beta-grid", beta_grid, "'lo:hi:count' (log scale) or a comma list")->capture_default_str();
  sweep->add_option("--sbm-runs", sbm_runs, "Use this many simulated SBM sequences instead of an input file");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV file to write")->required();

  InputArgs metrics_in;
  std::string metrics_layout, metrics_groups, metrics_out, movement_out;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute costs of a stored layout");
  add_input(metrics_cmd, metrics_in, true);
  metrics_cmd->add_option("--layout", metrics_layout, "Layout JSON document")->required();
  metrics_cmd->add_option("--groups", metrics_groups, "Known groups file for the centroid cost");
  metrics_cmd->add_option("--out", metrics_out, "Costs CSV to write (default: standard output)");
  metrics_cmd->add_option("--movement", movement_out, "Per-node cumulative movement CSV to write");

  InputArgs render_in;
  std::string render_layout, render_out;
  bool movement = false;
  auto* render_cmd = app.add_subcommand("render", "Render SVG frames or a 1-D time plot");
  render_cmd->add_option("input", render_in.path, "Snapshot file for drawing edges");
  render_cmd->add_option("--kind", render_in.kind, "Input kind")->check(CLI::IsMember(kKinds));
  render_cmd->add_option("--top-m", render_in.top_m, "Peers kept per node for rank/count inputs");
  render_cmd->add_option("--layout", render_layout, "Layout JSON document")->required();
  render_cmd->add_option("--out", render_out, "Output directory")->required();
  render_cmd->add_flag("--movement", movement, "Overlay node movement from the previous step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const bool help = e.get_exit_code() == 0;
    app.exit(e, out, err);
    if (!help) err << app.help();
    return help ? 0 : 1;
  }

  try {
    if (layout->parsed()) return run_layout(layout_in, layout_args, layout_out, out, err);
    if (cluster->parsed()) return run_cluster(cluster_in, cluster_k, cluster_seed, max_refine, cluster_out, out, err);
    if (simulate->parsed()) {
      sbm_config.P = sbm::SbmConfig::two_level(sbm_config.k, p_in, p_out);
      sbm_config.change_step = change_step >= 0 ? std::optional<int>(change_step) : std::nullopt;
      const sbm::SbmSequence seq = sbm::sbm_sequence(sbm_config);
      write_file(sbm_out, [&](std::ostream& o) { io::write_snapshots(o, seq.network); });
      if (!sbm_groups_out.empty()) {
        write_file(sbm_groups_out, [&](std::ostream& o) { io::write_groups(o, seq.network); });
      }
      out << "wrote " << seq.network.size() << " snapshots to " << sbm_out << '\n';
      return 0;
    }
    if (sweep->parsed()) {
      std::vector<DynamicNetwork> networks;
      std::vector<std::uint64_t> seeds;
      RunConfig config;
      if (sbm_runs > 0) {
        for (int r = 0; r < sbm_runs; ++r) {
          const auto seed = sweep_args.seed + static_cast<std::uint64_t>(r);
          networks.push_back(sbm::sbm_sequence(sbm::SbmConfig::protocol(seed)).network);
          seeds.push_back(seed);
        }
        DynamicNetwork probe = networks.front();
        config = make_config(sweep_args, probe);
        if (config.groups == GroupMode::kKnown) throw InvalidInput("simulated sweeps carry their own groups; use none");
      } else {
        if (sweep_in.path.empty()) throw InvalidInput("sweep needs an input file or --sbm-runs");
        DynamicNetwork network = load_network(sweep_in, err);
        config = make_config(sweep_args, network);
        networks.push_back(std::move(network));
        seeds.push_back(sweep_args.seed);
      }
      // Simulated networks always carry planted groups; use them unless learning.
      if (sbm_runs > 0 && config.groups == GroupMode::kNone && sweep_args.groups == "none") {
        config.groups = GroupMode::kKnown;
      }
      const auto alphas = parse_sweep_grid(alpha_grid);
      const auto betas = parse_sweep_grid(beta_grid);
      const SweepResult result = parameter_sweep(networks, seeds, config, alphas, betas, threads);
      write_file(sweep_out, [&](std::ostream& o) { io::write_sweep_csv(o, result); });
      out << "wrote " << result.cells.size() << " sweep cells to " << sweep_out << '\n';
      return 0;
    }
    if (metrics_cmd->parsed()) {
      DynamicNetwork network = load_network(metrics_in, err);
      if (!metrics_groups.empty()) network = io::attach_groups(metrics_groups, network);
      const LayoutSequence seq = load_sequence(metrics_layout);
      const metrics::CostReport report = score_sequence(seq, network);
      if (metrics_out.empty()) {
        io::write_costs_csv(out, report);
      } else {
        write_file(metrics_out, [&](std::ostream& o) { io::write_costs_csv(o, report); });
      }
      if (!movement_out.empty()) {
        write_file(movement_out, [&](std::ostream& o) {
          o << "id,movement\n";
          for (std::size_t node = 0; node < seq.ids.size(); ++node) {
            std::vector<std::optional<Vector>> trajectory;
            for (const StepLayout& step : seq.steps) {
              std::optional<Vector> position;
              for (std::size_t i = 0; i < step.nodes.size(); ++i) {
                if (static_cast<std::size_t>(step.nodes[i]) == node) {
                  position = step.layout.X.row(static_cast<Eigen::Index>(i)).transpose();
                }
              }
              trajectory.push_back(position);
            }
            o << seq.ids[node] << ',' << io::format_double(metrics::cumulative_movement(trajectory)) << '\n';
          }
        });
      }
      return 0;
    }
    if (render_cmd->parsed()) {
      const LayoutSequence seq = load_sequence(render_layout);
      render::RenderOptions options;
      options.movement = movement;
      if (seq.config.dims == 1) {
        render::render_timeplot(seq, fs::path(render_out) / "timeplot.svg", options);
        out << "wrote time plot to " << render_out << '\n';
        return 0;
      }
      std::optional<DynamicNetwork> network;
      if (!render_in.path.empty()) network = load_network(render_in, err);
      const auto frames = render::render_frames(seq, network ? &*network : nullptr, render_out, options);
      out << "wrote " << frames.size() << " frames to " << render_out << '\n';
      return 0;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace dynlayout::cli
