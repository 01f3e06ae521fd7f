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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dynlayout/clustering.hpp"
#include "dynlayout/error.hpp"
#include "dynlayout/gll.hpp"
#include "dynlayout/mds.hpp"
#include "dynlayout/numerics.hpp"
#include "dynlayout/paths.hpp"
#include "dynlayout/pipeline.hpp"
#include "dynlayout/rng.hpp"
#include "dynlayout/sbm.hpp"
#include "dynlayout_cli/cli.hpp"
#include "oracles.hpp"

namespace {

using dynlayout::DynamicNetwork;
using dynlayout::GroupMode;
using dynlayout::Matrix;
using dynlayout::Method;
using dynlayout::Rng;
using dynlayout::RunConfig;
using dynlayout::RunResult;
using dynlayout::Vector;
namespace fs = std::filesystem;

constexpr int kProtocolSeeds = 50;
constexpr int kSweepSeedsMds = 10;
constexpr int kSweepSeedsGll = 4;
constexpr double kMargin = 0.95;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool clearly_below(double a, double b) { return a <= kMargin * b; }

// Stress traces of every majorization run, checked by criterion 6.
struct TraceLog {
  long runs = 0;
  long violations = 0;
  double worst = 0.0;
  void add(const std::vector<double>& trace) {
    ++runs;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const double excess = trace[i] - trace[i - 1];
      if (excess > 1e-12 * std::abs(trace[i - 1])) {
        ++violations;
        worst = std::max(worst, excess / std::max(std::abs(trace[i - 1]), 1e-300));
      }
    }
  }
  void add(const RunResult& result) {
    for (const auto& step : result.sequence.steps) {
      if (step.report && (result.sequence.config.method == Method::kDmds ||
                          result.sequence.config.method == Method::kMdsStatic)) {
        add(step.report->stress_trace);
      }
    }
  }
};
TraceLog traces;

// Per-method seed-averaged means and per-step series.
struct Summary {
  std::vector<double> temporal, centroid, statics, iterations;
  std::vector<std::vector<double>> centroid_at, temporal_at;  // [t][seed]
  void add(const RunResult& r) {
    temporal.push_back(r.costs.mean_temporal());
    centroid.push_back(r.costs.mean_centroid());
    statics.push_back(r.costs.mean_static());
    iterations.push_back(r.costs.mean_iterations());
    if (centroid_at.size() < r.costs.records.size()) {
      centroid_at.resize(r.costs.records.size());
      temporal_at.resize(r.costs.records.size());
    }
    for (const auto& rec : r.costs.records) {
      const auto t = static_cast<std::size_t>(rec.t);
      centroid_at[t].push_back(rec.centroid_cost);
      if (rec.temporal_cost) temporal_at[t].push_back(*rec.temporal_cost);
    }
  }
};

RunConfig config_for(Method method, GroupMode groups, std::uint64_t seed, bool normalized) {
  RunConfig c;
  c.method = method;
  c.groups = groups;
  c.k = groups == GroupMode::kLearned ? 4 : 0;
  c.seed = seed;
  c.normalized = normalized;
  return c;
}

std::vector<DynamicNetwork> protocol_networks(int count, std::optional<int> change = 10) {
  std::vector<DynamicNetwork> out;
  for (int s = 0; s < count; ++s) {
    auto cfg = dynlayout::sbm::SbmConfig::protocol(static_cast<std::uint64_t>(s + 1));
    cfg.change_step = change;
    out.push_back(dynlayout::sbm::sbm_sequence(cfg).network);
  }
  return out;
}

Matrix random_connected_graph(int n, Rng& rng, double extra = 0.4) {
  Matrix W = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i)));
    W(i, j) = W(j, i) = rng.uniform(0.5, 2.0);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (W(i, j) == 0.0 && rng.bernoulli(extra)) W(i, j) = W(j, i) = rng.uniform(0.5, 2.0);
    }
  }
  return W;
}

Matrix random_membership(int n, int k, Rng& rng, bool allow_unlabeled = true) {
  Matrix C = Matrix::Zero(n, k);
  if (k == 0) return C;
  for (int i = 0; i < n; ++i) {
    if (allow_unlabeled && rng.bernoulli(0.15)) continue;
    C(i, static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(k)))) = 1.0;
  }
  return C;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  Matrix X(rows, cols);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-scale, scale);
  return X;
}

Vector stack(const Matrix& X) { return Eigen::Map<const Vector>(X.data(), X.size()); }
Matrix unstack(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      for (std::size_t q = i; q <= j; ++q) r[order[q]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct DgllCentering {
  Matrix M;
  double target;
};

DgllCentering dgll_centering(const dynlayout::gll::AugmentedGllSystem& system, bool normalized) {
  const auto N = system.W.rows();
  if (normalized) return {dynlayout::gll::centering_matrix(system.laplacian.degrees), system.laplacian.trace_degree()};
  return {Matrix::Identity(N, N) - Matrix::Constant(N, N, 1.0 / static_cast<double>(N)), static_cast<double>(N)};
}

// ---------------------------------------------------------------------------

struct ProtocolRuns {
  Summary dmds_known, dmds_learned, stabilized, statics;
  Summary dgll_known, dgll_learned, ccdr, bfp, spectral;
  double mds_seconds = 0.0;
  double gll_seconds = 0.0;
  // Worst constraint and KKT-free feasibility of the DGLL layouts.
  double dgll_worst_feasibility = 0.0;
  long dgll_layouts = 0;
};

void check_dgll_layouts(const RunResult& r, const DynamicNetwork& net, ProtocolRuns& runs) {
  for (std::size_t t = 0; t < r.sequence.steps.size(); ++t) {
    const auto& step = r.sequence.steps[t];
    const auto& snap = net[t];
    const int k = step.layout.groups();
    Matrix C = Matrix::Zero(snap.size(), k);
    for (int i = 0; i < snap.size(); ++i) {
      const auto& label = step.labels[static_cast<std::size_t>(i)];
      if (!label) continue;
      const auto it = std::find(step.group_ids.begin(), step.group_ids.end(), *label);
      if (it != step.group_ids.end()) C(i, std::distance(step.group_ids.begin(), it)) = 1.0;
    }
    const auto system = dynlayout::gll::augment_gll(snap.W, C, r.sequence.config.alpha);
    oracles::PenaltyDgll problem;
    problem.W_aug = system.W;
    problem.normalized = r.sequence.config.normalized;
    problem.s = step.layout.dims();
    const Vector g = problem.constraints(step.layout.augmented());
    runs.dgll_worst_feasibility = std::max(runs.dgll_worst_feasibility, g.lpNorm<Eigen::Infinity>());
    ++runs.dgll_layouts;
  }
}

ProtocolRuns run_protocol(const std::vector<DynamicNetwork>& nets) {
  ProtocolRuns runs;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < nets.size(); ++s) {
    const auto seed = static_cast<std::uint64_t>(s + 1);
    const std::pair<Summary*, RunConfig> jobs[] = {
        {&runs.dmds_known, config_for(Method::kDmds, GroupMode::kKnown, seed, false)},
        {&runs.dmds_learned, config_for(Method::kDmds, GroupMode::kLearned, seed, false)},
        {&runs.stabilized, config_for(Method::kMdsStabilized, GroupMode::kNone, seed, false)},
        {&runs.statics, config_for(Method::kMdsStatic, GroupMode::kNone, seed, false)},
    };
    for (const auto& [summary, config] : jobs) {
      const RunResult r = dynlayout::run_sequence(nets[s], config);
      traces.add(r);
      summary->add(r);
    }
  }
  runs.mds_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < nets.size(); ++s) {
    const auto seed = static_cast<std::uint64_t>(s + 1);
    const std::pair<Summary*, RunConfig> jobs[] = {
        {&runs.dgll_known, config_for(Method::kDgll, GroupMode::kKnown, seed, true)},
        {&runs.dgll_learned, config_for(Method::kDgll, GroupMode::kLearned, seed, true)},
        {&runs.ccdr, config_for(Method::kCcdr, GroupMode::kKnown, seed, true)},
        {&runs.bfp, config_for(Method::kBfp, GroupMode::kNone, seed, true)},
        {&runs.spectral, config_for(Method::kSpectral, GroupMode::kNone, seed, true)},
    };
    for (const auto& [summary, config] : jobs) {
      const RunResult r = dynlayout::run_sequence(nets[s], config);
      summary->add(r);
      if (config.method == Method::kDgll) check_dgll_layouts(r, nets[s], runs);
    }
  }
  runs.gll_seconds = seconds_since(start);
  return runs;
}

void criterion_1(const ProtocolRuns& r) {
  const double tk = mean(r.dmds_known.temporal), tl = mean(r.dmds_learned.temporal);
  const double ts = mean(r.stabilized.temporal), tm = mean(r.statics.temporal);
  const double ck = mean(r.dmds_known.centroid), cl = mean(r.dmds_learned.centroid);
  const double cs = mean(r.stabilized.centroid), cm = mean(r.statics.centroid);
  const double sk = mean(r.dmds_known.statics), sl = mean(r.dmds_learned.statics);
  const double ss = mean(r.stabilized.statics), sm = mean(r.statics.statics);
  const bool temporal_ok = clearly_below(tk, tl) && clearly_below(tl, ts) && clearly_below(ts, tm);
  const bool centroid_ok = clearly_below(ck, cl) && clearly_below(cl, cs) && clearly_below(cs, cm);
  const bool static_ok = clearly_below(sm, ss) && ss <= sk && ss <= sl;
  const bool time_ok = r.mds_seconds < 600.0;
  std::ostringstream d;
  d << "temporal " << fmt(tk) << " < " << fmt(tl) << " < " << fmt(ts) << " < " << fmt(tm) << "; centroid "
    << fmt(ck) << " < " << fmt(cl) << " < " << fmt(cs) << " < " << fmt(cm) << "; stress " << fmt(sm) << " < "
    << fmt(ss) << " <= min(" << fmt(sk) << ", " << fmt(sl) << "); " << kProtocolSeeds << " seeds in "
    << fmt(r.mds_seconds) << " s";
  report(1, "SBM ordering, MDS family", temporal_ok && centroid_ok && static_ok && time_ok, d.str());
}

void criterion_2(const ProtocolRuns& r) {
  const double tk = mean(r.dgll_known.temporal), tl = mean(r.dgll_learned.temporal);
  const double tc = mean(r.ccdr.temporal), tb = mean(r.bfp.temporal), tsp = mean(r.spectral.temporal);
  const double ck = mean(r.dgll_known.centroid), cl = mean(r.dgll_learned.centroid);
  const double cc = mean(r.ccdr.centroid), cb = mean(r.bfp.centroid), csp = mean(r.spectral.centroid);
  const double sk = mean(r.dgll_known.statics), sl = mean(r.dgll_learned.statics);
  const double sc = mean(r.ccdr.statics), sb = mean(r.bfp.statics), ssp = mean(r.spectral.statics);
  const bool temporal_ok = clearly_below(tk, tl) && clearly_below(tl, std::min({tc, tb, tsp}));
  const bool centroid_ok = clearly_below(ck, std::min({cl, cc, cb, csp}));
  const bool static_ok = clearly_below(ssp, std::min({sk, sl, sc, sb}));
  std::ostringstream d;
  d << "temporal dgll " << fmt(tk) << " < learned " << fmt(tl) << " < min(ccdr " << fmt(tc) << ", bfp " << fmt(tb)
    << ", spectral " << fmt(tsp) << "); centroid dgll " << fmt(ck) << " vs " << fmt(cl) << "/" << fmt(cc) << "/"
    << fmt(cb) << "/" << fmt(csp) << "; energy spectral " << fmt(ssp) << " vs " << fmt(sk) << "/" << fmt(sl) << "/"
    << fmt(sc) << "/" << fmt(sb) << "; " << fmt(r.gll_seconds) << " s";
  report(2, "SBM ordering, GLL family", temporal_ok && centroid_ok && static_ok, d.str());
}

void criterion_3(const ProtocolRuns& r) {
  const std::vector<double>* all[] = {&r.dmds_known.iterations, &r.dmds_learned.iterations};
  std::vector<double> dmds;
  for (const auto* v : all) dmds.insert(dmds.end(), v->begin(), v->end());
  const double a = mean(dmds), b = mean(r.statics.iterations);
  report(3, "Iteration-count ratio", a <= 0.6 * b,
         "DMDS " + fmt(a) + " vs static " + fmt(b) + " (ratio " + fmt(a / b) + ")");
}

void criterion_4(const ProtocolRuns& r) {
  bool ok = true;
  std::ostringstream d;
  auto check = [&](const char* name, const Summary& s) {
    auto window = [&](const std::vector<std::vector<double>>& at) {
      std::vector<double> all;
      for (int t = 5; t <= 9; ++t) all.insert(all.end(), at[t].begin(), at[t].end());
      return mean(all);
    };
    const double c10 = mean(s.centroid_at[10]), cw = window(s.centroid_at);
    const double t10 = mean(s.temporal_at[10]), tw = window(s.temporal_at);
    ok = ok && c10 >= 1.5 * cw && t10 >= 1.5 * tw;
    d << name << " centroid x" << fmt(c10 / cw) << " temporal x" << fmt(t10 / tw) << "; ";
  };
  check("dmds", r.dmds_known);
  check("dgll", r.dgll_known);
  report(4, "Change-point response", ok, d.str());
}

void criterion_5(const std::vector<DynamicNetwork>& nets) {
  const auto grid = dynlayout::log_grid(0.1, 10.0, 10);
  bool ok = true;
  std::ostringstream d;
  auto evaluate = [&](const char* name, const std::function<dynlayout::SweepCell(double, double)>& cell) {
    std::vector<std::vector<dynlayout::SweepCell>> cells(grid.size());
    for (std::size_t a = 0; a < grid.size(); ++a) {
      for (double b : grid) cells[a].push_back(cell(grid[a], b));
    }
    double worst_beta = -1.0, worst_alpha = -1.0;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      std::vector<double> temporal;
      for (const auto& c : cells[a]) temporal.push_back(c.mean_temporal);
      worst_beta = std::max(worst_beta, spearman(grid, temporal));
    }
    for (std::size_t b = 0; b < grid.size(); ++b) {
      std::vector<double> centroid;
      for (std::size_t a = 0; a < grid.size(); ++a) centroid.push_back(cells[a][b].mean_centroid);
      worst_alpha = std::max(worst_alpha, spearman(grid, centroid));
    }
    ok = ok && worst_beta <= -0.9 && worst_alpha <= -0.9;
    d << name << " max rho(beta, temporal) " << fmt(worst_beta) << ", max rho(alpha, centroid) "
      << fmt(worst_alpha) << "; ";
  };

  const auto start = std::chrono::steady_clock::now();
  evaluate("dmds", [&](double alpha, double beta) {
    dynlayout::SweepCell cell{alpha, beta};
    for (int s = 0; s < kSweepSeedsMds; ++s) {
      RunConfig c = config_for(Method::kDmds, GroupMode::kKnown, static_cast<std::uint64_t>(s + 1), false);
      c.alpha = alpha;
      c.beta = beta;
      const RunResult r = dynlayout::run_sequence(nets[static_cast<std::size_t>(s)], c);
      traces.add(r);
      cell.mean_centroid += r.costs.mean_centroid() / kSweepSeedsMds;
      cell.mean_temporal += r.costs.mean_temporal() / kSweepSeedsMds;
    }
    return cell;
  });

  const std::vector<DynamicNetwork> subset(nets.begin(), nets.begin() + kSweepSeedsGll);
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < kSweepSeedsGll; ++s) seeds.push_back(static_cast<std::uint64_t>(s + 1));
  const auto sweep = dynlayout::parameter_sweep(subset, seeds, config_for(Method::kDgll, GroupMode::kKnown, 0, true),
                                                grid, grid, 0);
  std::map<std::pair<double, double>, dynlayout::SweepCell> lookup;
  for (const auto& c : sweep.cells) lookup[{c.alpha, c.beta}] = c;
  evaluate("dgll", [&](double alpha, double beta) { return lookup.at({alpha, beta}); });

  d << kSweepSeedsMds << "/" << kSweepSeedsGll << " seeds, " << fmt(seconds_since(start)) << " s";
  report(5, "Sweep monotonicity", ok, d.str());
}

// Criterion 6 also covers the majorization runs of criterion 9.
void criterion_6() {
  report(6, "Majorization property", traces.runs > 0 && traces.violations == 0,
         std::to_string(traces.runs) + " runs, " + std::to_string(traces.violations) +
             " increasing steps (worst relative " + fmt(traces.worst) + ")");
}

void criterion_7() {
  Rng rng(7007);
  int bad_gradient = 0, bad_jacobian = 0, bad_hessian = 0;
  double worst_g = 0.0, worst_j = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 2 + static_cast<int>(rng.uniform_index(7));
    const int k = static_cast<int>(rng.uniform_index(4));
    const int s = 1 + static_cast<int>(rng.uniform_index(2));
    const bool normalized = rng.bernoulli(0.5);
    const double alpha = rng.uniform(0.1, 3.0), beta = rng.uniform(0.1, 3.0);
    const Matrix W = random_connected_graph(n, rng);
    const Matrix C = random_membership(n, k, rng);
    const auto system = dynlayout::gll::augment_gll(W, C, alpha);
    const auto N = system.W.rows();
    Vector presence(n);
    for (int i = 0; i < n; ++i) presence(i) = rng.bernoulli(0.7) ? 1.0 : 0.0;
    const Matrix previous = random_matrix(N, s, rng, 2.0);
    const Matrix X = random_matrix(N, s, rng, 2.0);
    const auto [M, target] = dgll_centering(system, normalized);
    const auto& L = system.laplacian.L;
    const int m = s == 2 ? 3 : 1;

    const auto d = dynlayout::gll::dgll_derivatives(X, L, presence, beta, previous, M, target, Vector::Zero(m));
    const Vector fd_g = oracles::fd_gradient(
        [&](const Vector& x) { return dynlayout::gll::dgll_objective(unstack(x, N, s), L, presence, beta, previous); },
        stack(X));
    const double eg = (d.gradient - fd_g).lpNorm<Eigen::Infinity>() / std::max(1.0, fd_g.lpNorm<Eigen::Infinity>());
    const Matrix fd_j = oracles::fd_jacobian(
        [&](const Vector& x) {
          return dynlayout::gll::dgll_derivatives(unstack(x, N, s), L, presence, beta, previous, M, target,
                                                  Vector::Zero(m))
              .constraints;
        },
        stack(X));
    const double ej = (d.jacobian - fd_j).lpNorm<Eigen::Infinity>() / std::max(1.0, fd_j.lpNorm<Eigen::Infinity>());
    worst_g = std::max(worst_g, eg);
    worst_j = std::max(worst_j, ej);
    if (eg > 1e-5) ++bad_gradient;
    if (ej > 1e-5) ++bad_jacobian;

    Matrix block = 2.0 * L;
    for (int i = 0; i < n; ++i) block(i, i) += 2.0 * beta * presence(i);
    Matrix expected = Matrix::Zero(N * s, N * s);
    for (int a = 0; a < s; ++a) expected.block(a * N, a * N, N, N) = block;
    if (!(d.hessian.array() == expected.array()).all()) ++bad_hessian;
  }
  report(7, "Derivative correctness", bad_gradient + bad_jacobian + bad_hessian == 0,
         "100 instances; worst gradient error " + fmt(worst_g) + ", Jacobian " + fmt(worst_j) + "; failures " +
             std::to_string(bad_gradient) + "/" + std::to_string(bad_jacobian) + "/" + std::to_string(bad_hessian));
}

void criterion_8(const ProtocolRuns& runs) {
  Rng rng(8008);
  int converged = 0, contract_bad = 0, oracle_bad = 0, compared = 0, nonconverged = 0;
  double worst_kkt = 0.0, worst_feas = 0.0, worst_gap = 0.0;
  for (int inst = 0; inst < 40; ++inst) {
    const int n = 3 + static_cast<int>(rng.uniform_index(3));
    const int k = static_cast<int>(rng.uniform_index(3));
    const int s = 1 + static_cast<int>(rng.uniform_index(2));
    const bool normalized = rng.bernoulli(0.5);
    const double alpha = rng.uniform(0.2, 2.0), beta = rng.uniform(0.1, 2.0);
    const Matrix W = random_connected_graph(n, rng);
    const Matrix C = random_membership(n, k, rng, false);
    const auto system = dynlayout::gll::augment_gll(W, C, alpha);
    const auto N = system.W.rows();
    if (N <= s) continue;
    Vector presence(n);
    for (int i = 0; i < n; ++i) presence(i) = rng.bernoulli(0.8) ? 1.0 : 0.0;
    const Matrix previous = random_matrix(N, s, rng, 2.0);

    dynlayout::gll::DgllOptions options;
    options.restarts = 20;
    options.seed = rng.next();
    dynlayout::gll::DgllSolution sol;
    try {
      sol = dynlayout::gll::dgll_layout(W, C, alpha, beta, presence, previous, s, normalized, options);
    } catch (const dynlayout::gll::DgllNonConvergence&) {
      ++nonconverged;
      continue;
    }
    ++converged;

    // Residuals recomputed independently of the solver's bookkeeping.
    oracles::PenaltyDgll oracle;
    oracle.W_aug = system.W;
    oracle.presence = Vector::Zero(N);
    oracle.presence.head(n) = presence;
    oracle.previous = previous;
    oracle.beta = beta;
    oracle.normalized = normalized;
    oracle.s = s;
    const double feas = oracle.constraints(sol.augmented).lpNorm<Eigen::Infinity>();
    const auto [M, target] = dgll_centering(system, normalized);
    const auto d = dynlayout::gll::dgll_derivatives(sol.augmented, system.laplacian.L, presence, beta, previous, M,
                                                    target, Vector::Zero(s == 2 ? 3 : 1));
    const Vector mu = d.jacobian.transpose().colPivHouseholderQr().solve(-d.gradient);
    const double kkt = (d.gradient + d.jacobian.transpose() * mu).lpNorm<Eigen::Infinity>();
    worst_kkt = std::max(worst_kkt, kkt);
    worst_feas = std::max(worst_feas, feas);
    if (kkt > 1e-6 || feas > 1e-6) ++contract_bad;

    const double reference = oracle.solve(20, rng.next());
    ++compared;
    const double gap = std::abs(sol.objective - reference);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) ++oracle_bad;
  }
  const bool pipeline_ok = runs.dgll_worst_feasibility <= 1e-6;
  std::ostringstream detail;
  detail << converged << " converged (" << nonconverged << " not); worst KKT " << fmt(worst_kkt) << ", |g| "
         << fmt(worst_feas) << "; oracle gap " << fmt(worst_gap) << " over " << compared << " (" << oracle_bad
         << " off); pipeline layouts |g| " << fmt(runs.dgll_worst_feasibility) << " over " << runs.dgll_layouts;
  report(8, "DGLL solver contract", converged > 0 && contract_bad == 0 && oracle_bad == 0 && pipeline_ok,
         detail.str());
}

void criterion_9() {
  Rng rng(9009);
  const dynlayout::mds::SmacofOptions tight{1e-13, 200000};
  int dmds_bad = 0, stab_bad = 0;
  double worst_dmds = 0.0, worst_stab = 0.0;
  const int instances = 30;
  for (int inst = 0; inst < instances; ++inst) {
    const int n = 3 + static_cast<int>(rng.uniform_index(3));
    const int k = static_cast<int>(rng.uniform_index(3));
    const int s = 1 + static_cast<int>(rng.uniform_index(2));
    const double alpha = rng.uniform(0.2, 2.0), beta = rng.uniform(0.2, 2.0);
    const Matrix W = random_connected_graph(n, rng);
    const auto dist = dynlayout::shortest_path_distances(
        dynlayout::similarity_to_dissimilarity(W, dynlayout::DissimilarityMode::kInverse));
    const Matrix V = dynlayout::kk_weights(dist);
    const Matrix C = random_membership(n, k, rng);
    Vector presence(n);
    for (int i = 0; i < n; ++i) presence(i) = rng.bernoulli(0.7) ? 1.0 : 0.0;
    const Matrix previous = random_matrix(n + k, s, rng, 2.0);

    const auto result = dynlayout::mds::dmds_layout(dist.delta, V, C, alpha, beta, presence, previous, tight);
    traces.add(result.report.stress_trace);
    const double f_dmds = dynlayout::mds::modified_stress(result.layout.augmented(), dist.delta, V, C, alpha, beta,
                                                          presence, previous);
    oracles::ModifiedStress f{dist.delta, V, C, previous, presence, alpha, beta, n, k, s};
    const Vector x = oracles::bfgs_minimize([&](const Vector& v) { return f.value(v); },
                                            [&](const Vector& v) { return f.gradient(v); }, stack(previous), 200000,
                                            1e-10, 0.1);
    const double gap = std::abs(f_dmds - f.value(x));
    worst_dmds = std::max(worst_dmds, gap);
    if (gap > 1e-6) ++dmds_bad;

    // k = 0, every node anchored.
    const Vector all = Vector::Ones(n);
    const Matrix prev0 = previous.topRows(n);
    const auto d0 = dynlayout::mds::dmds_layout(dist.delta, V, Matrix(n, 0), 0.0, beta, all, prev0, tight);
    traces.add(d0.report.stress_trace);
    const auto s0 = dynlayout::mds::stabilized_mds_online(dist.delta, V, beta, all, prev0, tight);
    const Matrix none(n, 0);
    const double diff = std::abs(
        dynlayout::mds::modified_stress(d0.layout.augmented(), dist.delta, V, none, 0.0, beta, all, prev0) -
        dynlayout::mds::modified_stress(s0.layout.augmented(), dist.delta, V, none, 0.0, beta, all, prev0));
    worst_stab = std::max(worst_stab, diff);
    if (diff > 1e-5) ++stab_bad;
  }
  report(9, "Oracle equivalence, DMDS", dmds_bad + stab_bad == 0,
         std::to_string(instances) + " instances; worst DMDS vs dense minimizer " + fmt(worst_dmds) +
             ", stabilized vs DMDS " + fmt(worst_stab));
}

void criterion_10() {
  Rng rng(1010);
  int bad = 0;
  double worst_constraint = 0.0, worst_energy = 0.0, worst_ccdr = 0.0;
  for (int inst = 0; inst < 60; ++inst) {
    const int n = 4 + static_cast<int>(rng.uniform_index(9));
    const int s = 1 + static_cast<int>(rng.uniform_index(std::min(3, n - 1)));
    const bool normalized = rng.bernoulli(0.5);
    const Matrix W = random_connected_graph(n, rng);
    const auto lap = dynlayout::gll::laplacian(W);
    const auto layout = dynlayout::gll::spectral_layout(W, s, normalized);
    const Matrix& X = layout.X;

    Matrix gram;
    Vector centroid;
    double scale = 0.0;
    Matrix operator_matrix;
    if (normalized) {
      gram = X.transpose() * lap.degrees.asDiagonal() * X;
      centroid = X.transpose() * lap.degrees;
      scale = lap.trace_degree();
      const Vector r = lap.degrees.cwiseSqrt().cwiseInverse();
      operator_matrix = r.asDiagonal() * lap.L * r.asDiagonal();
    } else {
      gram = X.transpose() * X;
      centroid = X.colwise().sum().transpose();
      scale = n;
      operator_matrix = lap.L;
    }
    const double cerr = std::max((gram - scale * Matrix::Identity(s, s)).lpNorm<Eigen::Infinity>(),
                                 centroid.lpNorm<Eigen::Infinity>());
    Vector values;
    Matrix vectors;
    oracles::jacobi_eigen(operator_matrix, values, vectors);
    const double expected = scale * values.segment(1, s).sum();
    const double energy = (X.transpose() * lap.L * X).trace();
    const double eerr = std::abs(energy - expected);

    const auto ccdr = dynlayout::gll::ccdr_layout(W, Matrix(n, 0), 0.0, s, normalized);
    Eigen::JacobiSVD<Matrix> svd(ccdr.X.transpose() * X, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix Q = svd.matrixU() * svd.matrixV().transpose();
    const double rerr = (ccdr.X * Q - X).lpNorm<Eigen::Infinity>();
    // Only meaningful when the (s+1)-th and (s+2)-th eigenvalues are apart.
    const bool gap = s + 2 > n || values(s + 1) - values(s) > 1e-6;

    worst_constraint = std::max(worst_constraint, cerr);
    worst_energy = std::max(worst_energy, eerr);
    if (gap) worst_ccdr = std::max(worst_ccdr, rerr);
    if (cerr > 1e-8 || eerr > 1e-6 || (gap && rerr > 1e-8)) ++bad;
  }
  report(10, "Spectral identities", bad == 0,
         "60 graphs; worst constraint " + fmt(worst_constraint) + ", energy " + fmt(worst_energy) +
             ", CCDR vs spectral after rotation " + fmt(worst_ccdr));
}

void criterion_11() {
  const int seeds = 20;
  std::vector<std::vector<double>> ari(20);
  bool alpha_ok = true;
  double min_alpha = 1.0, max_alpha = 0.0;
  for (int s = 0; s < seeds; ++s) {
    auto cfg = dynlayout::sbm::SbmConfig::protocol(static_cast<std::uint64_t>(100 + s));
    cfg.change_step.reset();
    const auto seq = dynlayout::sbm::sbm_sequence(cfg);
    const auto steps = dynlayout::cluster_sequence(seq.network, 4, static_cast<std::uint64_t>(100 + s));
    for (std::size_t t = 0; t < steps.size(); ++t) {
      ari[t].push_back(dynlayout::clustering::adjusted_rand_index(steps[t].labels, seq.truth[t]));
      const double a = steps[t].forgetting_factor;
      alpha_ok = alpha_ok && a >= 0.0 && a <= 1.0;
      min_alpha = std::min(min_alpha, a);
      max_alpha = std::max(max_alpha, a);
    }
  }
  double worst = 1.0;
  for (std::size_t t = 3; t < ari.size(); ++t) worst = std::min(worst, mean(ari[t]));
  report(11, "Clustering sanity", worst >= 0.9 && alpha_ok,
         "min over t>=3 of mean ARI " + fmt(worst) + " (t=0: " + fmt(mean(ari[0])) + "); alpha in [" +
             fmt(min_alpha) + ", " + fmt(max_alpha) + "]");
}

// ---------------------------------------------------------------------------

int run_cli(std::vector<std::string> args, std::string& log) {
  args.insert(args.begin(), "dynlayout");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dynlayout::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  log += out.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
  }
  return out;
}

void criterion_12() {
  const fs::path base = fs::temp_directory_path() / ("dynlayout-acceptance-" + std::to_string(::getpid()));
  std::vector<std::map<std::string, std::string>> outputs;
  std::vector<std::string> logs;
  int failed_commands = 0;
  for (int round = 0; round < 2; ++round) {
    const fs::path dir = base / ("run" + std::to_string(round));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();
    const std::string snaps = d + "/sbm.tsv", groups = d + "/groups.tsv";
    std::string log;
    const std::vector<std::vector<std::string>> commands = {
        {"simulate-sbm", "--n", "16", "--k", "3", "--steps", "6", "--change-step", "3", "--change-fraction", "0.25",
         "--seed", "5", "--out", snaps, "--groups-out", groups},
        {"layout", snaps, "--method", "dmds", "--groups", groups, "--k", "3", "--seed", "5", "--out", d + "/dmds"},
        {"layout", snaps, "--method", "dgll", "--groups", "learn", "--k", "3", "--normalized", "--restarts", "2",
         "--seed", "5", "--out", d + "/dgll"},
        {"layout", snaps, "--method", "bfp", "--normalized", "--seed", "5", "--out", d + "/bfp"},
        {"layout", snaps, "--method", "mds-stabilized", "--dims", "1", "--seed", "5", "--out", d + "/line"},
        {"cluster", snaps, "--k", "3", "--seed", "5", "--out", d + "/cluster"},
        {"sweep", "--sbm-runs", "1", "--method", "dmds", "--alpha-grid", "0.5,2", "--beta-grid", "0.5,2", "--seed",
         "5", "--out", d + "/sweep.csv"},
        {"metrics", snaps, "--layout", d + "/dmds/layout.json", "--groups", groups, "--out", d + "/metrics.csv",
         "--movement", d + "/movement.csv"},
        {"render", snaps, "--layout", d + "/dmds/layout.json", "--out", d + "/frames", "--movement"},
        {"render", "--layout", d + "/line/layout.json", "--out", d + "/timeplot"},
    };
    for (const auto& c : commands) {
      std::string out;
      if (run_cli(c, out) != 0) ++failed_commands;
      // Paths differ between rounds; keep the rest of the output.
      std::string::size_type pos;
      while ((pos = out.find(d)) != std::string::npos) out.replace(pos, d.size(), "<dir>");
      log += out;
    }
    outputs.push_back(tree(dir));
    logs.push_back(log);
  }
  std::size_t differing = 0, svg = 0, json = 0, csv = 0;
  for (const auto& [name, bytes] : outputs[0]) {
    const auto it = outputs[1].find(name);
    if (it == outputs[1].end() || it->second != bytes) ++differing;
    const auto ext = fs::path(name).extension();
    svg += ext == ".svg";
    json += ext == ".json";
    csv += ext == ".csv";
  }
  const bool ok = failed_commands == 0 && differing == 0 && outputs[0].size() == outputs[1].size() &&
                  logs[0] == logs[1] && svg > 0 && json > 0 && csv > 0;
  fs::remove_all(base);
  report(12, "Determinism", ok,
         std::to_string(outputs[0].size()) + " files (" + std::to_string(json) + " json, " + std::to_string(csv) +
             " csv, " + std::to_string(svg) + " svg), " + std::to_string(differing) + " differ, " +
             std::to_string(failed_commands) + " commands failed");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const auto nets = protocol_networks(kProtocolSeeds);
  const ProtocolRuns runs = run_protocol(nets);
  criterion_1(runs);
  criterion_2(runs);
  criterion_3(runs);
  criterion_4(runs);
  criterion_5(nets);
  criterion_7();
  criterion_8(runs);
  criterion_9();
  criterion_6();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("%d of 12 criteria failed (%.1f s)\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
