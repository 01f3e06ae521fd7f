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

#include "dynlayout/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Eigenvalues>

#include "dynlayout/error.hpp"
#include "dynlayout/rng.hpp"

namespace dynlayout::clustering {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relabels so cluster ids appear in order of first occurrence.
Labels canonical(const Labels& labels) {
  std::map<int, int> remap;
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()) + 1);
    out[i] = it->second;
  }
  return out;
}

struct Lloyd {
  Labels labels;
  Matrix centroids;
  double within_ss = kInf;
};

Lloyd lloyd(const Matrix& P, Matrix centroids, int max_iterations) {
  const Eigen::Index n = P.rows();
  const Eigen::Index k = centroids.rows();
  Lloyd out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = iter == 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = kInf;
      for (Eigen::Index c = 0; c < k; ++c) {
        const double d = (P.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (out.labels[static_cast<std::size_t>(i)] != best) {
        out.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(k, P.cols());
    Vector counts = Vector::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(out.labels[static_cast<std::size_t>(i)]) += P.row(i);
      counts(out.labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts(c) > 0.0) centroids.row(c) = sums.row(c) / counts(c);
    }
  }
  out.within_ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.within_ss += (P.row(i) - centroids.row(out.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  out.centroids = std::move(centroids);
  return out;
}

Matrix furthest_first(const Matrix& P, int k, Eigen::Index first) {
  Matrix centers(k, P.cols());
  centers.row(0) = P.row(first);
  Vector nearest(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) nearest(i) = (P.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index pick = 0;
    nearest.maxCoeff(&pick);
    centers.row(c) = P.row(pick);
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      nearest(i) = std::min(nearest(i), (P.row(i) - centers.row(c)).squaredNorm());
    }
  }
  return centers;
}

// Minimum-cost perfect assignment on a square cost matrix; returns the
// column assigned to each row.
std::vector<int> hungarian(const Matrix& cost) {
  const auto n = static_cast<int>(cost.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, 0);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

int max_label(std::span<const int> labels) {
  int k = 0;
  for (int l : labels) {
    if (l < 1) throw InvalidInput("cluster labels must be positive");
    k = std::max(k, l);
  }
  return k;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw InvalidInput("k-means requires k >= 1");
  if (k > n) throw InvalidInput("k-means requires k <= number of points");
  Rng rng(seed);
  Lloyd best;
  std::set<Eigen::Index> tried;
  for (int r = 0; r < options.restarts; ++r) {
    const auto first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    // Furthest-first seeding is deterministic given the first center.
    if (!tried.insert(first).second) continue;
    Lloyd candidate = lloyd(points, furthest_first(points, k, first), options.max_iterations);
    if (candidate.within_ss < best.within_ss) best = std::move(candidate);
  }
  KMeansResult out;
  for (int& l : best.labels) l += 1;
  out.labels = best.labels;
  out.centroids = std::move(best.centroids);
  out.within_ss = best.within_ss;
  return out;
}

Labels spectral_cluster(const Matrix& affinity, int k, std::uint64_t seed) {
  if (affinity.rows() != affinity.cols()) throw InvalidInput("affinity matrix must be square");
  const Eigen::Index n = affinity.rows();
  if (k < 1 || k > n) throw InvalidInput("spectral clustering requires 1 <= k <= n");
  Matrix A = affinity.cwiseMax(0.0);
  A = 0.5 * (A + A.transpose());
  A.diagonal().setZero();
  const Vector degrees = A.rowwise().sum();
  Vector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = degrees(i) > 0.0 ? 1.0 / std::sqrt(degrees(i)) : 0.0;

  Matrix L = -A;
  L.diagonal() = degrees;
  Matrix B = inv_sqrt.asDiagonal() * L * inv_sqrt.asDiagonal();
  B = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(B);
  if (solver.info() != Eigen::Success) throw NumericalFailure("spectral clustering eigensolver failed");
  Matrix U = inv_sqrt.asDiagonal() * solver.eigenvectors().leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = U.row(i).norm();
    if (norm > 0.0) U.row(i) /= norm;
  }
  return canonical(kmeans(U, k, seed).labels);
}

double affect_alpha(const Matrix& smoothed_prev, const Matrix& W, std::span<const int> labels) {
  const Eigen::Index n = W.rows();
  if (smoothed_prev.rows() != n || smoothed_prev.cols() != n || static_cast<Eigen::Index>(labels.size()) != n) {
    throw InvalidInput("forgetting-factor estimation needs aligned matrices and labels");
  }
  const int k = max_label(labels);
  // Block sample statistics over unordered off-diagonal pairs.
  Matrix sum = Matrix::Zero(k, k), sum_sq = Matrix::Zero(k, k), count = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      int c = labels[static_cast<std::size_t>(i)] - 1;
      int d = labels[static_cast<std::size_t>(j)] - 1;
      if (c > d) std::swap(c, d);
      sum(c, d) += W(i, j);
      sum_sq(c, d) += W(i, j) * W(i, j);
      count(c, d) += 1.0;
    }
  }
  Matrix mean = Matrix::Zero(k, k), var = Matrix::Zero(k, k);
  for (int c = 0; c < k; ++c) {
    for (int d = c; d < k; ++d) {
      const double cnt = count(c, d);
      if (cnt > 0.0) mean(c, d) = sum(c, d) / cnt;
      if (cnt >= 2.0) var(c, d) = std::max(0.0, (sum_sq(c, d) - cnt * mean(c, d) * mean(c, d)) / (cnt - 1.0));
      mean(d, c) = mean(c, d);
      var(d, c) = var(c, d);
    }
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const int c = labels[static_cast<std::size_t>(i)] - 1;
      const int d = labels[static_cast<std::size_t>(j)] - 1;
      const double bias = smoothed_prev(i, j) - mean(c, d);
      numerator += var(c, d);
      denominator += bias * bias + var(c, d);
    }
  }
  if (denominator <= 0.0) return 0.0;
  return std::clamp(numerator / denominator, 0.0, 1.0);
}

Matrix affect_smooth(const Matrix& smoothed_prev, const Matrix& W, double alpha) {
  if (smoothed_prev.rows() != W.rows() || smoothed_prev.cols() != W.cols()) {
    throw InvalidInput("smoothing requires aligned matrices");
  }
  return alpha * smoothed_prev + (1.0 - alpha) * W;
}

AffectStep affect_cluster_step(const Matrix& smoothed_prev, const Matrix& W, std::span<const int> prev_labels, int k,
                               std::uint64_t seed, int max_refine) {
  AffectStep out;
  if (smoothed_prev.size() == 0) {
    out.alpha = 0.0;
    out.smoothed = W;
    out.labels = spectral_cluster(W, k, seed);
    if (prev_labels.size() == out.labels.size()) out.labels = match_labels(out.labels, prev_labels, k);
    return out;
  }
  Labels labels = prev_labels.size() == static_cast<std::size_t>(W.rows())
                      ? Labels(prev_labels.begin(), prev_labels.end())
                      : spectral_cluster(W, k, seed);
  for (int round = 1; round <= std::max(1, max_refine); ++round) {
    out.alpha = affect_alpha(smoothed_prev, W, labels);
    out.smoothed = affect_smooth(smoothed_prev, W, out.alpha);
    Labels next = spectral_cluster(out.smoothed, k, seed);
    out.refinements = round;
    const bool stable = same_partition(next, labels);
    labels = std::move(next);
    if (stable) break;
  }
  if (prev_labels.size() == labels.size()) labels = match_labels(labels, prev_labels, k);
  out.labels = std::move(labels);
  return out;
}

std::vector<int> label_permutation(std::span<const int> labels, std::span<const int> reference, int k) {
  if (labels.size() != reference.size()) throw InvalidInput("label matching needs equal-length labelings");
  k = std::max({k, max_label(labels), max_label(reference)});
  Matrix cost = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < labels.size(); ++i) cost(labels[i] - 1, reference[i] - 1) -= 1.0;
  std::vector<int> permutation = hungarian(cost);
  for (int& p : permutation) p += 1;
  return permutation;
}

Labels match_labels(std::span<const int> labels, std::span<const int> reference, int k) {
  const std::vector<int> permutation = label_permutation(labels, reference, k);
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = permutation[static_cast<std::size_t>(labels[i] - 1)];
  return out;
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) return false;
  return canonical(Labels(a.begin(), a.end())) == canonical(Labels(b.begin(), b.end()));
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw InvalidInput("ARI needs equal-length labelings");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += choose2(count);
  for (const auto& [key, count] : rows) sum_rows += choose2(count);
  for (const auto& [key, count] : cols) sum_cols += choose2(count);
  const double expected = sum_rows * sum_cols / choose2(n);
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace dynlayout::clustering
