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

#include "dynlayout/gll.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "dynlayout/error.hpp"
#include "dynlayout/rng.hpp"

namespace dynlayout::gll {
namespace {

void require_dims(int s, int n) {
  if (s < 1) throw InvalidInput("layout dimension must be at least 1");
  if (s + 1 > n) throw InvalidInput("spectral layout needs at least s + 1 nodes");
}

// Deterministic sign: the first entry of clearly nonzero magnitude is positive.
void canonical_signs(Matrix& X) {
  for (Eigen::Index a = 0; a < X.cols(); ++a) {
    const double scale = X.col(a).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (std::abs(X(i, a)) > 1e-8 * scale) {
        if (X(i, a) < 0.0) X.col(a) *= -1.0;
        break;
      }
    }
  }
}

Matrix spectral_from_laplacian(const Matrix& L, int s, bool normalized) {
  const auto n = static_cast<int>(L.rows());
  require_dims(s, n);
  Matrix X;
  if (normalized) {
    const Vector degrees = L.diagonal();
    if (degrees.minCoeff() <= 0.0) throw InvalidInput("degree-normalized layout rejects nodes of zero degree");
    const auto eig = numerics::gen_eig_smallest(L, degrees, s + 1);
    X = std::sqrt(degrees.sum()) * eig.vectors.rightCols(s);
  } else {
    const auto eig = numerics::sym_eig_smallest(L, s + 1);
    X = std::sqrt(static_cast<double>(n)) * eig.vectors.rightCols(s);
  }
  canonical_signs(X);
  return X;
}

void require_connected(const Matrix& W, const char* what) {
  if (!is_connected(W)) {
    throw InvalidInput(std::string(what) + " requires a connected graph; the graph has several components");
  }
}

Vector vec(const Matrix& X) { return Eigen::Map<const Vector>(X.data(), X.size()); }
Matrix unvec(const Vector& x, Eigen::Index rows, Eigen::Index cols) { return Eigen::Map<const Matrix>(x.data(), rows, cols); }

int constraint_count(int s) {
  if (s == 1) return 1;
  if (s == 2) return 3;
  throw InvalidInput("DGLL supports s in {1, 2}");
}

}  // namespace

LaplacianPair laplacian(const Matrix& W) {
  LaplacianPair out;
  out.degrees = W.rowwise().sum();
  out.L = -W;
  out.L.diagonal() = out.degrees - W.diagonal();
  return out;
}

double energy(const Matrix& X, const Matrix& L) { return (X.transpose() * L * X).trace(); }

double energy_pairwise(const Matrix& X, const Matrix& W) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      if (W(i, j) != 0.0) sum += W(i, j) * (X.row(i) - X.row(j)).squaredNorm();
    }
  }
  return 0.5 * sum;
}

bool is_connected(const Matrix& W) {
  const Eigen::Index n = W.rows();
  if (n == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<Eigen::Index> queue{0};
  seen[0] = true;
  Eigen::Index count = 1;
  while (!queue.empty()) {
    const Eigen::Index u = queue.front();
    queue.pop_front();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!seen[static_cast<std::size_t>(v)] && (W(u, v) > 0.0 || W(v, u) > 0.0)) {
        seen[static_cast<std::size_t>(v)] = true;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == n;
}

Layout spectral_layout(const Matrix& W, int s, bool normalized) {
  require_connected(W, "spectral layout");
  return {spectral_from_laplacian(laplacian(W).L, s, normalized), Matrix(0, s)};
}

AugmentedGllSystem augment_gll(const Matrix& W, const Matrix& C, double alpha) {
  if (C.rows() != W.rows()) throw InvalidInput("membership matrix row count does not match node count");
  const Eigen::Index n = W.rows();
  const Eigen::Index k = C.cols();
  AugmentedGllSystem out;
  out.nodes = static_cast<int>(n);
  out.groups = static_cast<int>(k);
  out.W = Matrix::Zero(n + k, n + k);
  out.W.topLeftCorner(n, n) = W;
  out.W.topRightCorner(n, k) = alpha * C;
  out.W.bottomLeftCorner(k, n) = alpha * C.transpose();
  out.laplacian = laplacian(out.W);
  return out;
}

Matrix centering_matrix(const Vector& degrees) {
  const double total = degrees.sum();
  if (total <= 0.0) throw InvalidInput("centering matrix requires a positive total degree");
  Matrix M = -(degrees * degrees.transpose()) / total;
  M.diagonal() += degrees;
  return M;
}

Layout ccdr_layout(const Matrix& W, const Matrix& C, double alpha, int s, bool normalized) {
  const auto system = augment_gll(W, C, alpha);
  require_connected(system.W, "CCDR layout");
  return Layout::split(spectral_from_laplacian(system.laplacian.L, s, normalized), system.nodes);
}

Layout bfp_layout(const Matrix& L_prev, const Matrix& L_curr, double lambda, int s, bool normalized) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("BFP smoothing parameter must lie in [0, 1]");
  if (L_prev.rows() != L_curr.rows() || L_prev.cols() != L_curr.cols()) {
    throw InvalidInput("BFP Laplacians must be aligned to the same node set");
  }
  const Matrix L = lambda * L_prev + (1.0 - lambda) * L_curr;
  Matrix W = -L;
  W.diagonal().setZero();
  require_connected(W, "BFP layout");
  return {spectral_from_laplacian(L, s, normalized), Matrix(0, s)};
}

void align_to_previous(Layout& layout, const Matrix& previous, const Vector& presence) {
  const Eigen::Index s = layout.X.cols();
  if (previous.rows() != layout.X.rows() || presence.size() != layout.X.rows() || previous.cols() != s) {
    throw InvalidInput("alignment requires previous positions for every current node row");
  }
  if ((presence.array() == 0.0).all()) return;
  // cross(a, b) = sum_i e_i x_ia p_ib
  const Matrix cross = layout.X.transpose() * presence.asDiagonal() * previous;
  std::vector<int> perm(static_cast<std::size_t>(s));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best = -std::numeric_limits<double>::infinity();
  do {
    double score = 0.0;
    for (Eigen::Index b = 0; b < s; ++b) score += std::abs(cross(perm[static_cast<std::size_t>(b)], b));
    if (!std::isfinite(best) || score > best + 1e-12 * std::abs(best)) {
      best = score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto transform = [&](const Matrix& Z) {
    Matrix out(Z.rows(), s);
    for (Eigen::Index b = 0; b < s; ++b) {
      const int source = best_perm[static_cast<std::size_t>(b)];
      const double sign = cross(source, b) < 0.0 ? -1.0 : 1.0;
      out.col(b) = sign * Z.col(source);
    }
    return out;
  };
  layout.X = transform(layout.X);
  if (layout.Y.rows() > 0) layout.Y = transform(layout.Y);
}

double bfp_lambda_select(std::span<const double> grid, double alpha, double beta,
                         const std::function<CompositeCost(double)>& evaluate) {
  if (grid.empty()) throw InvalidInput("BFP lambda grid is empty");
  double best_lambda = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    const CompositeCost cost = evaluate(lambda);
    const double value = cost.static_cost + alpha * cost.centroid_cost + beta * cost.temporal_cost;
    if (value < best || (value == best && lambda < best_lambda)) {
      best = value;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

double dgll_objective(const Matrix& X, const Matrix& L, const Vector& presence, double beta, const Matrix& previous) {
  double value = energy(X, L);
  if (beta != 0.0) {
    const Eigen::Index n = presence.size();
    const auto Xn = X.topRows(n);
    const auto Pn = previous.topRows(n);
    value += beta * ((Xn.transpose() * presence.asDiagonal() * Xn).trace() -
                     2.0 * (Xn.transpose() * presence.asDiagonal() * Pn).trace());
  }
  return value;
}

DgllDerivatives dgll_derivatives(const Matrix& X, const Matrix& L, const Vector& presence, double beta,
                                 const Matrix& previous, const Matrix& M, double target, const Vector& multipliers) {
  const Eigen::Index N = X.rows();
  const auto s = static_cast<int>(X.cols());
  const int m = constraint_count(s);
  if (multipliers.size() != m) throw InvalidInput("DGLL multiplier count does not match the constraint count");

  Vector e = Vector::Zero(N);
  e.head(presence.size()) = presence;
  Matrix Q = 2.0 * L;
  Q.diagonal() += 2.0 * beta * e;  // 2L~ + 2 beta E~
  const Matrix anchor = 2.0 * beta * (e.asDiagonal() * previous);

  DgllDerivatives out;
  out.gradient.resize(N * s);
  for (int a = 0; a < s; ++a) out.gradient.segment(a * N, N) = Q * X.col(a) - anchor.col(a);

  const Matrix MX = M * X;
  out.constraints.resize(m);
  out.jacobian = Matrix::Zero(m, N * s);
  for (int a = 0; a < s; ++a) {
    out.constraints(a) = X.col(a).dot(MX.col(a)) - target;
    out.jacobian.block(a, a * N, 1, N) = 2.0 * MX.col(a).transpose();
  }
  if (s == 2) {
    out.constraints(2) = X.col(1).dot(MX.col(0));
    out.jacobian.block(2, 0, 1, N) = MX.col(1).transpose();
    out.jacobian.block(2, N, 1, N) = MX.col(0).transpose();
  }

  out.hessian = Matrix::Zero(N * s, N * s);
  for (int a = 0; a < s; ++a) out.hessian.block(a * N, a * N, N, N) = Q + 2.0 * multipliers(a) * M;
  if (s == 2) {
    out.hessian.block(0, N, N, N) = multipliers(2) * M;
    out.hessian.block(N, 0, N, N) = multipliers(2) * M;
  }
  return out;
}

DgllSolution dgll_layout(const Matrix& W, const Matrix& C, double alpha, double beta, const Vector& presence,
                         const Matrix& previous, int s, bool normalized, const DgllOptions& options) {
  const int m = constraint_count(s);
  const auto system = augment_gll(W, C, alpha);
  const Eigen::Index N = system.W.rows();
  if (N <= s) throw InvalidInput("DGLL requires more nodes and representatives than layout dimensions");
  if (previous.rows() != N || previous.cols() != s) throw InvalidInput("previous layout must be (n + k) x s");
  if (presence.size() != system.nodes) throw InvalidInput("presence vector does not match node count");

  const Matrix& L = system.laplacian.L;
  Matrix M;
  double target = 0.0;
  if (normalized) {
    M = centering_matrix(system.laplacian.degrees);
    target = system.laplacian.trace_degree();
  } else {
    M = Matrix::Identity(N, N) - Matrix::Constant(N, N, 1.0 / static_cast<double>(N));
    target = static_cast<double>(N);
  }

  auto derivatives = [&](const Vector& x, const Vector& mu) {
    return dgll_derivatives(unvec(x, N, s), L, presence, beta, previous, M, target, mu);
  };
  const Vector zero_mu = Vector::Zero(m);
  numerics::EqConstrainedProblem problem{
      [&](const Vector& x) { return dgll_objective(unvec(x, N, s), L, presence, beta, previous); },
      [&](const Vector& x) { return derivatives(x, zero_mu).gradient; },
      [&](const Vector& x) { return derivatives(x, zero_mu).constraints; },
      [&](const Vector& x) { return derivatives(x, zero_mu).jacobian; },
      [&](const Vector& x, const Vector& mu) { return derivatives(x, mu).hessian; },
      // X (X^T M X)^-1/2 sqrt(target) satisfies every constraint exactly.
      [&](const Vector& x) -> std::optional<Vector> {
        const Matrix X = unvec(x, N, s);
        const Matrix G = X.transpose() * M * X;
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (G + G.transpose()));
        if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, target)) {
          return std::nullopt;
        }
        const Vector scale = eig.eigenvalues().cwiseSqrt().cwiseInverse() * std::sqrt(target);
        return vec(X * (eig.eigenvectors() * scale.asDiagonal() * eig.eigenvectors().transpose()));
      },
  };
  const numerics::EqConstrainedOptions solver_options{options.tolerance, options.max_iterations};

  std::vector<Matrix> starts{previous};
  Rng rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    Matrix start(N, s);
    for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] = rng.uniform(-1.0, 1.0);
    for (int a = 0; a < s; ++a) {
      const double q = start.col(a).dot(M * start.col(a));
      if (q > 0.0) start.col(a) *= std::sqrt(target / q);
    }
    starts.push_back(std::move(start));
  }

  DgllSolution best;
  DgllSolution best_failed;
  double best_failed_merit = std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (const Matrix& start : starts) {
    const auto result = numerics::minimize_eq_constrained(problem, vec(start), solver_options);
    DgllSolution candidate;
    candidate.augmented = unvec(result.x, N, s);
    candidate.objective = result.objective;
    candidate.kkt_residual = result.kkt_residual;
    candidate.constraint_residual = result.feasibility_residual;
    candidate.iterations = result.iterations;
    candidate.converged = result.converged();
    candidate.restarts_used = options.restarts;
    if (candidate.converged) {
      if (!have_best || candidate.objective < best.objective) {
        best = std::move(candidate);
        have_best = true;
      }
    } else if (const double merit = std::max(candidate.kkt_residual, candidate.constraint_residual);
               merit < best_failed_merit) {
      best_failed_merit = merit;
      best_failed = std::move(candidate);
    }
  }
  if (!have_best) {
    throw DgllNonConvergence("DGLL solver did not converge from any start (best residual " +
                                 std::to_string(best_failed_merit) + ")",
                             best_failed);
  }
  return best;
}

}  // namespace dynlayout::gll
