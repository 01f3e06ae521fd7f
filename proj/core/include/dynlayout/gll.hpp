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

#include <cstdint>
#include <functional>
#include <span>

#include "dynlayout/error.hpp"
#include "dynlayout/layout.hpp"
#include "dynlayout/numerics.hpp"

namespace dynlayout::gll {

// L = D - W with the degrees d_ii = sum_j w_ij.
struct LaplacianPair {
  Matrix L;
  Vector degrees;

  [[nodiscard]] double trace_degree() const { return degrees.sum(); }
};

LaplacianPair laplacian(const Matrix& W);

// tr(X^T L X).
double energy(const Matrix& X, const Matrix& L);
// (1/2) sum_ij w_ij ||x_i - x_j||^2, the pairwise form of the same energy.
double energy_pairwise(const Matrix& X, const Matrix& W);

// True when the positive entries of W connect every node.
bool is_connected(const Matrix& W);

// Static spectral layout: sqrt(n) [v_2 .. v_{s+1}] of L (plain) or
// sqrt(tr D) [u_2 .. u_{s+1}] of (L, D) (degree-normalized).
// Throws InvalidInput for disconnected graphs or s + 1 > n.
Layout spectral_layout(const Matrix& W, int s, bool normalized);

// Graph augmented with one representative per group joined to its members
// by edges of weight alpha.
struct AugmentedGllSystem {
  Matrix W;
  LaplacianPair laplacian;
  int nodes = 0;
  int groups = 0;
};
AugmentedGllSystem augment_gll(const Matrix& W, const Matrix& C, double alpha);

// M = D - D 1 1^T D / tr(D).
Matrix centering_matrix(const Vector& degrees);

// Grouping-regularized spectral layout from the generalized eigenvectors of
// the augmented Laplacian pair, scaled as in spectral_layout.
Layout ccdr_layout(const Matrix& W, const Matrix& C, double alpha, int s, bool normalized);

// Spectral layout of lambda L_prev + (1 - lambda) L_curr. Both Laplacians
// must be indexed by the current node set. Throws InvalidInput for lambda
// outside [0, 1].
Layout bfp_layout(const Matrix& L_prev, const Matrix& L_curr, double lambda, int s, bool normalized);

// Flips signs and permutes axes of `layout` (nodes and representatives) to
// maximize sum_i e_i <x_i, x_i[t-1]>. `previous` and `presence` cover the
// node rows only.
void align_to_previous(Layout& layout, const Matrix& previous, const Vector& presence);

struct CompositeCost {
  double static_cost = 0.0;
  double centroid_cost = 0.0;
  double temporal_cost = 0.0;
};

// argmin over the grid of static + alpha * centroid + beta * temporal; ties
// go to the smaller lambda.
double bfp_lambda_select(std::span<const double> grid, double alpha, double beta,
                         const std::function<CompositeCost(double)>& evaluate);

// tr(X^T L X) + beta [tr(X^T E X) - 2 tr(X^T E X[t-1])].
double dgll_objective(const Matrix& augmented, const Matrix& L, const Vector& presence, double beta,
                      const Matrix& previous);

// Closed-form gradient, constraints, constraint Jacobian and Lagrangian
// Hessian of the DGLL problem for x = vec(X~) stacked by column. The
// constraints are x_a^T M x_a = target for each axis plus x_2^T M x_1 = 0 in
// 2-D. `multipliers` has one entry per constraint.
struct DgllDerivatives {
  Vector gradient;
  Vector constraints;
  Matrix jacobian;
  Matrix hessian;
};
DgllDerivatives dgll_derivatives(const Matrix& augmented, const Matrix& L, const Vector& presence, double beta,
                                 const Matrix& previous, const Matrix& M, double target, const Vector& multipliers);

struct DgllSolution {
  Matrix augmented;  // (n + k) x s
  double objective = 0.0;
  double kkt_residual = 0.0;
  double constraint_residual = 0.0;
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
};

// Non-convergence on every start; carries the best (possibly infeasible)
// iterate.
class DgllNonConvergence : public NumericalFailure {
 public:
  DgllNonConvergence(const std::string& what, DgllSolution best) : NumericalFailure(what), best_(std::move(best)) {}
  [[nodiscard]] const DgllSolution& best() const { return best_; }

 private:
  DgllSolution best_;
};

struct DgllOptions {
  int restarts = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int max_iterations = 500;
};

// Dynamic GLL for one time step: minimizes dgll_objective subject to the
// (degree-weighted) variance/covariance constraints, starting from
// `previous` plus `restarts` seeded random starts, and returns the
// lowest-objective converged point. `presence` covers the n node rows;
// `previous` is (n + k) x s with new-node rows pre-initialized.
DgllSolution dgll_layout(const Matrix& W, const Matrix& C, double alpha, double beta, const Vector& presence,
                         const Matrix& previous, int s, bool normalized, const DgllOptions& options = {});

}  // namespace dynlayout::gll
