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

#include <functional>
#include <optional>

#include <Eigen/Cholesky>

#include "dynlayout/graph.hpp"

namespace dynlayout::numerics {

// Cholesky factor of a symmetric positive-definite matrix, reusable across
// right-hand sides.
class SpdFactorization {
 public:
  // Throws NotPositiveDefinite when the matrix is not SPD (to working
  // precision) and InvalidInput when it is not square and symmetric.
  explicit SpdFactorization(const Matrix& A);

  [[nodiscard]] Vector solve(const Vector& b) const;
  [[nodiscard]] Matrix solve(const Matrix& B) const;
  [[nodiscard]] Matrix lower() const { return llt_.matrixL(); }
  [[nodiscard]] int size() const { return static_cast<int>(llt_.rows()); }

 private:
  Eigen::LLT<Matrix> llt_;
};

inline SpdFactorization spd_factor(const Matrix& A) { return SpdFactorization(A); }
inline Vector spd_solve(const SpdFactorization& factor, const Vector& b) { return factor.solve(b); }

// Ascending eigenvalues with matching orthonormal (plain) or D-orthonormal
// (generalized) eigenvectors as columns.
struct EigenResult {
  Vector values;
  Matrix vectors;
};

// The m smallest eigenpairs of a symmetric matrix.
EigenResult sym_eig_smallest(const Matrix& A, int m);

// The m smallest generalized eigenpairs of L u = lambda D u for a positive
// diagonal D, via the symmetric transform D^-1/2 L D^-1/2.
EigenResult gen_eig_smallest(const Matrix& L, const Vector& d, int m);

// Oracles for an equality-constrained problem min f(x) s.t. g(x) = 0.
// `hessian(x, mu)` is the Hessian of the Lagrangian f + mu^T g.
struct EqConstrainedProblem {
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&)> constraints;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<Matrix(const Vector&, const Vector&)> hessian;
  // Optional map onto the feasible set. When present, a feasible Newton
  // phase on the constraint manifold runs before the augmented Lagrangian.
  std::function<std::optional<Vector>(const Vector&)> retract;
};

struct EqConstrainedOptions {
  double tolerance = 1e-9;
  int max_iterations = 500;
};

enum class SolverStatus { kConverged, kMaxIterations };

struct EqConstrainedResult {
  SolverStatus status = SolverStatus::kMaxIterations;
  Vector x;            // converged point, or best iterate on failure
  Vector multipliers;  // least-squares multipliers at x
  double objective = 0.0;
  double kkt_residual = 0.0;          // ||grad f + J^T mu||_inf
  double feasibility_residual = 0.0;  // ||g||_inf
  int iterations = 0;

  [[nodiscard]] bool converged() const { return status == SolverStatus::kConverged; }
};

// Multipliers minimizing ||grad + J^T mu||_2.
Vector least_squares_multipliers(const Vector& gradient, const Matrix& jacobian);

// Augmented-Lagrangian method with modified-Newton inner solves followed by
// Newton-KKT polishing. Never labels an infeasible point as converged.
EqConstrainedResult minimize_eq_constrained(const EqConstrainedProblem& problem, const Vector& x0,
                                            const EqConstrainedOptions& options = {});

}  // namespace dynlayout::numerics
