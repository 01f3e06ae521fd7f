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

#include "dynlayout/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "dynlayout/error.hpp"

namespace dynlayout::numerics {
namespace {

bool is_symmetric(const Matrix& A) {
  if (A.rows() != A.cols()) return false;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

SpdFactorization::SpdFactorization(const Matrix& A) {
  if (!is_symmetric(A)) throw InvalidInput("SPD factorization requires a square symmetric matrix");
  llt_.compute(A);
  if (llt_.info() != Eigen::Success) throw NotPositiveDefinite("matrix is not positive definite");
  // LLT accepts tiny positive pivots produced by rounding on singular input;
  // reject pivots that are negligible relative to the diagonal scale.
  const double diag_scale = A.diagonal().cwiseAbs().maxCoeff();
  const Vector pivots = Matrix(llt_.matrixL()).diagonal();
  if (A.rows() > 0 && pivots.cwiseAbs2().minCoeff() <= 1e-13 * diag_scale) {
    throw NotPositiveDefinite("matrix is numerically singular");
  }
}

Vector SpdFactorization::solve(const Vector& b) const { return llt_.solve(b); }
Matrix SpdFactorization::solve(const Matrix& B) const { return llt_.solve(B); }

EigenResult sym_eig_smallest(const Matrix& A, int m) {
  if (!is_symmetric(A)) throw InvalidInput("eigen-decomposition requires a symmetric matrix");
  if (m < 0 || m > A.rows()) throw InvalidInput("requested more eigenpairs than the matrix dimension");
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed");
  return {solver.eigenvalues().head(m), solver.eigenvectors().leftCols(m)};
}

EigenResult gen_eig_smallest(const Matrix& L, const Vector& d, int m) {
  if (d.size() != L.rows()) throw InvalidInput("degree vector does not match matrix dimension");
  if (d.size() > 0 && d.minCoeff() <= 0.0) throw InvalidInput("generalized eigenproblem requires a positive diagonal D");
  const Vector inv_sqrt = d.cwiseSqrt().cwiseInverse();
  const Matrix transformed = inv_sqrt.asDiagonal() * L * inv_sqrt.asDiagonal();
  EigenResult plain = sym_eig_smallest(0.5 * (transformed + transformed.transpose()), m);
  plain.vectors = inv_sqrt.asDiagonal() * plain.vectors;
  return plain;
}

Vector least_squares_multipliers(const Vector& gradient, const Matrix& jacobian) {
  if (jacobian.rows() == 0) return Vector(0);
  // min ||J^T mu + grad||
  const Matrix Jt = jacobian.transpose();
  return Jt.completeOrthogonalDecomposition().solve(-gradient);
}

namespace {

struct KktState {
  double objective = 0.0;
  Vector gradient;
  Vector constraints;
  Matrix jacobian;
  Vector multipliers;
  double kkt = 0.0;
  double feasibility = 0.0;
};

KktState evaluate(const EqConstrainedProblem& p, const Vector& x) {
  KktState s;
  s.objective = p.objective(x);
  s.gradient = p.gradient(x);
  s.constraints = p.constraints(x);
  s.jacobian = p.jacobian(x);
  s.multipliers = least_squares_multipliers(s.gradient, s.jacobian);
  s.kkt = inf_norm(s.gradient + s.jacobian.transpose() * s.multipliers);
  s.feasibility = inf_norm(s.constraints);
  return s;
}

double augmented_lagrangian(const EqConstrainedProblem& p, const Vector& x, const Vector& mu, double rho) {
  const Vector g = p.constraints(x);
  return p.objective(x) + mu.dot(g) + 0.5 * rho * g.squaredNorm();
}

// Cholesky of H + tau I with the smallest tau from a geometric ladder that
// makes it positive definite.
Eigen::LLT<Matrix> modified_cholesky(const Matrix& H) {
  const double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() == Eigen::Success && Matrix(llt.matrixL()).diagonal().minCoeff() > 1e-10 * std::sqrt(scale)) {
    return llt;
  }
  const Matrix I = Matrix::Identity(H.rows(), H.cols());
  if (H.allFinite()) {
    for (double tau = 1e-8 * scale; tau < 1e300; tau *= 10.0) {
      llt.compute(H + tau * I);
      if (llt.info() == Eigen::Success) return llt;
    }
  }
  // Gradient direction when no shift works (non-finite curvature).
  llt.compute(I);
  return llt;
}

}  // namespace

EqConstrainedResult minimize_eq_constrained(const EqConstrainedProblem& p, const Vector& x0,
                                            const EqConstrainedOptions& options) {
  const double tol = options.tolerance;
  Vector x = x0;
  KktState state = evaluate(p, x);

  EqConstrainedResult best;
  auto consider = [&](const Vector& point, const KktState& s) {
    const double merit = std::max(s.kkt, s.feasibility);
    const double best_merit = best.x.size() == 0 ? std::numeric_limits<double>::infinity()
                                                 : std::max(best.kkt_residual, best.feasibility_residual);
    if (std::isfinite(merit) && merit < best_merit) {
      best.x = point;
      best.multipliers = s.multipliers;
      best.objective = s.objective;
      best.kkt_residual = s.kkt;
      best.feasibility_residual = s.feasibility;
    }
  };
  consider(x, state);

  const Eigen::Index m = state.constraints.size();
  Vector mu = state.multipliers;
  double rho = 1.0;
  double omega = 1.0;
  double previous_violation = state.feasibility;
  int iterations = 0;

  auto finish = [&](SolverStatus status) {
    best.status = status;
    best.iterations = iterations;
    return best;
  };
  auto done = [&](const KktState& s) { return s.feasibility <= tol && s.kkt <= tol; };

  // Feasible phase: Newton steps in the null space of J, retracted back onto
  // the constraint set, with an Armijo search on the objective.
  if (p.retract) {
    if (auto start = p.retract(x0)) {
      Vector y = std::move(*start);
      KktState ys = evaluate(p, y);
      consider(y, ys);
      while (iterations < options.max_iterations && !done(ys) && std::isfinite(ys.objective)) {
        const Eigen::Index n = y.size();
        const Eigen::HouseholderQR<Matrix> qr(ys.jacobian.transpose());
        const Matrix Z = Matrix(qr.householderQ()).rightCols(n - m);
        Matrix H = Z.transpose() * p.hessian(y, ys.multipliers) * Z;
        H = 0.5 * (H + H.transpose());
        const Vector direction = Z * (-modified_cholesky(H).solve(Z.transpose() * ys.gradient));
        const double slope = ys.gradient.dot(direction);
        const double slack = 1e-12 * (1.0 + std::abs(ys.objective));
        bool accepted = false;
        double step = 1.0;
        for (int ls = 0; ls < 40 && !accepted; ++ls, step *= 0.5) {
          const auto trial = p.retract(y + step * direction);
          if (!trial) continue;
          KktState ts = evaluate(p, *trial);
          if (!std::isfinite(ts.objective)) continue;
          const bool sufficient = ts.objective <= ys.objective + 1e-4 * step * slope;
          const bool polishing = ts.objective <= ys.objective + slack && ts.kkt < ys.kkt;
          if (sufficient || polishing) {
            y = *trial;
            ys = std::move(ts);
            accepted = true;
          }
        }
        ++iterations;
        if (!accepted) break;
        consider(y, ys);
      }
      if (done(ys)) {
        best = {};
        consider(y, ys);
        return finish(SolverStatus::kConverged);
      }
      x = std::move(y);
      state = std::move(ys);
      mu = state.multipliers;
      previous_violation = state.feasibility;
    }
  }

  while (iterations < options.max_iterations) {
    if (done(state)) {
      best = {};
      consider(x, state);
      return finish(SolverStatus::kConverged);
    }

    // Newton-KKT polishing once close: quadratic local convergence to the
    // nearby stationary point.
    const double gscale = 1.0 + inf_norm(state.gradient);
    if (state.feasibility <= 1e-4 * gscale && state.kkt <= 1e-4 * gscale) {
      bool improved = true;
      while (improved && iterations < options.max_iterations && !done(state)) {
        const Eigen::Index n = x.size();
        Matrix kkt(n + m, n + m);
        kkt.topLeftCorner(n, n) = p.hessian(x, state.multipliers);
        kkt.topRightCorner(n, m) = state.jacobian.transpose();
        kkt.bottomLeftCorner(m, n) = state.jacobian;
        kkt.bottomRightCorner(m, m).setZero();
        Vector rhs(n + m);
        rhs.head(n) = -(state.gradient + state.jacobian.transpose() * state.multipliers);
        rhs.tail(m) = -state.constraints;
        const Vector step = kkt.completeOrthogonalDecomposition().solve(rhs);
        const Vector trial = x + step.head(n);
        KktState trial_state = evaluate(p, trial);
        ++iterations;
        const double before = std::max(state.kkt, state.feasibility);
        const double after = std::max(trial_state.kkt, trial_state.feasibility);
        improved = std::isfinite(after) && after < before;
        if (improved) {
          x = trial;
          state = std::move(trial_state);
          consider(x, state);
        }
      }
      if (done(state)) continue;
      mu = state.multipliers;
    }

    // Inner loop: minimize the augmented Lagrangian by modified Newton.
    for (int inner = 0; inner < 50 && iterations < options.max_iterations; ++inner) {
      const Vector g = p.constraints(x);
      const Matrix J = p.jacobian(x);
      const Vector shifted = mu + rho * g;
      const Vector grad = p.gradient(x) + J.transpose() * shifted;
      if (inf_norm(grad) <= omega * gscale) break;
      const Matrix H = p.hessian(x, shifted) + rho * J.transpose() * J;
      const Vector direction = -modified_cholesky(H).solve(grad);
      const double slope = grad.dot(direction);
      const double phi0 = augmented_lagrangian(p, x, mu, rho);
      double step = 1.0;
      Vector trial = x + direction;
      for (int ls = 0; ls < 60; ++ls) {
        const double phi = augmented_lagrangian(p, trial, mu, rho);
        if (std::isfinite(phi) && phi <= phi0 + 1e-4 * step * slope) break;
        step *= 0.5;
        trial = x + step * direction;
      }
      ++iterations;
      if ((trial - x).cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + x.cwiseAbs().maxCoeff())) {
        x = trial;
        break;
      }
      x = trial;
    }

    // Each multiplier update counts, so a stalled inner solve still
    // exhausts the budget.
    ++iterations;
    state = evaluate(p, x);
    consider(x, state);
    mu += rho * state.constraints;
    if (state.feasibility > 0.25 * previous_violation) rho = std::min(rho * 10.0, 1e12);
    previous_violation = state.feasibility;
    omega = std::max(omega * 0.1, 1e-12);
  }

  if (done(state)) {
    best = {};
    consider(x, state);
    return finish(SolverStatus::kConverged);
  }
  return finish(SolverStatus::kMaxIterations);
}

}  // namespace dynlayout::numerics
