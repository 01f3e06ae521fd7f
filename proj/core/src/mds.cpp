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

#include "dynlayout/mds.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dynlayout/error.hpp"
#include "dynlayout/numerics.hpp"

namespace dynlayout::mds {
namespace {

double row_distance(const Matrix& X, Eigen::Index i, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index a = 0; a < X.cols(); ++a) {
    const double diff = X(i, a) - X(j, a);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double temporal_term(const Matrix& X, const Vector& presence, const Matrix& previous) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < presence.size(); ++i) {
    if (presence(i) == 0.0) continue;
    for (Eigen::Index a = 0; a < X.cols(); ++a) {
      const double diff = X(i, a) - previous(i, a);
      sum += presence(i) * diff * diff;
    }
  }
  return sum;
}

// Guttman rhs S(Z) Z without forming S; loops in a fixed order so results do
// not depend on the augmented dimension.
Matrix guttman_rhs(const Matrix& V, const Matrix& delta, const Matrix& Z) {
  const Eigen::Index n = Z.rows();
  Matrix out = Matrix::Zero(n, Z.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || V(i, j) == 0.0) continue;
      const double d = row_distance(Z, i, j);
      if (d == 0.0) continue;
      const double w = V(i, j) * delta(i, j) / d;
      for (Eigen::Index a = 0; a < Z.cols(); ++a) out(i, a) += w * (Z(i, a) - Z(j, a));
    }
  }
  return out;
}

struct MajorizationProblem {
  const Matrix& V;
  const Matrix& delta;
  const Vector& presence;  // full augmented length
  double beta;
  const Matrix& previous;
};

double objective(const MajorizationProblem& p, const Matrix& X) {
  double value = stress(X, p.delta, p.V);
  if (p.beta != 0.0) value += p.beta * temporal_term(X, p.presence, p.previous);
  return value;
}

bool converged(double before, double after, double epsilon) {
  if (before <= 0.0) return true;
  return (before - after) / before < epsilon;
}

MdsResult majorize(const MajorizationProblem& p, Matrix X, const SmacofOptions& options) {
  const Eigen::Index n = X.rows();
  const Eigen::Index s = X.cols();
  Matrix A = build_R(p.V);
  const bool temporally_anchored = p.beta > 0.0 && (p.presence.array() > 0.0).any();
  if (temporally_anchored) A.diagonal() += p.beta * p.presence;

  // Rows with no coupling at all keep their position; without a temporal
  // anchor the first remaining row is pinned at the origin.
  std::vector<Eigen::Index> free_rows;
  std::vector<Eigen::Index> fixed_rows;
  std::optional<Eigen::Index> pinned;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (A(i, i) == 0.0) {
      fixed_rows.push_back(i);
    } else if (!temporally_anchored && !pinned) {
      pinned = i;
      fixed_rows.push_back(i);
    } else {
      free_rows.push_back(i);
    }
  }

  MdsResult result;
  result.report.stress_trace.push_back(objective(p, X));
  if (free_rows.empty()) {
    if (pinned) X.row(*pinned).setZero();
    result.layout.X = X;
    return result;
  }

  const auto nf = static_cast<Eigen::Index>(free_rows.size());
  Matrix A_ff(nf, nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    for (Eigen::Index b = 0; b < nf; ++b) A_ff(a, b) = A(free_rows[a], free_rows[b]);
  }
  std::optional<numerics::SpdFactorization> factor;
  try {
    factor.emplace(A_ff);
  } catch (const NotPositiveDefinite&) {
    throw NumericalFailure(
        temporally_anchored
            ? "majorization system is singular: a weight component has no temporally anchored node"
            : "majorization system is singular: the weight graph is disconnected and only one component is anchored");
  }

  Matrix anchor;
  if (temporally_anchored) anchor = p.beta * (p.presence.asDiagonal() * p.previous);

  for (int h = 1;; ++h) {
    Matrix rhs = guttman_rhs(p.V, p.delta, X);
    if (temporally_anchored) rhs += anchor;
    Matrix X_next = X;
    if (pinned) X_next.row(*pinned).setZero();
    Matrix b(nf, s);
    for (Eigen::Index a = 0; a < nf; ++a) {
      const Eigen::Index i = free_rows[a];
      for (Eigen::Index c = 0; c < s; ++c) {
        double value = rhs(i, c);
        for (Eigen::Index f : fixed_rows) value -= A(i, f) * X_next(f, c);
        b(a, c) = value;
      }
    }
    const Matrix solved = factor->solve(b);
    for (Eigen::Index a = 0; a < nf; ++a) X_next.row(free_rows[a]) = solved.row(a);

    const double before = result.report.stress_trace.back();
    const double after = objective(p, X_next);
    result.report.stress_trace.push_back(after);
    result.report.iterations = h;
    X = std::move(X_next);
    if (converged(before, after, options.epsilon)) break;
    if (h >= options.max_iterations) {
      result.report.hit_iteration_cap = true;
      break;
    }
  }
  result.layout.X = std::move(X);
  return result;
}

void require_same_shape(const Matrix& delta, const Matrix& V, Eigen::Index rows) {
  if (delta.rows() != V.rows() || delta.cols() != V.cols() || V.rows() != V.cols()) {
    throw InvalidInput("distance and weight matrices must be square and of equal size");
  }
  if (rows != V.rows()) throw InvalidInput("layout row count does not match the weight matrix");
}

}  // namespace

double stress(const Matrix& X, const Matrix& delta, const Matrix& V) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.rows(); ++j) {
      if (i == j || V(i, j) == 0.0) continue;
      const double r = delta(i, j) - row_distance(X, i, j);
      sum += V(i, j) * r * r;
    }
  }
  return 0.5 * sum;
}

Matrix build_R(const Matrix& V) {
  Matrix R = -V;
  R.diagonal().setZero();
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < V.cols(); ++k) {
      if (k != i) total += V(i, k);
    }
    R(i, i) = total;
  }
  return R;
}

Matrix build_S(const Matrix& V, const Matrix& delta, const Matrix& Z) {
  const Eigen::Index n = V.rows();
  Matrix S = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || V(i, j) == 0.0) continue;
      const double d = row_distance(Z, i, j);
      if (d == 0.0) continue;
      S(i, j) = -V(i, j) * delta(i, j) / d;
    }
    S(i, i) = -S.row(i).sum();
  }
  return S;
}

AugmentedMdsSystem augment_mds(const Matrix& V, const Matrix& delta, const Matrix& C, double alpha) {
  if (C.rows() != V.rows()) throw InvalidInput("membership matrix row count does not match node count");
  const Eigen::Index n = V.rows();
  const Eigen::Index k = C.cols();
  AugmentedMdsSystem out;
  out.nodes = static_cast<int>(n);
  out.groups = static_cast<int>(k);
  out.V = Matrix::Zero(n + k, n + k);
  out.V.topLeftCorner(n, n) = V;
  out.V.topRightCorner(n, k) = alpha * C;
  out.V.bottomLeftCorner(k, n) = alpha * C.transpose();
  out.delta = Matrix::Zero(n + k, n + k);
  out.delta.topLeftCorner(n, n) = delta;
  return out;
}

MdsResult smacof_static(const Matrix& delta, const Matrix& V, const Matrix& initial, const SmacofOptions& options) {
  require_same_shape(delta, V, initial.rows());
  const Vector none = Vector::Zero(initial.rows());
  return majorize({V, delta, none, 0.0, initial}, initial, options);
}

double modified_stress(const Matrix& augmented, const Matrix& delta, const Matrix& V, const Matrix& C, double alpha,
                       double beta, const Vector& presence, const Matrix& previous) {
  const auto system = augment_mds(V, delta, C, alpha);
  double value = stress(augmented, system.delta, system.V);
  if (beta != 0.0) value += beta * temporal_term(augmented, presence, previous);
  return value;
}

MdsResult dmds_layout(const Matrix& delta, const Matrix& V, const Matrix& C, double alpha, double beta,
                      const Vector& presence, const Matrix& previous, const SmacofOptions& options) {
  require_same_shape(delta, V, presence.size());
  const auto system = augment_mds(V, delta, C, alpha);
  if (previous.rows() != system.V.rows()) throw InvalidInput("previous layout must have n + k rows");
  Vector augmented_presence = Vector::Zero(system.V.rows());
  augmented_presence.head(presence.size()) = presence;
  MdsResult result = majorize({system.V, system.delta, augmented_presence, beta, previous}, previous, options);
  result.layout = Layout::split(result.layout.X, system.nodes);
  return result;
}

MdsResult stabilized_mds_online(const Matrix& delta, const Matrix& V, double beta, const Vector& presence,
                                const Matrix& previous, const SmacofOptions& options) {
  require_same_shape(delta, V, previous.rows());
  if (presence.size() != previous.rows()) throw InvalidInput("presence vector does not match node count");
  const Eigen::Index n = previous.rows();
  const Eigen::Index s = previous.cols();
  const MajorizationProblem problem{V, delta, presence, beta, previous};

  Vector denominator(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double total = beta * presence(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) total += V(i, j);
    }
    denominator(i) = total;
  }

  MdsResult result;
  Matrix X = previous;
  result.report.stress_trace.push_back(objective(problem, X));
  for (int h = 1;; ++h) {
    Matrix X_next = X;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (denominator(i) == 0.0) continue;
      for (Eigen::Index a = 0; a < s; ++a) {
        double numerator = beta * presence(i) * previous(i, a);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i || V(i, j) == 0.0) continue;
          const double d = row_distance(X, i, j);
          const double pull = d == 0.0 ? 0.0 : delta(i, j) * (X(i, a) - X(j, a)) / d;
          numerator += V(i, j) * (X(j, a) + pull);
        }
        X_next(i, a) = numerator / denominator(i);
      }
    }
    const double before = result.report.stress_trace.back();
    const double after = objective(problem, X_next);
    result.report.stress_trace.push_back(after);
    result.report.iterations = h;
    X = std::move(X_next);
    if (converged(before, after, options.epsilon)) break;
    if (h >= options.max_iterations) {
      result.report.hit_iteration_cap = true;
      break;
    }
  }
  result.layout.X = std::move(X);
  result.layout.Y = Matrix(0, s);
  return result;
}

}  // namespace dynlayout::mds
