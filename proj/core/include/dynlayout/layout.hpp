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

#include "dynlayout/graph.hpp"

namespace dynlayout {

// Node coordinates X (n x s) and group-representative coordinates Y (k x s).
struct Layout {
  Matrix X;
  Matrix Y;

  [[nodiscard]] int nodes() const { return static_cast<int>(X.rows()); }
  [[nodiscard]] int groups() const { return static_cast<int>(Y.rows()); }
  [[nodiscard]] int dims() const { return static_cast<int>(X.cols()); }

  // [X; Y] stacked.
  [[nodiscard]] Matrix augmented() const {
    Matrix out(X.rows() + Y.rows(), X.cols());
    out.topRows(X.rows()) = X;
    out.bottomRows(Y.rows()) = Y;
    return out;
  }
  [[nodiscard]] static Layout split(const Matrix& augmented, int n) {
    return {augmented.topRows(n), augmented.bottomRows(augmented.rows() - n)};
  }
};

}  // namespace dynlayout
