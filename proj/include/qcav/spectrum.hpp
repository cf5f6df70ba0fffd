// Copyright 2026 The qcav Authors
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

#include <vector>

namespace qcav {

/// Undriven spectrum of one total-excitation manifold, in the -Delta*n convention.
struct ManifoldSpectrum {
  int n = 0;
  /// Ladder index per eigenvalue. Filled for n >= 3 (and g > 0); empty for the low manifolds.
  std::vector<int> labels;
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Eigenvalues with -Delta*n removed.
  std::vector<double> coupling;
  /// 3 / (4 (n - 1)) for n >= 2, NaN otherwise.
  double epsilon = 0.0;
};

/// Closed-form quadruplet of an n >= 3 manifold. Throws std::domain_error for n < 3.
ManifoldSpectrum closed_form_eigenvalues(int n, double g, double delta_cap);

/// Diagonalizes the excitation-n block of the undriven Hamiltonian (dimension min(n, 3) + 1).
ManifoldSpectrum numerical_block_eigenvalues(int n, double g, double delta_cap);

/// Large-n ladder approximation -Delta n + u g sqrt(n).
double ladder_eigenvalue_approx(int u, int n, double g, double delta_cap);

struct LadderSpacing {
  double exact = 0.0;   ///< lambda_u(n+1) - lambda_u(n) from the closed form
  double approx = 0.0;  ///< -Delta + u g / (2 sqrt(n))
};

/// Throws std::domain_error for n < 3 or u not in {-3,-1,1,3}.
LadderSpacing ladder_spacing(int u, int n, double g, double delta_cap);

/// Closed-form lambda_u(n).
double closed_form_eigenvalue(int u, int n, double g, double delta_cap);

}  // namespace qcav
