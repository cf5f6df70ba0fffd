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

#include <cstddef>

#include <Eigen/Sparse>

#include "qcav/hilbert.hpp"
#include "qcav/model.hpp"

namespace qcav {

/// Hard cap on the Hilbert-space dimension accepted by the master-equation oracle.
inline constexpr int kMaxOracleDim = 512;
/// Cap for the fully dense Liouvillian (its size is dim^2 x dim^2).
inline constexpr int kMaxDenseLiouvillianDim = 48;

/// Column-major, for the sparse LU.
using Superoperator = Eigen::SparseMatrix<complex>;

/// L with vec(d rho/dt) = L vec(rho); vec stacks columns, so rho(i, j) sits at j * dim + i.
/// Throws DimensionError above kMaxOracleDim.
Superoperator liouvillian(const ModelParams& params, const CompositeSpace& space);

/// Same matrix, dense. Throws DimensionError above kMaxDenseLiouvillianDim.
CMatrix liouvillian_dense(const ModelParams& params, const CompositeSpace& space);

struct DensityMatrixCheck {
  double trace_error = 0.0;        ///< |tr rho - 1|
  double hermiticity_error = 0.0;  ///< max |rho - rho^dag|
  double min_eigenvalue = 0.0;

  bool valid() const { return trace_error < 1e-10 && hermiticity_error < 1e-10 && min_eigenvalue > -1e-8; }
};

DensityMatrixCheck check_density_matrix(const CMatrix& rho);

struct SteadyStateResult {
  CMatrix rho;
  double residual = 0.0;  ///< max |L[rho]|
  double n_photons = 0.0;
  complex field;
  /// The full null space is not one-dimensional. rho is then the stationary state reached from
  /// the reference state, computed on the sector of Liouville space connected to it.
  bool degenerate = false;
  /// Number of vec(rho) components the final solve was restricted to (dim^2 when unrestricted).
  std::size_t sector_size = 0;
  /// False when no unique stationary state could be isolated even after sector restriction.
  bool solved = false;
  DensityMatrixCheck check;
};

/// Null vector of L, normalized to unit trace and Hermitized. `reference` selects the sector
/// when the null space is degenerate (default: global ground state).
SteadyStateResult steady_state(const ModelParams& params, const CompositeSpace& space);
SteadyStateResult steady_state(const ModelParams& params, const CompositeSpace& space, const CMatrix& reference);

/// rho(t) = exp(L t) rho0, integrated with classical RK4 at a step bounded by the Liouvillian's
/// Gershgorin radius. Trace is preserved by every stage.
CMatrix propagate(const CMatrix& rho0, const ModelParams& params, const CompositeSpace& space, double t);

/// Tr(rho O).
complex expectation(const SparseOperator& op, const CMatrix& rho);

}  // namespace qcav
