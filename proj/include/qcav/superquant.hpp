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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qcav/hilbert.hpp"
#include "qcav/model.hpp"

namespace qcav {

inline constexpr std::array<int, 4> kLadderIndices{-3, -1, 1, 3};

/// Scaled drive strength zeta_u = (u g / 2 eta) / sqrt(1 + delta^2). Throws std::domain_error if
/// eta <= 0.
double zeta(int u, double g, double eta, double delta);

/// Whether ladder u supports a quasi-coherent state: |zeta| <= 1 when zeta*delta >= 0, otherwise
/// |zeta| sqrt(1 + delta^2) <= 1. Both thresholds are closed.
bool physical(int u, double g, double eta, double delta);

/// Drive amplitude at which ladder u becomes physical (the boundary of `physical` in eta).
double onset_eta(int u, double g, double delta);

/// Quasi-coherent amplitude of one ladder.
struct QuasiCoherentState {
  complex alpha;       ///< |alpha| (cos phi + i sin phi)
  double n = 0.0;      ///< |alpha|^2
  double phase = 0.0;  ///< phi in (-pi, pi]
  double cos_phi = 0.0;
  double sin_phi = 0.0;
  double n_from_quadratic = 0.0;  ///< larger root of the sqrt(n) quadratic, squared
};

struct BranchSolution {
  int u = 0;
  double zeta = 0.0;
  bool physical = false;
  /// Absent when the branch is not physical.
  std::optional<QuasiCoherentState> state;
};

BranchSolution branch_solution(int u, const ModelParams& params);

/// All four ladders, ordered as kLadderIndices.
std::array<BranchSolution, 4> branch_solutions(const ModelParams& params);

/// Squared larger root x+ of (1+d^2) x^2 - (d u g/k) x + (u^2 g^2/(4 k^2) - eta^2/k^2) = 0 when it
/// is real and non-negative. The secondary root is never returned.
std::optional<double> photon_number_quadratic(int u, const ModelParams& params);

/// Right-hand side of the amplitude self-consistency: (eta/k) / (1 - i (d - u g / (2 k |alpha|))).
complex self_consistency_rhs(int u, const ModelParams& params, complex alpha);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bit k of a mask is set when kLadderIndices[k] is physical.
std::uint8_t physical_mask(double g, double eta, double delta);

/// Physicality of every ladder on a rectangular (eta, delta) grid.
struct SolutionMap {
  std::vector<double> etas;
  std::vector<double> deltas;
  /// masks[i_eta * deltas.size() + i_delta]
  std::vector<std::uint8_t> masks;

  std::uint8_t at(std::size_t i_eta, std::size_t i_delta) const { return masks[i_eta * deltas.size() + i_delta]; }
};

/// `resolution` grid points per axis, endpoints included. eta is in the same unit as g and kappa.
/// Throws std::invalid_argument for an empty range or resolution < 2.
SolutionMap solution_map(double g, double kappa, Range eta, Range delta, int resolution);

}  // namespace qcav
