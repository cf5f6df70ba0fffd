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

#include "qcav/superquant.hpp"

#include <cmath>
#include <stdexcept>

namespace qcav {

double zeta(int u, double g, double eta, double delta) {
  if (!(eta > 0.0)) throw std::domain_error("zeta requires a positive drive amplitude");
  return (u * g / (2.0 * eta)) / std::sqrt(1.0 + delta * delta);
}

bool physical(int u, double g, double eta, double delta) {
  const double z = zeta(u, g, eta, delta);
  if (z * delta >= 0.0) return std::abs(z) <= 1.0;
  return std::abs(z) * std::sqrt(1.0 + delta * delta) <= 1.0;
}

double onset_eta(int u, double g, double delta) {
  if (u * delta >= 0.0) return std::abs(u) * g / (2.0 * std::sqrt(1.0 + delta * delta));
  return std::abs(u) * g / 2.0;
}

BranchSolution branch_solution(int u, const ModelParams& params) {
  const double d = params.delta();
  BranchSolution b;
  b.u = u;
  b.zeta = zeta(u, params.g, params.eta, d);
  b.physical = physical(u, params.g, params.eta, d);
  if (!b.physical) return b;

  const double z = b.zeta;
  const double norm = std::sqrt(1.0 + d * d);
  const double root = std::sqrt(std::max(0.0, 1.0 - z * z));
  QuasiCoherentState s;
  s.cos_phi = (z * d + root) / norm;
  s.sin_phi = (-z + d * root) / norm;
  // Quadrant from the two signed components together.
  s.phase = std::atan2(s.sin_phi, s.cos_phi);
  const double magnitude = (params.eta / params.kappa) * s.cos_phi;
  s.alpha = complex(magnitude * s.cos_phi, magnitude * s.sin_phi);
  s.n = magnitude * magnitude;
  s.n_from_quadratic = photon_number_quadratic(u, params).value_or(0.0);
  b.state = s;
  return b;
}

std::array<BranchSolution, 4> branch_solutions(const ModelParams& params) {
  std::array<BranchSolution, 4> out;
  for (std::size_t k = 0; k < kLadderIndices.size(); ++k) out[k] = branch_solution(kLadderIndices[k], params);
  return out;
}

std::optional<double> photon_number_quadratic(int u, const ModelParams& params) {
  if (!(params.eta > 0.0)) throw std::domain_error("quadratic photon number requires a positive drive amplitude");
  const double d = params.delta();
  const double gk = params.g / params.kappa;
  const double ek = params.eta / params.kappa;
  const double qa = 1.0 + d * d;
  const double qb = -d * u * gk;
  const double qc = u * u * gk * gk / 4.0 - ek * ek;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::nullopt;
  const double x = (-qb + std::sqrt(disc)) / (2.0 * qa);
  if (x < 0.0) return std::nullopt;
  return x * x;
}

complex self_consistency_rhs(int u, const ModelParams& params, complex alpha) {
  const double shift = params.delta() - u * params.g / (2.0 * params.kappa * std::abs(alpha));
  return (params.eta / params.kappa) / complex(1.0, -shift);
}

std::uint8_t physical_mask(double g, double eta, double delta) {
  std::uint8_t mask = 0;
  for (std::size_t k = 0; k < kLadderIndices.size(); ++k) {
    if (physical(kLadderIndices[k], g, eta, delta)) mask |= static_cast<std::uint8_t>(1u << k);
  }
  return mask;
}

SolutionMap solution_map(double g, double kappa, Range eta, Range delta, int resolution) {
  if (resolution < 2) throw std::invalid_argument("solution map resolution must be >= 2");
  if (!(eta.hi > eta.lo) || !(eta.lo > 0.0)) throw std::invalid_argument("drive range must be positive and non-empty");
  if (!(delta.hi > delta.lo)) throw std::invalid_argument("detuning range must be non-empty");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");

  SolutionMap map;
  const auto n = static_cast<std::size_t>(resolution);
  map.etas.resize(n);
  map.deltas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    map.etas[i] = eta.lo + f * (eta.hi - eta.lo);
    map.deltas[i] = delta.lo + f * (delta.hi - delta.lo);
  }
  map.masks.resize(n * n);
  // zeta only depends on g/eta, so kappa enters through delta = Delta / kappa only.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) map.masks[i * n + j] = physical_mask(g, map.etas[i], map.deltas[j]);
  }
  return map;
}

}  // namespace qcav
