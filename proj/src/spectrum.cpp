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

#include "qcav/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "qcav/model.hpp"

namespace qcav {

namespace {

double epsilon_of(int n) {
  return n >= 2 ? 3.0 / (4.0 * (n - 1)) : std::numeric_limits<double>::quiet_NaN();
}

int ladder_position(int u) {
  switch (u) {
    case -3: return 0;
    case -1: return 1;
    case 1: return 2;
    case 3: return 3;
    default: throw std::domain_error("ladder index must be one of -3, -1, 1, 3; got " + std::to_string(u));
  }
}

}  // namespace

double closed_form_eigenvalue(int u, int n, double g, double delta_cap) {
  ladder_position(u);
  if (n < 3) throw std::domain_error("closed-form quadruplet requires n >= 3");
  const double eps = epsilon_of(n);
  const double root = 4.0 * std::sqrt(1.0 + eps * eps);
  const double inner = std::abs(u) == 3 ? 5.0 + root : 5.0 - root;
  const double sign = u > 0 ? 1.0 : -1.0;
  return -delta_cap * n + sign * g * std::sqrt(inner * (n - 1));
}

ManifoldSpectrum closed_form_eigenvalues(int n, double g, double delta_cap) {
  if (n < 3) throw std::domain_error("closed-form quadruplet requires n >= 3, got " + std::to_string(n));
  ManifoldSpectrum out;
  out.n = n;
  out.epsilon = epsilon_of(n);
  for (int u : {-3, -1, 1, 3}) {
    const double lam = closed_form_eigenvalue(u, n, g, delta_cap);
    out.labels.push_back(u);
    out.eigenvalues.push_back(lam);
    out.coupling.push_back(lam + delta_cap * n);
  }
  return out;
}

ManifoldSpectrum numerical_block_eigenvalues(int n, double g, double delta_cap) {
  if (n < 0) throw std::domain_error("excitation number must be non-negative");
  ModelParams params;
  params.g = g;
  params.delta_cap = delta_cap;
  params.emitters = EmitterKind::Collective;
  const CompositeSpace space(FockSpace(std::max(n, 1)), EmitterSpace(EmitterKind::Collective));
  const SparseOperator h = hamiltonian(params, space);

  // Block basis |n - k>|k>, k = m + 3/2 = 0..min(n, 3).
  const int size = std::min(n, 3) + 1;
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) idx[k] = space.index(n - k, k);
  CMatrix block(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) block(r, c) = h.at(idx[r], idx[c]);
  }

  // The diagonal is the constant -Delta (n - 3/2) across the block.
  const double block_constant = block(0, 0).real();
  block -= block_constant * CMatrix::Identity(size, size);

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(block, Eigen::EigenvaluesOnly);
  ManifoldSpectrum out;
  out.n = n;
  out.epsilon = epsilon_of(n);
  for (int k = 0; k < size; ++k) {
    const double c = solver.eigenvalues()(k);
    out.coupling.push_back(c);
    out.eigenvalues.push_back(c - delta_cap * n);
  }
  if (size == 4 && g > 0.0) out.labels = {-3, -1, 1, 3};
  return out;
}

double ladder_eigenvalue_approx(int u, int n, double g, double delta_cap) {
  return -delta_cap * n + u * g * std::sqrt(static_cast<double>(n));
}

LadderSpacing ladder_spacing(int u, int n, double g, double delta_cap) {
  if (n < 3) throw std::domain_error("ladder spacing requires n >= 3");
  LadderSpacing s;
  s.exact = closed_form_eigenvalue(u, n + 1, g, delta_cap) - closed_form_eigenvalue(u, n, g, delta_cap);
  s.approx = -delta_cap + u * g / (2.0 * std::sqrt(static_cast<double>(n)));
  return s;
}

}  // namespace qcav
