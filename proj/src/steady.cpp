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

#include "qcav/steady.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace qcav {

namespace {

std::vector<Triplet> liouvillian_triplets(const ModelParams& params, const CompositeSpace& space) {
  const int n = space.dim();
  if (n > kMaxOracleDim)
    throw DimensionError("master-equation oracle is capped at dimension " + std::to_string(kMaxOracleDim) + ", got " +
                         std::to_string(n));
  const SparseOperator h_eff = effective_hamiltonian(params, space);
  const auto channels = jump_channels(params, space);

  std::vector<Triplet> t;
  t.reserve(2 * static_cast<std::size_t>(n) * h_eff.nonzeros());
  const complex i(0.0, 1.0);
  // I ⊗ (-i H_eff): acts on rho from the left.
  h_eff.for_each_nonzero([&](int r, int c, complex v) {
    for (int j = 0; j < n; ++j) t.emplace_back(j * n + r, j * n + c, -i * v);
  });
  // (i conj H_eff) ⊗ I: rho (i H_eff^dag).
  h_eff.for_each_nonzero([&](int r, int c, complex v) {
    for (int k = 0; k < n; ++k) t.emplace_back(r * n + k, c * n + k, i * std::conj(v));
  });
  // conj(L) ⊗ L: L rho L^dag.
  for (const auto& ch : channels) {
    ch.op.for_each_nonzero([&](int r1, int c1, complex v1) {
      ch.op.for_each_nonzero(
          [&](int r2, int c2, complex v2) { t.emplace_back(r1 * n + r2, c1 * n + c2, std::conj(v1) * v2); });
    });
  }
  return t;
}

CVector vec(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvec(const CVector& v, int n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }

/// Solves L x = 0 with tr x = 1 on the given index sector, replacing the equation of diagonal
/// entry `replaced` (a position in `diag_local`).
std::optional<CVector> solve_sector(const Superoperator& full, const std::vector<int>& sector,
                                    const std::vector<int>& diag_local, std::size_t replaced) {
  const int m = static_cast<int>(sector.size());
  std::vector<int> local(static_cast<std::size_t>(full.rows()), -1);
  for (int k = 0; k < m; ++k) local[static_cast<std::size_t>(sector[k])] = k;

  const int replaced_row = diag_local[replaced];
  std::vector<Triplet> t;
  for (int k = 0; k < m; ++k) {
    for (Superoperator::InnerIterator it(full, sector[k]); it; ++it) {
      const int row = local[static_cast<std::size_t>(it.row())];
      if (row < 0 || row == replaced_row) continue;
      t.emplace_back(row, k, it.value());
    }
  }
  for (int d : diag_local) t.emplace_back(replaced_row, d, complex(1.0, 0.0));

  Superoperator a(m, m);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  Eigen::SparseLU<Superoperator, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) return std::nullopt;
  CVector rhs = CVector::Zero(m);
  rhs(replaced_row) = 1.0;
  CVector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;
  return x;
}

struct SectorSolution {
  CMatrix rho;
  double residual = 0.0;
  bool unique = false;
};

SectorSolution solve_on(const Superoperator& full, int n, const std::vector<int>& sector) {
  std::vector<int> diag_local;
  for (std::size_t k = 0; k < sector.size(); ++k) {
    const int g = sector[k];
    if (g / n == g % n) diag_local.push_back(static_cast<int>(k));
  }
  SectorSolution out;
  if (diag_local.empty()) return out;

  auto to_rho = [&](const CVector& x) {
    CVector g = CVector::Zero(static_cast<Eigen::Index>(n) * n);
    for (std::size_t k = 0; k < sector.size(); ++k) g(sector[k]) = x(static_cast<Eigen::Index>(k));
    CMatrix rho = unvec(g, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return rho;
  };

  const auto first = solve_sector(full, sector, diag_local, 0);
  const auto last = solve_sector(full, sector, diag_local, diag_local.size() - 1);
  if (!first || !last) return out;
  out.rho = to_rho(*first);
  const CMatrix other = to_rho(*last);
  out.residual = (full * vec(out.rho)).cwiseAbs().maxCoeff();
  const double spread = (out.rho - other).cwiseAbs().maxCoeff();
  out.unique = out.rho.allFinite() && spread < 1e-8 && out.residual < 1e-8;
  return out;
}

std::vector<int> reachable_sector(const Superoperator& full, const CVector& seed) {
  const auto size = static_cast<std::size_t>(full.rows());
  std::vector<char> seen(size, 0);
  std::vector<int> stack;
  for (Eigen::Index k = 0; k < seed.size(); ++k) {
    if (seed(k) != complex(0.0, 0.0)) {
      seen[static_cast<std::size_t>(k)] = 1;
      stack.push_back(static_cast<int>(k));
    }
  }
  while (!stack.empty()) {
    const int col = stack.back();
    stack.pop_back();
    for (Superoperator::InnerIterator it(full, col); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row());
      if (!seen[row] && it.value() != complex(0.0, 0.0)) {
        seen[row] = 1;
        stack.push_back(static_cast<int>(row));
      }
    }
  }
  std::vector<int> sector;
  for (std::size_t k = 0; k < size; ++k) {
    if (seen[k]) sector.push_back(static_cast<int>(k));
  }
  return sector;
}

double gershgorin_bound(const SparseOperator& op) {
  double best = 0.0;
  std::vector<double> rows(static_cast<std::size_t>(op.dim()), 0.0);
  op.for_each_nonzero([&](int r, int, complex v) { rows[static_cast<std::size_t>(r)] += std::abs(v); });
  for (double r : rows) best = std::max(best, r);
  return best;
}

}  // namespace

Superoperator liouvillian(const ModelParams& params, const CompositeSpace& space) {
  const auto t = liouvillian_triplets(params, space);
  const int n2 = space.dim() * space.dim();
  Superoperator l(n2, n2);
  l.setFromTriplets(t.begin(), t.end());
  l.prune(complex(0.0, 0.0), 0.0);
  l.makeCompressed();
  return l;
}

CMatrix liouvillian_dense(const ModelParams& params, const CompositeSpace& space) {
  if (space.dim() > kMaxDenseLiouvillianDim)
    throw DimensionError("dense Liouvillian is capped at dimension " + std::to_string(kMaxDenseLiouvillianDim));
  return CMatrix(liouvillian(params, space));
}

DensityMatrixCheck check_density_matrix(const CMatrix& rho) {
  DensityMatrixCheck c;
  c.trace_error = std::abs(rho.trace() - complex(1.0, 0.0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = eig.eigenvalues().minCoeff();
  return c;
}

complex expectation(const SparseOperator& op, const CMatrix& rho) {
  if (op.dim() != rho.rows() || rho.rows() != rho.cols()) throw DimensionError("expectation: dimension mismatch");
  complex s(0.0, 0.0);
  // Tr(rho O) = sum_{r,c} O(r,c) rho(c,r)
  op.for_each_nonzero([&](int r, int c, complex v) { s += v * rho(c, r); });
  return s;
}

SteadyStateResult steady_state(const ModelParams& params, const CompositeSpace& space) {
  CMatrix ground = CMatrix::Zero(space.dim(), space.dim());
  ground(0, 0) = 1.0;
  return steady_state(params, space, ground);
}

SteadyStateResult steady_state(const ModelParams& params, const CompositeSpace& space, const CMatrix& reference) {
  const int n = space.dim();
  if (reference.rows() != n || reference.cols() != n) throw DimensionError("reference state has the wrong dimension");
  const Superoperator l = liouvillian(params, space);

  std::vector<int> everything(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < everything.size(); ++k) everything[k] = static_cast<int>(k);

  SteadyStateResult out;
  SectorSolution sol = solve_on(l, n, everything);
  out.sector_size = everything.size();
  if (!sol.unique) {
    out.degenerate = true;
    const std::vector<int> sector = reachable_sector(l, vec(reference));
    sol = solve_on(l, n, sector);
    out.sector_size = sector.size();
  }
  out.solved = sol.unique;
  if (sol.rho.size() == 0) return out;

  out.rho = std::move(sol.rho);
  out.residual = sol.residual;
  const SparseOperator a = embed(annihilation(space.fock()), Factor::Mode, space);
  out.n_photons = expectation(a.adjoint() * a, out.rho).real();
  out.field = expectation(a, out.rho);
  out.check = check_density_matrix(out.rho);
  return out;
}

CMatrix propagate(const CMatrix& rho0, const ModelParams& params, const CompositeSpace& space, double t) {
  const int n = space.dim();
  if (n > kMaxOracleDim) throw DimensionError("propagation is capped at dimension " + std::to_string(kMaxOracleDim));
  if (rho0.rows() != n || rho0.cols() != n) throw DimensionError("initial density matrix has the wrong dimension");
  if (t < 0.0) throw std::invalid_argument("propagation time must be non-negative");
  if (t == 0.0) return rho0;

  const SparseOperator gen = effective_hamiltonian(params, space) * complex(0.0, -1.0);
  const auto channels = jump_channels(params, space);
  double bound = 2.0 * gershgorin_bound(gen);
  for (const auto& ch : channels) bound += std::pow(gershgorin_bound(ch.op), 2);

  const auto steps = static_cast<long>(std::ceil(t * bound / 0.25));
  const double dt = t / static_cast<double>(std::max(1L, steps));

  const auto& g = gen.storage();
  auto rhs = [&](const CMatrix& rho) {
    CMatrix left = g * rho;
    CMatrix out = left + CMatrix(g * rho.adjoint()).adjoint();
    for (const auto& ch : channels) {
      const auto& lop = ch.op.storage();
      out += lop * CMatrix(lop * rho.adjoint()).adjoint();
    }
    return out;
  };

  CMatrix rho = rho0;
  for (long s = 0; s < std::max(1L, steps); ++s) {
    const CMatrix k1 = rhs(rho);
    const CMatrix k2 = rhs(rho + 0.5 * dt * k1);
    const CMatrix k3 = rhs(rho + 0.5 * dt * k2);
    const CMatrix k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace qcav
