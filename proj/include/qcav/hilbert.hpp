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

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qcav {

using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Triplet = Eigen::Triplet<complex>;

/// Raised when operator and space dimensions do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truncated single-mode Fock space {|0>, ..., |cutoff>}.
class FockSpace {
 public:
  explicit FockSpace(int cutoff);

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int cutoff_;
};

enum class EmitterKind {
  Collective,  ///< spin-3/2, basis |m>, index m + 3/2
  Distinct,    ///< three qubits, basis bit i set <=> qubit i excited
};

/// Emitter factor. Index 0 is always the lowest (all-ground) state.
class EmitterSpace {
 public:
  explicit EmitterSpace(EmitterKind kind) : kind_(kind) {}

  EmitterKind kind() const { return kind_; }
  int dim() const { return kind_ == EmitterKind::Collective ? 4 : 8; }
  static constexpr int qubit_count() { return 3; }

  friend bool operator==(const EmitterSpace&, const EmitterSpace&) = default;

 private:
  EmitterKind kind_;
};

/// Mode ⊗ emitter. Photon index is major: i = photon * emitter.dim() + emitter_index.
class CompositeSpace {
 public:
  CompositeSpace(FockSpace fock, EmitterSpace emitter) : fock_(fock), emitter_(emitter) {}

  const FockSpace& fock() const { return fock_; }
  const EmitterSpace& emitter() const { return emitter_; }
  int dim() const { return fock_.dim() * emitter_.dim(); }

  int index(int photons, int emitter_index) const { return photons * emitter_.dim() + emitter_index; }
  int photons_of(int i) const { return i / emitter_.dim(); }
  int emitter_of(int i) const { return i % emitter_.dim(); }

  friend bool operator==(const CompositeSpace&, const CompositeSpace&) = default;

 private:
  FockSpace fock_;
  EmitterSpace emitter_;
};

/// Square sparse complex matrix in compressed row storage. Duplicate triplets are summed on
/// construction, so every stored (row, column) is unique.
class SparseOperator {
 public:
  using Storage = Eigen::SparseMatrix<complex, Eigen::RowMajor>;

  SparseOperator() = default;
  explicit SparseOperator(int dim);
  SparseOperator(int dim, std::span<const Triplet> entries);
  explicit SparseOperator(Storage m);

  static SparseOperator identity(int dim);
  static SparseOperator diagonal(std::span<const complex> values);

  int dim() const { return static_cast<int>(m_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  complex at(int row, int col) const { return m_.coeff(row, col); }

  SparseOperator adjoint() const;
  SparseOperator transpose() const;
  SparseOperator conjugate() const;
  CMatrix to_dense() const { return CMatrix(m_); }

  /// out = A * in. `out` must not alias `in`.
  void apply(const CVector& in, CVector& out) const;
  CVector operator*(const CVector& v) const;

  SparseOperator& operator+=(const SparseOperator& other);
  SparseOperator& operator-=(const SparseOperator& other);
  SparseOperator& operator*=(complex s);

  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
  friend SparseOperator operator*(SparseOperator a, complex s) { return a *= s; }
  friend SparseOperator operator*(complex s, SparseOperator a) { return a *= s; }
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

  /// Calls f(row, col, value) for every stored entry, rows ascending.
  template <class F>
  void for_each_nonzero(F&& f) const {
    for (int r = 0; r < m_.outerSize(); ++r) {
      for (Storage::InnerIterator it(m_, r); it; ++it) f(r, static_cast<int>(it.col()), it.value());
    }
  }

  const Storage& storage() const { return m_; }

 private:
  Storage m_;
};

/// Pure state on a composite space.
class StateVector {
 public:
  StateVector(const CompositeSpace& space, CVector amplitudes);

  static StateVector basis(const CompositeSpace& space, int photons, int emitter_index);

  const CompositeSpace& space() const { return space_; }
  const CVector& amplitudes() const { return amps_; }
  CVector& amplitudes() { return amps_; }

  double norm_squared() const { return amps_.squaredNorm(); }
  /// Throws std::domain_error for a zero or non-finite norm.
  void normalize();

 private:
  CompositeSpace space_;
  CVector amps_;
};

SparseOperator annihilation(const FockSpace& fock);
SparseOperator creation(const FockSpace& fock);
SparseOperator number(const FockSpace& fock);

/// S^- for the collective spin, or sum of the three single-qubit lowering operators.
SparseOperator collective_lowering(const EmitterSpace& emitter);
/// sigma_i^- of qubit `qubit` (0, 1, 2). Distinct spaces only.
SparseOperator qubit_lowering(const EmitterSpace& emitter, int qubit);
/// Diagonal with the ladder indices u = 2m in {-3,-1,1,3} (Collective) or sum of sigma_z (Distinct).
SparseOperator sz(const EmitterSpace& emitter);

enum class Factor { Mode, Emitter };

/// Kronecker embedding into the photon-major composite space.
SparseOperator embed(const SparseOperator& op, Factor target, const CompositeSpace& space);

/// <psi|O|psi> / <psi|psi>. Throws std::domain_error on a zero-norm state.
complex expectation(const SparseOperator& op, const StateVector& psi);

/// Squared norm carried by the `levels` highest Fock levels.
double top_level_weight(const StateVector& psi, int levels = 5);

/// Cutoff large enough to keep quasi-coherent Poissonian tails inside the box.
int recommended_cutoff(double eta_over_kappa, double max_branch_photons);

}  // namespace qcav
