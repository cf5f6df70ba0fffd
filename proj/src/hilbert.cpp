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

#include "qcav/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcav {

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw DimensionError("Fock cutoff must be >= 1, got " + std::to_string(cutoff));
}

SparseOperator::SparseOperator(int dim) : m_(dim, dim) {}

SparseOperator::SparseOperator(int dim, std::span<const Triplet> entries) : m_(dim, dim) {
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= dim || t.col() < 0 || t.col() >= dim)
      throw DimensionError("triplet index outside operator dimension " + std::to_string(dim));
  }
  m_.setFromTriplets(entries.begin(), entries.end());
  m_.makeCompressed();
}

SparseOperator::SparseOperator(Storage m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator must be square");
  m_.makeCompressed();
}

SparseOperator SparseOperator::identity(int dim) {
  std::vector<complex> ones(static_cast<std::size_t>(dim), complex(1.0, 0.0));
  return diagonal(ones);
}

SparseOperator SparseOperator::diagonal(std::span<const complex> values) {
  const int dim = static_cast<int>(values.size());
  std::vector<Triplet> t;
  t.reserve(values.size());
  for (int i = 0; i < dim; ++i) {
    if (values[i] != complex(0.0, 0.0)) t.emplace_back(i, i, values[i]);
  }
  return SparseOperator(dim, t);
}

SparseOperator SparseOperator::adjoint() const { return SparseOperator(Storage(m_.adjoint())); }
SparseOperator SparseOperator::transpose() const { return SparseOperator(Storage(m_.transpose())); }
SparseOperator SparseOperator::conjugate() const { return SparseOperator(Storage(m_.conjugate())); }

void SparseOperator::apply(const CVector& in, CVector& out) const {
  const int n = dim();
  if (in.size() != n) throw DimensionError("apply: vector length does not match operator");
  out.resize(n);
  const auto* outer = m_.outerIndexPtr();
  const auto* inner = m_.innerIndexPtr();
  const complex* val = m_.valuePtr();
  const complex* x = in.data();
  complex* y = out.data();
  for (int r = 0; r < n; ++r) {
    double re = 0.0;
    double im = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) {
      const complex a = val[k];
      const complex b = x[inner[k]];
      re += a.real() * b.real() - a.imag() * b.imag();
      im += a.real() * b.imag() + a.imag() * b.real();
    }
    y[r] = complex(re, im);
  }
}

CVector SparseOperator::operator*(const CVector& v) const {
  CVector out;
  apply(v, out);
  return out;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (other.dim() != dim()) throw DimensionError("operator sum: dimension mismatch");
  m_ = Storage(m_ + other.m_);
  m_.makeCompressed();
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& other) {
  if (other.dim() != dim()) throw DimensionError("operator difference: dimension mismatch");
  m_ = Storage(m_ - other.m_);
  m_.makeCompressed();
  return *this;
}

SparseOperator& SparseOperator::operator*=(complex s) {
  m_ *= s;
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator product: dimension mismatch");
  return SparseOperator(SparseOperator::Storage(a.m_ * b.m_));
}

StateVector::StateVector(const CompositeSpace& space, CVector amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) throw DimensionError("state length does not match space dimension");
}

StateVector StateVector::basis(const CompositeSpace& space, int photons, int emitter_index) {
  if (photons < 0 || photons > space.fock().cutoff() || emitter_index < 0 ||
      emitter_index >= space.emitter().dim())
    throw DimensionError("basis state outside the truncated space");
  CVector v = CVector::Zero(space.dim());
  v(space.index(photons, emitter_index)) = 1.0;
  return StateVector(space, std::move(v));
}

void StateVector::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::domain_error("cannot normalize a zero or non-finite state");
  amps_ /= std::sqrt(n2);
}

SparseOperator annihilation(const FockSpace& fock) {
  std::vector<Triplet> t;
  for (int n = 1; n <= fock.cutoff(); ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  return SparseOperator(fock.dim(), t);
}

SparseOperator creation(const FockSpace& fock) { return annihilation(fock).adjoint(); }

SparseOperator number(const FockSpace& fock) {
  std::vector<complex> d(static_cast<std::size_t>(fock.dim()));
  for (int n = 0; n < fock.dim(); ++n) d[n] = static_cast<double>(n);
  return SparseOperator::diagonal(d);
}

SparseOperator collective_lowering(const EmitterSpace& emitter) {
  std::vector<Triplet> t;
  if (emitter.kind() == EmitterKind::Collective) {
    constexpr double s = 1.5;
    // index k holds m = k - 3/2
    for (int k = 1; k < 4; ++k) {
      const double m = k - s;
      t.emplace_back(k - 1, k, std::sqrt(s * (s + 1.0) - m * (m - 1.0)));
    }
    return SparseOperator(emitter.dim(), t);
  }
  SparseOperator sum(emitter.dim());
  for (int q = 0; q < EmitterSpace::qubit_count(); ++q) sum += qubit_lowering(emitter, q);
  return sum;
}

SparseOperator qubit_lowering(const EmitterSpace& emitter, int qubit) {
  if (emitter.kind() != EmitterKind::Distinct)
    throw DimensionError("single-qubit operators require the distinct emitter space");
  if (qubit < 0 || qubit >= EmitterSpace::qubit_count()) throw DimensionError("qubit index out of range");
  std::vector<Triplet> t;
  const int bit = 1 << qubit;
  for (int s = 0; s < emitter.dim(); ++s) {
    if (s & bit) t.emplace_back(s & ~bit, s, 1.0);
  }
  return SparseOperator(emitter.dim(), t);
}

SparseOperator sz(const EmitterSpace& emitter) {
  std::vector<complex> d(static_cast<std::size_t>(emitter.dim()));
  if (emitter.kind() == EmitterKind::Collective) {
    for (int k = 0; k < 4; ++k) d[k] = 2.0 * k - 3.0;
  } else {
    for (int s = 0; s < 8; ++s) {
      int excited = 0;
      for (int q = 0; q < 3; ++q) excited += (s >> q) & 1;
      d[s] = 2.0 * excited - 3.0;
    }
  }
  return SparseOperator::diagonal(d);
}

SparseOperator embed(const SparseOperator& op, Factor target, const CompositeSpace& space) {
  const int nf = space.fock().dim();
  const int ne = space.emitter().dim();
  const int expected = target == Factor::Mode ? nf : ne;
  if (op.dim() != expected)
    throw DimensionError("embed: operator dimension " + std::to_string(op.dim()) + " does not match factor dimension " +
                         std::to_string(expected));
  std::vector<Triplet> t;
  t.reserve(op.nonzeros() * static_cast<std::size_t>(target == Factor::Mode ? ne : nf));
  if (target == Factor::Mode) {
    op.for_each_nonzero([&](int r, int c, complex v) {
      for (int e = 0; e < ne; ++e) t.emplace_back(space.index(r, e), space.index(c, e), v);
    });
  } else {
    for (int p = 0; p < nf; ++p) {
      op.for_each_nonzero([&](int r, int c, complex v) { t.emplace_back(space.index(p, r), space.index(p, c), v); });
    }
  }
  return SparseOperator(space.dim(), t);
}

complex expectation(const SparseOperator& op, const StateVector& psi) {
  if (op.dim() != psi.space().dim()) throw DimensionError("expectation: dimension mismatch");
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0)) throw std::domain_error("expectation of a zero-norm state");
  const CVector& v = psi.amplitudes();
  return v.dot(op * v) / n2;
}

double top_level_weight(const StateVector& psi, int levels) {
  const auto& space = psi.space();
  const int first = std::max(0, space.fock().cutoff() - levels + 1);
  const int ne = space.emitter().dim();
  const auto& v = psi.amplitudes();
  double w = 0.0;
  for (int i = first * ne; i < space.dim(); ++i) w += std::norm(v(i));
  return w / psi.norm_squared();
}

int recommended_cutoff(double eta_over_kappa, double max_branch_photons) {
  const double n = std::max(0.0, max_branch_photons);
  const double by_drive = 4.0 * eta_over_kappa * eta_over_kappa;
  const double by_branch = 1.5 * n + 10.0 * std::sqrt(n);
  return std::max(1, static_cast<int>(std::ceil(std::max(by_drive, by_branch))));
}

}  // namespace qcav
