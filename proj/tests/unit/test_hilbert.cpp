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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qcav/hilbert.hpp"
#include "oracles.hpp"

using namespace qcav;

TEST_CASE("fock space bounds") {
  CHECK_THROWS_AS(FockSpace(0), DimensionError);
  CHECK(FockSpace(1).dim() == 2);
  CHECK(FockSpace(37).dim() == 38);
  const CompositeSpace s(FockSpace(7), EmitterSpace(EmitterKind::Distinct));
  CHECK(s.dim() == 8 * 8);
  CHECK(CompositeSpace(FockSpace(7), EmitterSpace(EmitterKind::Collective)).dim() == 32);
  for (int i = 0; i < s.dim(); ++i) CHECK(s.index(s.photons_of(i), s.emitter_of(i)) == i);
}

TEST_CASE("annihilation entries") {
  const auto a1 = annihilation(FockSpace(1));
  CHECK(a1.nonzeros() == 1);
  CHECK(a1.at(0, 1) == complex(1.0, 0.0));
  const auto a4 = annihilation(FockSpace(4));
  CHECK(a4.at(3, 4) == complex(2.0, 0.0));
  CHECK(a4.nonzeros() == 4);
  for (int n = 1; n <= 4; ++n) CHECK(a4.at(n - 1, n).real() == doctest::Approx(std::sqrt(n)).epsilon(1e-15));
  const CMatrix c = creation(FockSpace(4)).to_dense();
  CHECK((c - a4.to_dense().adjoint()).norm() == 0.0);
}

TEST_CASE("number operator on basis states") {
  const FockSpace f(12);
  const auto adag_a = creation(f) * annihilation(f);
  const auto num = number(f);
  for (int n = 0; n <= f.cutoff(); ++n) {
    CVector e = CVector::Zero(f.dim());
    e(n) = 1.0;
    const CVector out = adag_a * e;
    CHECK((out - double(n) * e).norm() < 1e-13);
    CHECK((num * e - double(n) * e).norm() == 0.0);
  }
}

TEST_CASE("commutator [a, a^dag] is the identity except at the top level") {
  const FockSpace f(9);
  const CMatrix a = annihilation(f).to_dense();
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  CMatrix expected = CMatrix::Identity(f.dim(), f.dim());
  expected(f.cutoff(), f.cutoff()) = -double(f.cutoff());
  CHECK((comm - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("collective spin ladder coefficients") {
  const auto sm = collective_lowering(EmitterSpace(EmitterKind::Collective));
  // index = m + 3/2
  CHECK(sm.at(2, 3).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(sm.at(1, 2).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sm.at(0, 1).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(sm.nonzeros() == 3);
}

TEST_CASE("sz spectra") {
  const auto zc = sz(EmitterSpace(EmitterKind::Collective)).to_dense();
  CHECK(zc.trace() == complex(0.0, 0.0));
  std::vector<double> ev;
  for (int i = 0; i < 4; ++i) ev.push_back(zc(i, i).real());
  CHECK(ev == std::vector<double>{-3, -1, 1, 3});
  CHECK((zc - CMatrix(zc.diagonal().asDiagonal())).norm() == 0.0);

  const auto zd = sz(EmitterSpace(EmitterKind::Distinct)).to_dense();
  std::vector<double> evd;
  for (int i = 0; i < 8; ++i) evd.push_back(zd(i, i).real());
  std::sort(evd.begin(), evd.end());
  CHECK(evd == std::vector<double>{-3, -1, -1, -1, 1, 1, 1, 3});
}

TEST_CASE("[Sz/2, S+-] = +-S+-") {
  const EmitterSpace e(EmitterKind::Collective);
  const CMatrix z = sz(e).to_dense() * 0.5;
  const CMatrix sm = collective_lowering(e).to_dense();
  const CMatrix sp = sm.adjoint();
  // one rounding of u/2 * sqrt(3)
  CHECK((z * sp - sp * z - sp).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((z * sm - sm * z + sm).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("distinct lowering is the sum of qubit lowerings") {
  const EmitterSpace e(EmitterKind::Distinct);
  CMatrix sum = CMatrix::Zero(8, 8);
  for (int q = 0; q < 3; ++q) sum += qubit_lowering(e, q).to_dense();
  CHECK((collective_lowering(e).to_dense() - sum).norm() == 0.0);
  CHECK_THROWS_AS(qubit_lowering(EmitterSpace(EmitterKind::Collective), 0), DimensionError);
  CHECK_THROWS_AS(qubit_lowering(e, 3), DimensionError);
  // sigma_0^- lowers bit 0 only
  const CMatrix s0 = qubit_lowering(e, 0).to_dense();
  CHECK(s0(0b110, 0b111) == complex(1.0, 0.0));
  CHECK(s0(0b000, 0b001) == complex(1.0, 0.0));
  CHECK(s0.cwiseAbs().sum() == 4.0);
}

TEST_CASE("symmetric subspace reproduces the collective operators") {
  const CMatrix v = oracle::symmetric_isometry();
  CHECK((v.adjoint() * v - CMatrix::Identity(4, 4)).norm() < 1e-15);
  const EmitterSpace d(EmitterKind::Distinct), c(EmitterKind::Collective);
  const CMatrix smd = collective_lowering(d).to_dense();
  const CMatrix smc = collective_lowering(c).to_dense();
  CHECK((v.adjoint() * smd * v - smc).cwiseAbs().maxCoeff() < 1e-14);
  // invariant subspace: S^- V = V S^-
  CHECK((smd * v - v * smc).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((v.adjoint() * sz(d).to_dense() * v - sz(c).to_dense()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embedding follows the photon-major ordering") {
  const CompositeSpace s(FockSpace(5), EmitterSpace(EmitterKind::Collective));
  CHECK((embed(SparseOperator::identity(6), Factor::Mode, s).to_dense() - CMatrix::Identity(24, 24)).norm() == 0.0);
  CHECK((embed(SparseOperator::identity(4), Factor::Emitter, s).to_dense() - CMatrix::Identity(24, 24)).norm() == 0.0);

  const auto a = annihilation(s.fock());
  const auto sm = collective_lowering(s.emitter());
  const CMatrix prod = (embed(a, Factor::Mode, s) * embed(sm, Factor::Emitter, s)).to_dense();
  CHECK((prod - oracle::kron(a.to_dense(), sm.to_dense())).norm() < 1e-14);

  const auto n = embed(creation(s.fock()), Factor::Mode, s) * embed(a, Factor::Mode, s);
  for (int p = 0; p <= 5; ++p) {
    for (int m = 0; m < 4; ++m) CHECK(expectation(n, StateVector::basis(s, p, m)).real() == doctest::Approx(p));
  }
  CHECK_THROWS_AS(embed(a, Factor::Emitter, s), DimensionError);
  CHECK_THROWS_AS(embed(sm, Factor::Mode, s), DimensionError);
}

TEST_CASE("expectation values") {
  const CompositeSpace s(FockSpace(40), EmitterSpace(EmitterKind::Collective));
  const auto a = embed(annihilation(s.fock()), Factor::Mode, s);
  const auto n = embed(number(s.fock()), Factor::Mode, s);
  CHECK(expectation(n, StateVector::basis(s, 2, 0)).real() == 2.0);

  const CVector vac = oracle::coherent_state(0.0, 40);
  CHECK(std::abs(expectation(a, StateVector(s, oracle::with_emitter(vac, 4, 0)))) == 0.0);

  const CVector coh = oracle::coherent_state(1.5, 40);
  const complex e = expectation(a, StateVector(s, oracle::with_emitter(coh, 4, 2)));
  CHECK(std::abs(e - complex(1.5, 0.0)) < 1e-9);

  // expectation divides by the norm
  CVector twice = oracle::with_emitter(coh, 4, 2) * 3.0;
  CHECK(std::abs(expectation(a, StateVector(s, twice)) - complex(1.5, 0.0)) < 1e-9);
  CHECK_THROWS_AS(expectation(a, StateVector(s, CVector::Zero(s.dim()))), std::domain_error);
}

TEST_CASE("sparse operator storage") {
  std::vector<Triplet> t{{0, 1, 1.0}, {0, 1, 2.0}, {2, 2, complex(0, 1)}};
  const SparseOperator op(3, t);
  CHECK(op.nonzeros() == 2);
  CHECK(op.at(0, 1) == complex(3.0, 0.0));
  std::vector<Triplet> bad{{0, 3, 1.0}};
  CHECK_THROWS_AS(SparseOperator(3, bad), DimensionError);

  std::mt19937_64 rng(5);
  const CMatrix m = oracle::random_sparse_dense(rng, 9, 0.3);
  std::vector<Triplet> tm;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      if (m(i, j) != complex(0.0, 0.0)) tm.emplace_back(i, j, m(i, j));
  const SparseOperator sp(9, tm);
  CHECK((sp.to_dense() - m).norm() == 0.0);
  CHECK((sp.adjoint().to_dense() - m.adjoint()).norm() == 0.0);
  CHECK((sp.transpose().to_dense() - m.transpose()).norm() == 0.0);
  CHECK((sp.conjugate().to_dense() - m.conjugate()).norm() == 0.0);
  CHECK(((sp * sp).to_dense() - m * m).norm() < 1e-12);
  CHECK(((sp + sp * complex(0, 2)).to_dense() - m * complex(1, 2)).norm() < 1e-12);
  const CVector v = oracle::random_state(rng, 9);
  CHECK((sp * v - m * v).norm() < 1e-13);
  int count = 0;
  sp.for_each_nonzero([&](int r, int c, complex x) {
    CHECK(m(r, c) == x);
    ++count;
  });
  CHECK(count == static_cast<int>(sp.nonzeros()));
}

TEST_CASE("state normalization") {
  const CompositeSpace s(FockSpace(6), EmitterSpace(EmitterKind::Distinct));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    StateVector psi(s, oracle::random_state(rng, s.dim()) * 17.3);
    psi.normalize();
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-12);
  }
  StateVector zero(s, CVector::Zero(s.dim()));
  CHECK_THROWS_AS(zero.normalize(), std::domain_error);
  CHECK_THROWS_AS(StateVector(s, CVector::Zero(3)), DimensionError);
}

TEST_CASE("top-level weight and cutoff guidance") {
  const CompositeSpace s(FockSpace(10), EmitterSpace(EmitterKind::Collective));
  CHECK(top_level_weight(StateVector::basis(s, 6, 1)) == 1.0);
  CHECK(top_level_weight(StateVector::basis(s, 5, 1)) == 0.0);
  CHECK(top_level_weight(StateVector::basis(s, 9, 3), 2) == 1.0);
  // max(4 (eta/kappa)^2, 1.5 n + 10 sqrt(n))
  CHECK(recommended_cutoff(18.0, 286.4) == 1296);
  CHECK(recommended_cutoff(1.0, 100.0) == 250);
}
