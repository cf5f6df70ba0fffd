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

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qcav/steady.hpp"
#include "oracles.hpp"

using namespace qcav;

namespace {

ModelParams make(double g, double eta, double delta, double gamma = 0.0, bool distinct = false) {
  ModelParams p;
  p.g = g;
  p.eta = eta;
  p.delta_cap = delta;
  p.gamma = gamma;
  p.emitters = distinct ? EmitterKind::Distinct : EmitterKind::Collective;
  return p;
}

CompositeSpace space_for(const ModelParams& p, int cutoff) {
  return CompositeSpace(FockSpace(cutoff), EmitterSpace(p.emitters));
}

oracle::DenseModel dense(const ModelParams& p, int cutoff) {
  return oracle::dense_model(p.g, p.eta, p.delta_cap, p.kappa, p.gamma, p.emitters == EmitterKind::Distinct, cutoff);
}

}  // namespace

TEST_CASE("liouvillian matches the direct master-equation right-hand side") {
  for (bool distinct : {false, true}) {
    const auto p = make(1.2, 0.8, -0.7, distinct ? 0.3 : 0.0, distinct);
    const int cutoff = distinct ? 2 : 4;
    const auto s = space_for(p, cutoff);
    const CMatrix l = liouvillian(p, s);
    const CMatrix ld = liouvillian_dense(p, s);
    CHECK((l - ld).norm() == 0.0);
    const auto m = dense(p, cutoff);
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5; ++k) {
      const CVector a = oracle::random_state(rng, s.dim() * s.dim());
      const CMatrix rho = Eigen::Map<const CMatrix>(a.data(), s.dim(), s.dim());
      const CMatrix ref = oracle::lindblad_rhs(m, rho);
      const CVector got = l * a;
      CHECK((got - Eigen::Map<const CVector>(ref.data(), ref.size())).norm() < 1e-12);
    }
    // vec(I) is a left null vector
    CVector id = CVector::Zero(s.dim() * s.dim());
    for (int j = 0; j < s.dim(); ++j) id(j * s.dim() + j) = 1.0;
    CHECK((l.adjoint() * id).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto big = make(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(liouvillian_dense(big, space_for(big, 12)), DimensionError);
  CHECK_THROWS_AS(liouvillian(big, space_for(big, 128)), DimensionError);
}

TEST_CASE("generic driven liouvillian has a single zero eigenvalue") {
  for (auto [p, cutoff] : {std::pair{make(1.3, 0.9, 0.4), 5}, std::pair{make(0.7, 1.4, -1.1, 0.2, true), 2},
                           std::pair{make(2.0, 0.5, 1.0), 8}}) {
    const CMatrix l = liouvillian_dense(p, space_for(p, cutoff));
    Eigen::ComplexEigenSolver<CMatrix> es(l, false);
    int zeros = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) zeros += std::abs(es.eigenvalues()(k)) < 1e-9;
    CHECK(zeros == 1);
    CHECK(es.eigenvalues().real().maxCoeff() < 1e-9);
  }
}

TEST_CASE("steady state agrees with the dense eigenvector oracle") {
  for (auto [p, cutoff] : {std::pair{make(1.3, 0.9, 0.4), 6}, std::pair{make(0.7, 1.4, -1.1, 0.2, true), 3}}) {
    const auto s = space_for(p, cutoff);
    const auto r = steady_state(p, s);
    CHECK(r.solved);
    CHECK_FALSE(r.degenerate);
    CHECK(r.residual < 1e-8);
    CHECK(r.check.valid());
    const CMatrix ref = oracle::steady_state_by_eigen(dense(p, cutoff));
    CHECK((r.rho - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("driven empty cavity") {
  const auto p = make(0.0, 1.0, 0.0);
  const auto r = steady_state(p, space_for(p, 20));
  CHECK(r.solved);
  CHECK(r.n_photons == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.field - complex(1.0, 0.0)) < 1e-8);
  const auto q = make(0.0, 1.0, 2.0);
  const auto rq = steady_state(q, space_for(q, 20));
  CHECK(std::abs(rq.n_photons - 0.2) < 1e-8);
  // da/dt = eta + i Delta a - kappa a
  CHECK(std::abs(rq.field - 1.0 / complex(1.0, -2.0)) < 1e-8);
}

TEST_CASE("undriven decay: degenerate without emitter decay, unique with it") {
  const auto p = make(0.0, 0.0, 0.5);
  const auto s = space_for(p, 4);
  const auto r = steady_state(p, s);
  CHECK(r.degenerate);
  CHECK(r.solved);
  CHECK(r.check.valid());
  CHECK(std::abs(r.rho(0, 0) - 1.0) < 1e-10);  // reached from the ground state: stays there

  CMatrix excited = CMatrix::Zero(s.dim(), s.dim());
  excited(s.index(2, 3), s.index(2, 3)) = 1.0;
  const auto re = steady_state(p, s, excited);
  CHECK(re.solved);
  CHECK(std::abs(re.rho(s.index(0, 3), s.index(0, 3)) - 1.0) < 1e-10);  // photons decay, emitter stays
  CHECK(re.n_photons < 1e-12);

  const auto q = make(0.0, 0.0, 0.5, 0.1, true);
  const auto sq = space_for(q, 3);
  const auto rq = steady_state(q, sq);
  CHECK_FALSE(rq.degenerate);
  CHECK(std::abs(rq.rho(0, 0) - 1.0) < 1e-10);
}

TEST_CASE("propagation") {
  const auto p = make(1.0, 0.8, 0.3);
  const auto s = space_for(p, 8);
  CMatrix rho0 = CMatrix::Zero(s.dim(), s.dim());
  rho0(0, 0) = 1.0;
  CHECK((propagate(rho0, p, s, 0.0) - rho0).norm() == 0.0);
  const CMatrix r1 = propagate(rho0, p, s, 1.5);
  CHECK(std::abs(r1.trace() - 1.0) < 1e-9);
  CHECK(check_density_matrix(r1).hermiticity_error < 1e-10);
  // small-step RK4 on the direct right-hand side
  const auto m = dense(p, 8);
  CMatrix ref = rho0;
  const int steps = 6000;
  const double h = 1.5 / steps;
  for (int k = 0; k < steps; ++k) {
    const CMatrix k1 = oracle::lindblad_rhs(m, ref);
    const CMatrix k2 = oracle::lindblad_rhs(m, ref + 0.5 * h * k1);
    const CMatrix k3 = oracle::lindblad_rhs(m, ref + 0.5 * h * k2);
    const CMatrix k4 = oracle::lindblad_rhs(m, ref + h * k3);
    ref += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK((r1 - ref).cwiseAbs().maxCoeff() < 1e-9);
  const CMatrix late = propagate(rho0, p, s, 60.0);
  CHECK((late - steady_state(p, s).rho).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(propagate(rho0, p, s, -1.0), std::invalid_argument);
}

TEST_CASE("density matrix checks") {
  CMatrix rho = CMatrix::Zero(3, 3);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;
  CHECK(check_density_matrix(rho).valid());
  rho(2, 2) = -0.01;
  rho(0, 0) = 0.51;
  const auto c = check_density_matrix(rho);
  CHECK(c.min_eigenvalue == doctest::Approx(-0.01));
  CHECK_FALSE(c.valid());
  rho(0, 1) = 0.1;
  CHECK(check_density_matrix(rho).hermiticity_error == doctest::Approx(0.1));
}

TEST_CASE("trace expectation") {
  const CompositeSpace s(FockSpace(3), EmitterSpace(EmitterKind::Collective));
  CMatrix rho = CMatrix::Zero(s.dim(), s.dim());
  rho(s.index(2, 1), s.index(2, 1)) = 0.25;
  rho(s.index(1, 0), s.index(1, 0)) = 0.75;
  CHECK(expectation(embed(number(s.fock()), Factor::Mode, s), rho).real() == doctest::Approx(1.25));
}
