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

#include "qcav/model.hpp"

#include <cmath>

namespace qcav {

void ModelParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("g must be non-negative");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be non-negative");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be non-negative");
  if (!std::isfinite(delta_cap)) throw ConfigError("detuning must be finite");
  if (gamma > 0.0 && emitters != EmitterKind::Distinct)
    throw ConfigError("single-emitter decay (gamma > 0) requires distinct emitters");
}

namespace {

void check_space(const ModelParams& params, const CompositeSpace& space) {
  params.validate();
  if (space.emitter().kind() != params.emitters)
    throw DimensionError("space emitter kind does not match the model parameters");
}

}  // namespace

SparseOperator hamiltonian(const ModelParams& params, const CompositeSpace& space) {
  check_space(params, space);
  const int nf = space.fock().dim();
  const int ne = space.emitter().dim();

  const SparseOperator sz_e = sz(space.emitter());
  std::vector<complex> diag(static_cast<std::size_t>(space.dim()));
  for (int p = 0; p < nf; ++p) {
    for (int e = 0; e < ne; ++e) {
      diag[space.index(p, e)] = -params.delta_cap * (p + 0.5 * sz_e.at(e, e).real());
    }
  }

  const SparseOperator a = embed(annihilation(space.fock()), Factor::Mode, space);
  const SparseOperator a_dag = a.adjoint();
  const SparseOperator s_minus = embed(collective_lowering(space.emitter()), Factor::Emitter, space);

  // K + K^dag with K = i g a^dag S^- + i eta a^dag, so Hermiticity is exact entry by entry.
  const complex i(0.0, 1.0);
  SparseOperator k = (i * params.g) * (a_dag * s_minus) + (i * params.eta) * a_dag;
  return SparseOperator::diagonal(diag) + k + k.adjoint();
}

std::vector<JumpChannel> jump_channels(const ModelParams& params, const CompositeSpace& space) {
  check_space(params, space);
  std::vector<JumpChannel> out;
  const double cavity_rate = 2.0 * params.kappa;
  out.push_back({embed(annihilation(space.fock()), Factor::Mode, space) * complex(std::sqrt(cavity_rate), 0.0),
                 cavity_rate, "cavity"});
  if (params.gamma > 0.0) {
    const double rate = 2.0 * params.gamma;
    for (int q = 0; q < EmitterSpace::qubit_count(); ++q) {
      out.push_back({embed(qubit_lowering(space.emitter(), q), Factor::Emitter, space) *
                         complex(std::sqrt(rate), 0.0),
                     rate, "qubit" + std::to_string(q)});
    }
  }
  return out;
}

SparseOperator total_jump_rate_operator(const ModelParams& params, const CompositeSpace& space) {
  SparseOperator sum(space.dim());
  for (const auto& ch : jump_channels(params, space)) sum += ch.op.adjoint() * ch.op;
  return sum;
}

SparseOperator effective_hamiltonian(const ModelParams& params, const CompositeSpace& space) {
  return hamiltonian(params, space) - complex(0.0, 0.5) * total_jump_rate_operator(params, space);
}

}  // namespace qcav
