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

#include <string>
#include <vector>

#include "qcav/hilbert.hpp"

namespace qcav {

/// Raised for parameter sets or configurations that violate a model constraint.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical rates of the driven Tavis-Cummings model. All values are in the same frequency
/// unit; kappa (the cavity field decay rate) is conventionally 1.
struct ModelParams {
  double g = 0.0;          ///< emitter-mode coupling
  double eta = 0.0;        ///< drive amplitude
  double delta_cap = 0.0;  ///< drive detuning from mode and emitters
  double kappa = 1.0;      ///< field decay rate (photon-number decay 2 kappa)
  double gamma = 0.0;      ///< single-emitter decay rate, distinct emitters only
  EmitterKind emitters = EmitterKind::Collective;

  /// Dimensionless detuning Delta / kappa.
  double delta() const { return delta_cap / kappa; }

  void validate() const;
};

/// Lindblad channel with the rate folded into the operator, L = sqrt(rate) * bare operator.
/// Contributes L rho L^dag - {L^dag L, rho}/2 to the master equation.
struct JumpChannel {
  SparseOperator op;
  double rate = 0.0;  ///< 2 kappa for the cavity, 2 gamma per emitter
  std::string label;
};

/// -Delta (a^dag a + Sz/2) + i g (a^dag S^- - S^+ a) + i eta (a^dag - a).
SparseOperator hamiltonian(const ModelParams& params, const CompositeSpace& space);

/// Cavity channel first, then one channel per qubit when gamma > 0.
std::vector<JumpChannel> jump_channels(const ModelParams& params, const CompositeSpace& space);

/// H - (i/2) sum_k L_k^dag L_k = H - i kappa a^dag a - i gamma sum_i sigma_i^+ sigma_i^-.
SparseOperator effective_hamiltonian(const ModelParams& params, const CompositeSpace& space);

/// sum_k L_k^dag L_k; <psi|.|psi> is the total instantaneous jump rate.
SparseOperator total_jump_rate_operator(const ModelParams& params, const CompositeSpace& space);

}  // namespace qcav
