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
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qcav/hilbert.hpp"
#include "qcav/model.hpp"
#include "qcav/rng.hpp"

namespace qcav {

/// Thrown when a single integrator step is too coarse: it loses too much norm to resolve the jump
/// threshold, or the step polynomial lets the norm grow.
class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// base_dt * max{|Delta|, g sqrt(cutoff), eta, kappa, gamma} must not exceed this.
inline constexpr double kStepGuard = 0.05;
/// Squared norm allowed in the top Fock levels before a record is flagged.
inline constexpr double kLeakThreshold = 1e-6;
inline constexpr int kLeakLevels = 5;
/// A step whose norm survival falls below this aborts with a step-size diagnostic.
inline constexpr double kMinStepSurvival = 0.5;
/// Jump times are bisected to this fraction of the step.
inline constexpr double kJumpTimeTolerance = 1e-6;

/// Basis state |photons> ⊗ |emitter_index>; the default is the global ground state.
struct InitialState {
  int photons = 0;
  int emitter_index = 0;
};

struct TrajectoryConfig {
  double t_final = 100.0;       ///< units of 1/kappa
  double record_stride = 0.1;   ///< sampling interval
  double base_dt = 1e-3;        ///< upper bound on the integrator step
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;     ///< RNG stream index; ensembles use the trajectory index
  InitialState initial;

  /// Throws ConfigError (step-size guard, stride, initial state).
  void validate(const ModelParams& params, const CompositeSpace& space) const;
  /// Integrator steps between samples; the actual step is record_stride / steps_per_record().
  int steps_per_record() const;
  /// Samples at t = k * record_stride, k = 0 .. sample_count() - 1.
  std::size_t sample_count() const;
};

/// Largest of |Delta|, g sqrt(cutoff), eta, kappa, gamma.
double frequency_scale(const ModelParams& params, const CompositeSpace& space);

struct JumpEvent {
  double t = 0.0;
  int channel = 0;  ///< index into jump_channels()

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct TrajectoryRecord {
  std::vector<double> t;
  std::vector<double> n_photons;  ///< <a^dag a>
  std::vector<complex> field;     ///< <a>
  std::vector<double> leak;       ///< squared norm in the top kLeakLevels Fock levels
  std::vector<JumpEvent> jumps;
  bool truncation_invalid = false;

  std::size_t size() const { return t.size(); }
  double max_leak() const;
};

/// Norm-threshold quantum-jump propagator for a fixed H_eff and channel set.
///
/// Between jumps the unnormalized state follows d psi/dt = -i H_eff psi with the classical
/// fourth-order Runge-Kutta step. Because the generator is constant, that step equals the
/// degree-4 Taylor polynomial sum_k (h G)^k / k! psi with G = -i H_eff, so the Krylov vectors
/// w_k = G^k psi give the state, and its squared norm, at every h inside the step. The state is
/// renormalized after each step while the survival probability is carried separately; a jump
/// fires when survival * |psi(h)|^2 crosses the threshold drawn after the previous jump. The
/// crossing is bisected on that polynomial down to kJumpTimeTolerance * dt.
class JumpStepper {
 public:
  struct State {
    CVector psi;              ///< normalized
    double survival = 1.0;    ///< norm^2 lost since the last jump, as a product
    double threshold = 0.5;   ///< uniform draw in (0, 1)
  };

  JumpStepper(const SparseOperator& h_eff, std::vector<JumpChannel> channels);

  /// Draws the first threshold.
  void begin(State& state, RandomStream& rng) const;

  /// Advances exactly `dt` from time `t`, appending any jumps to `log`. Returns the number of
  /// jumps. Throws StepSizeError when a step is too coarse for the decay rate.
  int step(State& state, double t, double dt, RandomStream& rng, std::vector<JumpEvent>& log);

  /// sum_k <psi|L_k^dag L_k|psi> for a normalized psi.
  double total_rate(const CVector& psi) const;

  const std::vector<JumpChannel>& channels() const { return channels_; }

 private:
  void build_krylov(const CVector& psi);
  void combine(double h, CVector& out) const;
  int choose_channel(const CVector& psi, RandomStream& rng);

  SparseOperator generator_;
  std::vector<JumpChannel> channels_;
  std::array<CVector, 5> w_;
  CVector scratch_;
  CVector trial_;
};

/// Shared, immutable setup for repeated trajectories of one model.
class TrajectorySimulator {
 public:
  TrajectorySimulator(const ModelParams& params, const CompositeSpace& space);

  /// Runs one trajectory with RandomStream(config.seed, config.stream).
  TrajectoryRecord run(const TrajectoryConfig& config) const;

  const ModelParams& params() const { return params_; }
  const CompositeSpace& space() const { return space_; }

 private:
  ModelParams params_;
  CompositeSpace space_;
  SparseOperator h_eff_;
  std::vector<JumpChannel> channels_;
  SparseOperator a_;
  std::vector<double> photons_;
};

TrajectoryRecord run_trajectory(const ModelParams& params, const CompositeSpace& space,
                                const TrajectoryConfig& config);

/// Trajectory k uses stream config.stream + k of config.seed. Results are in index order and
/// independent of `workers`.
std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params, const CompositeSpace& space,
                                           const TrajectoryConfig& config, int n_trajectories, int workers = 1);

}  // namespace qcav
