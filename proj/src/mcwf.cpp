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

#include "qcav/mcwf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace qcav {

void TrajectoryConfig::validate(const ModelParams& params, const CompositeSpace& space) const {
  params.validate();
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be positive");
  if (!(base_dt > 0.0)) throw ConfigError("base_dt must be positive");
  if (!(record_stride >= base_dt)) throw ConfigError("record_stride must be >= base_dt");
  const double scale = frequency_scale(params, space);
  if (base_dt * scale > kStepGuard * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "base_dt " << base_dt << " violates the step-size guard: dt * " << scale << " = " << base_dt * scale
        << " > " << kStepGuard << "; use base_dt <= " << kStepGuard / scale;
    throw ConfigError(msg.str());
  }
  if (initial.photons < 0 || initial.photons > space.fock().cutoff() || initial.emitter_index < 0 ||
      initial.emitter_index >= space.emitter().dim())
    throw ConfigError("initial state outside the truncated space");
}

int TrajectoryConfig::steps_per_record() const {
  return std::max(1, static_cast<int>(std::ceil(record_stride / base_dt - 1e-9)));
}

std::size_t TrajectoryConfig::sample_count() const {
  return static_cast<std::size_t>(std::floor(t_final / record_stride + 1e-9)) + 1;
}

double frequency_scale(const ModelParams& params, const CompositeSpace& space) {
  return std::max({std::abs(params.delta_cap), params.g * std::sqrt(static_cast<double>(space.fock().cutoff())),
                   params.eta, params.kappa, params.gamma});
}

double TrajectoryRecord::max_leak() const {
  return leak.empty() ? 0.0 : *std::max_element(leak.begin(), leak.end());
}

JumpStepper::JumpStepper(const SparseOperator& h_eff, std::vector<JumpChannel> channels)
    : generator_(h_eff * complex(0.0, -1.0)), channels_(std::move(channels)) {
  for (const auto& ch : channels_) {
    if (ch.op.dim() != h_eff.dim()) throw DimensionError("jump channel dimension does not match H_eff");
  }
}

void JumpStepper::begin(State& state, RandomStream& rng) const {
  state.survival = 1.0;
  state.threshold = rng.uniform_open();
}

void JumpStepper::build_krylov(const CVector& psi) {
  w_[0] = psi;
  for (std::size_t k = 1; k < w_.size(); ++k) generator_.apply(w_[k - 1], w_[k]);
}

void JumpStepper::combine(double h, CVector& out) const {
  // Horner form of sum_k h^k/k! w_k.
  out = w_[4] * (h / 4.0) + w_[3];
  out = out * (h / 3.0) + w_[2];
  out = out * (h / 2.0) + w_[1];
  out = out * h + w_[0];
}

double JumpStepper::total_rate(const CVector& psi) const {
  double rate = 0.0;
  CVector tmp;
  for (const auto& ch : channels_) {
    ch.op.apply(psi, tmp);
    rate += tmp.squaredNorm();
  }
  return rate;
}

int JumpStepper::choose_channel(const CVector& psi, RandomStream& rng) {
  std::vector<double> rates(channels_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    channels_[k].op.apply(psi, scratch_);
    rates[k] = scratch_.squaredNorm();
    total += rates[k];
  }
  const double pick = rng.uniform_open() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    acc += rates[k];
    if (pick < acc) return static_cast<int>(k);
  }
  // Rounding at the top end: last channel with a non-zero rate.
  for (std::size_t k = rates.size(); k-- > 0;) {
    if (rates[k] > 0.0) return static_cast<int>(k);
  }
  throw StepSizeError("jump requested on a state with zero jump rate");
}

int JumpStepper::step(State& state, double t, double dt, RandomStream& rng, std::vector<JumpEvent>& log) {
  int jumps = 0;
  double elapsed = 0.0;
  while (true) {
    const double h = dt - elapsed;
    if (h <= dt * 1e-14) return jumps;
    build_krylov(state.psi);
    combine(h, trial_);
    const double nu = trial_.squaredNorm();
    // Under H_eff the norm can only shrink; growth means the polynomial step has left its
    // region of validity.
    if (!std::isfinite(nu) || nu < kMinStepSurvival || nu > 1.0 + 1e-10) {
      std::ostringstream msg;
      msg << "norm survival " << nu << " over a step of " << h << " at t = " << t + elapsed
          << "; the jump threshold cannot be resolved, reduce base_dt";
      throw StepSizeError(msg.str());
    }
    if (state.survival * nu > state.threshold) {
      state.survival *= nu;
      state.psi = trial_ / std::sqrt(nu);
      return jumps;
    }

    // Crossing inside (0, h]: bisect survival * |psi(tau)|^2 - threshold.
    std::array<std::array<complex, 5>, 5> gram;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i; j < 5; ++j) {
        gram[i][j] = w_[i].dot(w_[j]);
        gram[j][i] = std::conj(gram[i][j]);
      }
    }
    auto norm_at = [&](double tau) {
      std::array<double, 5> c{1.0, tau, tau * tau / 2.0, tau * tau * tau / 6.0, tau * tau * tau * tau / 24.0};
      double s = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) s += c[i] * c[j] * gram[i][j].real();
      }
      return s;
    };
    double lo = 0.0;
    double hi = h;
    const double tol = kJumpTimeTolerance * dt;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (state.survival * norm_at(mid) > state.threshold) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double tau = 0.5 * (lo + hi);
    combine(tau, trial_);
    trial_ /= std::sqrt(trial_.squaredNorm());

    const int channel = choose_channel(trial_, rng);
    channels_[static_cast<std::size_t>(channel)].op.apply(trial_, state.psi);
    state.psi /= std::sqrt(state.psi.squaredNorm());
    elapsed += tau;
    log.push_back({t + elapsed, channel});
    ++jumps;
    begin(state, rng);
  }
}

TrajectorySimulator::TrajectorySimulator(const ModelParams& params, const CompositeSpace& space)
    : params_(params),
      space_(space),
      h_eff_(effective_hamiltonian(params, space)),
      channels_(jump_channels(params, space)),
      a_(embed(annihilation(space.fock()), Factor::Mode, space)),
      photons_(static_cast<std::size_t>(space.dim())) {
  for (int i = 0; i < space.dim(); ++i) photons_[static_cast<std::size_t>(i)] = space.photons_of(i);
}

TrajectoryRecord TrajectorySimulator::run(const TrajectoryConfig& config) const {
  config.validate(params_, space_);
  JumpStepper stepper(h_eff_, channels_);
  RandomStream rng(config.seed, config.stream);

  JumpStepper::State state;
  state.psi = StateVector::basis(space_, config.initial.photons, config.initial.emitter_index).amplitudes();
  stepper.begin(state, rng);

  const std::size_t samples = config.sample_count();
  const int substeps = config.steps_per_record();
  const double dt = config.record_stride / substeps;
  const int first_leak_index = std::max(0, space_.fock().cutoff() - kLeakLevels + 1) * space_.emitter().dim();

  TrajectoryRecord rec;
  rec.t.reserve(samples);
  rec.n_photons.reserve(samples);
  rec.field.reserve(samples);
  rec.leak.reserve(samples);
  CVector a_psi;

  auto record = [&](double t) {
    const CVector& psi = state.psi;
    double n = 0.0;
    double leak = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      const double p = std::norm(psi(i));
      n += photons_[static_cast<std::size_t>(i)] * p;
      if (i >= first_leak_index) leak += p;
    }
    a_.apply(psi, a_psi);
    rec.t.push_back(t);
    rec.n_photons.push_back(n);
    rec.field.push_back(psi.dot(a_psi));
    rec.leak.push_back(leak);
    if (leak >= kLeakThreshold) rec.truncation_invalid = true;
  };

  record(0.0);
  for (std::size_t k = 1; k < samples; ++k) {
    const double t0 = static_cast<double>(k - 1) * config.record_stride;
    for (int s = 0; s < substeps; ++s) stepper.step(state, t0 + s * dt, dt, rng, rec.jumps);
    record(static_cast<double>(k) * config.record_stride);
  }
  return rec;
}

TrajectoryRecord run_trajectory(const ModelParams& params, const CompositeSpace& space,
                                const TrajectoryConfig& config) {
  config.validate(params, space);
  return TrajectorySimulator(params, space).run(config);
}

std::vector<TrajectoryRecord> run_ensemble(const ModelParams& params, const CompositeSpace& space,
                                           const TrajectoryConfig& config, int n_trajectories, int workers) {
  if (n_trajectories < 1) throw ConfigError("ensemble needs at least one trajectory");
  config.validate(params, space);
  const TrajectorySimulator sim(params, space);
  const auto n = static_cast<std::size_t>(n_trajectories);
  std::vector<TrajectoryRecord> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      TrajectoryConfig c = config;
      c.stream = config.stream + k;
      try {
        out[k] = sim.run(c);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  const int pool = std::clamp(workers, 1, n_trajectories);
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace qcav
