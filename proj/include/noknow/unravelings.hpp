// Copyright 2026 The noknow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Conditional (trajectory) dynamics of monitored models.
//
// Homodyne trajectories integrate the linear Stratonovich SME
//
//   d/dt rho = L rho + sum_c [ sqrt(eta_c) A[Z_c] rho y_c - (eta_c/2) A^2[Z_c] rho ]
//              - i [ sum_g G_g y_g, rho ]                        (feedback, optional)
//
// with Z_c = L_c e^{i theta_c} and the photocurrent
// y_c = sqrt(eta_c) <Z_c + Z_c^dagger> + xi_c. Over each step the photocurrent is
// held at the value computed from the state at the start of the step,
// y_c = sqrt(eta_c) <...>_n + dW_c / dt, and that value is both fed back within the
// step and stored in the measurement record. A filter driven by the record therefore
// replays the system's arithmetic exactly.

#ifndef NOKNOW_UNRAVELINGS_HPP
#define NOKNOW_UNRAVELINGS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "noknow/core.hpp"
#include "noknow/model.hpp"
#include "noknow/random.hpp"
#include "noknow/sde.hpp"

namespace noknow {

struct MeasurementRecord {
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    /// Model channel index of each recorded series, in noise-substream order.
    std::vector<std::size_t> channels;
    /// Start time of each step; the signal of step n is constant on [t_n, t_n + dt).
    std::vector<double> times;
    /// signals[k][n]: homodyne photocurrent of channels[k] during step n.
    std::vector<std::vector<double>> signals;
    /// jumps[k][n]: 1 when channels[k] clicked during step n (photodetection).
    std::vector<std::vector<std::uint8_t>> jumps;

    std::size_t steps() const { return times.size(); }
    std::size_t jump_count() const;
};

struct Sample {
    double time = 0.0;
    std::vector<cplx> expectations;
    double trace = 0.0;
    double purity = 0.0;
    double log_norm = 0.0;
};

struct PropagationOptions {
    std::vector<Operator> observables;
    bool keep_snapshots = false;
};

struct TrajectoryResult {
    MeasurementRecord record;
    /// Taken at step 0, every record_stride steps, and at t_final.
    std::vector<Sample> samples;
    /// Normalized states at the sample times, when requested.
    std::vector<QuantumState> snapshots;
    QuantumState final_state;
};

/// y = sqrt(eta) <L e^{i theta} + L^dagger e^{-i theta}> + xi.
double homodyne_signal(const QuantumState &rho, const Channel &ch, double xi);

struct SmeRhs {
    /// Lindblad part, Stratonovich correction and (when attached) the feedback
    /// Hamiltonian evaluated at the given signals.
    Operator drift;
    /// sqrt(eta_c) A[Z_c] rho for each homodyne channel, in channel order; the full
    /// update is drift + sum_c diffusion[c] * y_c.
    std::vector<Operator> diffusion;
};

/// `signals` holds one value per homodyne channel, in channel order.
SmeRhs sme_rhs(const MonitoredModel &model, const QuantumState &rho, std::span<const double> signals);

/// Integrates one homodyne trajectory. Homodyne channel k (in channel order) draws its
/// noise from `stream.substream(k)`. Deterministic in (model, rho0, cfg, stream).
TrajectoryResult propagate_homodyne(const MonitoredModel &model, const QuantumState &rho0,
                                    const IntegratorConfig &cfg, const NoiseStream &stream,
                                    const PropagationOptions &options = {});

/// Integrates the filter from pi0, driven by a recorded photocurrent. Throws RecordError
/// when the record does not match the model's channels or the time grid in cfg.
TrajectoryResult propagate_filter(const MonitoredModel &model, const QuantumState &pi0,
                                  const MeasurementRecord &record, const IntegratorConfig &cfg,
                                  const PropagationOptions &options = {});

/// Integrates one photodetection trajectory. Every step applies the no-jump evolution
/// and then, with probability <L^dagger L> dt evaluated at the start of the step, the
/// jump L rho L^dagger (followed by the correction unitary when a jump_unitary feedback
/// law is attached). Throws ConfigError when sum_k ||L_k^dagger L_k|| dt >= 0.1.
TrajectoryResult propagate_jump(const MonitoredModel &model, const QuantumState &omega0,
                                const IntegratorConfig &cfg, const NoiseStream &stream,
                                const PropagationOptions &options = {});

struct EnsembleResult {
    std::size_t n_traj = 0;
    std::vector<double> times;
    /// Mean normalized conditional state at each sample time.
    std::vector<Operator> mean_states;
    /// mean[o][t] and standard_error[o][t] of the real part of observable o.
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> standard_error;
};

/// Runs n_traj trajectories (stream_index 0..n_traj-1 under base_seed) and averages
/// the normalized conditional states. Uses jump unraveling when the model has
/// photodetection channels, homodyne otherwise. The fold runs in stream_index order, so
/// the result does not depend on `threads` (0 = hardware concurrency).
EnsembleResult ensemble_average(const MonitoredModel &model, const QuantumState &rho0,
                                const IntegratorConfig &cfg, std::size_t n_traj, std::uint64_t base_seed,
                                const std::vector<Operator> &observables = {}, std::size_t threads = 0);

}  // namespace noknow

#endif  // NOKNOW_UNRAVELINGS_HPP
