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

#ifndef NOKNOW_MODELS_HPP
#define NOKNOW_MODELS_HPP

#include <cstddef>
#include <vector>

#include "noknow/core.hpp"
#include "noknow/model.hpp"
#include "noknow/random.hpp"
#include "noknow/sde.hpp"

namespace noknow {

// ---------------------------------------------------------------------------
// Driven qubit with monitored dephasing: H = Omega sigma_x, L = sqrt(gamma) sigma_z.

struct DephasingQubitParams {
    double omega = 1.0;
    double gamma = 1.0;
    double theta = 0.0;
    double eta = 1.0;

    void validate() const;
};

MonitoredModel dephasing_qubit(const DephasingQubitParams &params, bool with_feedback = false);

struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm_squared() const { return x * x + y * y + z * z; }
};

BlochState bloch_of(const QuantumState &rho);

/// Time derivative of the normalized Bloch vector of the dephasing qubit driven by the
/// photocurrent `signal` (Stratonovich; `signal` includes the noise):
///
///   dx/dt = 2 sqrt(eta gamma) (y sin(theta) - x z cos(theta)) I - 2 (1 - eta) gamma x
///   dy/dt = -2 Omega z - 2 sqrt(eta gamma) (x sin(theta) + y z cos(theta)) I - 2 (1 - eta) gamma y
///   dz/dt =  2 Omega y + 2 sqrt(eta gamma) (1 - z^2) cos(theta) I
///
/// The drive enters as 2 Omega because H = Omega sigma_x rotates the Bloch vector at
/// angular frequency 2 Omega. The same function evolves the filter's Bloch vector.
BlochState bloch_rhs(const BlochState &b, const DephasingQubitParams &params, double signal);

struct BlochTrajectory {
    std::vector<double> times;
    std::vector<BlochState> system;
    std::vector<BlochState> filter;
    std::vector<double> signals;
};

/// Integrates the system and filter Bloch vectors on one noise path. The photocurrent
/// of step n is 2 sqrt(eta gamma) cos(theta) z_n + dW_n/dt, held over the step, with dW
/// drawn from `stream.substream(0)` exactly as the homodyne propagator does; each step
/// is `substeps` classical RK4 sub-steps. Samples are stored every step.
BlochTrajectory integrate_bloch(const DephasingQubitParams &params, const BlochState &system0,
                                const BlochState &filter0, const IntegratorConfig &cfg,
                                const NoiseStream &stream, std::size_t substeps = 8);

// ---------------------------------------------------------------------------
// General coupling L, monitored through the L / L^dagger two-reservoir network.

/// H plus the beamsplitter channels (L_+, L_-) at theta = pi/2 and efficiency eta.
/// Unconditionally this is -i[H, rho] + D[L] rho + D[L^dagger] rho.
MonitoredModel general_L_model(const Operator &h, const Operator &l, double eta, bool with_feedback = false);

// ---------------------------------------------------------------------------
// Dissipative preparation of a linear cluster state with local loss.

inline constexpr std::size_t kMaxChainLength = 7;

struct DqcChainParams {
    std::size_t n_qubits = 2;
    double alpha = 1.0;  // quasi-local pumping rate
    double gamma = 0.0;  // local loss rate
    double eta = 1.0;    // detection efficiency of the feedback variant

    void validate() const;
};

/// Q_i = sqrt(alpha) (1 + K_i) sigma_z^i / 2 with K_i the cluster stabilizer, which
/// drops the missing neighbour at either end of the chain.
std::vector<Operator> quasi_local_dissipators(std::size_t n_qubits, double alpha);

/// Unconditional model of the chain (all channels unmonitored, H = 0):
///   without feedback: Q_i and sqrt(gamma) sigma_-^i;
///   with feedback: Q_i, sqrt((1-eta) gamma) sigma_-^i and sqrt((1-eta) gamma) sigma_+^i,
/// i.e. the residual dynamics left by per-site no-knowledge feedback at efficiency eta.
/// Throws ModelError for n < 2 and ResourceError above kMaxChainLength.
MonitoredModel dqc_chain(const DqcChainParams &params, bool with_feedback);

/// Trajectory-level version of the feedback chain: per site, the beamsplitter pair for
/// sqrt(gamma) sigma_- (homodyne at pi/2, efficiency eta) with no-knowledge feedback,
/// followed by the unmonitored Q_i. Meant for small-N cross-checks of `dqc_chain`.
MonitoredModel dqc_chain_monitored(const DqcChainParams &params);

}  // namespace noknow

#endif  // NOKNOW_MODELS_HPP
