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

#include "noknow/models.hpp"

#include <cmath>

#include "noknow/feedback.hpp"

namespace noknow {

void DephasingQubitParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ModelError("dephasing rate gamma must be positive");
    if (!std::isfinite(omega)) throw ModelError("drive omega must be finite");
    if (!std::isfinite(theta)) throw ModelError("homodyne angle must be finite");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ModelError("efficiency eta must lie in [0, 1]");
}

MonitoredModel dephasing_qubit(const DephasingQubitParams &params, bool with_feedback) {
    params.validate();
    MonitoredModel model;
    model.H = params.omega * pauli_matrix(Pauli::X);
    model.channels.push_back(
        Channel::homodyne(std::sqrt(params.gamma) * pauli_matrix(Pauli::Z), params.theta, params.eta));
    if (with_feedback) model = with_no_knowledge_feedback(std::move(model));
    return model;
}

BlochState bloch_of(const QuantumState &rho) {
    if (rho.dim() != 2) throw DimensionError("Bloch coordinates need a qubit state");
    return {expectation(pauli_matrix(Pauli::X), rho).real(), expectation(pauli_matrix(Pauli::Y), rho).real(),
            expectation(pauli_matrix(Pauli::Z), rho).real()};
}

BlochState bloch_rhs(const BlochState &b, const DephasingQubitParams &params, double signal) {
    const double g = 2.0 * std::sqrt(params.eta * params.gamma) * signal;
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    const double dephase = 2.0 * (1.0 - params.eta) * params.gamma;
    const double drive = 2.0 * params.omega;
    return {
        g * (b.y * s - b.x * b.z * c) - dephase * b.x,
        -drive * b.z - g * (b.x * s + b.y * b.z * c) - dephase * b.y,
        drive * b.y + g * (1.0 - b.z * b.z) * c,
    };
}

namespace {

BlochState axpy(const BlochState &b, double h, const BlochState &k) {
    return {b.x + h * k.x, b.y + h * k.y, b.z + h * k.z};
}

BlochState rk4(const BlochState &b, const DephasingQubitParams &p, double signal, double h) {
    const BlochState k1 = bloch_rhs(b, p, signal);
    const BlochState k2 = bloch_rhs(axpy(b, h / 2, k1), p, signal);
    const BlochState k3 = bloch_rhs(axpy(b, h / 2, k2), p, signal);
    const BlochState k4 = bloch_rhs(axpy(b, h, k3), p, signal);
    return {b.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), b.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
            b.z + h / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z)};
}

}  // namespace

BlochTrajectory integrate_bloch(const DephasingQubitParams &params, const BlochState &system0,
                                const BlochState &filter0, const IntegratorConfig &cfg,
                                const NoiseStream &stream, std::size_t substeps) {
    params.validate();
    cfg.validate();
    if (substeps == 0) throw ConfigError("substeps must be >= 1");
    NoiseStream noise = stream.substream(0);
    const std::size_t steps = cfg.steps();
    const double h = cfg.dt / static_cast<double>(substeps);
    const double readout = 2.0 * std::sqrt(params.eta * params.gamma) * std::cos(params.theta);

    BlochTrajectory out;
    out.times.reserve(steps + 1);
    out.system.reserve(steps + 1);
    out.filter.reserve(steps + 1);
    out.signals.reserve(steps);
    BlochState sys = system0;
    BlochState fil = filter0;
    for (std::size_t n = 0; n < steps; ++n) {
        out.times.push_back(static_cast<double>(n) * cfg.dt);
        out.system.push_back(sys);
        out.filter.push_back(fil);
        const double signal = readout * sys.z + noise.wiener_increment() / cfg.dt;
        out.signals.push_back(signal);
        for (std::size_t j = 0; j < substeps; ++j) {
            sys = rk4(sys, params, signal, h);
            fil = rk4(fil, params, signal, h);
        }
    }
    out.times.push_back(static_cast<double>(steps) * cfg.dt);
    out.system.push_back(sys);
    out.filter.push_back(fil);
    return out;
}

MonitoredModel general_L_model(const Operator &h, const Operator &l, double eta, bool with_feedback) {
    if (h.rows() != h.cols() || l.rows() != h.rows() || l.cols() != h.cols()) {
        throw DimensionError("general_L_model: H and L must be square with equal dimension");
    }
    if (!is_hermitian(h)) throw ModelError("general_L_model: Hamiltonian is not Hermitian");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ModelError("efficiency eta must lie in [0, 1]");
    MonitoredModel model;
    model.H = h;
    model.channels = beamsplitter_network(l, eta);
    if (with_feedback) model = with_no_knowledge_feedback(std::move(model));
    model.validate();
    return model;
}

void DqcChainParams::validate() const {
    if (n_qubits < 2) throw ModelError("cluster chain needs at least 2 qubits");
    if (n_qubits > kMaxChainLength) {
        throw ResourceError("cluster chain of " + std::to_string(n_qubits) + " qubits exceeds the limit of " +
                            std::to_string(kMaxChainLength));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ModelError("pumping rate alpha must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ModelError("loss rate gamma must be non-negative");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ModelError("efficiency eta must lie in [0, 1]");
}

std::vector<Operator> quasi_local_dissipators(std::size_t n_qubits, double alpha) {
    const auto dim = Eigen::Index{1} << n_qubits;
    const Operator id = Operator::Identity(dim, dim);
    std::vector<Operator> qs;
    qs.reserve(n_qubits);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        qs.push_back((0.5 * std::sqrt(alpha)) * (id + cluster_stabilizer(i, n_qubits)) * pauli(Pauli::Z, i, n_qubits));
    }
    return qs;
}

MonitoredModel dqc_chain(const DqcChainParams &params, bool with_feedback) {
    params.validate();
    const std::size_t n = params.n_qubits;
    const auto dim = Eigen::Index{1} << n;
    MonitoredModel model;
    model.H = Operator::Zero(dim, dim);
    for (auto &q : quasi_local_dissipators(n, params.alpha)) model.channels.push_back(Channel::unmonitored(std::move(q)));
    const double loss = with_feedback ? (1.0 - params.eta) * params.gamma : params.gamma;
    const double amp = std::sqrt(loss);
    for (std::size_t i = 0; i < n; ++i) {
        model.channels.push_back(Channel::unmonitored(amp * pauli(Pauli::Minus, i, n)));
        if (with_feedback) model.channels.push_back(Channel::unmonitored(amp * pauli(Pauli::Plus, i, n)));
    }
    return model;
}

MonitoredModel dqc_chain_monitored(const DqcChainParams &params) {
    params.validate();
    const std::size_t n = params.n_qubits;
    const auto dim = Eigen::Index{1} << n;
    MonitoredModel model;
    model.H = Operator::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto &ch : beamsplitter_network(std::sqrt(params.gamma) * pauli(Pauli::Minus, i, n), params.eta)) {
            model.channels.push_back(std::move(ch));
        }
    }
    for (auto &q : quasi_local_dissipators(n, params.alpha)) model.channels.push_back(Channel::unmonitored(std::move(q)));
    return with_no_knowledge_feedback(std::move(model));
}

}  // namespace noknow
