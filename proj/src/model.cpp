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

#include "noknow/model.hpp"

#include <cmath>
#include <sstream>

namespace noknow {

Channel Channel::homodyne(Operator L, double theta, double eta) {
    return Channel{std::move(L), Detection::Homodyne, theta, eta};
}

Channel Channel::photodetect(Operator L) { return Channel{std::move(L), Detection::Photodetect, 0.0, 1.0}; }

Channel Channel::unmonitored(Operator L) { return Channel{std::move(L), Detection::Unmonitored, 0.0, 0.0}; }

Operator Channel::quadrature() const { return L * std::exp(kI * theta); }

FeedbackLaw FeedbackLaw::hamiltonian_modulation(std::vector<FeedbackGain> gains, double hermiticity_tol) {
    for (const auto &g : gains) {
        if (!is_hermitian(g.gain, hermiticity_tol)) {
            throw ModelError("feedback gain for channel " + std::to_string(g.channel) + " is not Hermitian");
        }
    }
    FeedbackLaw law;
    law.kind_ = FeedbackKind::HamiltonianModulation;
    law.gains_ = std::move(gains);
    return law;
}

FeedbackLaw FeedbackLaw::jump_unitary(Operator correction, double unitarity_tol) {
    if (!is_unitary(correction, unitarity_tol)) throw NonUnitaryError("jump correction is not unitary");
    FeedbackLaw law;
    law.kind_ = FeedbackKind::JumpUnitary;
    law.correction_ = std::move(correction);
    return law;
}

void MonitoredModel::validate(const Tolerances &tol) const {
    if (H.rows() == 0 || H.rows() != H.cols()) throw DimensionError("Hamiltonian must be square and non-empty");
    if (!is_hermitian(H, tol.hermiticity)) throw ModelError("Hamiltonian is not Hermitian");
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const auto &ch = channels[k];
        if (ch.L.rows() != H.rows() || ch.L.cols() != H.cols()) {
            std::ostringstream msg;
            msg << "channel " << k << " has dimension " << ch.L.rows() << "x" << ch.L.cols()
                << ", model dimension is " << H.rows();
            throw DimensionError(msg.str());
        }
        if (ch.detection == Detection::Homodyne) {
            if (!(ch.eta >= 0.0 && ch.eta <= 1.0)) {
                throw ModelError("channel " + std::to_string(k) + ": efficiency must lie in [0, 1]");
            }
            if (!std::isfinite(ch.theta)) throw ModelError("channel " + std::to_string(k) + ": non-finite angle");
        }
    }
    if (!feedback) return;
    if (feedback->kind() == FeedbackKind::HamiltonianModulation) {
        for (const auto &g : feedback->gains()) {
            if (g.channel >= channels.size() || channels[g.channel].detection != Detection::Homodyne) {
                throw ModelError("feedback gain refers to channel " + std::to_string(g.channel) +
                                 ", which is not a homodyne channel");
            }
            if (g.gain.rows() != H.rows() || g.gain.cols() != H.cols()) {
                throw DimensionError("feedback gain dimension does not match the model");
            }
        }
    } else if (feedback->correction().rows() != H.rows() || feedback->correction().cols() != H.cols()) {
        throw DimensionError("jump correction dimension does not match the model");
    }
}

std::vector<std::size_t> MonitoredModel::channels_of(Detection kind) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        if (channels[k].detection == kind) out.push_back(k);
    }
    return out;
}

std::vector<Operator> MonitoredModel::coupling_operators() const {
    std::vector<Operator> out;
    out.reserve(channels.size());
    for (const auto &ch : channels) out.push_back(ch.L);
    return out;
}

}  // namespace noknow
