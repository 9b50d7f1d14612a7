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

#include "noknow/feedback.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace noknow {

namespace {

constexpr double kAngleTol = 1e-9;

bool is_no_knowledge_angle(double theta) {
    const double offset = std::remainder(theta - std::numbers::pi / 2, 2 * std::numbers::pi);
    return std::abs(offset) <= kAngleTol;
}

}  // namespace

FeedbackLaw no_knowledge_feedback(std::span<const Channel> channels, std::size_t first_channel) {
    std::vector<FeedbackGain> gains;
    gains.reserve(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto &ch = channels[c];
        if (hermiticity_defect(ch.L) > kChannelHermiticityTol) {
            throw NonHermitianChannelError("channel " + std::to_string(first_channel + c) +
                                           ": no-knowledge feedback needs a Hermitian coupling operator");
        }
        if (ch.detection != Detection::Homodyne || !is_no_knowledge_angle(ch.theta)) {
            std::ostringstream msg;
            msg << "channel " << first_channel + c << ": no-knowledge feedback needs homodyne detection at theta = pi/2";
            if (ch.detection == Detection::Homodyne) msg << " (got " << ch.theta << ")";
            throw AngleError(msg.str());
        }
        gains.push_back({first_channel + c, std::sqrt(ch.eta) * hermitian_part(ch.L)});
    }
    return FeedbackLaw::hamiltonian_modulation(std::move(gains));
}

MonitoredModel with_no_knowledge_feedback(MonitoredModel model) {
    std::vector<FeedbackGain> gains;
    for (auto k : model.channels_of(Detection::Homodyne)) {
        const auto law = no_knowledge_feedback(std::span(&model.channels[k], 1), k);
        gains.push_back(law.gains().front());
    }
    model.feedback = FeedbackLaw::hamiltonian_modulation(std::move(gains));
    return model;
}

std::pair<Operator, Operator> hermitian_split(const Operator &l) {
    if (l.rows() != l.cols()) throw DimensionError("hermitian_split needs a square operator");
    const double s = 1.0 / std::sqrt(2.0);
    const Operator ld = l.adjoint();
    Operator plus = hermitian_part(Operator(s * (l + ld)));
    Operator minus = hermitian_part(Operator((kI * s) * (l - ld)));
    return {std::move(plus), std::move(minus)};
}

std::vector<Channel> beamsplitter_network(const Operator &l, double eta) {
    auto [plus, minus] = hermitian_split(l);
    std::vector<Channel> out;
    out.push_back(Channel::homodyne(std::move(plus), std::numbers::pi / 2, eta));
    out.push_back(Channel::homodyne(std::move(minus), std::numbers::pi / 2, eta));
    return out;
}

FeedbackLaw jump_correction(const Operator &u) {
    if (!is_unitary(u)) throw NonUnitaryError("jump_correction needs a unitary operator");
    return FeedbackLaw::jump_unitary(u.adjoint());
}

double no_knowledge_angle(const Operator &l, double tol) {
    if (l.rows() != l.cols()) throw DimensionError("no_knowledge_angle needs a square operator");
    Eigen::Index row = 0, col = 0;
    const double peak = l.cwiseAbs().maxCoeff(&row, &col);
    if (!(peak > 0.0)) throw NoQuadratureError("zero coupling operator has no distinguished quadrature");
    // L^dagger_{rc} = conj(L_{cr}) must equal L_{rc} e^{i phi}.
    const cplx phase = std::conj(l(col, row)) / l(row, col);
    if (std::abs(std::abs(phase) - 1.0) > tol ||
        (l.adjoint() - l * phase).norm() > tol * l.norm()) {
        throw NoQuadratureError("L^dagger is not a phase multiple of L; no quadrature is information-free");
    }
    const double phi = std::arg(phase);
    // e^{2 i theta} = -e^{i phi}; fold into (-pi/2, pi/2].
    double theta = std::remainder((phi + std::numbers::pi) / 2, std::numbers::pi);
    if (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
    return theta;
}

}  // namespace noknow
