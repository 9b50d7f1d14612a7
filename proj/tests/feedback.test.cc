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

#include "noknow/unravelings.hpp"
#include "test_util.test.h"

using namespace noknow;
using namespace noknow_test;

namespace {

constexpr double kPi = std::numbers::pi;
const Operator X = pauli_matrix(Pauli::X);
const Operator Y = pauli_matrix(Pauli::Y);
const Operator Z = pauli_matrix(Pauli::Z);
const Operator Minus = pauli_matrix(Pauli::Minus);

}  // namespace

TEST(NoKnowledgeFeedback, gains_scale_with_efficiency) {
    const Channel chans[] = {Channel::homodyne(2.0 * Z, kPi / 2, 0.64), Channel::homodyne(X, -3 * kPi / 2, 1.0)};
    const FeedbackLaw law = no_knowledge_feedback(chans, 3);
    ASSERT_EQ(law.kind(), FeedbackKind::HamiltonianModulation);
    ASSERT_EQ(law.gains().size(), 2u);
    ASSERT_EQ(law.gains()[0].channel, 3u);
    ASSERT_EQ(law.gains()[1].channel, 4u);
    ASSERT_TRUE(near(law.gains()[0].gain, 1.6 * Z, 1e-15));
    ASSERT_TRUE(near(law.gains()[1].gain, X, 1e-15));
}

TEST(NoKnowledgeFeedback, rejects_unsuitable_channels) {
    const Channel non_hermitian[] = {Channel::homodyne(Minus, kPi / 2, 1.0)};
    ASSERT_THROW(no_knowledge_feedback(non_hermitian), NonHermitianChannelError);
    const Channel wrong_angle[] = {Channel::homodyne(Z, 0.0, 1.0)};
    ASSERT_THROW(no_knowledge_feedback(wrong_angle), AngleError);
    const Channel jumps[] = {Channel::photodetect(Z)};
    ASSERT_THROW(no_knowledge_feedback(jumps), AngleError);
    try {
        const Channel chans[] = {Channel::homodyne(Z, kPi / 2, 1.0), Channel::homodyne(Z, 1.0, 1.0)};
        no_knowledge_feedback(chans);
        FAIL();
    } catch (const AngleError &e) {
        ASSERT_NE(std::string(e.what()).find("channel 1"), std::string::npos) << e.what();
    }
}

TEST(NoKnowledgeFeedback, attaches_to_every_homodyne_channel) {
    MonitoredModel m{X, {Channel::unmonitored(Minus), Channel::homodyne(Z, kPi / 2, 0.25)}, std::nullopt};
    const MonitoredModel fb = with_no_knowledge_feedback(m);
    ASSERT_TRUE(fb.feedback.has_value());
    ASSERT_EQ(fb.feedback->gains().size(), 1u);
    ASSERT_EQ(fb.feedback->gains()[0].channel, 1u);
    ASSERT_TRUE(near(fb.feedback->gains()[0].gain, 0.5 * Z, 1e-15));
}

TEST(NoKnowledgeFeedback, law_cancels_the_measurement_for_any_state_and_signal) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator h = random_hermitian(rng, 3);
        const Operator l = random_hermitian(rng, 3);
        const MonitoredModel m = with_no_knowledge_feedback({h, {Channel::homodyne(l, kPi / 2, 1.0)}, std::nullopt});
        const QuantumState rho = random_state(rng, 3);
        const double y[] = {std::normal_distribution<double>(0, 5)(rng)};
        const SmeRhs rhs = sme_rhs(m, rho, y);
        const Operator total = rhs.drift + rhs.diffusion[0] * y[0];
        ASSERT_TRUE(near(total, -kI * (h * rho.matrix() - rho.matrix() * h), 1e-11));
    }
}

TEST(HermitianSplit, lowering_operator) {
    const auto [plus, minus] = hermitian_split(Minus);
    const double s = 1.0 / std::sqrt(2.0);
    ASSERT_TRUE(near(plus, s * X, 1e-15));
    ASSERT_TRUE(near(minus, s * Y, 1e-15));
    const auto [hp, hm] = hermitian_split(Z);
    ASSERT_TRUE(near(hp, std::sqrt(2.0) * Z, 1e-15));
    ASSERT_TRUE(near(hm, Operator::Zero(2, 2), 1e-15));
    ASSERT_THROW(hermitian_split(Operator::Zero(2, 3)), DimensionError);
}

TEST(HermitianSplit, exactly_hermitian_and_same_dissipator) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator l = random_matrix(rng, 4);
        const auto [plus, minus] = hermitian_split(l);
        ASSERT_EQ(plus, Operator(plus.adjoint()));
        ASSERT_EQ(minus, Operator(minus.adjoint()));
        const Operator rho = random_state(rng, 4).matrix();
        const Operator lhs = dissipator(plus, rho) + dissipator(minus, rho);
        const Operator rhs = dissipator(l, rho) + dissipator(Operator(l.adjoint()), rho);
        ASSERT_TRUE(near(lhs, rhs, 1e-11));
    }
}

TEST(BeamsplitterNetwork, outputs_carry_no_information) {
    std::mt19937_64 rng(13);
    const Operator l = random_matrix(rng, 3);
    const auto chans = beamsplitter_network(l, 0.7);
    ASSERT_EQ(chans.size(), 2u);
    for (const auto &ch : chans) {
        ASSERT_EQ(ch.detection, Detection::Homodyne);
        ASSERT_DOUBLE_EQ(ch.theta, kPi / 2);
        ASSERT_DOUBLE_EQ(ch.eta, 0.7);
        for (int trial = 0; trial < 20; ++trial) {
            ASSERT_NEAR(homodyne_signal(random_state(rng, 3), ch, 0.125), 0.125, 1e-13);
        }
    }
}

TEST(JumpCorrection, stores_the_inverse) {
    const Operator u = unitary_propagator(X + 0.3 * Z, 0.7);
    const FeedbackLaw law = jump_correction(u);
    ASSERT_EQ(law.kind(), FeedbackKind::JumpUnitary);
    ASSERT_TRUE(near(law.correction() * u, Operator::Identity(2, 2), 1e-14));
    ASSERT_THROW(jump_correction(2.0 * X), NonUnitaryError);
    ASSERT_THROW(jump_correction(Minus), NonUnitaryError);
}

TEST(NoKnowledgeAngle, examples) {
    ASSERT_NEAR(no_knowledge_angle(Z), kPi / 2, 1e-15);
    ASSERT_NEAR(no_knowledge_angle(cplx{0, 1} * Z), 0.0, 1e-15);
    ASSERT_NEAR(no_knowledge_angle(std::polar(1.0, kPi / 4) * Z), kPi / 4, 1e-15);
    ASSERT_THROW(no_knowledge_angle(Minus), NoQuadratureError);
    ASSERT_THROW(no_knowledge_angle(Operator::Zero(2, 2)), NoQuadratureError);
    ASSERT_THROW(no_knowledge_angle(Operator::Zero(2, 3)), DimensionError);
}

TEST(NoKnowledgeAngle, quadrature_mean_vanishes) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator l = std::polar(1.0, phase(rng)) * random_hermitian(rng, 3);
        const double theta = no_knowledge_angle(l);
        ASSERT_GT(theta, -kPi / 2);
        ASSERT_LE(theta, kPi / 2);
        const Channel ch = Channel::homodyne(l, theta, 1.0);
        for (int s = 0; s < 5; ++s) ASSERT_NEAR(homodyne_signal(random_state(rng, 3), ch, 0.0), 0.0, 1e-12);
    }
    const Operator l = std::polar(1.0, kPi / 4) * Z;
    const Channel ch = Channel::homodyne(l, no_knowledge_angle(l), 1.0);
    for (int s = 0; s < 20; ++s) ASSERT_NEAR(homodyne_signal(random_state(rng, 2), ch, 0.0), 0.0, 1e-14);
}
