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

// No-knowledge feedback: monitoring a channel on a quadrature whose photocurrent carries
// no information about the system, and feeding that pure-noise current straight back
// into the Hamiltonian (homodyne) or undoing each jump with a fixed unitary
// (photodetection). None of these laws depend on the system state.

#ifndef NOKNOW_FEEDBACK_HPP
#define NOKNOW_FEEDBACK_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "noknow/core.hpp"
#include "noknow/model.hpp"

namespace noknow {

/// A channel qualifies for no-knowledge feedback when ||L - L^dagger|| / ||L|| is at
/// most this value.
inline constexpr double kChannelHermiticityTol = 1e-8;

/// Gains G_c = sqrt(eta_c) L_c, so the feedback Hamiltonian is sum_c G_c y_c.
/// Channel c of `channels` is recorded as model channel `first_channel + c`.
/// Throws NonHermitianChannelError when some L_c is not Hermitian and AngleError when
/// some channel is not homodyne at theta = pi/2.
FeedbackLaw no_knowledge_feedback(std::span<const Channel> channels, std::size_t first_channel = 0);

/// Copy of `model` with no-knowledge feedback on every homodyne channel.
MonitoredModel with_no_knowledge_feedback(MonitoredModel model);

/// L_+ = (L + L^dagger)/sqrt(2), L_- = i(L - L^dagger)/sqrt(2), both exactly Hermitian.
std::pair<Operator, Operator> hermitian_split(const Operator &l);

/// The two Hermitian channels (L_+, L_-), each homodyne at pi/2 with efficiency eta,
/// obtained by mixing the outputs of the L and L^dagger reservoirs on a 50:50
/// beamsplitter with a pi/2 relative phase. Unmonitored, they generate D[L] + D[L^dagger].
std::vector<Channel> beamsplitter_network(const Operator &l, double eta);

/// Jump-unitary law that applies U^dagger after every detection. Throws NonUnitaryError.
FeedbackLaw jump_correction(const Operator &u);

/// If L^dagger = L e^{i phi}, the homodyne angle in (-pi/2, pi/2] for which
/// <L e^{i theta} + L^dagger e^{-i theta}> vanishes for every state; theta + pi is the
/// same quadrature with the photocurrent sign flipped, so a Hermitian L gives pi/2.
/// Throws NoQuadratureError when no such phase exists.
double no_knowledge_angle(const Operator &l, double tol = kChannelHermiticityTol);

}  // namespace noknow

#endif  // NOKNOW_FEEDBACK_HPP
