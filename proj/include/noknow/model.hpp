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

#ifndef NOKNOW_MODEL_HPP
#define NOKNOW_MODEL_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "noknow/core.hpp"

namespace noknow {

enum class Detection { Homodyne, Photodetect, Unmonitored };

/// One system-reservoir coupling L (units sqrt(rate)) and how its output is detected.
struct Channel {
    Operator L;
    Detection detection = Detection::Unmonitored;
    double theta = 0.0;  // homodyne local-oscillator phase, radians
    double eta = 0.0;    // homodyne detection efficiency

    static Channel homodyne(Operator L, double theta, double eta);
    static Channel photodetect(Operator L);
    static Channel unmonitored(Operator L);

    /// L e^{i theta}.
    Operator quadrature() const;
};

enum class FeedbackKind { HamiltonianModulation, JumpUnitary };

struct FeedbackGain {
    std::size_t channel;  // index into MonitoredModel::channels
    Operator gain;        // Hermitian; feedback Hamiltonian term is gain * y_channel
};

/// A feedback law that never looks at the state: either a Hamiltonian modulated by the
/// instantaneous homodyne signals, or a fixed unitary applied after every detected jump.
class FeedbackLaw {
  public:
    static FeedbackLaw hamiltonian_modulation(std::vector<FeedbackGain> gains,
                                              double hermiticity_tol = Tolerances{}.hermiticity);
    static FeedbackLaw jump_unitary(Operator correction,
                                    double unitarity_tol = Tolerances{}.hermiticity);

    FeedbackKind kind() const { return kind_; }
    const std::vector<FeedbackGain> &gains() const { return gains_; }
    const Operator &correction() const { return correction_; }

  private:
    FeedbackLaw() = default;

    FeedbackKind kind_ = FeedbackKind::HamiltonianModulation;
    std::vector<FeedbackGain> gains_;
    Operator correction_;
};

struct MonitoredModel {
    Operator H;
    std::vector<Channel> channels;
    std::optional<FeedbackLaw> feedback;

    std::size_t dim() const { return static_cast<std::size_t>(H.rows()); }

    /// Throws DimensionError on inconsistent sizes and ModelError on a non-Hermitian
    /// Hamiltonian, efficiencies outside [0, 1] or feedback that does not fit the
    /// channels.
    void validate(const Tolerances &tol = {}) const;

    /// Indices of channels with the given detection kind, in channel order.
    std::vector<std::size_t> channels_of(Detection kind) const;

    /// Every coupling operator; their dissipators form the unconditional dynamics
    /// (feedback ignored).
    std::vector<Operator> coupling_operators() const;
};

}  // namespace noknow

#endif  // NOKNOW_MODEL_HPP
