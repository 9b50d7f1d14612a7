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

// Physics-agnostic stochastic integration for dx = a(x) dt + b(x) dW with a single
// scalar noise. State is a flat real vector; complex matrices are flattened to
// interleaved (re, im) pairs with `flatten`/`unflatten`.

#ifndef NOKNOW_SDE_HPP
#define NOKNOW_SDE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "noknow/core.hpp"

namespace noknow {

enum class Scheme {
    /// Euler-Maruyama on the Ito form.
    ItoEuler,
    /// Heun predictor-corrector on the Stratonovich form.
    StratonovichHeun,
    /// Exact flow of the Stratonovich generator with the signal frozen over the step.
    StratonovichExponential,
};

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct IntegratorConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::StratonovichExponential;
    double t_final = 1.0;
    std::size_t record_stride = 1;

    /// Throws ConfigError on dt <= 0, dt > t_final, stride 0, or a t_final that is not
    /// an integer number of steps (relative slack 1e-9).
    void validate() const;
    std::size_t steps() const;
};

namespace sde {

using Vector = Eigen::VectorXd;
/// Returns the full field value at x, e.g. A(x) x for drift.
using Field = std::function<Vector(const Vector &)>;

/// x + a(x) dt + b(x) dW.
Vector ito_step(const Vector &x, const Field &drift, const Field &diffusion, double dW, double dt);

/// Heun: predictor x~ = x + a(x) dt + b(x) dW, then
/// x + (a(x) + a(x~)) dt/2 + (b(x) + b(x~)) dW/2.
Vector stratonovich_step(const Vector &x, const Field &drift, const Field &diffusion, double dW,
                         double dt);

/// -B(B(x))/2 for a diffusion field linear in x: the drift that turns an Ito drift
/// into the Stratonovich drift of the same process.
Vector strat_correction(const Field &diffusion, const Vector &x);

Vector flatten(const Operator &m);
Operator unflatten(const Vector &v, Eigen::Index dim);

}  // namespace sde
}  // namespace noknow

#endif  // NOKNOW_SDE_HPP
