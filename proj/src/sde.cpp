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

#include "noknow/sde.hpp"

#include <cmath>
#include <sstream>

namespace noknow {

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::ItoEuler: return "ito_euler";
        case Scheme::StratonovichHeun: return "stratonovich_heun";
        case Scheme::StratonovichExponential: return "stratonovich_exponential";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "ito_euler") return Scheme::ItoEuler;
    if (name == "stratonovich_heun") return Scheme::StratonovichHeun;
    if (name == "stratonovich_exponential") return Scheme::StratonovichExponential;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected ito_euler, stratonovich_heun or stratonovich_exponential)");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be positive");
    if (dt > t_final) throw ConfigError("dt must not exceed t_final");
    if (record_stride == 0) throw ConfigError("record_stride must be >= 1");
    const double n = t_final / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * n) {
        std::ostringstream msg;
        msg << "t_final " << t_final << " is not an integer multiple of dt " << dt;
        throw ConfigError(msg.str());
    }
}

std::size_t IntegratorConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

namespace sde {

namespace {

void check_finite(const Vector &x, const char *scheme, double dW, double dt) {
    if (!x.allFinite()) {
        std::ostringstream msg;
        msg << scheme << " step produced a non-finite state (dt=" << dt << ", dW=" << dW << ")";
        throw NumericalError(msg.str());
    }
}

}  // namespace

Vector ito_step(const Vector &x, const Field &drift, const Field &diffusion, double dW, double dt) {
    Vector out = x + drift(x) * dt + diffusion(x) * dW;
    check_finite(out, "ito", dW, dt);
    return out;
}

Vector stratonovich_step(const Vector &x, const Field &drift, const Field &diffusion, double dW,
                         double dt) {
    const Vector a0 = drift(x);
    const Vector b0 = diffusion(x);
    const Vector predictor = x + a0 * dt + b0 * dW;
    Vector out = x + 0.5 * (a0 + drift(predictor)) * dt + 0.5 * (b0 + diffusion(predictor)) * dW;
    check_finite(out, "stratonovich", dW, dt);
    return out;
}

Vector strat_correction(const Field &diffusion, const Vector &x) { return -0.5 * diffusion(diffusion(x)); }

Vector flatten(const Operator &m) {
    Vector out(2 * m.size());
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        out[2 * k] = m.data()[k].real();
        out[2 * k + 1] = m.data()[k].imag();
    }
    return out;
}

Operator unflatten(const Vector &v, Eigen::Index dim) {
    if (v.size() != 2 * dim * dim) throw DimensionError("unflatten: length is not 2 dim^2");
    Operator m(dim, dim);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = cplx(v[2 * k], v[2 * k + 1]);
    return m;
}

}  // namespace sde
}  // namespace noknow
