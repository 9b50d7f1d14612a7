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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "noknow/random.hpp"
#include "test_util.test.h"

using namespace noknow;
using namespace noknow_test;
using sde::Field;
using sde::Vector;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

Field linear(double a) {
    return [a](const Vector &x) -> Vector { return a * x; };
}

// Mean over paths of |x_N - exact(T)| for dx = mu x dt + sigma x dW (Ito) or
// dx = sigma x o dW (Stratonovich, mu = 0), at step dt on nested Brownian paths.
double strong_error(bool ito, double mu, double sigma, double dt, std::uint32_t factor, int paths) {
    const double t_final = 1.0;
    const auto steps = static_cast<int>(std::lround(t_final / dt));
    double total = 0;
    for (int p = 0; p < paths; ++p) {
        NoiseStream noise = NoiseStream(77, static_cast<std::uint64_t>(p), dt / factor).coarsened(factor);
        Vector x = scalar(1.0);
        double w = 0;
        for (int n = 0; n < steps; ++n) {
            const double dw = noise.wiener_increment();
            w += dw;
            x = ito ? sde::ito_step(x, linear(mu), linear(sigma), dw, dt)
                    : sde::stratonovich_step(x, linear(mu), linear(sigma), dw, dt);
        }
        const double exact = ito ? std::exp((mu - sigma * sigma / 2) * t_final + sigma * w) : std::exp(sigma * w);
        total += std::abs(x(0) - exact);
    }
    return total / paths;
}

}  // namespace

TEST(IntegratorConfig, validation) {
    IntegratorConfig c;
    c.dt = 1e-3;
    c.t_final = 1.0;
    ASSERT_NO_THROW(c.validate());
    ASSERT_EQ(c.steps(), 1000u);
    c.t_final = 1.0005;
    ASSERT_THROW(c.validate(), ConfigError);
    c.t_final = 1e-4;
    ASSERT_THROW(c.validate(), ConfigError);
    c = {};
    c.dt = -1;
    ASSERT_THROW(c.validate(), ConfigError);
    c = {};
    c.record_stride = 0;
    ASSERT_THROW(c.validate(), ConfigError);
}

TEST(Scheme, names_round_trip) {
    for (auto s : {Scheme::ItoEuler, Scheme::StratonovichHeun, Scheme::StratonovichExponential}) {
        ASSERT_EQ(parse_scheme(scheme_name(s)), s);
    }
    ASSERT_THROW(parse_scheme("milstein"), ConfigError);
}

TEST(ItoStep, examples) {
    const Field zero = linear(0.0);
    // No noise: forward Euler.
    ASSERT_DOUBLE_EQ(sde::ito_step(scalar(2.0), linear(-3.0), zero, 0.7, 0.1)(0), 2.0 * (1 - 0.3));
    // No drift, constant b.
    ASSERT_DOUBLE_EQ(sde::ito_step(scalar(2.0), zero, linear(0.5), 0.2, 0.1)(0), 2.0 + 0.5 * 2.0 * 0.2);
    const Field blowup = [](const Vector &x) -> Vector { return x / 0.0; };
    ASSERT_THROW(sde::ito_step(scalar(1.0), blowup, zero, 0.0, 0.1), NumericalError);
}

TEST(ItoStep, geometric_brownian_motion_strong_order_half) {
    const double coarse = strong_error(true, 0.5, 1.0, 1.0 / 64, 4, 2000);
    const double fine = strong_error(true, 0.5, 1.0, 1.0 / 256, 1, 2000);
    // Strong order 1/2: quartering dt halves the error.
    ASSERT_GT(fine / coarse, 0.35);
    ASSERT_LT(fine / coarse, 0.65);
}

TEST(StratonovichStep, examples) {
    const Field zero = linear(0.0);
    // No noise: trapezoidal Heun step of x' = a x.
    const double a = -2.0, dt = 0.1;
    const double predictor = 1.0 + a * dt;
    ASSERT_NEAR(sde::stratonovich_step(scalar(1.0), linear(a), zero, 0.3, dt)(0), 1.0 + dt / 2 * (a + a * predictor),
                1e-15);
    const Field blowup = [](const Vector &x) -> Vector { return x / 0.0; };
    ASSERT_THROW(sde::stratonovich_step(scalar(1.0), zero, blowup, 0.1, 0.1), NumericalError);
}

TEST(StratonovichStep, exponential_path_oracle) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t factor : {16u, 4u, 1u}) {
        const double err = strong_error(false, 0.0, 1.0, factor / 1024.0, factor, 500);
        ASSERT_LT(err, prev);
        prev = err;
    }
    ASSERT_LT(prev, 1e-3);
}

TEST(StratCorrection, examples) {
    const Field zero = linear(0.0);
    ASSERT_EQ(sde::strat_correction(zero, scalar(3.0))(0), 0.0);
    ASSERT_DOUBLE_EQ(sde::strat_correction(linear(0.5), scalar(3.0))(0), -0.5 * 0.25 * 3.0);
}

TEST(StratCorrection, sme_diffusion_gives_innovation_squared) {
    std::mt19937_64 rng(11);
    for (Eigen::Index d : {2, 3}) {
        const Operator z = random_matrix(rng, d);
        const double eta = 0.6;
        const Field b = [&](const Vector &x) -> Vector {
            return sde::flatten(std::sqrt(eta) * innovation_action(z, sde::unflatten(x, d)));
        };
        const Operator rho = random_state(rng, d).matrix();
        const Operator got = sde::unflatten(sde::strat_correction(b, sde::flatten(rho)), d);
        ASSERT_TRUE(near(got, Operator(-(eta / 2) * innovation_squared(z, rho)), 1e-12));
    }
}

TEST(StratCorrection, ito_and_stratonovich_forms_converge_on_a_shared_path) {
    // Ito drift A corresponds to the Stratonovich drift A + strat_correction.
    const double a = -0.3, b = 0.8;
    const Field drift = linear(a);
    const Field diffusion = linear(b);
    const Field strat_drift = [&](const Vector &x) -> Vector { return drift(x) + sde::strat_correction(diffusion, x); };
    std::vector<double> errs;
    for (std::uint32_t factor : {16u, 4u, 1u}) {
        const double dt = factor / 4096.0;
        double total = 0;
        for (int p = 0; p < 200; ++p) {
            NoiseStream noise = NoiseStream(3, static_cast<std::uint64_t>(p), 1.0 / 4096).coarsened(factor);
            Vector xi = scalar(1.0), xs = scalar(1.0);
            for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) {
                const double dw = noise.wiener_increment();
                xi = sde::ito_step(xi, drift, diffusion, dw, dt);
                xs = sde::stratonovich_step(xs, strat_drift, diffusion, dw, dt);
            }
            total += std::abs(xi(0) - xs(0));
        }
        errs.push_back(total / 200);
    }
    ASSERT_LT(errs[1], errs[0]);
    ASSERT_LT(errs[2], errs[1]);
}

TEST(Flatten, round_trip) {
    std::mt19937_64 rng(12);
    const Operator m = random_matrix(rng, 3);
    const Vector v = sde::flatten(m);
    ASSERT_EQ(v.size(), 18);
    ASSERT_EQ(sde::unflatten(v, 3), m);
}
