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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Pass a criterion number (or several) to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "noknow/feedback.hpp"
#include "noknow/models.hpp"
#include "noknow/steady_state.hpp"
#include "noknow/unravelings.hpp"

using namespace noknow;

namespace {

constexpr double kPi = std::numbers::pi;
const double kS = 1.0 / std::sqrt(2.0);

QuantumState rho0() { return QuantumState::from_bloch(kS, kS, 0); }
QuantumState pi0() { return QuantumState::from_bloch(kS, -kS, 0); }

IntegratorConfig config(double dt, double t_final, Scheme scheme = Scheme::StratonovichExponential,
                        std::size_t stride = 1) {
    IntegratorConfig c;
    c.dt = dt;
    c.t_final = t_final;
    c.scheme = scheme;
    c.record_stride = stride;
    return c;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

/// exp(L t) rho for a Liouvillian in column-stacked form.
QuantumState propagate_exact(const LiouvillianMatrix &l, const QuantumState &rho, double t) {
    const Eigen::MatrixXcd prop = (l.matrix * t).exp();
    const Eigen::VectorXcd v = prop * Eigen::Map<const Eigen::VectorXcd>(rho.matrix().data(), rho.matrix().size());
    return QuantumState(Eigen::Map<const Operator>(v.data(), l.system_dim, l.system_dim));
}

QuantumState unitary_state(const Operator &h, const QuantumState &rho, double t) {
    const Operator u = unitary_propagator(h, t);
    return QuantumState(u * rho.matrix() * u.adjoint());
}

// 1. Feedback at theta = pi/2, eta = 1 leaves only the unitary evolution.
Outcome perfect_cancellation() {
    const auto model = dephasing_qubit({1.0, 1.0, kPi / 2, 1.0}, true);
    double worst[2] = {0, 0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const NoiseStream fine(seed, 0, 5e-4);
        for (int k = 0; k < 2; ++k) {
            const double dt = k == 0 ? 1e-3 : 5e-4;
            const auto r = propagate_homodyne(model, rho0(), config(dt, 5.0, Scheme::StratonovichHeun),
                                              k == 0 ? fine.coarsened(2) : fine, {{}, true});
            for (std::size_t i = 0; i < r.samples.size(); ++i) {
                const double d = frobenius_distance(r.snapshots[i], unitary_state(model.H, rho0(), r.samples[i].time));
                worst[k] = std::max(worst[k], d);
            }
        }
    }
    const double ratio = worst[0] / worst[1];
    return {worst[0] <= 1e-3 && ratio >= 1.8,
            fmt("max distance %.3g at dt=1e-3 (limit 1e-3), refinement ratio %.3g (min 1.8)", worst[0], ratio)};
}

// 2. At eta = 0.5 the residual dephasing is (1 - eta) gamma D[sigma_z].
Outcome efficiency_scaling() {
    const double eta = 0.5;
    const auto model = dephasing_qubit({1.0, 1.0, kPi / 2, eta}, true);
    const std::vector<Operator> residual{std::sqrt(1 - eta) * pauli_matrix(Pauli::Z)};
    const auto lmat = vectorize(model.H, residual);
    const Operator sx = pauli_matrix(Pauli::X);
    double worst = 0, worst_rate_err = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = propagate_homodyne(model, rho0(), config(1e-3, 5.0, Scheme::StratonovichHeun, 10),
                                          NoiseStream(seed, 0, 1e-3), {{sx}, true});
        double sxx = 0, sxy = 0, sx1 = 0, sy1 = 0, n = 0;
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
            const double t = r.samples[i].time;
            worst = std::max(worst, frobenius_distance(r.snapshots[i], propagate_exact(lmat, rho0(), t)));
            if (t <= 3.0 + 1e-9) {
                const double y = std::log(r.samples[i].expectations[0].real());
                sxx += t * t, sxy += t * y, sx1 += t, sy1 += y, n += 1;
            }
        }
        const double rate = -(n * sxy - sx1 * sy1) / (n * sxx - sx1 * sx1);
        worst_rate_err = std::max(worst_rate_err, std::abs(rate / (2 * (1 - eta)) - 1));
    }
    return {worst <= 1e-3 && worst_rate_err <= 0.02,
            fmt("max distance to residual master equation %.3g (limit 1e-3), worst relative rate error %.3g "
                "(limit 0.02)",
                worst, worst_rate_err)};
}

// 3. Without information the system-filter distance is conserved.
Outcome frobenius_constancy() {
    // Below this the drift is rounding noise and cannot halve.
    constexpr double kRoundoffFloor = 1e-10;
    const auto model = dephasing_qubit({1.0, 1.0, kPi / 2, 1.0});
    double drift[2] = {0, 0};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const NoiseStream fine(seed, 0, 5e-4);
        for (int k = 0; k < 2; ++k) {
            const double dt = k == 0 ? 1e-3 : 5e-4;
            const auto c = config(dt, 5.0);
            const auto sys = propagate_homodyne(model, rho0(), c, k == 0 ? fine.coarsened(2) : fine, {{}, true});
            const auto fil = propagate_filter(model, pi0(), sys.record, c, {{}, true});
            const double d0 = frobenius_distance(sys.snapshots[0], fil.snapshots[0]);
            for (std::size_t i = 0; i < sys.snapshots.size(); ++i) {
                drift[k] = std::max(drift[k], std::abs(frobenius_distance(sys.snapshots[i], fil.snapshots[i]) - d0));
            }
        }
    }
    const bool halves = drift[1] <= 0.5 * drift[0] || (drift[0] <= kRoundoffFloor && drift[1] <= kRoundoffFloor);
    return {drift[0] <= 5e-3 && halves,
            fmt("max drift %.3g at dt=1e-3 (limit 5e-3), %.3g at dt=5e-4 (must halve or both stay below %.0e)",
                drift[0], drift[1], kRoundoffFloor)};
}

// 4. On an informative quadrature the filter forgets its wrong prior.
Outcome filter_convergence() {
    const auto model = dephasing_qubit({1.0, 1.0, 4 * kPi / 5, 1.0});
    const auto c = config(1e-3, 5.0, Scheme::StratonovichExponential, 5000);
    std::vector<double> d;
    double d0 = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto sys = propagate_homodyne(model, rho0(), c, NoiseStream(seed, 0, 1e-3));
        const auto fil = propagate_filter(model, pi0(), sys.record, c);
        d0 = frobenius_distance(rho0(), pi0());
        d.push_back(frobenius_distance(sys.final_state, fil.final_state));
    }
    const double m = median(d);
    return {m <= 0.15 * d0, fmt("median final distance %.3g (limit %.3g)", m, 0.15 * d0)};
}

// 5. The ensemble of sigma_z-quadrature trajectories averages to the master equation.
Outcome unraveling_average() {
    const auto model = dephasing_qubit({1.0, 1.0, 0.0, 1.0});
    const auto e = ensemble_average(model, rho0(), config(1e-3, 3.0, Scheme::StratonovichExponential, 1000), 2000, 0,
                                    {pauli_matrix(Pauli::X)});
    bool ok = true;
    double worst = 0;
    for (std::size_t i = 1; i < e.times.size(); ++i) {
        const double z = std::abs(e.mean[0][i] - std::exp(-2 * e.times[i]) * kS) / e.standard_error[0][i];
        worst = std::max(worst, z);
        ok = ok && z <= 3.0;
    }
    return {ok && e.times.size() == 4, fmt("worst deviation %.3g standard errors at t in {1,2,3} (limit 3)", worst)};
}

// 6. A non-Hermitian coupling measured through the beamsplitter network.
Outcome general_l_eradication() {
    const Operator h = pauli_matrix(Pauli::X);
    const Operator l = pauli_matrix(Pauli::Minus);
    const auto full = general_L_model(h, l, 1.0, true);
    const auto half = general_L_model(h, l, 0.5, true);
    const std::vector<Operator> residual{std::sqrt(0.5) * l, std::sqrt(0.5) * Operator(l.adjoint())};
    const auto lmat = vectorize(h, residual);
    double purity_err = 0, worst = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = propagate_homodyne(full, rho0(), config(1e-3, 5.0, Scheme::StratonovichHeun),
                                          NoiseStream(seed, 0, 1e-3));
        for (const auto &s : a.samples) purity_err = std::max(purity_err, std::abs(s.purity - 1.0));
        const auto b = propagate_homodyne(half, rho0(), config(1e-3, 5.0, Scheme::StratonovichHeun, 10),
                                          NoiseStream(seed, 1, 1e-3), {{}, true});
        for (std::size_t i = 0; i < b.samples.size(); ++i) {
            worst = std::max(worst, frobenius_distance(b.snapshots[i], propagate_exact(lmat, rho0(), b.samples[i].time)));
        }
    }
    return {purity_err <= 1e-6 && worst <= 1e-3,
            fmt("eta=1 max purity deviation %.3g (limit 1e-6), eta=0.5 max distance %.3g (limit 1e-3)", purity_err,
                worst)};
}

// 7. Unitary jump operator: unit jump rate, and the correction undoes every jump.
Outcome photodetection() {
    const Operator h = pauli_matrix(Pauli::X);
    const Operator u = pauli_matrix(Pauli::X);
    const MonitoredModel m{h, {Channel::photodetect(u)}, jump_correction(u)};
    const QuantumState start = QuantumState::from_bloch(0, 0, 1);
    const auto c = config(1e-3, 5.0, Scheme::StratonovichExponential, 5000);
    const QuantumState exact = unitary_state(h, start, 5.0);
    const int n = 10000;
    double sum = 0, sum2 = 0, worst = 0;
    for (int i = 0; i < n; ++i) {
        const auto r = propagate_jump(m, start, c, NoiseStream(0, static_cast<std::uint64_t>(i), 1e-3));
        const double k = static_cast<double>(r.record.jump_count());
        sum += k, sum2 += k * k;
        worst = std::max(worst, frobenius_distance(r.final_state, exact));
    }
    const double mean = sum / n;
    const double var = (sum2 - n * mean * mean) / (n - 1);
    return {std::abs(mean / 5 - 1) <= 0.05 && std::abs(var / 5 - 1) <= 0.05 && worst <= 1e-12,
            fmt("jump count mean %.5g, variance %.5g (each within 5%% of 5), max corrected distance %.3g "
                "(limit 1e-12)",
                mean, var, worst)};
}

// 8. Cluster-state fidelity with and without feedback.
Outcome dqc_fidelity() {
    const std::size_t ns[] = {2, 3, 4, 5, 6};
    const double etas[] = {0.9, 0.99, 1.0};
    bool ok = true;
    double worst_one = 0;
    for (std::size_t n : ns) {
        const auto r = steady_state(model_liouvillian(dqc_chain({n, 1.0, 0.0, 1.0}, false)));
        worst_one = std::max(worst_one, std::abs(overlap_fidelity(r.rho_ss, cluster_state(n)) - 1));
    }
    const auto rows = fidelity_scan(ns, 10.0, etas);
    std::string values;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto *g = &rows[4 * i];
        ok = ok && g[0].fidelity < g[1].fidelity && g[1].fidelity < g[2].fidelity && g[2].fidelity < g[3].fidelity;
        worst_one = std::max(worst_one, std::abs(g[3].fidelity - 1));
        if (i > 0) ok = ok && g[0].fidelity < rows[4 * (i - 1)].fidelity;
        values += fmt("%sN=%zu: %.4f/%.4f/%.4f/%.10f", i ? "; " : "", ns[i], g[0].fidelity, g[1].fidelity,
                      g[2].fidelity, g[3].fidelity);
    }
    ok = ok && worst_one <= 1e-8;
    return {ok, fmt("max |F-1| for gamma=0 and eta=1 is %.3g (limit 1e-8); F(no fb/0.9/0.99/1) ", worst_one) + values};
}

// 9. Ito (Euler-Maruyama) and Stratonovich (Heun) forms on a shared path.
Outcome ito_stratonovich() {
    const auto model = dephasing_qubit({1.0, 1.0, 4 * kPi / 5, 1.0});
    const double dts[] = {1e-2, 5e-3, 2.5e-3};
    double med[3];
    for (int k = 0; k < 3; ++k) {
        std::vector<double> d;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const NoiseStream base(seed, 0, 2.5e-3);
            const auto factor = static_cast<std::uint32_t>(std::llround(dts[k] / 2.5e-3));
            const NoiseStream stream = factor == 1 ? base : base.coarsened(factor);
            const auto a = propagate_homodyne(model, rho0(), config(dts[k], 1.0, Scheme::ItoEuler, 1000), stream);
            const auto b =
                propagate_homodyne(model, rho0(), config(dts[k], 1.0, Scheme::StratonovichHeun, 1000), stream);
            d.push_back(frobenius_distance(a.final_state, b.final_state));
        }
        med[k] = median(d);
    }
    const double c = med[0] / dts[0];
    const bool ok = med[1] <= 1.5 * c * dts[1] && med[2] <= 1.5 * c * dts[2] && med[2] < med[1] && med[1] < med[0];
    return {ok, fmt("median distance %.3g, %.3g, %.3g at dt = 1e-2, 5e-3, 2.5e-3; C = %.3g; finer steps must stay "
                    "below 1.5 C dt = %.3g, %.3g",
                    med[0], med[1], med[2], c, 1.5 * c * dts[1], 1.5 * c * dts[2])};
}

// 10. Density-matrix propagation against the closed-form Bloch equations.
Outcome bloch_oracle() {
    double worst = 0;
    for (double theta : {kPi / 2, 4 * kPi / 5}) {
        const DephasingQubitParams p{1.0, 1.0, theta, 1.0};
        const auto model = dephasing_qubit(p);
        const auto c = config(1e-3, 5.0);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const NoiseStream stream(seed, 0, 1e-3);
            const auto tr = integrate_bloch(p, bloch_of(rho0()), bloch_of(pi0()), c, stream);
            const auto sys = propagate_homodyne(model, rho0(), c, stream, {{}, true});
            const auto fil = propagate_filter(model, pi0(), sys.record, c, {{}, true});
            for (std::size_t i = 0; i < tr.system.size(); ++i) {
                const BlochState a = bloch_of(sys.snapshots[i]);
                const BlochState b = bloch_of(fil.snapshots[i]);
                worst = std::max({worst, std::abs(a.x - tr.system[i].x), std::abs(a.y - tr.system[i].y),
                                  std::abs(a.z - tr.system[i].z), std::abs(b.x - tr.filter[i].x),
                                  std::abs(b.y - tr.filter[i].y), std::abs(b.z - tr.filter[i].z)});
            }
        }
    }
    return {worst <= 1e-4, fmt("max coordinate error %.3g over both angles and 50 seeds (limit 1e-4)", worst)};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria{
        {1, "perfect cancellation", perfect_cancellation},
        {2, "efficiency scaling", efficiency_scaling},
        {3, "frobenius constancy", frobenius_constancy},
        {4, "filter convergence", filter_convergence},
        {5, "unraveling average", unraveling_average},
        {6, "general-L eradication", general_l_eradication},
        {7, "photodetection", photodetection},
        {8, "cluster-state fidelity", dqc_fidelity},
        {9, "ito/stratonovich agreement", ito_stratonovich},
        {10, "bloch oracle", bloch_oracle},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %-28s %s  %s  [%.1f s]\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d criteria failed\n", failed);
    return failed ? 1 : 0;
}
