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

#include "noknow/unravelings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "noknow/superoperator.hpp"

namespace noknow {

std::size_t MeasurementRecord::jump_count() const {
    std::size_t n = 0;
    for (const auto &series : jumps) n += static_cast<std::size_t>(std::count(series.begin(), series.end(), 1));
    return n;
}

double homodyne_signal(const QuantumState &rho, const Channel &ch, double xi) {
    if (ch.detection != Detection::Homodyne) throw ModelError("homodyne_signal needs a homodyne channel");
    const Operator z = ch.quadrature();
    const Operator x = z + z.adjoint();
    return std::sqrt(ch.eta) * expectation(x, rho).real() + xi;
}

namespace {

struct HomodyneTerm {
    std::size_t channel;
    Operator z;
    Operator quadrature_observable;  // Z + Z^dagger
    double sqrt_eta;
    double eta;
    std::optional<Operator> gain;
};

// The Stratonovich generator of a homodyne model with the photocurrent frozen over a step.
class SmeGenerator {
  public:
    SmeGenerator(const MonitoredModel &model, Scheme scheme) : model_(model), scheme_(scheme) {
        model.validate();
        for (auto k : model.channels_of(Detection::Homodyne)) {
            const auto &ch = model.channels[k];
            HomodyneTerm term{k, ch.quadrature(), {}, std::sqrt(ch.eta), ch.eta, std::nullopt};
            term.quadrature_observable = term.z + term.z.adjoint();
            terms_.push_back(std::move(term));
        }
        if (!model.channels_of(Detection::Photodetect).empty()) {
            throw ModelError("homodyne propagation does not accept photodetection channels");
        }
        if (model.feedback) {
            if (model.feedback->kind() != FeedbackKind::HamiltonianModulation) {
                throw ModelError("homodyne propagation needs a Hamiltonian-modulation feedback law");
            }
            if (scheme == Scheme::ItoEuler) {
                throw ConfigError("signal feedback needs a Stratonovich scheme; ito_euler does not support it");
            }
            for (const auto &g : model.feedback->gains()) {
                for (auto &term : terms_) {
                    if (term.channel != g.channel) continue;
                    term.gain = term.gain ? Operator(*term.gain + g.gain) : g.gain;
                }
            }
        }
        ls_ = model.coupling_operators();
        if (scheme == Scheme::StratonovichExponential) build_superoperators();
    }

    std::size_t n_signals() const { return terms_.size(); }
    const std::vector<HomodyneTerm> &terms() const { return terms_; }

    std::vector<double> signals(const QuantumState &rho, std::span<const double> dW, double dt) const {
        std::vector<double> y(terms_.size());
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto &t = terms_[k];
            y[k] = t.sqrt_eta * expectation(t.quadrature_observable, rho).real() + dW[k] / dt;
        }
        return y;
    }

    Operator drift(const Operator &rho, std::span<const double> y) const {
        Operator h = model_.H;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            if (terms_[k].gain) h += *terms_[k].gain * y[k];
        }
        Operator out = -kI * (h * rho - rho * h);
        for (const auto &l : ls_) out += dissipator(l, rho);
        for (const auto &t : terms_) {
            if (t.eta != 0.0) out -= 0.5 * t.eta * innovation_squared(t.z, rho);
        }
        return out;
    }

    std::vector<Operator> diffusion(const Operator &rho) const {
        std::vector<Operator> out;
        out.reserve(terms_.size());
        for (const auto &t : terms_) out.push_back(t.sqrt_eta * innovation_action(t.z, rho));
        return out;
    }

    Operator stratonovich_field(const Operator &rho, std::span<const double> y) const {
        Operator out = drift(rho, y);
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            if (terms_[k].eta != 0.0) out += (terms_[k].sqrt_eta * y[k]) * innovation_action(terms_[k].z, rho);
        }
        return out;
    }

    Operator ito_field(const Operator &rho, std::span<const double> y) const {
        Operator out = -kI * (model_.H * rho - rho * model_.H);
        for (const auto &l : ls_) out += dissipator(l, rho);
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            if (terms_[k].eta != 0.0) out += (terms_[k].sqrt_eta * y[k]) * innovation_action(terms_[k].z, rho);
        }
        return out;
    }

    Operator step(const Operator &rho, std::span<const double> y, double dt) const {
        switch (scheme_) {
            case Scheme::ItoEuler: return rho + dt * ito_field(rho, y);
            case Scheme::StratonovichHeun: {
                const Operator k1 = stratonovich_field(rho, y);
                const Operator predictor = rho + dt * k1;
                const Operator k2 = stratonovich_field(predictor, y);
                return rho + (0.5 * dt) * (k1 + k2);
            }
            case Scheme::StratonovichExponential: {
                Operator generator = base_;
                for (std::size_t k = 0; k < terms_.size(); ++k) generator += y[k] * per_signal_[k];
                generator *= dt;
                const Operator propagator = generator.exp();
                return superop::unvec(propagator * superop::vec(rho), rho.rows());
            }
        }
        throw ConfigError("unknown scheme");
    }

  private:
    void build_superoperators() {
        base_ = superop::commutator(model_.H);
        for (const auto &l : ls_) base_ += superop::dissipator(l);
        for (const auto &t : terms_) {
            const Operator a = superop::innovation(t.z);
            if (t.eta != 0.0) base_ -= 0.5 * t.eta * (a * a);
            Operator m = t.sqrt_eta * a;
            if (t.gain) m += superop::commutator(*t.gain);
            per_signal_.push_back(std::move(m));
        }
    }

    const MonitoredModel &model_;
    Scheme scheme_;
    std::vector<HomodyneTerm> terms_;
    std::vector<Operator> ls_;
    Operator base_;
    std::vector<Operator> per_signal_;
};

Sample make_sample(const QuantumState &state, double time, const std::vector<Operator> &observables) {
    Sample s;
    s.time = time;
    s.trace = state.trace();
    s.purity = state.purity();
    s.log_norm = state.log_norm();
    s.expectations.reserve(observables.size());
    for (const auto &o : observables) s.expectations.push_back(expectation(o, state));
    return s;
}

bool is_sample_step(std::size_t n, std::size_t steps, std::size_t stride) {
    return n % stride == 0 || n == steps;
}

void record_sample(TrajectoryResult &out, const QuantumState &state, std::size_t n, double dt,
                   const PropagationOptions &options) {
    out.samples.push_back(make_sample(state, static_cast<double>(n) * dt, options.observables));
    if (options.keep_snapshots) out.snapshots.push_back(state.renormalized());
}

std::string step_context(std::size_t n, double dt) {
    std::ostringstream msg;
    msg << "step " << n << " (t=" << static_cast<double>(n) * dt << ")";
    return msg.str();
}

void check_state_dim(const MonitoredModel &model, const QuantumState &state) {
    if (state.dim() != model.dim()) {
        throw DimensionError("initial state dimension " + std::to_string(state.dim()) +
                             " does not match model dimension " + std::to_string(model.dim()));
    }
}

}  // namespace

SmeRhs sme_rhs(const MonitoredModel &model, const QuantumState &rho, std::span<const double> signals) {
    const SmeGenerator gen(model, Scheme::StratonovichHeun);
    check_state_dim(model, rho);
    if (signals.size() != gen.n_signals()) {
        throw ModelError("sme_rhs needs one signal per homodyne channel (" + std::to_string(gen.n_signals()) +
                         "), got " + std::to_string(signals.size()));
    }
    return SmeRhs{gen.drift(rho.matrix(), signals), gen.diffusion(rho.matrix())};
}

TrajectoryResult propagate_homodyne(const MonitoredModel &model, const QuantumState &rho0,
                                    const IntegratorConfig &cfg, const NoiseStream &stream,
                                    const PropagationOptions &options) {
    cfg.validate();
    const SmeGenerator gen(model, cfg.scheme);
    check_state_dim(model, rho0);
    if (std::abs(stream.dt() - cfg.dt) > 1e-12 * cfg.dt) {
        throw ConfigError("noise stream dt does not match integrator dt");
    }
    const std::size_t steps = cfg.steps();
    const std::size_t n_sig = gen.n_signals();

    std::vector<NoiseStream> noise;
    noise.reserve(n_sig);
    for (std::size_t k = 0; k < n_sig; ++k) noise.push_back(stream.substream(static_cast<std::uint32_t>(k)));

    TrajectoryResult out{{}, {}, {}, rho0};
    auto &rec = out.record;
    rec.dt = cfg.dt;
    rec.seed = stream.seed();
    rec.stream_index = stream.stream_index();
    for (const auto &t : gen.terms()) rec.channels.push_back(t.channel);
    rec.times.reserve(steps);
    rec.signals.assign(n_sig, std::vector<double>(steps));

    QuantumState state = rho0;
    std::vector<double> dW(n_sig);
    for (std::size_t n = 0; n < steps; ++n) {
        if (is_sample_step(n, steps, cfg.record_stride)) record_sample(out, state, n, cfg.dt, options);
        for (std::size_t k = 0; k < n_sig; ++k) dW[k] = noise[k].wiener_increment();
        const auto y = gen.signals(state, dW, cfg.dt);
        rec.times.push_back(static_cast<double>(n) * cfg.dt);
        for (std::size_t k = 0; k < n_sig; ++k) rec.signals[k][n] = y[k];
        try {
            state = QuantumState::after_update(gen.step(state.matrix(), y, cfg.dt), state.log_norm());
        } catch (const Error &e) {
            rethrow_with_context(e, step_context(n, cfg.dt));
        }
    }
    record_sample(out, state, steps, cfg.dt, options);
    out.final_state = std::move(state);
    return out;
}

TrajectoryResult propagate_filter(const MonitoredModel &model, const QuantumState &pi0,
                                  const MeasurementRecord &record, const IntegratorConfig &cfg,
                                  const PropagationOptions &options) {
    cfg.validate();
    const SmeGenerator gen(model, cfg.scheme);
    check_state_dim(model, pi0);
    const std::size_t steps = cfg.steps();
    if (std::abs(record.dt - cfg.dt) > 1e-12 * cfg.dt || record.steps() != steps) {
        std::ostringstream msg;
        msg << "record grid (dt=" << record.dt << ", steps=" << record.steps()
            << ") does not match integrator grid (dt=" << cfg.dt << ", steps=" << steps << ")";
        throw RecordError(msg.str());
    }
    const std::size_t n_sig = gen.n_signals();
    if (record.signals.size() != n_sig || record.channels.size() != n_sig) {
        throw RecordError("record holds " + std::to_string(record.signals.size()) + " signal series, model has " +
                          std::to_string(n_sig) + " homodyne channels");
    }
    for (std::size_t k = 0; k < n_sig; ++k) {
        if (record.channels[k] != gen.terms()[k].channel) throw RecordError("record channel order does not match model");
        if (record.signals[k].size() != steps) throw RecordError("record signal series has the wrong length");
    }

    TrajectoryResult out{record, {}, {}, pi0};
    QuantumState state = pi0;
    std::vector<double> y(n_sig);
    for (std::size_t n = 0; n < steps; ++n) {
        if (is_sample_step(n, steps, cfg.record_stride)) record_sample(out, state, n, cfg.dt, options);
        for (std::size_t k = 0; k < n_sig; ++k) y[k] = record.signals[k][n];
        try {
            state = QuantumState::after_update(gen.step(state.matrix(), y, cfg.dt), state.log_norm());
        } catch (const Error &e) {
            rethrow_with_context(e, step_context(n, cfg.dt));
        }
    }
    record_sample(out, state, steps, cfg.dt, options);
    out.final_state = std::move(state);
    return out;
}

TrajectoryResult propagate_jump(const MonitoredModel &model, const QuantumState &omega0,
                                const IntegratorConfig &cfg, const NoiseStream &stream,
                                const PropagationOptions &options) {
    cfg.validate();
    model.validate();
    check_state_dim(model, omega0);
    if (std::abs(stream.dt() - cfg.dt) > 1e-12 * cfg.dt) {
        throw ConfigError("noise stream dt does not match integrator dt");
    }
    const auto detectors = model.channels_of(Detection::Photodetect);
    if (detectors.empty()) throw ModelError("jump propagation needs at least one photodetection channel");
    if (!model.channels_of(Detection::Homodyne).empty()) {
        throw ModelError("jump propagation does not accept homodyne channels");
    }
    std::optional<Operator> correction;
    if (model.feedback) {
        if (model.feedback->kind() != FeedbackKind::JumpUnitary) {
            throw ModelError("jump propagation needs a jump-unitary feedback law");
        }
        correction = model.feedback->correction();
    }

    std::vector<Operator> rates;  // L^dagger L per detector
    double max_rate = 0.0;
    for (auto k : detectors) {
        const auto &l = model.channels[k].L;
        rates.push_back(l.adjoint() * l);
        Eigen::SelfAdjointEigenSolver<Operator> eig(hermitian_part(rates.back()), Eigen::EigenvaluesOnly);
        max_rate += eig.eigenvalues().maxCoeff();
    }
    if (max_rate * cfg.dt >= 0.1) {
        std::ostringstream msg;
        msg << "jump probability bound " << max_rate * cfg.dt << " per step is not below 0.1; reduce dt";
        throw ConfigError(msg.str());
    }

    // No-jump generator: -i[H, .] - (1/2) sum A[L^dag L] + sum_unmonitored D[L].
    Operator generator = superop::commutator(model.H);
    for (const auto &r : rates) generator -= 0.5 * superop::innovation(r);
    for (auto k : model.channels_of(Detection::Unmonitored)) generator += superop::dissipator(model.channels[k].L);
    generator *= cfg.dt;
    const auto d2 = generator.rows();
    Operator propagator;
    switch (cfg.scheme) {
        case Scheme::ItoEuler: propagator = Operator::Identity(d2, d2) + generator; break;
        case Scheme::StratonovichHeun:
            propagator = Operator::Identity(d2, d2) + generator + 0.5 * generator * generator;
            break;
        case Scheme::StratonovichExponential: propagator = generator.exp(); break;
    }

    const std::size_t steps = cfg.steps();
    NoiseStream clicks = stream.substream(0);
    TrajectoryResult out{{}, {}, {}, omega0};
    auto &rec = out.record;
    rec.dt = cfg.dt;
    rec.seed = stream.seed();
    rec.stream_index = stream.stream_index();
    rec.channels = detectors;
    rec.times.reserve(steps);
    rec.jumps.assign(detectors.size(), std::vector<std::uint8_t>(steps, 0));

    QuantumState state = omega0;
    std::vector<double> probabilities(detectors.size());
    const auto dim = static_cast<Eigen::Index>(model.dim());
    for (std::size_t n = 0; n < steps; ++n) {
        if (is_sample_step(n, steps, cfg.record_stride)) record_sample(out, state, n, cfg.dt, options);
        rec.times.push_back(static_cast<double>(n) * cfg.dt);
        for (std::size_t k = 0; k < detectors.size(); ++k) {
            probabilities[k] = expectation(rates[k], state).real() * cfg.dt;
        }
        const double u = clicks.uniform();
        try {
            Operator next = superop::unvec(propagator * superop::vec(state.matrix()), dim);
            double cumulative = 0.0;
            for (std::size_t k = 0; k < detectors.size(); ++k) {
                cumulative += probabilities[k];
                if (u < cumulative) {
                    const auto &l = model.channels[detectors[k]].L;
                    next = l * next * l.adjoint();
                    if (correction) next = *correction * next * correction->adjoint();
                    rec.jumps[k][n] = 1;
                    break;
                }
            }
            state = QuantumState::after_update(std::move(next), state.log_norm());
        } catch (const Error &e) {
            rethrow_with_context(e, step_context(n, cfg.dt));
        }
    }
    record_sample(out, state, steps, cfg.dt, options);
    out.final_state = std::move(state);
    return out;
}

EnsembleResult ensemble_average(const MonitoredModel &model, const QuantumState &rho0,
                                const IntegratorConfig &cfg, std::size_t n_traj, std::uint64_t base_seed,
                                const std::vector<Operator> &observables, std::size_t threads) {
    if (n_traj == 0) throw ConfigError("ensemble needs n_traj >= 1");
    cfg.validate();
    model.validate();
    const bool jumps = !model.channels_of(Detection::Photodetect).empty();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    PropagationOptions options;
    options.keep_snapshots = true;

    const auto run_one = [&](std::size_t index) {
        const NoiseStream stream(base_seed, index, cfg.dt);
        try {
            return jumps ? propagate_jump(model, rho0, cfg, stream, options)
                         : propagate_homodyne(model, rho0, cfg, stream, options);
        } catch (const Error &e) {
            rethrow_with_context(e, "trajectory stream_index=" + std::to_string(index));
        }
    };

    EnsembleResult result;
    result.n_traj = n_traj;
    std::vector<std::vector<double>> sum(observables.size()), sum_sq(observables.size());

    // Trajectories run in parallel chunks; each chunk is folded in index order.
    const std::size_t chunk = std::max<std::size_t>(threads * 8, 1);
    std::vector<std::optional<TrajectoryResult>> slots(chunk);
    for (std::size_t begin = 0; begin < n_traj; begin += chunk) {
        const std::size_t end = std::min(n_traj, begin + chunk);
        std::atomic<std::size_t> next{begin};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const auto worker = [&] {
            for (std::size_t i = next++; i < end; i = next++) {
                try {
                    slots[i - begin] = run_one(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const std::size_t n_workers = std::min(threads, end - begin);
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);

        for (std::size_t i = begin; i < end; ++i) {
            const auto &traj = *slots[i - begin];
            if (result.times.empty()) {
                for (const auto &s : traj.samples) result.times.push_back(s.time);
                result.mean_states.assign(traj.snapshots.size(),
                                          Operator::Zero(rho0.matrix().rows(), rho0.matrix().cols()));
                for (auto &v : sum) v.assign(result.times.size(), 0.0);
                for (auto &v : sum_sq) v.assign(result.times.size(), 0.0);
            }
            for (std::size_t t = 0; t < traj.snapshots.size(); ++t) {
                result.mean_states[t] += traj.snapshots[t].matrix();
                for (std::size_t o = 0; o < observables.size(); ++o) {
                    const double v = expectation(observables[o], traj.snapshots[t]).real();
                    sum[o][t] += v;
                    sum_sq[o][t] += v * v;
                }
            }
            slots[i - begin].reset();
        }
    }

    const auto n = static_cast<double>(n_traj);
    for (auto &m : result.mean_states) m /= n;
    result.mean.assign(observables.size(), std::vector<double>(result.times.size()));
    result.standard_error.assign(observables.size(), std::vector<double>(result.times.size()));
    for (std::size_t o = 0; o < observables.size(); ++o) {
        for (std::size_t t = 0; t < result.times.size(); ++t) {
            const double mean = sum[o][t] / n;
            result.mean[o][t] = mean;
            if (n_traj > 1) {
                const double var = std::max(0.0, (sum_sq[o][t] - n * mean * mean) / (n - 1.0));
                result.standard_error[o][t] = std::sqrt(var / n);
            }
        }
    }
    return result;
}

}  // namespace noknow
