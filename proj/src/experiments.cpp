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

#include "noknow/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "noknow/feedback.hpp"
#include "noknow/models.hpp"
#include "noknow/steady_state.hpp"
#include "noknow/superoperator.hpp"
#include "noknow/unravelings.hpp"

namespace noknow {

namespace {

const std::vector<Operator> &bloch_observables() {
    static const std::vector<Operator> obs{pauli_matrix(Pauli::X), pauli_matrix(Pauli::Y), pauli_matrix(Pauli::Z)};
    return obs;
}

QuantumState state_of(const std::array<double, 3> &b) { return QuantumState::from_bloch(b[0], b[1], b[2]); }

MonitoredModel qubit_model(const RunConfig &cfg) {
    if (cfg.coupling == Coupling::SigmaZ) {
        return dephasing_qubit({cfg.omega, cfg.gamma, cfg.theta, cfg.eta}, cfg.feedback);
    }
    return general_L_model(cfg.omega * pauli_matrix(Pauli::X), std::sqrt(cfg.gamma) * pauli_matrix(Pauli::Minus),
                           cfg.eta, cfg.feedback);
}

std::size_t homodyne_count(const RunConfig &cfg) { return cfg.coupling == Coupling::SigmaZ ? 1 : 2; }

std::size_t step_of(double time, double dt) { return static_cast<std::size_t>(std::llround(time / dt)); }

// Calls fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure
// in index order.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error &e) {
            rethrow_with_context(e, "trajectory stream_index=" + std::to_string(i));
        }
    }
}

Table trajectory(const RunConfig &cfg) {
    const MonitoredModel model = qubit_model(cfg);
    const auto result = propagate_homodyne(model, state_of(cfg.rho0), cfg.integrator,
                                           NoiseStream(cfg.seed, 0, cfg.integrator.dt), {bloch_observables(), false});
    Table t{experiment_columns(cfg), {}};
    for (const auto &s : result.samples) {
        std::vector<Cell> row{s.time, s.expectations[0].real(), s.expectations[1].real(), s.expectations[2].real()};
        const std::size_t n = step_of(s.time, cfg.integrator.dt);
        for (const auto &series : result.record.signals) {
            row.push_back(n < series.size() ? Cell{series[n]} : Cell{});
        }
        row.insert(row.end(), {s.trace, s.purity, s.log_norm});
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ensemble(const RunConfig &cfg) {
    const auto result = ensemble_average(qubit_model(cfg), state_of(cfg.rho0), cfg.integrator, cfg.n_traj, cfg.seed,
                                         bloch_observables(), cfg.threads);
    Table t{experiment_columns(cfg), {}};
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        std::vector<Cell> row{result.times[i], static_cast<std::int64_t>(result.n_traj)};
        for (std::size_t o = 0; o < 3; ++o) {
            row.emplace_back(result.mean[o][i]);
            row.emplace_back(result.standard_error[o][i]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table filter_divergence(const RunConfig &cfg) {
    const MonitoredModel model = qubit_model(cfg);
    const PropagationOptions opts{bloch_observables(), true};
    const auto system = propagate_homodyne(model, state_of(cfg.rho0), cfg.integrator,
                                           NoiseStream(cfg.seed, 0, cfg.integrator.dt), opts);
    const auto filter = propagate_filter(model, state_of(cfg.pi0), system.record, cfg.integrator, opts);
    Table t{experiment_columns(cfg), {}};
    for (std::size_t i = 0; i < system.samples.size(); ++i) {
        const auto &a = system.samples[i];
        const auto &b = filter.samples[i];
        t.rows.push_back({a.time, frobenius_distance(system.snapshots[i], filter.snapshots[i]),
                          a.expectations[0].real(), a.expectations[1].real(), a.expectations[2].real(),
                          b.expectations[0].real(), b.expectations[1].real(), b.expectations[2].real()});
    }
    return t;
}

Table feedback_cancel(const RunConfig &cfg) {
    const MonitoredModel model = qubit_model(cfg);
    const QuantumState rho0 = state_of(cfg.rho0);
    const auto result = propagate_homodyne(model, rho0, cfg.integrator, NoiseStream(cfg.seed, 0, cfg.integrator.dt),
                                           {bloch_observables(), true});
    // Averaged dynamics with the feedback folded in: the deterministic reference.
    const Eigen::MatrixXcd lmat = model_liouvillian(model).matrix;
    const Eigen::VectorXcd v0 = superop::vec(rho0.matrix());
    Table t{experiment_columns(cfg), {}};
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const auto &s = result.samples[i];
        const Eigen::MatrixXcd prop = (lmat * s.time).exp();
        const QuantumState ref(hermitian_part(superop::unvec(prop * v0, rho0.matrix().rows())));
        t.rows.push_back({s.time, s.expectations[0].real(), s.expectations[1].real(), s.expectations[2].real(),
                          s.purity, frobenius_distance(result.snapshots[i], ref), ref.purity()});
    }
    return t;
}

Table jump(const RunConfig &cfg) {
    const Operator sx = pauli_matrix(Pauli::X);
    MonitoredModel model;
    model.H = cfg.omega * sx;
    model.channels.push_back(Channel::photodetect(sx));
    if (cfg.correction) model.feedback = jump_correction(sx);
    const QuantumState rho0 = state_of(cfg.rho0);
    const double t_final = cfg.integrator.t_final;
    const Operator u = unitary_propagator(model.H, t_final);
    const QuantumState unitary(u * rho0.matrix() * u.adjoint());

    Table t{experiment_columns(cfg), std::vector<std::vector<Cell>>(cfg.n_traj)};
    parallel_for(cfg.n_traj, cfg.threads, [&](std::size_t i) {
        const auto r = propagate_jump(model, rho0, cfg.integrator, NoiseStream(cfg.seed, i, cfg.integrator.dt));
        const QuantumState fin = r.final_state.renormalized();
        const auto bloch = bloch_of(fin);
        t.rows[i] = {static_cast<std::int64_t>(i), static_cast<std::int64_t>(r.record.jump_count()), bloch.x, bloch.y,
                     bloch.z, frobenius_distance(fin, unitary)};
    });
    return t;
}

Table dqc_scan(const RunConfig &cfg) {
    const auto rows = fidelity_scan(cfg.n_values, cfg.gamma_over_alpha, cfg.etas, cfg.alpha, cfg.include_no_feedback,
                                    cfg.threads == 0 ? 1 : cfg.threads);
    Table t{experiment_columns(cfg), {}};
    for (const auto &r : rows) {
        t.rows.push_back({static_cast<std::int64_t>(r.n_qubits), static_cast<std::int64_t>(r.eta.has_value()),
                          r.eta ? Cell{*r.eta} : Cell{}, r.gamma_over_alpha, r.fidelity, r.spectral_gap, r.residual,
                          static_cast<std::int64_t>(r.degenerate)});
    }
    return t;
}

Table convergence(const RunConfig &cfg) {
    const MonitoredModel model = qubit_model(cfg);
    const QuantumState rho0 = state_of(cfg.rho0);
    const double finest = cfg.integrator.dt;
    const std::size_t n_dt = cfg.dt_values.size();
    Table t{experiment_columns(cfg), std::vector<std::vector<Cell>>(n_dt * cfg.n_traj)};
    parallel_for(cfg.n_traj, cfg.threads, [&](std::size_t i) {
        const NoiseStream base(cfg.seed, i, finest);
        for (std::size_t k = 0; k < n_dt; ++k) {
            const double dt = cfg.dt_values[k];
            const auto factor = static_cast<std::uint32_t>(std::llround(dt / finest));
            const NoiseStream stream = factor == 1 ? base : base.coarsened(factor);
            IntegratorConfig ito = cfg.integrator;
            ito.dt = dt;
            ito.record_stride = ito.steps();
            IntegratorConfig strat = ito;
            ito.scheme = Scheme::ItoEuler;
            const auto a = propagate_homodyne(model, rho0, ito, stream);
            const auto b = propagate_homodyne(model, rho0, strat, stream);
            t.rows[k * cfg.n_traj + i] = {dt, static_cast<std::int64_t>(i),
                                          frobenius_distance(a.final_state, b.final_state)};
        }
    });
    return t;
}

void write_cell(std::ostream &os, const Cell &c, bool quote_strings) {
    if (std::holds_alternative<std::int64_t>(c)) {
        os << std::get<std::int64_t>(c);
    } else if (std::holds_alternative<double>(c)) {
        os << format_double(std::get<double>(c));
    } else if (std::holds_alternative<std::string>(c)) {
        const auto &s = std::get<std::string>(c);
        if (quote_strings && s.find_first_of(",\"\r\n") != std::string::npos) {
            os << '"';
            for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
            os << '"';
        } else {
            os << s;
        }
    }
}

}  // namespace

std::vector<std::string> experiment_columns(const RunConfig &cfg) {
    switch (cfg.experiment) {
    case Experiment::Trajectory: {
        std::vector<std::string> cols{"time", "sx", "sy", "sz"};
        for (std::size_t k = 0; k < homodyne_count(cfg); ++k) cols.push_back("signal_" + std::to_string(k));
        cols.insert(cols.end(), {"trace", "purity", "log_norm"});
        return cols;
    }
    case Experiment::Ensemble:
        return {"time", "n_traj", "mean_sx", "se_sx", "mean_sy", "se_sy", "mean_sz", "se_sz"};
    case Experiment::FilterDivergence:
        return {"time", "distance", "system_sx", "system_sy", "system_sz", "filter_sx", "filter_sy", "filter_sz"};
    case Experiment::FeedbackCancel:
        return {"time", "sx", "sy", "sz", "purity", "reference_distance", "reference_purity"};
    case Experiment::Jump:
        return {"stream_index", "jump_count", "final_sx", "final_sy", "final_sz", "unitary_distance"};
    case Experiment::DqcScan:
        return {"n_qubits", "feedback", "eta", "gamma_over_alpha", "fidelity", "spectral_gap", "residual",
                "degenerate"};
    case Experiment::Convergence:
        return {"dt", "stream_index", "ito_strat_distance"};
    }
    return {};
}

Table run_experiment(const RunConfig &cfg) {
    switch (cfg.experiment) {
    case Experiment::Trajectory:
        return trajectory(cfg);
    case Experiment::Ensemble:
        return ensemble(cfg);
    case Experiment::FilterDivergence:
        return filter_divergence(cfg);
    case Experiment::FeedbackCancel:
        return feedback_cancel(cfg);
    case Experiment::Jump:
        return jump(cfg);
    case Experiment::DqcScan:
        return dqc_scan(cfg);
    case Experiment::Convergence:
        return convergence(cfg);
    }
    throw ConfigError("unknown experiment");
}

Metadata make_metadata(const RunConfig &cfg) {
    Metadata m;
    m.experiment = std::string(experiment_name(cfg.experiment));
    m.config = echo_config(cfg);
    m.config_hash = fnv1a64(m.config);
    m.seed = cfg.seed;
    m.dt = cfg.experiment == Experiment::DqcScan ? 0.0 : cfg.integrator.dt;
    return m;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string hash_text(std::uint64_t h) {
    char buf[17];
    const auto res = std::to_chars(buf, buf + sizeof(buf), h, 16);
    std::string s(buf, res.ptr);
    return "fnv1a64:" + std::string(16 - s.size(), '0') + s;
}

}  // namespace

void write_csv(std::ostream &os, const Metadata &meta, const Table &table) {
    os << "# noknow " << kVersion << "\n";
    os << "# experiment: " << meta.experiment << "\n";
    os << "# config_hash: " << hash_text(meta.config_hash) << "\n";
    os << "# seed: " << meta.seed << "\n";
    os << "# dt: " << format_double(meta.dt) << "\n";
    os << "# config: " << meta.config << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ',';
        write_cell(os, Cell{table.columns[c]}, true);
    }
    os << "\r\n";
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            write_cell(os, row[c], true);
        }
        os << "\r\n";
    }
}

void write_json_lines(std::ostream &os, const Metadata &meta, const Table &table) {
    using nlohmann::ordered_json;
    ordered_json head;
    head["meta"]["version"] = std::string(kVersion);
    head["meta"]["experiment"] = meta.experiment;
    head["meta"]["config_hash"] = hash_text(meta.config_hash);
    head["meta"]["seed"] = meta.seed;
    head["meta"]["dt"] = meta.dt;
    head["meta"]["config"] = ordered_json::parse(meta.config);
    head["meta"]["columns"] = table.columns;
    os << head.dump() << "\n";
    for (const auto &row : table.rows) {
        ordered_json line = ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            const Cell &cell = row[c];
            ordered_json &slot = line[table.columns[c]];
            if (std::holds_alternative<std::int64_t>(cell)) {
                slot = std::get<std::int64_t>(cell);
            } else if (std::holds_alternative<double>(cell)) {
                const double x = std::get<double>(cell);
                slot = std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
            } else if (std::holds_alternative<std::string>(cell)) {
                slot = std::get<std::string>(cell);
            } else {
                slot = nullptr;
            }
        }
        os << line.dump() << "\n";
    }
}

}  // namespace noknow
