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

#include "noknow/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noknow/errors.hpp"
#include "noknow/feedback.hpp"
#include "noknow/models.hpp"

namespace noknow {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperiments{{
    {Experiment::Trajectory, "trajectory"},
    {Experiment::Ensemble, "ensemble"},
    {Experiment::FilterDivergence, "filter-divergence"},
    {Experiment::FeedbackCancel, "feedback-cancel"},
    {Experiment::Jump, "jump"},
    {Experiment::DqcScan, "dqc-scan"},
    {Experiment::Convergence, "convergence"},
}};

const std::set<std::string> &allowed_keys(Experiment e) {
    static const std::map<Experiment, std::set<std::string>> table = [] {
        const std::set<std::string> common{"experiment", "seed", "threads", "format", "output_dir"};
        const std::set<std::string> qubit{"omega", "gamma", "theta", "eta", "coupling", "rho0",
                                          "dt", "t_final", "scheme", "record_stride"};
        auto join = [](std::initializer_list<std::set<std::string>> parts) {
            std::set<std::string> out;
            for (const auto &p : parts) out.insert(p.begin(), p.end());
            return out;
        };
        std::map<Experiment, std::set<std::string>> t;
        t[Experiment::Trajectory] = join({common, qubit, {"feedback"}});
        t[Experiment::Ensemble] = join({common, qubit, {"feedback", "n_traj"}});
        t[Experiment::FilterDivergence] = join({common, qubit, {"feedback", "pi0"}});
        t[Experiment::FeedbackCancel] = join({common, qubit});
        t[Experiment::Convergence] = join({common, {"omega", "gamma", "theta", "eta", "coupling", "rho0", "t_final",
                                                    "scheme", "dt_values", "n_traj"}});
        t[Experiment::Jump] = join({common, {"omega", "dt", "t_final", "n_traj", "correction", "rho0", "record_stride"}});
        t[Experiment::DqcScan] = join({common, {"n_values", "alpha", "gamma_over_alpha", "etas", "include_no_feedback"}});
        return t;
    }();
    return table.at(e);
}

// Pulls typed values out of the document and records every problem instead of
// stopping at the first.
class Reader {
  public:
    explicit Reader(const json &doc) : doc_(doc) {}

    std::vector<std::string> &violations() { return violations_; }
    void fail(std::string msg) { violations_.push_back(std::move(msg)); }

    bool has(const std::string &key) const { return doc_.contains(key); }

    double number(const std::string &key, double fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (!v.is_number()) {
            fail(key + ": expected a number, got " + v.dump());
            return fallback;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(key + ": must be finite");
        return x;
    }

    std::uint64_t count(const std::string &key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        fail(key + ": expected a non-negative integer, got " + v.dump());
        return fallback;
    }

    bool boolean(const std::string &key, bool fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (!v.is_boolean()) {
            fail(key + ": expected true or false, got " + v.dump());
            return fallback;
        }
        return v.get<bool>();
    }

    std::string string(const std::string &key, std::string fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (!v.is_string()) {
            fail(key + ": expected a string, got " + v.dump());
            return fallback;
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string &key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (!v.is_array() || v.empty() || !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number(); })) {
            fail(key + ": expected a non-empty array of numbers, got " + v.dump());
            return fallback;
        }
        std::vector<double> out;
        for (const auto &x : v) out.push_back(x.get<double>());
        return out;
    }

    std::vector<std::size_t> counts(const std::string &key, std::vector<std::size_t> fallback) {
        if (!has(key)) return fallback;
        const json &v = doc_.at(key);
        if (!v.is_array() || v.empty() ||
            !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number_unsigned(); })) {
            fail(key + ": expected a non-empty array of non-negative integers, got " + v.dump());
            return fallback;
        }
        std::vector<std::size_t> out;
        for (const auto &x : v) out.push_back(x.get<std::size_t>());
        return out;
    }

    std::array<double, 3> bloch(const std::string &key, std::array<double, 3> fallback) {
        if (!has(key)) return fallback;
        const auto v = numbers(key, {});
        if (v.size() != 3) {
            if (!v.empty()) fail(key + ": expected a Bloch vector [x, y, z]");
            return fallback;
        }
        const std::array<double, 3> b{v[0], v[1], v[2]};
        if (b[0] * b[0] + b[1] * b[1] + b[2] * b[2] > 1.0 + 1e-12) fail(key + ": Bloch vector is longer than 1");
        return b;
    }

  private:
    const json &doc_;
    std::vector<std::string> violations_;
};

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void check_range(Reader &r, const std::string &key, double x, double lo, double hi) {
    if (!(x >= lo && x <= hi)) {
        r.fail(key + " = " + format_number(x) + " is outside [" + format_number(lo) + ", " + format_number(hi) + "]");
    }
}

void check_positive(Reader &r, const std::string &key, double x) {
    if (!(x > 0.0)) r.fail(key + " = " + format_number(x) + " must be positive");
}

double default_theta(Experiment e) {
    switch (e) {
    case Experiment::Ensemble:
        return 0.0;
    case Experiment::FilterDivergence:
    case Experiment::FeedbackCancel:
        return std::numbers::pi / 2;
    default:
        return 4 * std::numbers::pi / 5;
    }
}

void check_model(Reader &r, const RunConfig &cfg) {
    if (cfg.feedback && cfg.integrator.scheme == Scheme::ItoEuler) {
        r.fail("feedback needs a Stratonovich scheme; ito_euler cannot carry the within-step feedback");
    }
    try {
        if (cfg.coupling == Coupling::SigmaZ) {
            dephasing_qubit({cfg.omega, cfg.gamma, cfg.theta, cfg.eta}, cfg.feedback);
        } else {
            if (cfg.feedback && std::abs(std::remainder(cfg.theta - std::numbers::pi / 2, 2 * std::numbers::pi)) > 1e-9) {
                r.fail("coupling sigma_minus is monitored at theta = pi/2; theta must be left at its default");
            }
            general_L_model(cfg.omega * pauli_matrix(Pauli::X), std::sqrt(cfg.gamma) * pauli_matrix(Pauli::Minus), cfg.eta,
                            cfg.feedback);
        }
    } catch (const Error &e) {
        r.fail(std::string(e.what()));
    }
}

void check_integrator(Reader &r, const IntegratorConfig &ic) {
    try {
        ic.validate();
    } catch (const Error &e) {
        r.fail(std::string(e.what()));
    }
}

}  // namespace

std::string_view experiment_name(Experiment e) {
    for (const auto &[k, name] : kExperiments) {
        if (k == e) return name;
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (const auto &[k, n] : kExperiments) {
        if (n == name) return k;
    }
    return std::nullopt;
}

RunConfig parse_config(std::string_view text, std::optional<Experiment> experiment) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("config line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top level must be a JSON object");

    Reader r(doc);
    RunConfig cfg;
    if (doc.contains("experiment")) {
        const std::string name = r.string("experiment", "");
        const auto parsed = parse_experiment(name);
        if (!parsed) {
            r.fail("experiment: unknown experiment \"" + name + "\"");
        } else if (experiment && *experiment != *parsed) {
            r.fail("experiment: config says \"" + name + "\" but the command line asks for \"" +
                   std::string(experiment_name(*experiment)) + "\"");
        } else {
            cfg.experiment = *parsed;
        }
    } else if (experiment) {
        cfg.experiment = *experiment;
    } else {
        r.fail("experiment: missing (give it in the config or on the command line)");
    }
    if (experiment) cfg.experiment = *experiment;
    const Experiment e = cfg.experiment;

    const auto &allowed = allowed_keys(e);
    for (const auto &item : doc.items()) {
        if (!allowed.contains(item.key())) {
            r.fail(item.key() + ": unknown key for experiment " + std::string(experiment_name(e)));
        }
    }

    cfg.seed = r.count("seed", 0);
    const std::uint64_t threads = r.count("threads", 0);
    if (threads > 4096) r.fail("threads = " + std::to_string(threads) + " is outside [0, 4096]");
    cfg.threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, 4096));
    const std::string format = r.string("format", "csv");
    if (format == "csv") {
        cfg.format = OutputFormat::Csv;
    } else if (format == "json-lines") {
        cfg.format = OutputFormat::JsonLines;
    } else {
        r.fail("format: expected \"csv\" or \"json-lines\", got \"" + format + "\"");
    }
    cfg.output_dir = r.string("output_dir", "");

    const double s = 1.0 / std::sqrt(2.0);
    switch (e) {
    case Experiment::DqcScan: {
        cfg.n_values = r.counts("n_values", {2, 3, 4, 5, 6});
        for (auto n : cfg.n_values) {
            if (n < 2) r.fail("n_values: chain length " + std::to_string(n) + " is below the minimum of 2");
        }
        cfg.alpha = r.number("alpha", 1.0);
        check_positive(r, "alpha", cfg.alpha);
        cfg.gamma_over_alpha = r.number("gamma_over_alpha", 10.0);
        if (!(cfg.gamma_over_alpha >= 0.0)) r.fail("gamma_over_alpha must be non-negative");
        cfg.etas = r.numbers("etas", {0.9, 0.99, 1.0});
        for (double eta : cfg.etas) check_range(r, "etas", eta, 0.0, 1.0);
        cfg.include_no_feedback = r.boolean("include_no_feedback", true);
        break;
    }
    case Experiment::Jump: {
        cfg.omega = r.number("omega", 1.0);
        cfg.integrator.dt = r.number("dt", 1e-3);
        cfg.integrator.t_final = r.number("t_final", 5.0);
        cfg.integrator.record_stride = r.count("record_stride", 1);
        cfg.n_traj = r.count("n_traj", 10000);
        if (cfg.n_traj == 0) r.fail("n_traj must be at least 1");
        cfg.correction = r.boolean("correction", true);
        cfg.rho0 = r.bloch("rho0", {0.0, 0.0, 1.0});
        check_integrator(r, cfg.integrator);
        break;
    }
    default: {
        cfg.omega = r.number("omega", 1.0);
        cfg.gamma = r.number("gamma", 1.0);
        check_positive(r, "gamma", cfg.gamma);
        const double gamma = cfg.gamma > 0.0 ? cfg.gamma : 1.0;
        cfg.theta = r.number("theta", default_theta(e));
        cfg.eta = r.number("eta", 1.0);
        check_range(r, "eta", cfg.eta, 0.0, 1.0);
        const std::string coupling = r.string("coupling", "sigma_z");
        if (coupling == "sigma_z") {
            cfg.coupling = Coupling::SigmaZ;
        } else if (coupling == "sigma_minus") {
            cfg.coupling = Coupling::SigmaMinus;
            if (!r.has("theta")) cfg.theta = std::numbers::pi / 2;
        } else {
            r.fail("coupling: expected \"sigma_z\" or \"sigma_minus\", got \"" + coupling + "\"");
        }
        cfg.rho0 = r.bloch("rho0", {s, s, 0.0});
        cfg.pi0 = r.bloch("pi0", {s, -s, 0.0});
        cfg.feedback = e == Experiment::FeedbackCancel || r.boolean("feedback", false);
        const Scheme fallback_scheme =
            e == Experiment::Convergence ? Scheme::StratonovichHeun : Scheme::StratonovichExponential;
        try {
            cfg.integrator.scheme = r.has("scheme") ? parse_scheme(r.string("scheme", "")) : fallback_scheme;
        } catch (const Error &err) {
            r.fail("scheme: " + std::string(err.what()));
        }
        if (e == Experiment::Convergence) {
            if (cfg.integrator.scheme == Scheme::ItoEuler) r.fail("scheme: convergence compares ito_euler against a Stratonovich scheme");
            cfg.integrator.t_final = r.number("t_final", 1.0 / gamma);
            cfg.dt_values = r.numbers("dt_values", {1e-2 / gamma, 5e-3 / gamma, 2.5e-3 / gamma});
            cfg.n_traj = r.count("n_traj", 20);
            const double finest = *std::min_element(cfg.dt_values.begin(), cfg.dt_values.end());
            for (double dt : cfg.dt_values) {
                IntegratorConfig ic = cfg.integrator;
                ic.dt = dt;
                check_integrator(r, ic);
                const double ratio = dt / finest;
                if (!(finest > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
                    r.fail("dt_values: " + format_number(dt) + " is not an integer multiple of the finest step");
                }
            }
            cfg.integrator.dt = finest;
        } else {
            cfg.integrator.dt = r.number("dt", 1e-3 / gamma);
            cfg.integrator.t_final = r.number("t_final", 5.0 / gamma);
            cfg.integrator.record_stride = r.count("record_stride", 1);
            check_integrator(r, cfg.integrator);
        }
        if (e == Experiment::Ensemble) cfg.n_traj = r.count("n_traj", 2000);
        if ((e == Experiment::Ensemble || e == Experiment::Convergence) && cfg.n_traj == 0) {
            r.fail("n_traj must be at least 1");
        }
        if (r.violations().empty()) check_model(r, cfg);
        break;
    }
    }

    if (!r.violations().empty()) {
        std::string msg = "invalid configuration (" + std::to_string(r.violations().size()) + " problem" +
                          (r.violations().size() == 1 ? "" : "s") + "):";
        for (const auto &v : r.violations()) msg += "\n  - " + v;
        throw ValidationError(msg);
    }
    return cfg;
}

std::string echo_config(const RunConfig &cfg) {
    json j;
    const Experiment e = cfg.experiment;
    j["experiment"] = std::string(experiment_name(e));
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json-lines";
    j["output_dir"] = cfg.output_dir;
    auto bloch = [](const std::array<double, 3> &b) { return json::array({b[0], b[1], b[2]}); };
    switch (e) {
    case Experiment::DqcScan:
        j["n_values"] = cfg.n_values;
        j["alpha"] = cfg.alpha;
        j["gamma_over_alpha"] = cfg.gamma_over_alpha;
        j["etas"] = cfg.etas;
        j["include_no_feedback"] = cfg.include_no_feedback;
        break;
    case Experiment::Jump:
        j["omega"] = cfg.omega;
        j["dt"] = cfg.integrator.dt;
        j["t_final"] = cfg.integrator.t_final;
        j["record_stride"] = cfg.integrator.record_stride;
        j["n_traj"] = cfg.n_traj;
        j["correction"] = cfg.correction;
        j["rho0"] = bloch(cfg.rho0);
        break;
    default:
        j["omega"] = cfg.omega;
        j["gamma"] = cfg.gamma;
        j["theta"] = cfg.theta;
        j["eta"] = cfg.eta;
        j["coupling"] = cfg.coupling == Coupling::SigmaZ ? "sigma_z" : "sigma_minus";
        j["rho0"] = bloch(cfg.rho0);
        j["scheme"] = std::string(scheme_name(cfg.integrator.scheme));
        j["t_final"] = cfg.integrator.t_final;
        if (e == Experiment::Convergence) {
            j["dt_values"] = cfg.dt_values;
            j["n_traj"] = cfg.n_traj;
        } else {
            j["dt"] = cfg.integrator.dt;
            j["record_stride"] = cfg.integrator.record_stride;
        }
        if (e == Experiment::Trajectory || e == Experiment::Ensemble || e == Experiment::FilterDivergence) {
            j["feedback"] = cfg.feedback;
        }
        if (e == Experiment::FilterDivergence) j["pi0"] = bloch(cfg.pi0);
        if (e == Experiment::Ensemble) j["n_traj"] = cfg.n_traj;
        break;
    }
    return j.dump();
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace noknow
