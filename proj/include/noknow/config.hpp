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

// Run configuration for the command-line front end: a flat JSON object whose keys
// depend on the experiment. See README.md for the key reference.

#ifndef NOKNOW_CONFIG_HPP
#define NOKNOW_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noknow/sde.hpp"

namespace noknow {

enum class Experiment { Trajectory, Ensemble, FilterDivergence, FeedbackCancel, Jump, DqcScan, Convergence };

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

enum class OutputFormat { Csv, JsonLines };

enum class Coupling { SigmaZ, SigmaMinus };

struct RunConfig {
    Experiment experiment = Experiment::Trajectory;

    // Driven qubit: H = omega sigma_x with L = sqrt(gamma) sigma_z (dephasing) or
    // sqrt(gamma) sigma_- through the two-reservoir network.
    double omega = 1.0;
    double gamma = 1.0;
    double theta = 0.0;
    double eta = 1.0;
    bool feedback = false;
    Coupling coupling = Coupling::SigmaZ;
    std::array<double, 3> rho0{};
    std::array<double, 3> pi0{};
    bool correction = true;  // jump: apply U^dagger after each detection

    IntegratorConfig integrator;
    std::vector<double> dt_values;  // convergence

    std::uint64_t seed = 0;
    std::size_t n_traj = 1;
    unsigned threads = 0;  // 0: all cores

    // Chain scan.
    std::vector<std::size_t> n_values;
    double alpha = 1.0;
    double gamma_over_alpha = 10.0;
    std::vector<double> etas;
    bool include_no_feedback = true;

    OutputFormat format = OutputFormat::Csv;
    std::string output_dir;  // empty: decided by the caller
};

/// Parses and validates a configuration document. `experiment` (from the command line)
/// fills in or must match the document's "experiment" key. Throws ParseError on
/// malformed JSON (with line and column) and ValidationError listing every violation.
RunConfig parse_config(std::string_view text, std::optional<Experiment> experiment = std::nullopt);

/// Every effective setting of `cfg`, defaults included, as a canonical JSON string
/// (sorted keys, no whitespace).
std::string echo_config(const RunConfig &cfg);

/// 64-bit FNV-1a of `text`.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace noknow

#endif  // NOKNOW_CONFIG_HPP
