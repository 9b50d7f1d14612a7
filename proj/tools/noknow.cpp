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

// noknow <experiment> --config <file> [--seed S] [--out DIR] [--threads K]
//
// Output goes to --out, else the config's output_dir, else $NOKNOW_OUTPUT_DIR, else the
// working directory. Exit codes: 0 ok, 1 I/O, 2 configuration, 3 numerical,
// 4 resource, 5 solver. Errors are reported on stderr as `noknow: error[<kind>]: ...`.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "noknow/config.hpp"
#include "noknow/errors.hpp"
#include "noknow/experiments.hpp"

namespace {

int exit_code(noknow::ErrorKind kind) {
    using noknow::ErrorKind;
    switch (kind) {
    case ErrorKind::Numerical:
        return 3;
    case ErrorKind::Resource:
        return 4;
    case ErrorKind::Solver:
        return 5;
    default:
        return 2;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"No-knowledge feedback simulations"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    app.add_option("experiment", experiment,
                   "trajectory | ensemble | filter-divergence | feedback-cancel | jump | dqc-scan | convergence")
        ->required();
    app.add_option("--config", config_path, "Flat JSON configuration file")->required();
    app.add_option("--seed", seed, "Base seed (overrides the config)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", threads, "Worker threads, 0 = all cores (overrides the config)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto kind = noknow::parse_experiment(experiment);
        if (!kind) throw noknow::ConfigError("unknown experiment \"" + experiment + "\"");
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "noknow: error[io]: cannot read config file " << config_path << "\n";
            return 1;
        }
        std::stringstream text;
        text << in.rdbuf();
        noknow::RunConfig cfg = noknow::parse_config(text.str(), kind);
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;

        std::filesystem::path dir = ".";
        if (out_dir) {
            dir = *out_dir;
        } else if (!cfg.output_dir.empty()) {
            dir = cfg.output_dir;
        } else if (const char *env = std::getenv("NOKNOW_OUTPUT_DIR"); env && *env) {
            dir = env;
        }

        const noknow::Table table = noknow::run_experiment(cfg);
        const noknow::Metadata meta = noknow::make_metadata(cfg);
        std::filesystem::create_directories(dir);
        const bool csv = cfg.format == noknow::OutputFormat::Csv;
        const auto path = dir / (meta.experiment + (csv ? ".csv" : ".jsonl"));
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "noknow: error[io]: cannot write " << path.string() << "\n";
            return 1;
        }
        if (csv) {
            noknow::write_csv(out, meta, table);
        } else {
            noknow::write_json_lines(out, meta, table);
        }
        out.close();
        if (!out) {
            std::cerr << "noknow: error[io]: failed writing " << path.string() << "\n";
            return 1;
        }
        std::cout << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
        return 0;
    } catch (const noknow::Error &e) {
        std::cerr << "noknow: error[" << noknow::error_kind_name(e.kind()) << "]: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "noknow: error[io]: " << e.what() << "\n";
        return 1;
    }
}
