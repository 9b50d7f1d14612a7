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

// Experiment drivers behind the command-line tool and the writers for their tables.

#ifndef NOKNOW_EXPERIMENTS_HPP
#define NOKNOW_EXPERIMENTS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "noknow/config.hpp"

namespace noknow {

inline constexpr std::string_view kVersion = "0.1.0";

/// Empty cells (monostate) are written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Runs the configured experiment. Output depends only on the configuration: the same
/// config gives the same table whatever the thread count.
Table run_experiment(const RunConfig &cfg);

/// Column names of an experiment's table, in order. Part of the output schema.
std::vector<std::string> experiment_columns(const RunConfig &cfg);

struct Metadata {
    std::string experiment;
    std::string config;  // echo_config()
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;  // 0 when the experiment has no time step
};

Metadata make_metadata(const RunConfig &cfg);

/// RFC 4180 body preceded by `# key: value` metadata lines.
void write_csv(std::ostream &os, const Metadata &meta, const Table &table);

/// One {"meta": ...} line, then one object per row with keys in column order.
void write_json_lines(std::ostream &os, const Metadata &meta, const Table &table);

/// Shortest text that reads back as the same double ("%.17g" fallback).
std::string format_double(double x);

}  // namespace noknow

#endif  // NOKNOW_EXPERIMENTS_HPP
