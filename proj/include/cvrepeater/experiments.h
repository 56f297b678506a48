// Copyright 2026 The cvrepeater Authors
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

#ifndef CVREPEATER_EXPERIMENTS_H
#define CVREPEATER_EXPERIMENTS_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cvrep {

/// Malformed or schema-violating sweep configuration.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

/// A parsed sweep: every parameter expanded to its list of grid values.
/// Squeezing parameters use +infinity for "inf".
struct SweepConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::map<std::string, std::vector<double>> ranges;
};

/// A finished dataset. Cells are already formatted for CSV.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Every accepted experiment id.
const std::vector<std::string> &experiment_ids();

/// Experiment ids a CLI subcommand may run (e.g. "fidelity" -> fig5, fig6,
/// fig8, custom). Throws ConfigError for an unknown subcommand.
const std::vector<std::string> &experiments_for_subcommand(const std::string &subcommand);

/// Validates against the experiment's schema. The error message lists every
/// missing, unknown, and invalid key.
SweepConfig parse_config(const nlohmann::json &doc);
SweepConfig load_config(const std::string &path);

/// Evaluates the Cartesian grid (first schema key outermost). Rows come out
/// in grid order whatever the worker count.
Table run_experiment(const SweepConfig &cfg, std::size_t workers = 0);

/// Header plus rows, comma separated, LF line endings.
std::string to_csv(const Table &table);

/// "%.17g"; throws NumericalError for NaN or infinity.
std::string format_real(double x);

}  // namespace cvrep

#endif
