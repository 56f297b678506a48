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

// cvrepeater: sweep runner and acceptance harness.
//
//   cvrepeater noise    --config fig3.json --out fig3.csv
//   cvrepeater accept   [--config fixture.json] [--only 1,2] [--out report.txt]

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cvrepeater/acceptance.h"
#include "cvrepeater/errors.h"
#include "cvrepeater/experiments.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAcceptance = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw cvrep::ConfigError("cannot write '" + path + "'");
    }
    out << text;
}

int run_sweep(const std::string &subcommand, const std::string &config, const std::string &out,
              std::size_t workers) {
    const cvrep::SweepConfig cfg = cvrep::load_config(config);
    const auto &allowed = cvrep::experiments_for_subcommand(subcommand);
    if (std::find(allowed.begin(), allowed.end(), cfg.experiment) == allowed.end()) {
        std::string ids;
        for (const auto &id : allowed) {
            ids += (ids.empty() ? "" : ", ") + id;
        }
        throw cvrep::ConfigError("experiment '" + cfg.experiment + "' cannot run under '" + subcommand +
                                 "' (expected one of: " + ids + ")");
    }
    emit(cvrep::to_csv(cvrep::run_experiment(cfg, workers)), out);
    return kExitOk;
}

cvrep::AcceptanceFixture load_fixture(const std::string &path) {
    cvrep::AcceptanceFixture fx;
    if (path.empty()) {
        return fx;
    }
    std::ifstream in(path);
    if (!in) {
        throw cvrep::ConfigError("cannot open fixture '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw cvrep::ConfigError(std::string("cannot parse fixture: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema_version", 0) != cvrep::kConfigSchemaVersion) {
        throw cvrep::ConfigError("fixture must be an object with schema_version 1");
    }
    for (const auto &[key, value] : doc.items()) {
        if (key == "schema_version") {
            continue;
        } else if (key == "gamma" && value.is_number() && value.get<double>() > 0.0) {
            fx.gamma_db_per_km = value.get<double>();
        } else if (key == "seed" && (value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0))) {
            fx.seed = value.get<std::uint64_t>();
        } else if (key == "mc_samples" && value.is_number_integer() && value.get<std::int64_t>() >= 10000) {
            fx.mc_samples = value.get<std::size_t>();
        } else {
            throw cvrep::ConfigError("fixture key '" + key + "' is unknown or invalid");
        }
    }
    return fx;
}

int run_accept(const std::string &config, const std::string &out, const std::vector<int> &only,
               std::size_t workers) {
    cvrep::AcceptanceFixture fx = load_fixture(config);
    fx.workers = workers;
    for (int id : only) {
        if (id < 1 || id > cvrep::kAcceptanceCriteria) {
            throw cvrep::ConfigError("no acceptance criterion " + std::to_string(id));
        }
    }
    bool all = true;
    std::ostringstream report;
    for (const auto &r : cvrep::run_acceptance(fx, only)) {
        report << cvrep::format_result(r) << '\n';
        all = all && r.pass;
    }
    emit(report.str(), out);
    return all ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"CV quantum-repeater sweeps and acceptance checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t workers = 0;
    app.add_option("--workers", workers, "Worker threads (default: $CVREP_WORKERS or hardware concurrency)");

    struct Sub {
        std::string config;
        std::string out;
    };
    const std::vector<std::pair<std::string, std::string>> sweeps = {
        {"noise", "Inter-node channel noise (fig3) and GKP Wigner grids (fig4)"},
        {"fidelity", "Distributed-TMSV fidelities F_O, F_A, F_T (fig5, fig6, fig8, custom)"},
        {"ea-comm", "Entanglement-assisted communication Holevo ratios (fig9)"},
        {"qi", "Quantum illumination error bounds (fig10)"},
        {"qkd", "CV-QKD key rate over QEC repeater chains (fig11)"},
        {"oracle", "Monte Carlo check of the logical-noise series"},
    };
    std::vector<Sub> args(sweeps.size());
    std::vector<CLI::App *> subs;
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        CLI::App *sub = app.add_subcommand(sweeps[i].first, sweeps[i].second);
        sub->add_option("--config", args[i].config, "Experiment config (JSON)")->required();
        sub->add_option("--out", args[i].out, "Output CSV (default: stdout)");
        subs.push_back(sub);
    }
    Sub accept_args;
    std::vector<int> only;
    CLI::App *accept = app.add_subcommand("accept", "Run the acceptance criteria");
    accept->add_option("--config", accept_args.config, "Fixture overrides (JSON: gamma, seed, mc_samples)");
    accept->add_option("--out", accept_args.out, "Report path (default: stdout)");
    accept->add_option("--only", only, "Criterion ids to run")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) {
                return run_sweep(sweeps[i].first, args[i].config, args[i].out, workers);
            }
        }
        return run_accept(accept_args.config, accept_args.out, only, workers);
    } catch (const cvrep::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const cvrep::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
