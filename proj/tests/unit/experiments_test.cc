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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "cvrepeater/experiments.h"
#include "cvrepeater/link_channels.h"

namespace {

using nlohmann::json;

std::size_t column(const cvrep::Table &t, const std::string &name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    EXPECT_NE(it, t.header.end()) << name;
    return static_cast<std::size_t>(it - t.header.begin());
}

double at(const cvrep::Table &t, std::size_t row, const std::string &name) {
    return std::stod(t.rows[row][column(t, name)]);
}

cvrep::Table run(const json &doc, std::size_t workers = 1) {
    return cvrep::run_experiment(cvrep::parse_config(doc), workers);
}

std::string parse_error(const json &doc) {
    try {
        cvrep::parse_config(doc);
    } catch (const cvrep::ConfigError &e) {
        return e.what();
    }
    return "";
}

TEST(Config, RejectsSchemaViolations) {
    const json ok = {{"schema_version", 1}, {"experiment", "fig3"}, {"params", {{"s", {20}}, {"L_delta_km", {1}}}}};
    EXPECT_NO_THROW(cvrep::parse_config(ok));

    json empty = ok;
    empty["params"]["s"] = json::array();
    EXPECT_NE(parse_error(empty).find("params.s: empty range"), std::string::npos);

    json missing = ok;
    missing["params"].erase("L_delta_km");
    EXPECT_NE(parse_error(missing).find("params.L_delta_km: missing"), std::string::npos);

    json version = ok;
    version["schema_version"] = 2;
    EXPECT_NE(parse_error(version).find("schema_version"), std::string::npos);

    json unknown = ok;
    unknown["params"]["bogus"] = 1;
    unknown["extra"] = true;
    const std::string both = parse_error(unknown);
    EXPECT_NE(both.find("params.bogus"), std::string::npos);
    EXPECT_NE(both.find("'extra'"), std::string::npos);

    json zero_s = ok;
    zero_s["params"]["s"] = 0;
    EXPECT_FALSE(parse_error(zero_s).empty());

    EXPECT_THROW(cvrep::parse_config(json{{"schema_version", 1}, {"experiment", "fig99"}, {"params", json::object()}}),
                 cvrep::ConfigError);
    EXPECT_THROW(cvrep::parse_config(json::array()), cvrep::ConfigError);
}

TEST(Config, RejectsFractionalSegmentCounts) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "fig5"},
                      {"params", {{"r", 15}, {"s", "inf"}, {"L_delta_km", 1}, {"L_km", {2.5}}}}};
    EXPECT_NE(parse_error(doc).find("multiple"), std::string::npos);
}

TEST(Config, RangeForms) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "fig10"},
                      {"params",
                       {{"kappa", 0.01},
                        {"N_B", 20},
                        {"N_S", {{"logspace", {-3, -1, 3}}}},
                        {"s", {{"linspace", {20, 25, 2}}}},
                        {"L_delta_km", 1},
                        {"L_km", 5},
                        {"M", {{"logspace", {0, 0.2, 5}}}}}}};
    const auto cfg = cvrep::parse_config(doc);
    EXPECT_EQ(cfg.ranges.at("N_S").size(), 3u);
    EXPECT_NEAR(cfg.ranges.at("N_S")[1], 0.01, 1e-15);
    EXPECT_EQ(cfg.ranges.at("s"), (std::vector<double>{20, 25}));
    // 10^{0, 0.05, ..., 0.2} rounds to 1, 1, 1, 1, 2.
    EXPECT_EQ(cfg.ranges.at("M"), (std::vector<double>{1, 2}));
    json frac = doc;
    frac["params"]["M"] = {1.5};
    EXPECT_NE(parse_error(frac).find("not an integer"), std::string::npos);
}

TEST(Experiments, SubcommandMapping) {
    const auto &noise = cvrep::experiments_for_subcommand("noise");
    EXPECT_NE(std::find(noise.begin(), noise.end(), "fig3"), noise.end());
    const auto &fid = cvrep::experiments_for_subcommand("fidelity");
    for (const char *id : {"fig5", "fig6", "fig8", "custom"}) {
        EXPECT_NE(std::find(fid.begin(), fid.end(), id), fid.end()) << id;
    }
    EXPECT_EQ(cvrep::experiments_for_subcommand("qkd"), std::vector<std::string>{"fig11"});
    EXPECT_THROW(cvrep::experiments_for_subcommand("plot"), cvrep::ConfigError);
}

TEST(Experiments, NoiseCurvesCrossAtMirs) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "fig3"},
                      {"params", {{"s", {20}}, {"L_delta_km", {{"linspace", {0.1, 5.0, 50}}}}}}};
    const auto t = run(doc);
    ASSERT_EQ(t.rows.size(), 50u);
    const double l_star = cvrep::mirs(cvrep::SqueezeSpec(20.0));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double l = at(t, i, "L_delta_km");
        EXPECT_NEAR(at(t, i, "mirs_km"), l_star, 1e-12);
        EXPECT_EQ(at(t, i, "sigma2_T") < at(t, i, "sigma2_A"), l > l_star) << l;
        if (i > 0) {
            EXPECT_GT(at(t, i, "sigma2_A"), at(t, i - 1, "sigma2_A"));
            EXPECT_GT(at(t, i, "sigma2_T"), at(t, i - 1, "sigma2_T"));
        }
    }
}

TEST(Experiments, FidelityOrderingWithIdealResources) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "fig5"},
                      {"params",
                       {{"r", 15},
                        {"s", "inf"},
                        {"L_delta_km", 0.25},
                        {"L_km", {{"linspace", {1, 50, 50}}}}}}};
    const auto t = run(doc);
    ASSERT_EQ(t.rows.size(), 50u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        EXPECT_GE(at(t, i, "F_T"), at(t, i, "F_A"));
        EXPECT_GE(at(t, i, "F_A"), at(t, i, "F_O"));
        EXPECT_EQ(t.rows[i][column(t, "s")], "inf");
    }
}

TEST(Experiments, TiedAncillaSqueezing) {
    json doc = {{"schema_version", 1},
                {"experiment", "fig11"},
                {"params", {{"s", {20, 25}}, {"k", 2}, {"L_delta_km", 1}, {"L_km", {10, 40}}}}};
    const auto tied = run(doc);
    doc["params"]["s_gkp"] = 20;
    const auto fixed = run(doc);
    ASSERT_EQ(tied.rows.size(), 4u);
    EXPECT_EQ(tied.rows[0], fixed.rows[0]);
    EXPECT_EQ(at(tied, 3, "s_gkp"), 25.0);
    EXPECT_NE(tied.rows[3][column(tied, "epsilon")], fixed.rows[3][column(fixed, "epsilon")]);
}

TEST(Experiments, ByteIdenticalAcrossRunsAndWorkers) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "fig9"},
                      {"params",
                       {{"kappa", 0.01},
                        {"N_B", 20},
                        {"N_S", {{"logspace", {-3, 1, 9}}}},
                        {"s", 25},
                        {"k", {1, 3}},
                        {"L_delta_km", 1},
                        {"L_km", 25}}}};
    const std::string a = cvrep::to_csv(run(doc, 1));
    EXPECT_EQ(a, cvrep::to_csv(run(doc, 1)));
    EXPECT_EQ(a, cvrep::to_csv(run(doc, 3)));
}

TEST(Experiments, OracleRowsCarrySeeds) {
    const json doc = {{"schema_version", 1},
                      {"experiment", "oracle"},
                      {"seed", 17},
                      {"params", {{"sigma2", {0.02, 0.05}}, {"s_gkp", 20}, {"gain", 2}, {"n_samples", 20000}}}};
    const auto t = run(doc);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_NE(t.rows[0][column(t, "mc_seed")], t.rows[1][column(t, "mc_seed")]);
    EXPECT_EQ(cvrep::to_csv(t), cvrep::to_csv(run(doc, 2)));
}

TEST(Csv, Format) {
    cvrep::Table t{{"a", "b"}, {{"1", "inf"}, {cvrep::format_real(0.1), "2"}}};
    EXPECT_EQ(cvrep::to_csv(t), "a,b\n1,inf\n0.10000000000000001,2\n");
    EXPECT_EQ(cvrep::format_real(-2.5), "-2.5");
    EXPECT_THROW(cvrep::format_real(std::nan("")), std::runtime_error);
}

}  // namespace
