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

#include "cvrepeater/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "cvrepeater/applications.h"
#include "cvrepeater/errors.h"
#include "cvrepeater/gaussian_state.h"
#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/link_channels.h"
#include "cvrepeater/parallel.h"
#include "cvrepeater/protocol_mc.h"

namespace cvrep {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Kind { real, squeeze, integer };

struct Param {
    std::string key;
    Kind kind = Kind::real;
    bool required = true;
    std::optional<double> fallback;
    // When absent, take the value of this key at each grid point.
    std::string tie;
    double lo = -kInf;
    bool lo_open = false;
    double hi = kInf;
    bool finite_only = false;
};

using Point = std::map<std::string, double>;
using RowFn = std::function<std::vector<std::string>(const Point &, std::size_t, const SweepConfig &)>;

struct Schema {
    std::string id;
    std::string subcommand;
    std::vector<Param> params;
    std::vector<std::string> outputs;
    RowFn row;
    bool needs_segments = false;
    // MC rows parallelize internally.
    bool serial_rows = false;
};

Param real(std::string key, double lo, bool lo_open) {
    Param p;
    p.key = std::move(key);
    p.lo = lo;
    p.lo_open = lo_open;
    return p;
}

Param squeeze(std::string key) {
    Param p;
    p.key = std::move(key);
    p.kind = Kind::squeeze;
    p.lo = 0.0;
    return p;
}

Param integer(std::string key, double lo) {
    Param p;
    p.key = std::move(key);
    p.kind = Kind::integer;
    p.lo = lo;
    return p;
}

Param optional(Param p, double fallback) {
    p.required = false;
    p.fallback = fallback;
    return p;
}

Param tied(Param p, std::string to) {
    p.required = false;
    p.tie = std::move(to);
    return p;
}

SqueezeSpec spec(double db) {
    return std::isinf(db) ? SqueezeSpec::infinite() : SqueezeSpec(db);
}

LinkParams link_at(const Point &pt) {
    LinkParams link;
    link.L_delta_km = pt.at("L_delta_km");
    link.gamma_db_per_km = pt.at("gamma");
    link.s_tele = spec(pt.at("s"));
    return link;
}

CodeParams code_at(const Point &pt) {
    CodeParams code;
    code.k = static_cast<int>(pt.at("k"));
    code.L_km = pt.at("L_km");
    code.L_delta_km = pt.at("L_delta_km");
    return code;
}

GkpParams gkp_at(const Point &pt) {
    return GkpParams{spec(pt.at("s_gkp"))};
}

CommParams comm_at(const Point &pt) {
    CommParams p;
    p.N_S = pt.at("N_S");
    p.N_B = pt.at("N_B");
    p.kappa = pt.at("kappa");
    const auto m = pt.find("M");
    p.M = m == pt.end() ? 1 : static_cast<long>(m->second);
    return p;
}

std::string format_uint(std::uint64_t x) {
    return std::to_string(x);
}

std::vector<std::string> noise_row(const Point &pt, std::size_t, const SweepConfig &) {
    const double gamma = pt.at("gamma");
    const double eta = transmissivity(pt.at("L_delta_km"), gamma);
    const SqueezeSpec s = spec(pt.at("s"));
    return {format_real(eta), format_real(sigma2_amplified(eta)), format_real(sigma2_teleport(eta, s)),
            format_real(mirs(s, gamma))};
}

std::vector<std::string> wigner_row(const Point &pt, std::size_t, const SweepConfig &) {
    const GkpParams gkp = gkp_at(pt);
    int n_cut = static_cast<int>(pt.at("n_cut"));
    if (n_cut == 0) {
        n_cut = gkp_wigner_min_cut(gkp);
    }
    return {format_real(gkp_wigner(pt.at("q"), pt.at("p"), gkp, n_cut))};
}

std::vector<std::string> fidelity_row(const Point &pt, std::size_t, const SweepConfig &) {
    const LinkParams link = link_at(pt);
    const CodeParams code = code_at(pt);
    const GkpParams gkp = gkp_at(pt);
    const GaussianState tmsv = tmsv_state(spec(pt.at("r")));
    const IdlerChannel direct = end_to_end_noise(link, code, gkp, ChannelKind::direct);
    const IdlerChannel amplified = end_to_end_noise(link, code, gkp, ChannelKind::amplified);
    const IdlerChannel teleport = end_to_end_noise(link, code, gkp, ChannelKind::teleport);
    return {format_real(amplified.noise.variance()),
            format_real(teleport.noise.variance()),
            format_real(uhlmann_fidelity(tmsv, direct.apply(tmsv, 1))),
            format_real(uhlmann_fidelity(tmsv, amplified.apply(tmsv, 1))),
            format_real(uhlmann_fidelity(tmsv, teleport.apply(tmsv, 1)))};
}

std::vector<std::string> ea_row(const Point &pt, std::size_t, const SweepConfig &) {
    const LinkParams link = link_at(pt);
    const CodeParams code = code_at(pt);
    const GkpParams gkp = gkp_at(pt);
    const CommParams comm = comm_at(pt);
    const IdlerChannel direct = end_to_end_noise(link, code, gkp, ChannelKind::direct);
    const IdlerChannel qec = end_to_end_noise(link, code, gkp, ChannelKind::teleport);
    return {format_real(direct.transmissivity),
            format_real(qec.noise.variance()),
            format_real(classical_capacity(comm)),
            format_real(holevo_ratio(comm, IdlerChannel::identity())),
            format_real(holevo_ratio(comm, direct)),
            format_real(holevo_ratio(comm, qec))};
}

std::vector<std::string> qi_row(const Point &pt, std::size_t, const SweepConfig &) {
    const LinkParams link = link_at(pt);
    const CodeParams code = code_at(pt);
    const GkpParams gkp = gkp_at(pt);
    const CommParams comm = comm_at(pt);
    const IdlerChannel direct = end_to_end_noise(link, code, gkp, ChannelKind::direct);
    const IdlerChannel qec = end_to_end_noise(link, code, gkp, ChannelKind::teleport);
    auto bound = [&](const IdlerChannel &idler) {
        const QiHypotheses h = qi_hypotheses(comm, idler);
        return quantum_chernoff(h.absent, h.present);
    };
    const ChernoffBound ideal = bound(IdlerChannel::identity());
    const ChernoffBound via_direct = bound(direct);
    const ChernoffBound via_qec = bound(qec);
    return {format_real(direct.transmissivity),
            format_real(qec.noise.variance()),
            format_real(ci_exponent(comm)),
            format_real(ideal.exponent()),
            format_real(via_direct.exponent()),
            format_real(via_qec.exponent()),
            format_real(ci_error_bound(comm)),
            format_real(qi_error_bound(ideal, comm.M)),
            format_real(qi_error_bound(via_direct, comm.M)),
            format_real(qi_error_bound(via_qec, comm.M))};
}

std::vector<std::string> qkd_row(const Point &pt, std::size_t, const SweepConfig &) {
    const LinkParams link = link_at(pt);
    const CodeParams code = code_at(pt);
    const GkpParams gkp = gkp_at(pt);
    const double eta = transmissivity(code.L_km, link.gamma_db_per_km);
    const double eps = end_to_end_noise(link, code, gkp, ChannelKind::teleport).noise.variance();
    return {format_real(eta), format_real(eps), format_real(qkd_skr(eps)), format_real(qkd_secure_rate(eps)),
            format_real(plob_bound(eta))};
}

std::vector<std::string> oracle_row(const Point &pt, std::size_t index, const SweepConfig &cfg) {
    const GkpParams gkp = gkp_at(pt);
    McConfig mc;
    mc.n_samples = static_cast<std::size_t>(pt.at("n_samples"));
    mc.seed = substream_seed(cfg.seed, index);
    mc.sigma2 = pt.at("sigma2");
    mc.gain = pt.at("gain");
    mc.sigma_G = gkp.sigma_G();
    const VarianceEstimate est = estimate_variance(mc);
    const double analytic = logical_noise_variance(mc.sigma2, mc.gain, gkp);
    const double z = est.standard_error > 0.0 ? (est.variance - analytic) / est.standard_error : 0.0;
    return {format_uint(mc.seed), format_real(est.mean), format_real(est.variance),
            format_real(est.standard_error), format_real(analytic), format_real(z)};
}

Schema fidelity_schema(std::string id) {
    Schema s;
    s.id = std::move(id);
    s.subcommand = "fidelity";
    Param r = squeeze("r");
    r.finite_only = true;
    s.params = {optional(real("gamma", 0.0, true), kDefaultAttenuationDbPerKm),
                r,
                squeeze("s"),
                optional(squeeze("s_gkp"), kInf),
                optional(integer("k", 1), 1),
                real("L_delta_km", 0.0, true),
                real("L_km", 0.0, true)};
    s.outputs = {"sigma2_QA", "sigma2_QT", "F_O", "F_A", "F_T"};
    s.row = fidelity_row;
    s.needs_segments = true;
    return s;
}

const std::vector<Schema> &schemas() {
    static const std::vector<Schema> all = [] {
        std::vector<Schema> v;
        {
            Schema s;
            s.id = "fig3";
            s.subcommand = "noise";
            Param sq = squeeze("s");
            sq.lo_open = true;
            s.params = {optional(real("gamma", 0.0, true), kDefaultAttenuationDbPerKm), sq,
                        real("L_delta_km", 0.0, true)};
            s.outputs = {"eta", "sigma2_A", "sigma2_T", "mirs_km"};
            s.row = noise_row;
            v.push_back(s);
        }
        {
            Schema s;
            s.id = "fig4";
            s.subcommand = "noise";
            Param sg = squeeze("s_gkp");
            sg.finite_only = true;
            s.params = {sg, optional(integer("n_cut", 0), 0), real("q", -kInf, false), real("p", -kInf, false)};
            s.outputs = {"wigner"};
            s.row = wigner_row;
            v.push_back(s);
        }
        for (const char *id : {"fig5", "fig6", "fig8", "custom"}) {
            v.push_back(fidelity_schema(id));
        }
        {
            Schema s;
            s.id = "fig9";
            s.subcommand = "ea-comm";
            Param kappa = real("kappa", 0.0, true);
            kappa.hi = 1.0;
            s.params = {optional(real("gamma", 0.0, true), kDefaultAttenuationDbPerKm),
                        kappa,
                        real("N_B", 0.0, true),
                        squeeze("s"),
                        tied(squeeze("s_gkp"), "s"),
                        optional(integer("k", 1), 1),
                        real("L_delta_km", 0.0, true),
                        real("L_km", 0.0, true),
                        real("N_S", 0.0, true)};
            s.outputs = {"eta", "sigma2_QT", "capacity", "ratio_ideal", "ratio_direct", "ratio_qec"};
            s.row = ea_row;
            s.needs_segments = true;
            v.push_back(s);
        }
        {
            Schema s;
            s.id = "fig10";
            s.subcommand = "qi";
            Param kappa = real("kappa", 0.0, true);
            kappa.hi = 1.0;
            s.params = {optional(real("gamma", 0.0, true), kDefaultAttenuationDbPerKm),
                        kappa,
                        real("N_B", 0.0, true),
                        real("N_S", 0.0, true),
                        squeeze("s"),
                        tied(squeeze("s_gkp"), "s"),
                        optional(integer("k", 1), 1),
                        real("L_delta_km", 0.0, true),
                        real("L_km", 0.0, true),
                        integer("M", 0)};
            s.outputs = {"eta",        "sigma2_QT",    "exponent_ci", "exponent_ideal", "exponent_direct",
                         "exponent_qec", "p_e_ci", "p_e_ideal",   "p_e_direct",     "p_e_qec"};
            s.row = qi_row;
            s.needs_segments = true;
            v.push_back(s);
        }
        {
            Schema s;
            s.id = "fig11";
            s.subcommand = "qkd";
            s.params = {optional(real("gamma", 0.0, true), kDefaultAttenuationDbPerKm),
                        squeeze("s"),
                        tied(squeeze("s_gkp"), "s"),
                        optional(integer("k", 1), 1),
                        real("L_delta_km", 0.0, true),
                        real("L_km", 0.0, true)};
            s.outputs = {"eta", "epsilon", "skr", "secure_rate", "plob"};
            s.row = qkd_row;
            s.needs_segments = true;
            v.push_back(s);
        }
        {
            Schema s;
            s.id = "oracle";
            s.subcommand = "oracle";
            s.params = {real("sigma2", 0.0, true), squeeze("s_gkp"), real("gain", 1.0, false),
                        optional(integer("n_samples", McConfig::kMinReportedSamples), 1000000)};
            s.outputs = {"mc_seed", "mc_mean", "mc_variance", "mc_variance_se", "analytic", "z_score"};
            s.row = oracle_row;
            s.serial_rows = true;
            v.push_back(s);
        }
        return v;
    }();
    return all;
}

const Schema &schema_for(const std::string &id) {
    for (const auto &s : schemas()) {
        if (s.id == id) {
            return s;
        }
    }
    throw ConfigError("unknown experiment '" + id + "'");
}

std::string describe(const json &v) {
    std::string out = v.dump();
    return out.size() > 60 ? out.substr(0, 57) + "..." : out;
}

// Expands one parameter value into its grid; appends problems to `errors`.
std::vector<double> expand(const Param &p, const json &v, std::vector<std::string> &errors) {
    const std::string where = "params." + p.key;
    std::vector<double> out;
    bool generated = false;

    auto scalar = [&](const json &x) -> std::optional<double> {
        if (x.is_number()) {
            return x.get<double>();
        }
        if (x.is_string() && x.get<std::string>() == "inf" && p.kind == Kind::squeeze && !p.finite_only) {
            return kInf;
        }
        errors.push_back(where + ": invalid value " + describe(x));
        return std::nullopt;
    };

    if (v.is_array()) {
        for (const auto &x : v) {
            if (auto d = scalar(x)) {
                out.push_back(*d);
            }
        }
        if (v.empty()) {
            errors.push_back(where + ": empty range");
        }
    } else if (v.is_object()) {
        const bool lin = v.contains("linspace");
        const bool log = v.contains("logspace");
        if (v.size() != 1 || lin == log) {
            errors.push_back(where + ": range object needs exactly one of linspace/logspace");
            return {};
        }
        const json &args = lin ? v["linspace"] : v["logspace"];
        if (!args.is_array() || args.size() != 3 || !args[0].is_number() || !args[1].is_number() ||
            !args[2].is_number_integer()) {
            errors.push_back(where + ": expected [start, stop, count]");
            return {};
        }
        const double a = args[0].get<double>();
        const double b = args[1].get<double>();
        const long n = args[2].get<long>();
        if (n < 1) {
            errors.push_back(where + ": empty range");
            return {};
        }
        for (long i = 0; i < n; ++i) {
            const double t = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(lin ? t : std::pow(10.0, t));
        }
        generated = true;
    } else if (auto d = scalar(v)) {
        out.push_back(*d);
    }

    if (p.kind == Kind::integer) {
        std::vector<double> ints;
        for (double x : out) {
            const double r = std::round(x);
            if (!generated && std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) {
                errors.push_back(where + ": " + format_real(x) + " is not an integer");
                continue;
            }
            // Rounded linspace/logspace values collapse onto unique integers.
            if (ints.empty() || ints.back() != r) {
                ints.push_back(r);
            }
        }
        out = std::move(ints);
    }

    for (double x : out) {
        const bool below = p.lo_open ? !(x > p.lo) : !(x >= p.lo);
        if (std::isnan(x) || below || x > p.hi || (p.kind != Kind::squeeze && std::isinf(x))) {
            std::ostringstream msg;
            msg << where << ": value " << x << " outside " << (p.lo_open ? "(" : "[") << p.lo << ", " << p.hi
                << "]";
            errors.push_back(msg.str());
        }
    }
    return out;
}

std::string cell(const Param &p, double x) {
    if (p.kind == Kind::squeeze && std::isinf(x)) {
        return "inf";
    }
    if (p.kind == Kind::integer) {
        return std::to_string(static_cast<long long>(x));
    }
    return format_real(x);
}

}  // namespace

std::string format_real(double x) {
    if (!std::isfinite(x)) {
        throw NumericalError("non-finite value in output row");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::vector<std::string> &experiment_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto &s : schemas()) {
            v.push_back(s.id);
        }
        return v;
    }();
    return ids;
}

const std::vector<std::string> &experiments_for_subcommand(const std::string &subcommand) {
    static const std::map<std::string, std::vector<std::string>> by_sub = [] {
        std::map<std::string, std::vector<std::string>> m;
        for (const auto &s : schemas()) {
            m[s.subcommand].push_back(s.id);
        }
        return m;
    }();
    const auto it = by_sub.find(subcommand);
    if (it == by_sub.end()) {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    return it->second;
}

SweepConfig parse_config(const nlohmann::json &doc) {
    using json = nlohmann::json;
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    std::vector<std::string> errors;
    for (const auto &[key, _] : doc.items()) {
        if (key != "schema_version" && key != "experiment" && key != "params" && key != "seed" &&
            key != "description") {
            errors.push_back("unknown key '" + key + "'");
        }
    }
    if (!doc.contains("schema_version")) {
        errors.push_back("missing key 'schema_version'");
    } else if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kConfigSchemaVersion) {
        errors.push_back("schema_version must be " + std::to_string(kConfigSchemaVersion));
    }

    SweepConfig cfg;
    if (doc.contains("seed")) {
        const json &seed = doc["seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
            errors.push_back("seed must be a non-negative integer");
        } else {
            cfg.seed = doc["seed"].get<std::uint64_t>();
        }
    }
    if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
        errors.push_back("missing or non-string key 'experiment'");
        throw ConfigError("invalid config: " + [&] {
            std::string all;
            for (const auto &e : errors) {
                all += (all.empty() ? "" : "; ") + e;
            }
            return all;
        }());
    }
    cfg.experiment = doc["experiment"].get<std::string>();
    const Schema &schema = schema_for(cfg.experiment);

    const json empty = json::object();
    const json &params = doc.contains("params") ? doc["params"] : empty;
    if (!doc.contains("params")) {
        errors.push_back("missing key 'params'");
    } else if (!params.is_object()) {
        errors.push_back("'params' must be an object");
    }
    if (params.is_object()) {
        for (const auto &[key, _] : params.items()) {
            const bool known = std::any_of(schema.params.begin(), schema.params.end(),
                                           [&](const Param &p) { return p.key == key; });
            if (!known) {
                errors.push_back("params." + key + ": unknown for experiment " + schema.id);
            }
        }
        for (const auto &p : schema.params) {
            if (params.contains(p.key)) {
                cfg.ranges[p.key] = expand(p, params[p.key], errors);
            } else if (p.required) {
                errors.push_back("params." + p.key + ": missing");
            } else if (p.fallback) {
                cfg.ranges[p.key] = {*p.fallback};
            }
        }
    }

    if (schema.needs_segments && errors.empty()) {
        for (double L : cfg.ranges.at("L_km")) {
            for (double d : cfg.ranges.at("L_delta_km")) {
                const double n = L / d;
                if (std::round(n) < 1.0 || std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
                    errors.push_back("L_km=" + format_real(L) + " is not a positive multiple of L_delta_km=" +
                                     format_real(d));
                }
            }
        }
    }

    if (!errors.empty()) {
        std::string all;
        for (const auto &e : errors) {
            all += (all.empty() ? "" : "; ") + e;
        }
        throw ConfigError("invalid config for " + cfg.experiment + ": " + all);
    }
    return cfg;
}

SweepConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("cannot parse config '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

Table run_experiment(const SweepConfig &cfg, std::size_t workers) {
    const Schema &schema = schema_for(cfg.experiment);

    std::vector<const Param *> axes;
    for (const auto &p : schema.params) {
        if (cfg.ranges.count(p.key) != 0) {
            axes.push_back(&p);
        } else if (p.tie.empty()) {
            throw ConfigError("params." + p.key + ": missing");
        }
    }

    std::vector<Point> grid(1);
    for (const Param *p : axes) {
        const auto &values = cfg.ranges.at(p->key);
        std::vector<Point> next;
        next.reserve(grid.size() * values.size());
        for (const auto &pt : grid) {
            for (double x : values) {
                Point q = pt;
                q[p->key] = x;
                next.push_back(std::move(q));
            }
        }
        grid = std::move(next);
    }
    for (auto &pt : grid) {
        for (const auto &p : schema.params) {
            if (!pt.count(p.key) && !p.tie.empty()) {
                pt[p.key] = pt.at(p.tie);
            }
        }
    }

    Table table;
    for (const auto &p : schema.params) {
        table.header.push_back(p.key);
    }
    table.header.insert(table.header.end(), schema.outputs.begin(), schema.outputs.end());

    table.rows.resize(grid.size());
    auto fill = [&](std::size_t i) {
        std::vector<std::string> row;
        for (const auto &p : schema.params) {
            row.push_back(cell(p, grid[i].at(p.key)));
        }
        auto out = schema.row(grid[i], i, cfg);
        row.insert(row.end(), out.begin(), out.end());
        table.rows[i] = std::move(row);
    };
    parallel_for(grid.size(), fill, schema.serial_rows ? 1 : workers);
    return table;
}

std::string to_csv(const Table &table) {
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + cells[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto &r : table.rows) {
        line(r);
    }
    return out;
}

}  // namespace cvrep
