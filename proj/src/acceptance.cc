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

#include "cvrepeater/acceptance.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cvrepeater/applications.h"
#include "cvrepeater/experiments.h"
#include "cvrepeater/gaussian_state.h"
#include "cvrepeater/gkp_qec.h"
#include "cvrepeater/link_channels.h"
#include "cvrepeater/protocol_mc.h"

namespace cvrep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string join(const std::vector<double> &xs) {
    std::string out;
    for (double x : xs) {
        out += (out.empty() ? "" : ";") + num(x);
    }
    return out;
}

SqueezeSpec db(double x) {
    return std::isinf(x) ? SqueezeSpec::infinite() : SqueezeSpec(x);
}

LinkParams link(double L_delta, double s_db, const AcceptanceFixture &f) {
    LinkParams l;
    l.L_delta_km = L_delta;
    l.gamma_db_per_km = f.gamma_db_per_km;
    l.s_tele = db(s_db);
    return l;
}

CodeParams code(double L, double L_delta, int k) {
    CodeParams c;
    c.L_km = L;
    c.L_delta_km = L_delta;
    c.k = k;
    return c;
}

CriterionResult start(int id, const char *name) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    return r;
}

double max_abs_diff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

CriterionResult mirs_regression(const AcceptanceFixture &f) {
    CriterionResult r = start(1, "mirs_regression");
    const std::vector<double> s = {10, 15, 20, 25};
    const std::vector<double> reference = {4.6, 1.4, 0.44, 0.14};
    std::vector<double> got;
    r.pass = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        got.push_back(mirs(SqueezeSpec(s[i]), f.gamma_db_per_km));
        r.pass = r.pass && std::abs(got.back() - reference[i]) <= 0.05;
    }
    r.expected = join(reference) + " km";
    r.got = join(got) + " km";
    r.tolerance = "abs 0.05 km";
    return r;
}

CriterionResult telescoping(const AcceptanceFixture &) {
    CriterionResult r = start(2, "telescoping_identity");
    double worst = 0.0;
    for (double s2 : {0.01, 0.05, 0.1}) {
        worst = std::max(worst, std::abs(logical_noise_variance(s2, 1.0, GkpParams{}) - s2));
    }
    r.expected = "Sigma2_Q(s2, G=1, sigma_G=0) = s2 for s2 in 0.01;0.05;0.1";
    r.got = "max abs deviation " + num(worst);
    r.tolerance = "1e-10";
    r.pass = worst <= 1e-10;
    return r;
}

CriterionResult oracle_equivalence(const AcceptanceFixture &f) {
    CriterionResult r = start(3, "oracle_equivalence");
    double worst_z = 0.0;
    std::string worst_at;
    std::size_t index = 0;
    int agree = 0;
    for (double s2 : {0.01, 0.02, 0.05, 0.1}) {
        for (double sg : {15.0, 20.0, kInf}) {
            for (double gain : {1.5, 2.0, 4.0}) {
                const GkpParams gkp{db(sg)};
                McConfig mc;
                mc.n_samples = f.mc_samples;
                mc.seed = substream_seed(f.seed, index++);
                mc.sigma2 = s2;
                mc.gain = gain;
                mc.sigma_G = gkp.sigma_G();
                r.seeds.push_back(mc.seed);
                const VarianceEstimate est = estimate_variance(mc, f.workers);
                const double analytic = logical_noise_variance(s2, gain, gkp);
                const double z = std::abs(est.variance - analytic) / est.standard_error;
                agree += z <= 3.0 ? 1 : 0;
                if (z > worst_z) {
                    worst_z = z;
                    worst_at = "sigma2=" + num(s2) + ",s_gkp=" + num(sg) + ",G=" + num(gain);
                }
            }
        }
    }
    r.expected = "|MC - series| <= 3 SE on 36 points at " + std::to_string(f.mc_samples) + " samples";
    r.got = std::to_string(agree) + "/36 agree; max |z| " + num(worst_z) + " at " + worst_at;
    r.tolerance = "3 SE";
    r.pass = agree == 36;
    return r;
}

CriterionResult amplifier_loss(const AcceptanceFixture &) {
    CriterionResult r = start(4, "amplifier_loss_identity");
    const GaussianState tmsv = tmsv_state(SqueezeSpec(15.0));
    double worst = 0.0;
    for (double eta : {0.1, 0.5, 0.9}) {
        const GaussianState composed = apply_loss(apply_amplifier(tmsv, 1, 1.0 / eta), 1, eta);
        const GaussianState additive = apply_additive_noise(tmsv, 1, sigma2_amplified(eta));
        worst = std::max(worst, max_abs_diff(composed.cov(), additive.cov()));
    }
    r.expected = "loss(eta) after amplifier(1/eta) == additive(1-eta), eta in 0.1;0.5;0.9";
    r.got = "max abs covariance deviation " + num(worst);
    r.tolerance = "1e-12";
    r.pass = worst <= 1e-12;
    return r;
}

CriterionResult fidelity_sanity(const AcceptanceFixture &) {
    CriterionResult r = start(5, "fidelity_sanity");
    const GaussianState tmsv = tmsv_state(SqueezeSpec(15.0));

    double self_dev = 0.0;
    for (const GaussianState &s : {GaussianState::vacuum(2), tmsv, GaussianState::thermal(3.0)}) {
        self_dev = std::max(self_dev, std::abs(uhlmann_fidelity(s, s) - 1.0));
    }

    // Both states are diagonal in the number basis, so F = (Σ_n √(p_n q_n))².
    double thermal_dev = 0.0;
    for (double n_th : {0.1, 1.0, 10.0}) {
        double overlap = 0.0;
        for (int n = 0; n < 400; ++n) {
            const double vacuum_p = n == 0 ? 1.0 : 0.0;
            const double thermal_p = std::pow(n_th / (n_th + 1.0), n) / (n_th + 1.0);
            overlap += std::sqrt(vacuum_p * thermal_p);
        }
        const double f = uhlmann_fidelity(GaussianState::vacuum(1), GaussianState::thermal(n_th));
        thermal_dev = std::max(thermal_dev, std::abs(f - overlap * overlap));
    }

    int decreasing = 0;
    double prev = 1.0 + 1e-9;
    for (int i = 0; i < 20; ++i) {
        const double noise = 0.01 * (i + 1);
        const double f = uhlmann_fidelity(tmsv, apply_additive_noise(tmsv, 1, noise));
        decreasing += f < prev ? 1 : 0;
        prev = f;
    }

    r.expected = "F(rho,rho)=1; F(vac,thermal N)=1/(1+N) for N in 0.1;1;10; F strictly decreasing in idler noise";
    r.got = "self dev " + num(self_dev) + "; thermal dev " + num(thermal_dev) + "; decreasing " +
            std::to_string(decreasing) + "/20";
    r.tolerance = "1e-9";
    r.pass = self_dev <= 1e-9 && thermal_dev <= 1e-9 && decreasing == 20;
    return r;
}

CriterionResult fidelity_ordering(const AcceptanceFixture &f) {
    CriterionResult r = start(6, "fidelity_ordering");
    const GaussianState tmsv = tmsv_state(SqueezeSpec(15.0));
    const GkpParams gkp{SqueezeSpec::infinite()};

    // (s, L_Δ, teleportation expected to win)
    struct Case {
        double s;
        double L_delta;
        bool teleport_wins;
    };
    const Case cases[] = {{kInf, 1.0, true}, {20.0, 1.0, true}, {20.0, 0.25, false}};
    std::string got;
    r.pass = true;
    for (const Case &c : cases) {
        const LinkParams l = link(c.L_delta, c.s, f);
        int holds = 0;
        for (int L = 1; L <= 100; ++L) {
            const CodeParams cp = code(L, c.L_delta, 1);
            const double fa = uhlmann_fidelity(tmsv, end_to_end_noise(l, cp, gkp, ChannelKind::amplified).apply(tmsv, 1));
            const double ft = uhlmann_fidelity(tmsv, end_to_end_noise(l, cp, gkp, ChannelKind::teleport).apply(tmsv, 1));
            holds += (c.teleport_wins ? ft >= fa : ft < fa) ? 1 : 0;
        }
        got += (got.empty() ? "" : "; ") + std::string("s=") + num(c.s) + ",L_delta=" + num(c.L_delta) + ": " +
               std::to_string(holds) + "/100";
        r.pass = r.pass && holds == 100;
    }
    r.expected = "F_T>=F_A (s=inf, L_delta=1); F_T>=F_A (s=20, L_delta=1); F_T<F_A (s=20, L_delta=0.25); L in 1..100 km";
    r.got = got;
    r.tolerance = "pointwise";
    return r;
}

CriterionResult layer_convergence(const AcceptanceFixture &f) {
    CriterionResult r = start(7, "layer_convergence");
    const double eta = transmissivity(1.0, f.gamma_db_per_km);
    const double sigma2 = sigma2_teleport(eta, SqueezeSpec(20.0));
    const std::vector<double> v = multilayer_trajectory(sigma2, 14, GkpParams{SqueezeSpec(20.0)});
    bool monotone = v.front() <= sigma2;
    for (std::size_t i = 1; i < v.size(); ++i) {
        monotone = monotone && v[i] <= v[i - 1];
    }
    const double rel = std::abs(v[13] - v[12]) / v[12];
    r.expected = "v_k nonincreasing, |v14 - v13|/v13 < 0.01 (s = s_gkp = 20 dB, L_delta = 1 km)";
    r.got = std::string(monotone ? "nonincreasing" : "NOT monotone") + "; v13=" + num(v[12]) + " v14=" + num(v[13]) +
            " rel " + num(rel);
    r.tolerance = "0.01 relative";
    r.pass = monotone && rel < 0.01;
    return r;
}

CriterionResult qi_limit(const AcceptanceFixture &) {
    CriterionResult r = start(8, "qi_6db_limit");
    CommParams p;
    p.kappa = 0.01;
    p.N_S = 0.001;
    p.N_B = 100.0;
    const QiHypotheses h = qi_hypotheses(p, IdlerChannel::identity());
    const double ratio = quantum_chernoff(h.absent, h.present).exponent() / ci_exponent(p);
    r.expected = "4";
    r.got = num(ratio);
    r.tolerance = "2% relative";
    r.pass = std::abs(ratio / 4.0 - 1.0) <= 0.02;
    return r;
}

CriterionResult qi_ordering(const AcceptanceFixture &f) {
    CriterionResult r = start(9, "qi_ordering");
    CommParams p;
    p.N_S = 0.01;
    p.N_B = 20.0;
    p.kappa = 0.01;
    const LinkParams l = link(1.0, 25.0, f);
    const GkpParams gkp{SqueezeSpec(25.0)};
    auto bound = [&](const IdlerChannel &idler) {
        const QiHypotheses h = qi_hypotheses(p, idler);
        return quantum_chernoff(h.absent, h.present);
    };
    const ChernoffBound ideal = bound(IdlerChannel::identity());
    const ChernoffBound qec13 = bound(end_to_end_noise(l, code(25.0, 1.0, 13), gkp, ChannelKind::teleport));
    const ChernoffBound qec1 = bound(end_to_end_noise(l, code(25.0, 1.0, 1), gkp, ChannelKind::teleport));
    const ChernoffBound direct = bound(end_to_end_noise(l, code(25.0, 1.0, 1), gkp, ChannelKind::direct));

    std::vector<long> grid;
    for (int i = 0; i < 30; ++i) {
        const long m = std::lround(std::pow(10.0, 1.0 + 6.0 * i / 29.0));
        if (grid.empty() || grid.back() != m) {
            grid.push_back(m);
        }
    }
    std::size_t holds = 0;
    for (long m : grid) {
        const double a = qi_error_bound(ideal, m);
        const double b = qi_error_bound(qec13, m);
        const double c = qi_error_bound(qec1, m);
        const double d = qi_error_bound(direct, m);
        holds += (a <= b && b <= c && c <= d) ? 1 : 0;
    }
    r.expected = "P_e ideal <= qec(k=13) <= qec(k=1) <= direct for M in logspace(1,7,30) (N_S=0.01, N_B=20, "
                 "kappa=0.01, L=25 km)";
    r.got = std::to_string(holds) + "/" + std::to_string(grid.size()) + " M values; Q_min " + num(ideal.overlap) +
            ";" + num(qec13.overlap) + ";" + num(qec1.overlap) + ";" + num(direct.overlap);
    r.tolerance = "pointwise";
    r.pass = holds == grid.size();
    return r;
}

CriterionResult qkd_threshold(const AcceptanceFixture &) {
    CriterionResult r = start(10, "qkd_threshold");
    double lo = 0.1;
    double hi = 1.0;
    if (!(qkd_skr(lo) > 0.0 && qkd_skr(hi) < 0.0)) {
        r.got = "no sign change in [0.1, 1]";
        r.expected = "0.389567";
        r.tolerance = "1e-5";
        return r;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (qkd_skr(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    r.expected = "0.389567";
    r.got = num(root);
    r.tolerance = "1e-5";
    r.pass = std::abs(root - 0.389567) <= 1e-5;
    return r;
}

CriterionResult qkd_distance(const AcceptanceFixture &f) {
    CriterionResult r = start(11, "qkd_max_distance");
    const double d = max_secure_distance(link(1.0, 25.0, f), GkpParams{SqueezeSpec(25.0)}, 13);
    r.expected = "596 km";
    r.got = num(d) + " km";
    r.tolerance = "15% relative";
    r.pass = std::abs(d / 596.0 - 1.0) <= 0.15;
    return r;
}

CriterionResult determinism(const AcceptanceFixture &f) {
    CriterionResult r = start(12, "determinism");
    const char *configs[] = {
        R"({"schema_version":1,"experiment":"fig3","params":{"s":[20,"inf"],"L_delta_km":{"linspace":[0.1,5,7]}}})",
        R"({"schema_version":1,"experiment":"fig4","params":{"s_gkp":10,"q":{"linspace":[-3,3,5]},"p":[0,1]}})",
        R"({"schema_version":1,"experiment":"fig5","params":{"r":15,"s":[20,"inf"],"L_delta_km":1,"L_km":[1,10,40]}})",
        R"({"schema_version":1,"experiment":"fig9","params":{"kappa":0.01,"N_B":20,"s":25,"k":[1,13],"L_delta_km":1,"L_km":25,"N_S":{"logspace":[-3,1,4]}}})",
        R"({"schema_version":1,"experiment":"fig10","params":{"kappa":0.01,"N_B":20,"N_S":0.01,"s":25,"L_delta_km":1,"L_km":25,"M":[10,1000,100000]}})",
        R"({"schema_version":1,"experiment":"fig11","params":{"s":25,"k":[1,13],"L_delta_km":1,"L_km":[10,100]}})",
        R"({"schema_version":1,"experiment":"oracle","seed":7,"params":{"sigma2":0.05,"s_gkp":20,"gain":[1,2],"n_samples":70000}})",
    };
    int identical = 0;
    int total = 0;
    for (const char *text : configs) {
        SweepConfig cfg = parse_config(nlohmann::json::parse(text));
        if (cfg.experiment == "oracle") {
            for (std::size_t i = 0; i < cfg.ranges.at("gain").size(); ++i) {
                r.seeds.push_back(substream_seed(cfg.seed, i));
            }
        }
        const std::string first = to_csv(run_experiment(cfg, 1));
        const std::string second = to_csv(run_experiment(cfg, std::max<std::size_t>(f.workers, 3)));
        identical += first == second ? 1 : 0;
        ++total;
    }
    r.expected = "byte-identical CSV on rerun (1 vs several workers)";
    r.got = std::to_string(identical) + "/" + std::to_string(total) + " experiments identical";
    r.tolerance = "exact";
    r.pass = identical == total;
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceFixture &fixture) {
    switch (id) {
        case 1: return mirs_regression(fixture);
        case 2: return telescoping(fixture);
        case 3: return oracle_equivalence(fixture);
        case 4: return amplifier_loss(fixture);
        case 5: return fidelity_sanity(fixture);
        case 6: return fidelity_ordering(fixture);
        case 7: return layer_convergence(fixture);
        case 8: return qi_limit(fixture);
        case 9: return qi_ordering(fixture);
        case 10: return qkd_threshold(fixture);
        case 11: return qkd_distance(fixture);
        case 12: return determinism(fixture);
        default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceFixture &fixture, const std::vector<int> &ids) {
    std::vector<int> order = ids;
    if (order.empty()) {
        for (int i = 1; i <= kAcceptanceCriteria; ++i) {
            order.push_back(i);
        }
    }
    std::sort(order.begin(), order.end());
    std::vector<CriterionResult> out;
    for (int id : order) {
        out.push_back(run_criterion(id, fixture));
    }
    return out;
}

std::string format_result(const CriterionResult &r) {
    std::ostringstream line;
    line << "id=" << r.id << "\tname=" << r.name << "\tpass=" << (r.pass ? "PASS" : "FAIL")
         << "\texpected=" << r.expected << "\tgot=" << r.got << "\ttolerance=" << r.tolerance << "\tseeds=";
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
        line << (i ? ";" : "") << r.seeds[i];
    }
    if (r.seeds.empty()) {
        line << "-";
    }
    return line.str();
}

}  // namespace cvrep
