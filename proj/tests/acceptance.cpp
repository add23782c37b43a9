// SPDX-License-Identifier: Apache-2.0
//
// stsfusion - space-time spreading aided decision fusion for wireless sensor networks
// Copyright (C) 2026 stsfusion contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Acceptance suite: reproduces the reported experiments at desk scale and
// checks every gate at its stated tolerance, printing one PASS/FAIL line
// per criterion. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stsfusion/report.hpp"
#include "stsfusion/stsfusion.hpp"
#include "support.hpp"

using namespace stsfusion;

namespace {

int g_failures = 0;
const int g_workers =
    static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %d: %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

struct CsvRow {
    std::string rule;
    double sweep_var = 0.0, pf0 = 0.0, pd0 = 0.0, hw = 0.0;
};

std::vector<CsvRow> read_curve_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read " + path);
    std::vector<CsvRow> rows;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        CsvRow row;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, row.rule, ',');
        std::getline(ls, tok, ',');
        row.sweep_var = std::stod(tok);
        std::getline(ls, tok, ',');
        row.pf0 = std::stod(tok);
        std::getline(ls, tok, ',');
        row.pd0 = std::stod(tok);
        std::getline(ls, tok, ',');
        row.hw = std::stod(tok);
        rows.push_back(row);
    }
    return rows;
}

/// pd/hw per (rule, sweep value) from a detection CSV.
std::map<std::string, std::map<double, CsvRow>> curve_table(const std::string& path) {
    std::map<std::string, std::map<double, CsvRow>> table;
    for (const CsvRow& row : read_curve_csv(path)) table[row.rule][row.sweep_var] = row;
    return table;
}

// ---- criterion 1: linearization identity -----------------------------------

void criterion1() {
    Timer t;
    Rng rng(2026);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int m = 1 + static_cast<int>(rng.below(8));
        const int n = 1 + static_cast<int>(rng.below(8));
        const int tt = 1 + static_cast<int>(rng.below(8));
        const Eigen::MatrixXcd g = draw_fading(n, m, rng);
        const DispersionSet set = generate_dispersion_set(m, tt, 1, rng);
        DecisionVector x(m);
        for (int k = 0; k < m; ++k) x[k] = rng.uniform() < 0.5 ? 1.0 : -1.0;
        const Eigen::MatrixXcd w = draw_noise(n, tt, 0.7, rng);
        const double rho = 1.0 / std::sqrt(n);

        const Eigen::MatrixXcd s = encode_block(x, set.matrices[0]).S;
        const Eigen::VectorXcd lhs = vec((std::sqrt(rho) * (g * s) + w).eval());
        const LinearizedModel model = linearize_received(w, g, set.matrices[0]);
        const Eigen::VectorXcd rhs =
            std::sqrt(rho) *
                (model.g_kron * (model.a_map * x.cast<std::complex<double>>())) +
            vec(w);
        worst = std::max(worst, (lhs - rhs).norm() / lhs.norm());
    }
    const double secs = t.seconds();
    report(1, "linearization identity", worst < 1e-12 && secs < 5.0,
           fmt("max relative error %.2e over 1000 systems", worst), secs);
}

// ---- criterion 2: oracle equivalence ---------------------------------------

void criterion2() {
    Timer t;
    Rng rng(7);
    double worst_llr = 0.0, worst_maxlog = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int m = 1 + static_cast<int>(rng.below(4));
        const auto prof = SensorProfile::iid(m, 0.4 + 0.4 * rng.uniform(),
                                             0.02 + 0.2 * rng.uniform());
        const auto in = testsupport::random_input(rng, m, 2 * m + 2, 0.5, 0.8, prof);
        const double llr = llr_optimum(in);
        const double llr_oracle = testsupport::naive_llr(in);
        worst_llr = std::max(worst_llr, std::abs(llr - llr_oracle) /
                                            std::max(1.0, std::abs(llr_oracle)));
        const double ml = maxlog_statistic(in);
        const double ml_oracle = testsupport::naive_maxlog(in);
        worst_maxlog = std::max(worst_maxlog, std::abs(ml - ml_oracle) /
                                                  std::max(1.0, std::abs(ml_oracle)));
    }
    const double secs = t.seconds();
    report(2, "optimum and max-log match brute-force oracles",
           worst_llr < 1e-9 && worst_maxlog < 1e-9 && secs < 5.0,
           fmt("max relative error: llr %.2e, max-log %.2e", worst_llr, worst_maxlog),
           secs);
}

// ---- criterion 3: perfect-sensor collapse -----------------------------------

void criterion3() {
    Timer t;
    Config cfg;
    cfg.M = cfg.T = cfg.Q = 4;
    cfg.N = 8;
    cfg.snr_db = 10.0;
    cfg.sensor_pd = {1.0};
    cfg.sensor_pf = {0.0};
    cfg.seed = 1;
    Rng rng(31);
    const DispersionSet set = generate_dispersion_set(cfg.M, cfg.T, cfg.Q, rng);
    const RuleMask mask = rule_bit(Rule::optimum) | rule_bit(Rule::mrc);
    const TrialBatch batch = run_trials(cfg, &set, mask, 1000, cfg.seed, g_workers);

    std::vector<double> opt = batch.h0(Rule::optimum);
    opt.insert(opt.end(), batch.h1(Rule::optimum).begin(), batch.h1(Rule::optimum).end());
    std::vector<double> mrc = batch.h0(Rule::mrc);
    mrc.insert(mrc.end(), batch.h1(Rule::mrc).begin(), batch.h1(Rule::mrc).end());
    const double tau = testsupport::kendall_tau(opt, mrc);
    report(3, "perfect sensors collapse optimum onto MRC", tau == 1.0,
           fmt("Kendall tau = %.12f over %zu pooled trials", tau, opt.size()),
           t.seconds());
}

// ---- criterion 4: deflection optimality --------------------------------------

void criterion4() {
    Timer t;
    Rng rng(17);
    double worst_excess = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const int m = 2 + static_cast<int>(rng.below(3));
        const int nt = m + 2 + static_cast<int>(rng.below(4));
        const auto prof = SensorProfile::iid(m, 0.45 + 0.4 * rng.uniform(),
                                             0.02 + 0.15 * rng.uniform());
        const auto in = testsupport::random_input(rng, m, nt, 0.5, 0.6, prof);
        for (int kind : {0, 1}) {
            const Eigen::VectorXcd r = wl_direction(in, kind);
            const double best = testsupport::deflection(in, kind, r);
            for (int p = 0; p < 200; ++p) {
                Eigen::VectorXcd v(nt);
                for (int k = 0; k < nt; ++k) v[k] = rng.cnormal();
                Eigen::VectorXcd dir(2 * nt);
                dir << v, v.conjugate();
                dir /= dir.norm();
                const Eigen::VectorXcd cand =
                    (p % 2 ? (r + 0.05 * dir).eval() : dir).normalized();
                const double d = testsupport::deflection(in, kind, cand);
                worst_excess = std::max(worst_excess, d / best - 1.0);
            }
        }
    }
    report(4, "widely linear deflection optimality", worst_excess <= 1e-6,
           fmt("worst perturbation excess %.2e over 20 instances x 200 directions",
               worst_excess),
           t.seconds());
}

// ---- criterion 5: fig3 qualitative reproduction -------------------------------

void criterion5() {
    Timer t;
    Config cfg = preset_experiment("fig3");
    cfg.trials = 10000;
    cfg.seed = 1;

    RunOptions opts;
    opts.outdir = "acceptance_out";
    opts.workers = g_workers;
    opts.name = "fig3";
    const RunArtifacts art = run_experiment(cfg, opts);

    const auto& gains = art.manifest["gain_ratios"]["all"]["0.05"];

    std::map<std::string, double> pd, hw, base_pd, ratio, miss_ratio;
    for (int r = 0; r < kRuleCount; ++r) {
        const std::string name{kRuleNames[r]};
        pd[name] = gains[name]["sts_pd0"].get<double>();
        hw[name] = gains[name]["sts_halfwidth"].get<double>();
        base_pd[name] = gains[name]["baseline_pd0"].get<double>();
        ratio[name] = gains[name]["ratio"].get<double>();
        miss_ratio[name] = gains[name]["miss_ratio"].get<double>();
    }

    bool ordering = true;
    std::ostringstream why;
    for (const std::string mid : {"maxlog", "wl0", "wl1", "cv-mmse"}) {
        const double slack_top = 2.0 * std::max(hw["opt"], hw[mid]);
        const double slack_bot = 2.0 * std::max(hw[mid], hw["mrc"]);
        if (pd["opt"] < pd[mid] - slack_top) {
            ordering = false;
            why << " opt<" << mid << ";";
        }
        if (pd[mid] < pd["mrc"] - slack_bot) {
            ordering = false;
            why << " " << mid << "<mrc;";
        }
    }
    bool sts_beats_baseline = true;
    for (int r = 0; r < kRuleCount; ++r) {
        const std::string name{kRuleNames[r]};
        if (!(pd[name] > base_pd[name])) {
            sts_beats_baseline = false;
            why << " " << name << " not above baseline;";
        }
    }
    // STS-vs-baseline gain of the optimum rule, measured on the miss
    // probability (the P_D0 quotient is capped at 1/P_D0_baseline = 1.12
    // here, so the >= 2 gain can only be carried by the miss reduction)
    const bool opt_gain = miss_ratio["opt"] >= 2.0;
    if (!opt_gain) why << " opt miss-ratio " << miss_ratio["opt"] << " < 2;";

    std::ostringstream ratios;
    for (int r = 0; r < kRuleCount; ++r) {
        const std::string name{kRuleNames[r]};
        ratios << name << " x" << fmt("%.2f", ratio[name]) << "/m"
               << fmt("%.2f", miss_ratio[name]) << (r + 1 < kRuleCount ? ", " : "");
    }
    report(5, "fig3 ordering, STS gain over baseline",
           ordering && sts_beats_baseline && opt_gain,
           fmt("P_D0@P_F0=0.05: opt %.3f mrc %.3f baseline-opt %.3f; gains pd/miss: %s%s",
               pd["opt"], pd["mrc"], base_pd["opt"], ratios.str().c_str(),
               why.str().c_str()),
           t.seconds());
}

// ---- criterion 6: fig5 trend ---------------------------------------------------

void criterion6() {
    Timer t;
    Config base = preset_experiment("fig5");
    base.M = 8;
    base.m_variants.clear();
    base.trials = 10000;
    base.seed = 1;

    RunOptions opts;
    opts.outdir = "acceptance_out";
    opts.workers = g_workers;
    opts.name = "fig5";
    run_experiment(base, opts);
    const auto table = curve_table("acceptance_out/fig5_detection.csv");

    bool monotone = true;
    std::ostringstream why;
    for (int r = 0; r < kRuleCount; ++r) {
        const auto& series = table.at(std::string(kRuleNames[r]));
        const CsvRow* prev = nullptr;
        for (const auto& [n, row] : series) {
            if (prev && row.pd0 < prev->pd0 - 2.0 * std::max(prev->hw, row.hw)) {
                monotone = false;
                why << " " << kRuleNames[r] << " drops at N=" << n << ";";
            }
            prev = &row;
        }
    }
    const double mrc100 = table.at("mrc").at(100.0).pd0;
    bool mrc_is_min = true;
    for (int r = 0; r < kRuleCount; ++r) {
        if (static_cast<Rule>(r) == Rule::mrc) continue;
        if (mrc100 > table.at(std::string(kRuleNames[r])).at(100.0).pd0) {
            mrc_is_min = false;
            why << " mrc above " << kRuleNames[r] << " at N=100;";
        }
    }
    report(6, "fig5 trend: P_D0 grows with N, MRC worst at N=100",
           monotone && mrc_is_min,
           fmt("P_D0@N=100: opt %.3f, mrc %.3f%s", table.at("opt").at(100.0).pd0, mrc100,
               why.str().c_str()),
           t.seconds());
}

// ---- criterion 7: fig6 trend ----------------------------------------------------

void criterion7() {
    Timer t;
    Config base = preset_experiment("fig6");
    base.trials = 10000;
    base.seed = 1;

    RunOptions opts;
    opts.outdir = "acceptance_out";
    opts.workers = g_workers;
    opts.name = "fig6";
    run_experiment(base, opts);
    const auto table = curve_table("acceptance_out/fig6_detection.csv");
    const auto at20 = [&](const char* rule) { return table.at(rule).at(20.0).pd0; };

    const double opt = at20("opt");
    std::ostringstream why;
    bool close_ok = true;
    for (const char* r : {"cv-mmse", "maxlog", "wl1"}) {
        if (opt - at20(r) > 0.05) {
            close_ok = false;
            why << " " << r << " gap " << fmt("%.3f", opt - at20(r)) << ";";
        }
    }
    bool far_ok = true;
    for (const char* r : {"mrc", "cv-ml"}) {
        if (opt - at20(r) <= 0.05) {
            far_ok = false;
            why << " " << r << " too close (" << fmt("%.3f", opt - at20(r)) << ");";
        }
    }
    report(7, "fig6 trend: near-optimal rules within 0.05 at 20 dB, MRC/CV-ML not",
           close_ok && far_ok,
           fmt("P_D0@20dB: opt %.3f cv-mmse %.3f maxlog %.3f wl1 %.3f wl0 %.3f "
               "mrc %.3f cv-ml %.3f mmrc %.3f%s",
               opt, at20("cv-mmse"), at20("maxlog"), at20("wl1"), at20("wl0"),
               at20("mrc"), at20("cv-ml"), at20("mmrc"), why.str().c_str()),
           t.seconds());
}

// ---- criterion 8: statistical sanity ----------------------------------------------

void criterion8() {
    Timer t;
    bool pass = true;
    std::ostringstream why;

    // priors sum to 1 over all 2^12 decision vectors
    Rng rng(41);
    SensorProfile prof;
    prof.pd = Eigen::VectorXd(12);
    prof.pf = Eigen::VectorXd(12);
    for (int i = 0; i < 12; ++i) {
        prof.pd[i] = 0.3 + 0.6 * rng.uniform();
        prof.pf[i] = 0.01 + 0.2 * rng.uniform();
    }
    for (const auto h : {Hypothesis::h0, Hypothesis::h1}) {
        double total = 0.0;
        for (const auto& x : testsupport::all_decision_vectors(12))
            total += decision_prior(x, h, prof);
        if (std::abs(total - 1.0) >= 1e-12) {
            pass = false;
            why << fmt(" prior sum off by %.2e;", total - 1.0);
        }
    }

    // empirical sensor rates at the reported operating point
    const auto iid = SensorProfile::iid(1, 0.5, 0.05);
    long k1 = 0, k0 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (draw_decisions(Hypothesis::h1, iid, rng)[0] > 0) ++k1;
        if (draw_decisions(Hypothesis::h0, iid, rng)[0] > 0) ++k0;
    }
    const double rate1 = static_cast<double>(k1) / n;
    const double rate0 = static_cast<double>(k0) / n;
    if (std::abs(rate1 - 0.5) >= 0.005 || std::abs(rate0 - 0.05) >= 0.005) {
        pass = false;
        why << fmt(" rates (%.4f, %.4f);", rate1, rate0);
    }

    // ROC curves monotone and endpoint anchored
    Config cfg;
    cfg.M = cfg.T = cfg.Q = 4;
    cfg.N = 8;
    cfg.snr_db = 10.0;
    Rng srng(5);
    const DispersionSet set = generate_dispersion_set(4, 4, 4, srng);
    const TrialBatch batch =
        run_trials(cfg, &set, rule_bit(Rule::optimum), 4000, 2, g_workers);
    const RocCurve curve = estimate_roc(batch, Rule::optimum);
    if (curve.points.front().pf0 != 0.0 || curve.points.front().pd0 != 0.0 ||
        curve.points.back().pf0 != 1.0 || curve.points.back().pd0 != 1.0) {
        pass = false;
        why << " roc endpoints;";
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        if (curve.points[i].pf0 < curve.points[i - 1].pf0 ||
            curve.points[i].pd0 < curve.points[i - 1].pd0) {
            pass = false;
            why << " roc monotonicity;";
            break;
        }

    report(8, "statistical sanity (priors, rates, ROC shape)", pass,
           pass ? fmt("rates (%.4f, %.4f), priors exhaustive at M=12", rate1, rate0)
                : why.str(),
           t.seconds());
}

// ---- criterion 9: determinism across worker counts ---------------------------------

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void criterion9() {
    Timer t;
    Config cfg = preset_experiment("fig3");
    cfg.trials = 2000;
    cfg.dispersion_candidates = 2;
    cfg.seed = 42;

    RunOptions a;
    a.outdir = "acceptance_out/det_a";
    a.workers = 1;
    a.name = "fig3";
    RunOptions b = a;
    b.outdir = "acceptance_out/det_b";
    b.workers = 3;
    run_experiment(cfg, a);
    run_experiment(cfg, b);

    const bool same_roc = slurp("acceptance_out/det_a/fig3_roc.csv") ==
                          slurp("acceptance_out/det_b/fig3_roc.csv");
    const bool same_base = slurp("acceptance_out/det_a/fig3_nosts_roc.csv") ==
                           slurp("acceptance_out/det_b/fig3_nosts_roc.csv");
    report(9, "identical CSV output for any worker count", same_roc && same_base,
           same_roc && same_base ? "1 vs 3 workers, byte-identical curves"
                                 : "outputs differ between worker counts",
           t.seconds());
}

}  // namespace

int main() {
    std::printf("stsfusion acceptance suite (seed-pinned, %d workers)\n", g_workers);
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d/9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
