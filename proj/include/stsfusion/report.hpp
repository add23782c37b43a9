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
// Experiment orchestration and plot-data emission. Curve files share one
// row schema (rule, sweep_var, P_F0, P_D0, ci_halfwidth, n_trials, seed)
// in CSV or JSON form; every run also writes a JSON manifest sufficient to
// reproduce it bit for bit.

#ifndef STSFUSION_REPORT_HPP
#define STSFUSION_REPORT_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "stsfusion/config.hpp"
#include "stsfusion/simulate.hpp"

namespace stsfusion {

struct RunOptions {
    std::string outdir = "out";
    std::string format = "csv";  // csv | json
    int workers = 1;
    bool dump_channel = false;
    std::string dispersion_in;      // path of a saved set to reuse (skips selection)
    bool save_dispersion = false;   // write the selected set(s) next to the curves
    std::string name = "run";       // file-name stem
};

struct CurveRow {
    std::string rule;
    double sweep_var = 0.0;
    double pf0 = 0.0;
    double pd0 = 0.0;
    double ci_halfwidth = 0.0;
    long n_trials = 0;
    std::uint64_t seed = 0;
};

struct RunArtifacts {
    nlohmann::json manifest;
    std::vector<std::string> files;  // absolute or outdir-relative paths written
};

namespace detail {

inline void write_rows_csv(const std::string& path, const std::vector<CurveRow>& rows) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    os << "rule,sweep_var,P_F0,P_D0,ci_halfwidth,n_trials,seed\n";
    for (const auto& r : rows)
        os << r.rule << ',' << format_double(r.sweep_var) << ',' << format_double(r.pf0)
           << ',' << format_double(r.pd0) << ',' << format_double(r.ci_halfwidth) << ','
           << r.n_trials << ',' << r.seed << '\n';
}

inline void write_rows_json(const std::string& path, const std::vector<CurveRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"rule", r.rule},
                       {"sweep_var", r.sweep_var},
                       {"P_F0", r.pf0},
                       {"P_D0", r.pd0},
                       {"ci_halfwidth", r.ci_halfwidth},
                       {"n_trials", r.n_trials},
                       {"seed", r.seed}});
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    os << arr.dump(2) << '\n';
}

inline std::string write_rows(const std::string& dir, const std::string& stem,
                              const std::string& format,
                              const std::vector<CurveRow>& rows) {
    const std::string path = dir + "/" + stem + (format == "json" ? ".json" : ".csv");
    if (format == "json")
        write_rows_json(path, rows);
    else
        write_rows_csv(path, rows);
    return path;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string pf_key(double pf) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", pf);
    return buf;
}

inline std::vector<Rule> rules_of(RuleMask mask) {
    std::vector<Rule> out;
    for (int r = 0; r < kRuleCount; ++r)
        if (mask & (1u << r)) out.push_back(static_cast<Rule>(r));
    return out;
}

}  // namespace detail

/**
 * Runs the experiment described by the config: a single ROC (optionally with
 * a no-STS companion and per-rule gain ratios), a single detection point, or
 * a detection sweep over N / SNR; repeated per M variant. Writes curve files
 * plus a manifest and returns everything that was written. Partial outputs
 * are removed if any stage throws.
 */
inline RunArtifacts run_experiment(const Config& base, const RunOptions& opts) {
    validate_config(base);
    std::filesystem::create_directories(opts.outdir);
    const auto t_start = std::chrono::steady_clock::now();

    RunArtifacts art;
    art.manifest["tool"] = "stsfusion";
    art.manifest["version"] = kToolVersion;
    art.manifest["name"] = opts.name;
    art.manifest["seed"] = base.seed;
    art.manifest["workers"] = opts.workers;
    art.manifest["config_text"] = write_config(base);
    art.manifest["runs"] = nlohmann::json::array();

    const RuleMask mask = base.rule_mask();
    const std::vector<Rule> rules = detail::rules_of(mask);

    std::optional<DispersionSet> provided;
    if (!opts.dispersion_in.empty()) provided = load_dispersion_set(opts.dispersion_in);

    try {
        std::vector<int> variants = base.m_variants.empty()
                                        ? std::vector<int>{base.M}
                                        : base.m_variants;
        for (int mv : variants) {
            Config vc = base;
            vc.M = mv;
            validate_config(vc);
            const std::string stem =
                opts.name + (variants.size() > 1 ? "_M" + std::to_string(mv) : "");

            // Dispersion set chosen once per variant (it depends on (M, T, Q)
            // only) and reused across every sweep point.
            std::optional<DispersionSet> selected;
            const DispersionSet* set = nullptr;
            nlohmann::json selection_info;
            if (vc.sts_enabled) {
                if (provided) {
                    set = &*provided;
                    selection_info["dispersion"] = "provided";
                } else {
                    SelectedDispersion sel = select_dispersion_set(
                        vc, vc.dispersion_candidates, vc.seed, opts.workers);
                    selection_info["dispersion_candidate"] = sel.candidate_index;
                    selection_info["dispersion_pilot_pd0"] = sel.score;
                    selected = std::move(sel.set);
                    set = &*selected;
                }
                selection_info["dispersion_hash"] =
                    detail::hash_hex(dispersion_hash(*set));
                if (opts.save_dispersion) {
                    const std::string p = opts.outdir + "/" + stem + "_dispersion.txt";
                    save_dispersion_set(*set, p);
                    art.files.push_back(p);
                }
            }

            // one sweep point: runs the batch and logs the run entry
            const auto run_point = [&](const Config& pc, double sweep_var) {
                nlohmann::json entry = selection_info;
                entry["variant_M"] = pc.M;
                entry["sweep_var"] = sweep_var;
                TrialBatch batch = run_trials(pc, pc.sts_enabled ? set : nullptr, mask,
                                              pc.trials, pc.seed, opts.workers);
                art.manifest["runs"].push_back(entry);
                return batch;
            };

            if (vc.sweep == "none" && vc.experiment == "roc") {
                const TrialBatch batch = run_point(vc, vc.snr_db);
                std::vector<CurveRow> rows;
                for (Rule r : rules) {
                    const RocCurve curve = estimate_roc(batch, r, vc.n_thresholds);
                    for (const RocPoint& pt : curve.points)
                        rows.push_back({std::string(kRuleNames[static_cast<int>(r)]),
                                        vc.snr_db, pt.pf0, pt.pd0, pt.pd_halfwidth,
                                        batch.n_trials, vc.seed});
                }
                art.files.push_back(
                    detail::write_rows(opts.outdir, stem + "_roc", opts.format, rows));

                if (vc.baseline_companion) {
                    // No-STS companion: M sensors superimpose in a single slot,
                    // holding the per-sensor energy budget of one T-slot block
                    // (rho) while reporting every slot, i.e. rho/M per report.
                    // Receiver noise is unchanged.
                    Config bc = vc;
                    bc.sts_enabled = false;
                    bc.sigma_w2_override = vc.sigma_w2();
                    bc.rho_override = vc.rho() / static_cast<double>(vc.M);
                    const TrialBatch base_batch = run_point(bc, bc.snr_db);
                    std::vector<CurveRow> brows;
                    for (Rule r : rules) {
                        const RocCurve curve = estimate_roc(base_batch, r, bc.n_thresholds);
                        for (const RocPoint& pt : curve.points)
                            brows.push_back({std::string(kRuleNames[static_cast<int>(r)]),
                                             bc.snr_db, pt.pf0, pt.pd0, pt.pd_halfwidth,
                                             base_batch.n_trials, bc.seed});
                    }
                    art.files.push_back(detail::write_rows(
                        opts.outdir, stem + "_nosts_roc", opts.format, brows));

                    // per-rule STS-vs-baseline detection gains at fixed P_F0;
                    // operating points the trial count cannot calibrate are
                    // skipped and marked
                    nlohmann::json gains;
                    for (double pf : {0.01, 0.05, 0.1}) {
                        if (pf * static_cast<double>(batch.n_trials) < 20.0) {
                            gains[detail::pf_key(pf)] = "insufficient trials";
                            continue;
                        }
                        nlohmann::json at_pf;
                        for (Rule r : rules) {
                            const double g_sts = calibrate_threshold(batch, r, pf);
                            const double g_base = calibrate_threshold(base_batch, r, pf);
                            const DetectionPoint sts = detection_point(batch, r, g_sts);
                            const DetectionPoint nosts =
                                detection_point(base_batch, r, g_base);
                            at_pf[std::string(kRuleNames[static_cast<int>(r)])] = {
                                {"sts_pd0", sts.pd0},
                                {"sts_halfwidth", sts.pd_halfwidth},
                                {"baseline_pd0", nosts.pd0},
                                {"baseline_halfwidth", nosts.pd_halfwidth},
                                {"ratio", nosts.pd0 > 0.0 ? sts.pd0 / nosts.pd0
                                                          : std::numeric_limits<double>::infinity()},
                                {"miss_ratio",
                                 sts.pd0 < 1.0 ? (1.0 - nosts.pd0) / (1.0 - sts.pd0)
                                               : std::numeric_limits<double>::infinity()}};
                        }
                        gains[detail::pf_key(pf)] = at_pf;
                    }
                    art.manifest["gain_ratios"][variants.size() > 1
                                                    ? "M" + std::to_string(mv)
                                                    : "all"] = gains;
                }
            } else {
                // detection experiment: single point or sweep
                const std::vector<double> values = vc.sweep == "none"
                                                       ? std::vector<double>{vc.snr_db}
                                                       : vc.sweep_values;
                std::vector<CurveRow> rows;
                for (double v : values) {
                    Config pc = vc;
                    if (vc.sweep == "N")
                        pc.N = static_cast<int>(v);
                    else if (vc.sweep == "snr_db")
                        pc.snr_db = v;
                    const TrialBatch batch = run_point(pc, v);
                    for (Rule r : rules) {
                        const double gamma =
                            calibrate_threshold(batch, r, pc.target_pf0);
                        const DetectionPoint pt = detection_point(batch, r, gamma);
                        rows.push_back({std::string(kRuleNames[static_cast<int>(r)]), v,
                                        pt.pf0, pt.pd0, pt.pd_halfwidth, batch.n_trials,
                                        pc.seed});
                    }
                }
                art.files.push_back(detail::write_rows(opts.outdir, stem + "_detection",
                                                       opts.format, rows));
            }
        }

        if (opts.dump_channel) {
            Rng rng(derive_seed(base.seed, stream::kDump));
            const DeploymentGeometry geo =
                deploy_sensors(base.M, base.phi_min, base.phi_max, rng);
            const LargeScaleFading ls = large_scale_fading(
                geo, base.eta, base.mu_lambda_db, base.sigma_lambda_db, rng);
            const ChannelRealization ch = realize_channel(
                base.N, ls, base.sigma_e2_effective(), base.sigma_w2(), rng);
            const std::string path = opts.outdir + "/" + opts.name + "_channel.txt";
            std::ofstream os(path);
            if (!os) throw Error("cannot open '" + path + "' for writing");
            os << "# one channel realization (N = " << base.N << ", M = " << base.M
               << ")\n";
            os << "# lambda (large-scale coefficients)\n";
            for (Eigen::Index i = 0; i < ls.lambda.size(); ++i)
                os << format_double(ls.lambda[i]) << (i + 1 < ls.lambda.size() ? " " : "\n");
            os << "# G\n";
            write_complex_matrix(os, ch.G);
            os << "# G_hat\n";
            write_complex_matrix(os, ch.G_hat);
            art.files.push_back(path);
        }

        const auto t_end = std::chrono::steady_clock::now();
        art.manifest["duration_seconds"] =
            std::chrono::duration<double>(t_end - t_start).count();
        art.manifest["files"] = art.files;

        const std::string manifest_path =
            opts.outdir + "/" + opts.name + "_manifest.json";
        {
            std::ofstream os(manifest_path);
            if (!os) throw Error("cannot open '" + manifest_path + "' for writing");
            os << art.manifest.dump(2) << '\n';
        }
        art.files.push_back(manifest_path);
    } catch (...) {
        // no partial outputs on failure
        for (const std::string& f : art.files) {
            std::error_code ec;
            std::filesystem::remove(f, ec);
        }
        throw;
    }
    return art;
}

}  // namespace stsfusion

#endif  // STSFUSION_REPORT_HPP
