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
// Conditioned Monte-Carlo engine. H0 and H1 are simulated in separate runs
// (the performance measures are conditional probabilities, so no hypothesis
// prior is needed). Each trial frame draws its own deployment and shadowing;
// fast fading, decisions, the active dispersion index and noise are redrawn
// per block. Every (hypothesis, frame) pair gets an RNG substream derived
// from the master seed, so results are independent of worker count.

#ifndef STSFUSION_SIMULATE_HPP
#define STSFUSION_SIMULATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

#include "stsfusion/channel.hpp"
#include "stsfusion/config.hpp"
#include "stsfusion/dispersion.hpp"
#include "stsfusion/encoding.hpp"
#include "stsfusion/fusion.hpp"
#include "stsfusion/sensors.hpp"

namespace stsfusion {

namespace stream {
// substream tags for derive_seed
inline constexpr std::uint64_t kTrial = 1;
inline constexpr std::uint64_t kDeployment = 2;
inline constexpr std::uint64_t kDispersion = 3;
inline constexpr std::uint64_t kPilot = 4;
inline constexpr std::uint64_t kDump = 5;
}  // namespace stream

/// Per-rule statistic arrays under both hypotheses; reproducible from
/// (config, master_seed). n_trials = frames * L_f block statistics.
struct TrialBatch {
    long n_frames = 0;
    long n_trials = 0;
    std::uint64_t master_seed = 0;
    RuleMask rules = 0;
    std::array<std::array<std::vector<double>, 2>, kRuleCount> stats;

    const std::vector<double>& of(Rule r, Hypothesis h) const {
        return stats[static_cast<int>(r)][static_cast<int>(h)];
    }
    const std::vector<double>& h0(Rule r) const { return of(r, Hypothesis::h0); }
    const std::vector<double>& h1(Rule r) const { return of(r, Hypothesis::h1); }
};

/// Optional per-block recording used by tests to inspect frame structure.
struct FrameTrace {
    std::vector<Eigen::VectorXd> lambda;
    std::vector<Eigen::MatrixXcd> fading;
};

namespace detail {

struct EngineContext {
    SystemConfig sys;
    SensorProfile profile;
    double eta, mu_lambda_db, sigma_lambda_db, phi_min, phi_max;
    int exhaustive_limit;
    RuleMask rules;
    const DispersionSet* set;  // null in baseline mode
};

inline EngineContext make_context(const Config& cfg, const DispersionSet* set,
                                  RuleMask rules) {
    EngineContext ctx{cfg.system(), cfg.profile(), cfg.eta,     cfg.mu_lambda_db,
                      cfg.sigma_lambda_db,         cfg.phi_min, cfg.phi_max,
                      cfg.exhaustive_limit,        rules,       set};
    if (ctx.sys.sts_enabled) {
        if (!set) throw ValidationError("dispersion", "STS mode requires a dispersion set");
        if (set->sensors() != ctx.sys.M || set->block_length() != ctx.sys.T ||
            set->count() != ctx.sys.Q)
            throw DimensionMismatch("dispersion set does not match (M, T, Q)");
    }
    return ctx;
}

/// Simulates one frame: large-scale state held fixed, L_f blocks evaluated.
inline void simulate_frame(const EngineContext& ctx, Hypothesis h, Rng& rng,
                           const LargeScaleFading* fixed_ls,
                           std::vector<FusionOutcome>& out, FrameTrace* trace = nullptr) {
    const SystemConfig& sys = ctx.sys;
    const std::complex<double> sqrho = std::sqrt(sys.rho);
    LargeScaleFading ls;
    if (fixed_ls) {
        ls = *fixed_ls;
    } else {
        const DeploymentGeometry geo =
            deploy_sensors(sys.M, ctx.phi_min, ctx.phi_max, rng);
        ls = large_scale_fading(geo, ctx.eta, ctx.mu_lambda_db, ctx.sigma_lambda_db, rng);
    }

    out.clear();
    out.reserve(static_cast<std::size_t>(sys.L_f));
    for (int l = 0; l < sys.L_f; ++l) {
        const ChannelRealization ch =
            realize_channel(sys.N, ls, sys.sigma_e2, sys.sigma_w2, rng);
        const DecisionVector x = draw_decisions(h, ctx.profile, rng);

        FusionInput in;
        if (sys.sts_enabled) {
            const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(sys.Q)));
            const Eigen::MatrixXcd& a = ctx.set->matrices[static_cast<std::size_t>(q)];
            const EncodedBlock block = encode_block(x, a, q + 1);
            const Eigen::MatrixXcd y_block =
                sqrho * (ch.G * block.S) + draw_noise(sys.N, sys.T, sys.sigma_w2, rng);
            in.y = vec(y_block);
            in.signatures = effective_channel(ch.G_hat, a);
        } else {
            const EncodedBlock block = baseline_encode(x);
            const Eigen::MatrixXcd y_block =
                sqrho * (ch.G * block.S) + draw_noise(sys.N, 1, sys.sigma_w2, rng);
            in.y = y_block.col(0);
            in.signatures = ch.G_hat;
        }
        in.n_antennas = sys.N;
        in.rho = sys.rho;
        in.sigma_w2 = sys.sigma_w2;
        in.profile = ctx.profile;
        in.exhaustive_limit = ctx.exhaustive_limit;

        if (trace) {
            trace->lambda.push_back(ls.lambda);
            trace->fading.push_back(ch.H);
        }
        out.push_back(evaluate_rules(in, ctx.rules));
    }
}

}  // namespace detail

/**
 * Runs n_frames Monte-Carlo frames under each hypothesis and records every
 * requested rule's statistic. Frames are distributed over `workers` threads;
 * the per-frame RNG substreams make the output identical for any worker
 * count.
 */
inline TrialBatch run_trials(const Config& cfg, const DispersionSet* set, RuleMask rules,
                             long n_frames, std::uint64_t seed, int workers = 1) {
    if (n_frames < 1) throw ValidationError("trials", "must be at least 1");
    const detail::EngineContext ctx = detail::make_context(cfg, set, rules);

    TrialBatch batch;
    batch.n_frames = n_frames;
    batch.n_trials = n_frames * ctx.sys.L_f;
    batch.master_seed = seed;
    batch.rules = rules;
    for (int r = 0; r < kRuleCount; ++r)
        if (rules & (1u << r))
            for (int h = 0; h < 2; ++h)
                batch.stats[r][h].assign(static_cast<std::size_t>(batch.n_trials), 0.0);

    LargeScaleFading fixed_ls;
    const bool use_fixed = cfg.fixed_deployment;
    if (use_fixed) {
        Rng rng(derive_seed(seed, stream::kDeployment));
        const DeploymentGeometry geo =
            deploy_sensors(ctx.sys.M, ctx.phi_min, ctx.phi_max, rng);
        fixed_ls = large_scale_fading(geo, ctx.eta, ctx.mu_lambda_db,
                                      ctx.sigma_lambda_db, rng);
    }

    std::mutex err_mutex;
    std::exception_ptr first_error;
    const auto work = [&](long lo, long hi) {
        try {
            std::vector<FusionOutcome> outcomes;
            for (long f = lo; f < hi; ++f) {
                for (int h = 0; h < 2; ++h) {
                    Rng rng(derive_seed(seed, stream::kTrial,
                                        static_cast<std::uint64_t>(h),
                                        static_cast<std::uint64_t>(f)));
                    detail::simulate_frame(ctx, static_cast<Hypothesis>(h), rng,
                                           use_fixed ? &fixed_ls : nullptr, outcomes);
                    for (int l = 0; l < ctx.sys.L_f; ++l)
                        for (int r = 0; r < kRuleCount; ++r)
                            if (rules & (1u << r))
                                batch.stats[r][h][static_cast<std::size_t>(
                                    f * ctx.sys.L_f + l)] =
                                    outcomes[static_cast<std::size_t>(l)].gamma[r];
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    const int nw = static_cast<int>(std::max<long>(1, std::min<long>(workers, n_frames)));
    if (nw == 1) {
        work(0, n_frames);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int w = 0; w < nw; ++w) {
            const long lo = n_frames * w / nw;
            const long hi = n_frames * (w + 1) / nw;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return batch;
}

// ---- estimators ------------------------------------------------------------

/// 95% Wilson score interval half-width for k successes out of n.
inline double wilson_halfwidth(long successes, long n, double z = 1.959963984540054) {
    if (n <= 0) return 0.0;
    const double phat = static_cast<double>(successes) / static_cast<double>(n);
    const double z2 = z * z;
    const double nn = static_cast<double>(n);
    return z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

struct RocPoint {
    double pf0 = 0.0, pd0 = 0.0;
    double pf_halfwidth = 0.0, pd_halfwidth = 0.0;
};

/// Empirical ROC: (P_F0, P_D0) exceedance pairs, weakly increasing in P_F0,
/// anchored at (0,0) and (1,1).
struct RocCurve {
    Rule rule = Rule::optimum;
    long n_trials = 0;
    std::vector<RocPoint> points;
};

namespace detail {

inline long count_above(const std::vector<double>& sorted, double gamma) {
    return static_cast<long>(sorted.end() -
                             std::upper_bound(sorted.begin(), sorted.end(), gamma));
}

}  // namespace detail

/// Threshold sweep over a quantile grid of the H0 sample (n_points levels).
inline RocCurve estimate_roc(const TrialBatch& batch, Rule rule, int n_points = 200) {
    if (batch.n_trials < 1) throw InsufficientTrials("empty trial batch");
    std::vector<double> s0 = batch.h0(rule);
    std::vector<double> s1 = batch.h1(rule);
    std::sort(s0.begin(), s0.end());
    std::sort(s1.begin(), s1.end());
    const long n0 = static_cast<long>(s0.size());
    const long n1 = static_cast<long>(s1.size());

    RocCurve curve;
    curve.rule = rule;
    curve.n_trials = batch.n_trials;
    curve.points.push_back({0.0, 0.0, wilson_halfwidth(0, n0), wilson_halfwidth(0, n1)});
    // descending thresholds => weakly increasing exceedance fractions
    for (int j = n_points - 1; j >= 0; --j) {
        const auto idx = static_cast<std::size_t>(
            (static_cast<long long>(j) * (n0 - 1)) / std::max(1, n_points - 1));
        const double gamma = s0[idx];
        const long k0 = detail::count_above(s0, gamma);
        const long k1 = detail::count_above(s1, gamma);
        curve.points.push_back({static_cast<double>(k0) / static_cast<double>(n0),
                                static_cast<double>(k1) / static_cast<double>(n1),
                                wilson_halfwidth(k0, n0), wilson_halfwidth(k1, n1)});
    }
    curve.points.push_back(
        {1.0, 1.0, wilson_halfwidth(n0, n0), wilson_halfwidth(n1, n1)});
    return curve;
}

/// Empirical (1 - target) quantile of the H0 statistic; the achieved false
/// alarm is at most the target (within one order statistic).
inline double calibrate_threshold(const std::vector<double>& h0_stats, double target_pf0) {
    const long n = static_cast<long>(h0_stats.size());
    if (!(target_pf0 > 0.0 && target_pf0 < 1.0))
        throw ValidationError("target_pf0", "must lie in (0, 1)");
    if (target_pf0 * static_cast<double>(n) < 20.0)
        throw InsufficientTrials("need target_pf0 * n_trials >= 20 H0 statistics");
    std::vector<double> sorted = h0_stats;
    std::sort(sorted.begin(), sorted.end());
    const long k = static_cast<long>(target_pf0 * static_cast<double>(n));
    return sorted[static_cast<std::size_t>(n - k - 1)];
}

inline double calibrate_threshold(const TrialBatch& batch, Rule rule, double target_pf0) {
    return calibrate_threshold(batch.h0(rule), target_pf0);
}

/// One point of a detection curve: P_D0 (and achieved P_F0) at a threshold.
struct DetectionPoint {
    double pd0 = 0.0, pd_halfwidth = 0.0;
    double pf0 = 0.0, pf_halfwidth = 0.0;
    long n_trials = 0;
};

inline DetectionPoint detection_point(const TrialBatch& batch, Rule rule, double gamma) {
    const auto& s1 = batch.h1(rule);
    const auto& s0 = batch.h0(rule);
    const long n1 = static_cast<long>(s1.size());
    const long n0 = static_cast<long>(s0.size());
    const long k1 = static_cast<long>(
        std::count_if(s1.begin(), s1.end(), [&](double v) { return v > gamma; }));
    const long k0 = static_cast<long>(
        std::count_if(s0.begin(), s0.end(), [&](double v) { return v > gamma; }));
    return {static_cast<double>(k1) / static_cast<double>(n1), wilson_halfwidth(k1, n1),
            static_cast<double>(k0) / static_cast<double>(n0), wilson_halfwidth(k0, n0),
            batch.n_trials};
}

/// Detection curve over a swept variable (N or SNR) at a fixed target P_F0.
struct DetectionCurve {
    Rule rule = Rule::optimum;
    double target_pf0 = 0.01;
    std::vector<double> sweep_values;
    std::vector<DetectionPoint> points;
};

// ---- dispersion-set selection ----------------------------------------------

struct SelectedDispersion {
    DispersionSet set;
    int candidate_index = 0;  // 0-based
    double score = 0.0;       // optimum-rule P_D0 at P_F0 = 0.01
};

/**
 * Repeated random selection: draws n_candidates random sets, scores each by
 * the optimum rule's P_D0 at P_F0 = 0.01 on a pilot run, and returns the
 * best (ties broken by lowest candidate index).
 */
inline SelectedDispersion select_dispersion_set(const Config& cfg, int n_candidates,
                                                std::uint64_t seed, int workers = 1) {
    if (n_candidates < 1)
        throw ValidationError("dispersion_candidates", "must be at least 1");
    SelectedDispersion best;
    bool have_best = false;
    for (int cand = 0; cand < n_candidates; ++cand) {
        Rng rng(derive_seed(seed, stream::kDispersion, static_cast<std::uint64_t>(cand)));
        DispersionSet set = generate_dispersion_set(cfg.M, cfg.T, cfg.Q, rng);
        const TrialBatch pilot =
            run_trials(cfg, &set, rule_bit(Rule::optimum), cfg.pilot_trials,
                       derive_seed(seed, stream::kPilot, static_cast<std::uint64_t>(cand)),
                       workers);
        const double gamma = calibrate_threshold(pilot, Rule::optimum, 0.01);
        const double score = detection_point(pilot, Rule::optimum, gamma).pd0;
        if (!have_best || score > best.score) {
            best = {std::move(set), cand, score};
            have_best = true;
        }
    }
    return best;
}

inline SelectedDispersion select_dispersion_set(const Config& cfg, std::uint64_t seed,
                                                int workers = 1) {
    return select_dispersion_set(cfg, cfg.dispersion_candidates, seed, workers);
}

}  // namespace stsfusion

#endif  // STSFUSION_SIMULATE_HPP
