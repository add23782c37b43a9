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
// Fusion rules computed at the multi-antenna fusion center from one
// vectorized received block. Every rule is a function of the effective
// receive signature matrix (one column per sensor), so all statistics
// reduce to M-dimensional quantities once the Gram matrix and the matched
// filter outputs are formed:
//
//   ||y - sqrt(rho) S x||^2 = ||y||^2 - 2 sqrt(rho) Re(b)'x + rho x'Re(K)x
//
// with b = S^H y and K = S^H S. The exhaustive rules walk the 2^M decision
// vectors in Gray-code order with O(M) updates per step.

#ifndef STSFUSION_FUSION_HPP
#define STSFUSION_FUSION_HPP

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "stsfusion/errors.hpp"
#include "stsfusion/sensors.hpp"

namespace stsfusion {

// ---- rule registry -------------------------------------------------------

enum class Rule : int {
    optimum = 0,  // marginalized log-likelihood ratio
    mrc,          // maximal-ratio combining (perfect-sensor reduction)
    mmrc,         // diagonally normalized MRC
    wl_normal,    // widely linear, normal deflection (H0 variance)
    wl_modified,  // widely linear, modified deflection (H1 variance)
    max_log,      // prior-weighted minimum-distance difference
    cv_ml,        // Chair-Varshney on ML-decoded decisions
    cv_mmse,      // Chair-Varshney on MMSE-decoded decisions
};

inline constexpr int kRuleCount = 8;
using RuleMask = unsigned;

constexpr RuleMask rule_bit(Rule r) { return 1u << static_cast<int>(r); }
inline constexpr RuleMask kAllRules = (1u << kRuleCount) - 1;

inline constexpr std::array<std::string_view, kRuleCount> kRuleNames = {
    "opt", "mrc", "mmrc", "wl0", "wl1", "maxlog", "cv-ml", "cv-mmse"};

inline Rule rule_from_name(std::string_view name) {
    for (int i = 0; i < kRuleCount; ++i)
        if (kRuleNames[i] == name) return static_cast<Rule>(i);
    throw ValidationError("rules", "unknown rule '" + std::string(name) + "'");
}

/// Parses a comma-separated rule list ("opt,mrc"); "all" selects every rule.
inline RuleMask parse_rules(std::string_view csv) {
    if (csv == "all") return kAllRules;
    RuleMask mask = 0;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string_view::npos) comma = csv.size();
        std::string_view tok = csv.substr(pos, comma - pos);
        if (!tok.empty()) mask |= rule_bit(rule_from_name(tok));
        pos = comma + 1;
    }
    if (mask == 0) throw ValidationError("rules", "empty rule list");
    return mask;
}

// ---- inputs / outputs ----------------------------------------------------

/**
 * @brief Everything a fusion rule needs for one received block.
 *
 * signatures is the NT x M effective matrix (I_T (x) G_hat) * map(A_q) in
 * STS mode, or plain G_hat in the no-STS baseline; its m-th column is the
 * receive-side signature of sensor m.
 */
struct FusionInput {
    Eigen::VectorXcd y;         // vectorized received block, length N*T
    Eigen::MatrixXcd signatures;
    int n_antennas = 0;         // N, needed by the 1/N Gram normalization
    double rho = 1.0;           // per-sensor reporting energy
    double sigma_w2 = 1.0;      // noise variance per complex entry
    SensorProfile profile;
    int exhaustive_limit = 12;  // cap on 2^M enumerations
};

/**
 * Per-rule scalar test statistics of one block. Larger values always favor
 * H1. Zero-prior decision vectors (perfect sensors) are excluded from the
 * sums and searches rather than carrying their -inf log priors into the
 * statistics, so every evaluated entry is finite for sigma_w2 > 0.
 */
struct FusionOutcome {
    std::array<double, kRuleCount> gamma{};
    RuleMask evaluated = 0;

    double at(Rule r) const {
        if (!(evaluated & rule_bit(r)))
            throw Error("fusion rule was not evaluated for this block");
        return gamma[static_cast<int>(r)];
    }
    void set(Rule r, double value) {
        gamma[static_cast<int>(r)] = value;
        evaluated |= rule_bit(r);
    }
};

/// Augmented (widely linear) view: second half is the conjugate of the first.
struct AugmentedView {
    Eigen::VectorXcd y_aug;       // [y; conj(y)], length 2NT
    Eigen::MatrixXcd sig_aug;     // [S; conj(S)], 2NT x M
};

inline AugmentedView make_augmented(const FusionInput& in) {
    AugmentedView v;
    const Eigen::Index n = in.y.size();
    v.y_aug.resize(2 * n);
    v.y_aug << in.y, in.y.conjugate();
    v.sig_aug.resize(2 * n, in.signatures.cols());
    v.sig_aug << in.signatures, in.signatures.conjugate();
    return v;
}

// ---- shared internals ----------------------------------------------------

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// M-dimensional sufficient statistics for every rule.
struct QuadraticForm {
    double k0 = 0.0;        // ||y||^2
    Eigen::VectorXcd b;     // signatures^H y
    Eigen::MatrixXcd gram;  // signatures^H signatures
    Eigen::VectorXd p;      // Re(b)
    Eigen::MatrixXd c;      // Re(gram)
};

inline QuadraticForm quadratic_form(const FusionInput& in) {
    if (in.signatures.rows() != in.y.size())
        throw DimensionMismatch("signature matrix rows must equal received vector length");
    if (in.profile.sensors() != in.signatures.cols())
        throw DimensionMismatch("sensor profile length must equal signature columns");
    QuadraticForm qf;
    qf.gram = in.signatures.adjoint() * in.signatures;
    qf.b = in.signatures.adjoint() * in.y;
    qf.k0 = in.y.squaredNorm();
    qf.p = qf.b.real();
    qf.c = qf.gram.real();
    return qf;
}

inline void check_exhaustive(int m, int limit) {
    if (m > limit)
        throw ExhaustiveLimitExceeded("2^" + std::to_string(m) +
                                      " decision vectors exceed the exhaustive limit " +
                                      std::to_string(limit));
}

/// Streaming log-sum-exp; -inf terms (zero priors) contribute nothing.
struct LogSumExp {
    double peak = kNegInf;
    double sum = 0.0;

    void add(double t) {
        if (t == kNegInf) return;
        if (t <= peak) {
            sum += std::exp(t - peak);
        } else {
            sum = sum * std::exp(peak - t) + 1.0;
            peak = t;
        }
    }
    double value() const { return sum == 0.0 ? kNegInf : peak + std::log(sum); }
};

/**
 * Visits all 2^M BPSK decision vectors in Gray-code order. For each vector
 * the visitor receives resid2 = ||y - sqrt(rho) S x||^2 and the log priors
 * under H1 and H0 (-inf off the support). O(M) work per vector.
 */
template <class Visitor>
void scan_decision_vectors(const QuadraticForm& qf, double rho,
                           const SensorProfile& profile, Visitor&& visit) {
    const int m = static_cast<int>(qf.p.size());
    const double sq = std::sqrt(rho);
    const auto log_or_inf = [](double v) { return v == 0.0 ? kNegInf : std::log(v); };

    // per-sensor log tables, [m] for x_m = +1 / x_m = -1
    std::vector<double> l1p(m), l1n(m), l0p(m), l0n(m);
    for (int i = 0; i < m; ++i) {
        l1p[i] = log_or_inf(profile.pd[i]);
        l1n[i] = log_or_inf(1.0 - profile.pd[i]);
        l0p[i] = log_or_inf(profile.pf[i]);
        l0n[i] = log_or_inf(1.0 - profile.pf[i]);
    }

    Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd cx = qf.c.rowwise().sum();  // c * x at x = 1
    double s1 = qf.p.sum();                     // p'x
    double s2 = qf.c.sum();                     // x'cx
    double f1 = 0.0, f0 = 0.0;                  // finite parts of the log priors
    int inf1 = 0, inf0 = 0;                     // count of -inf factors
    const auto account = [](double term, double& f, int& cnt, int dir) {
        if (term == kNegInf)
            cnt += dir;
        else
            f += dir * term;
    };
    for (int i = 0; i < m; ++i) {
        account(l1p[i], f1, inf1, +1);
        account(l0p[i], f0, inf0, +1);
    }

    const auto emit = [&] {
        visit(qf.k0 - 2.0 * sq * s1 + rho * s2, inf1 ? kNegInf : f1, inf0 ? kNegInf : f0);
    };
    emit();

    const std::uint32_t total = 1u << m;
    std::uint32_t gray = 0;
    for (std::uint32_t k = 1; k < total; ++k) {
        const std::uint32_t g = k ^ (k >> 1);
        const int j = std::countr_zero(gray ^ g);
        gray = g;
        const double xj = x[j];
        s2 += -4.0 * xj * cx[j] + 4.0 * qf.c(j, j);
        cx -= (2.0 * xj) * qf.c.col(j);
        s1 -= 2.0 * xj * qf.p[j];
        x[j] = -xj;
        const bool was_plus = xj > 0.0;
        account(was_plus ? l1p[j] : l1n[j], f1, inf1, -1);
        account(was_plus ? l0p[j] : l0n[j], f0, inf0, -1);
        account(was_plus ? l1n[j] : l1p[j], f1, inf1, +1);
        account(was_plus ? l0n[j] : l0p[j], f0, inf0, +1);
        emit();
    }
}

/// ML search in lexicographic order (+1 before -1). Metrics are evaluated
/// fresh per vector with sign-symmetric arithmetic, so exact ties resolve
/// to the lexicographically smallest argmin.
inline DecisionVector decode_ml_impl(const QuadraticForm& qf, double rho, int limit) {
    const int m = static_cast<int>(qf.p.size());
    check_exhaustive(m, limit);
    const double sq = std::sqrt(rho);
    DecisionVector x(m), best(m);
    double best_metric = std::numeric_limits<double>::infinity();
    const std::uint32_t total = 1u << m;
    for (std::uint32_t k = 0; k < total; ++k) {
        for (int i = 0; i < m; ++i) x[i] = ((k >> (m - 1 - i)) & 1u) ? -1.0 : 1.0;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < m; ++i) {
            s1 += qf.p[i] * x[i];
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += qf.c(i, j) * x[j];
            s2 += x[i] * acc;
        }
        const double metric = rho * s2 - 2.0 * sq * s1;
        if (metric < best_metric) {
            best_metric = metric;
            best = x;
        }
    }
    return best;
}

/// Solves B u = mu for the widely linear combiner, where
/// B = sigma_w2 I + rho Sigma_x (sig_aug^H sig_aug) is the M x M reduction
/// of the augmented covariance (Sigma^-1 sig_aug == sig_aug B^-1 exactly).
inline Eigen::VectorXd wl_weights(const QuadraticForm& qf, const FusionInput& in,
                                  int deflection_kind) {
    const int m = static_cast<int>(qf.p.size());
    const Eigen::VectorXd mu = 2.0 * (in.profile.pd - in.profile.pf);
    if (mu.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateProfile("all sensors have P_D == P_F; WL direction undefined");

    const Eigen::VectorXd& prob =
        (deflection_kind == 1) ? in.profile.pd : in.profile.pf;
    Eigen::VectorXd sigma_x(m);  // Var(x_m | H_i) for BPSK decisions
    for (int i = 0; i < m; ++i) {
        const double mean = 2.0 * prob[i] - 1.0;
        sigma_x[i] = 1.0 - mean * mean;
    }

    Eigen::MatrixXd b = in.rho * sigma_x.asDiagonal() * (2.0 * qf.c);
    b.diagonal().array() += in.sigma_w2;
    Eigen::VectorXd u = b.partialPivLu().solve(mu);
    if (!u.allFinite()) {
        const double ridge = 1e-10 * b.trace() / static_cast<double>(m);
        b.diagonal().array() += ridge;
        u = b.partialPivLu().solve(mu);
        if (!u.allFinite())
            throw SingularCovariance("widely linear covariance solve failed");
    }
    return u;
}

inline Eigen::VectorXd mmse_weights(const QuadraticForm& qf, const FusionInput& in) {
    if (in.n_antennas < 1)
        throw ValidationError("n_antennas", "must be set for Gram normalization");
    Eigen::MatrixXcd d = qf.gram / static_cast<double>(in.n_antennas);
    d.diagonal().array() += in.sigma_w2 / std::sqrt(in.rho);
    return d.ldlt().solve(qf.b).real();
}

}  // namespace detail

// ---- rules ---------------------------------------------------------------

inline double cv_statistic(const DecisionVector& x_bar, const SensorProfile& profile) {
    if (x_bar.size() != profile.sensors())
        throw DimensionMismatch("decoded vector length must equal sensor count");
    // clamp for boundary operating points
    const auto clamp = [](double v) { return std::min(1.0 - 1e-12, std::max(1e-12, v)); };
    double gamma = 0.0;
    for (int m = 0; m < x_bar.size(); ++m) {
        const double pd = clamp(profile.pd[m]);
        const double pf = clamp(profile.pf[m]);
        gamma += (x_bar[m] > 0.0) ? std::log(pd / pf)
                                  : std::log((1.0 - pd) / (1.0 - pf));
    }
    return gamma;
}

/// Chair-Varshney form with a continuous decoder output plugged in directly:
/// b_m = (x_m + 1)/2 weights the per-sensor log ratios without quantizing.
/// Coincides with cv_statistic when the input is a BPSK vector.
inline double cv_soft_statistic(const Eigen::VectorXd& x_soft,
                                const SensorProfile& profile) {
    if (x_soft.size() != profile.sensors())
        throw DimensionMismatch("decoded vector length must equal sensor count");
    const auto clamp = [](double v) { return std::min(1.0 - 1e-12, std::max(1e-12, v)); };
    double gamma = 0.0;
    for (int m = 0; m < x_soft.size(); ++m) {
        const double pd = clamp(profile.pd[m]);
        const double pf = clamp(profile.pf[m]);
        const double b = 0.5 * (x_soft[m] + 1.0);
        gamma += b * std::log(pd / pf) + (1.0 - b) * std::log((1.0 - pd) / (1.0 - pf));
    }
    return gamma;
}

/// sign() with sign(0) = +1.
inline DecisionVector hard_decision(const Eigen::VectorXd& soft) {
    DecisionVector x(soft.size());
    for (Eigen::Index i = 0; i < soft.size(); ++i) x[i] = soft[i] >= 0.0 ? 1.0 : -1.0;
    return x;
}

/// Unit-norm widely linear combining vector on the augmented space,
/// r = Sigma^-1 sig_aug mu / ||.||; kind 0 = normal, 1 = modified deflection.
inline Eigen::VectorXcd wl_direction(const FusionInput& in, int deflection_kind) {
    const auto qf = detail::quadratic_form(in);
    const Eigen::VectorXd u = detail::wl_weights(qf, in, deflection_kind);
    const Eigen::VectorXcd v = in.signatures * u;
    const double nv = v.norm();
    if (!(nv > 0.0)) throw SingularCovariance("widely linear combiner has zero norm");
    Eigen::VectorXcd r(2 * v.size());
    r << v, v.conjugate();
    return r / (std::sqrt(2.0) * nv);
}

/**
 * Evaluates the requested rules on one block, sharing the Gram matrix, the
 * matched-filter outputs, and (for optimum / max-log) a single Gray-code
 * scan over the 2^M decision vectors.
 */
inline FusionOutcome evaluate_rules(const FusionInput& in, RuleMask mask) {
    const auto qf = detail::quadratic_form(in);
    const int m = static_cast<int>(qf.p.size());
    FusionOutcome out;

    if (mask & (rule_bit(Rule::optimum) | rule_bit(Rule::max_log))) {
        detail::check_exhaustive(m, in.exhaustive_limit);
        detail::LogSumExp lse1, lse0;
        double min1 = std::numeric_limits<double>::infinity();
        double min0 = std::numeric_limits<double>::infinity();
        const double inv_s2 = 1.0 / in.sigma_w2;
        detail::scan_decision_vectors(
            qf, in.rho, in.profile, [&](double resid2, double lp1, double lp0) {
                const double d = resid2 * inv_s2;
                lse1.add(-d + lp1);
                lse0.add(-d + lp0);
                if (lp1 != detail::kNegInf) min1 = std::min(min1, d - lp1);
                if (lp0 != detail::kNegInf) min0 = std::min(min0, d - lp0);
            });
        if (mask & rule_bit(Rule::optimum))
            out.set(Rule::optimum, lse1.value() - lse0.value());
        // Printed form is (H1 search) - (H0 search); negated so large => H1.
        if (mask & rule_bit(Rule::max_log)) out.set(Rule::max_log, min0 - min1);
    }

    if (mask & rule_bit(Rule::mrc)) out.set(Rule::mrc, qf.p.sum());

    if (mask & rule_bit(Rule::mmrc)) {
        if (in.n_antennas < 1)
            throw ValidationError("n_antennas", "must be set for Gram normalization");
        double gamma = 0.0;
        for (int i = 0; i < m; ++i) {
            const double d = qf.c(i, i) / static_cast<double>(in.n_antennas);
            if (d < 1e-12)
                throw SingularChannel("effective signature column " + std::to_string(i) +
                                      " has (near-)zero energy");
            gamma += qf.p[i] / d;
        }
        out.set(Rule::mmrc, gamma);
    }

    for (int kind = 0; kind < 2; ++kind) {
        const Rule r = kind == 0 ? Rule::wl_normal : Rule::wl_modified;
        if (!(mask & rule_bit(r))) continue;
        const Eigen::VectorXd u = detail::wl_weights(qf, in, kind);
        const double nv2 = u.dot(qf.c * u);  // ||signatures * u||^2
        if (!(nv2 > 0.0)) throw SingularCovariance("widely linear combiner has zero norm");
        out.set(r, std::sqrt(2.0) * u.dot(qf.p) / std::sqrt(nv2));
    }

    if (mask & rule_bit(Rule::cv_ml)) {
        const DecisionVector x_ml = detail::decode_ml_impl(qf, in.rho, in.exhaustive_limit);
        out.set(Rule::cv_ml, cv_statistic(x_ml, in.profile));
    }

    if (mask & rule_bit(Rule::cv_mmse)) {
        // the MMSE estimate enters the CV form unquantized; ML decisions are
        // binary by construction
        const Eigen::VectorXd soft = detail::mmse_weights(qf, in);
        out.set(Rule::cv_mmse, cv_soft_statistic(soft, in.profile));
    }

    return out;
}

inline double llr_optimum(const FusionInput& in) {
    return evaluate_rules(in, rule_bit(Rule::optimum)).at(Rule::optimum);
}

inline double mrc_statistic(const FusionInput& in) {
    return evaluate_rules(in, rule_bit(Rule::mrc)).at(Rule::mrc);
}

inline double mmrc_statistic(const FusionInput& in) {
    return evaluate_rules(in, rule_bit(Rule::mmrc)).at(Rule::mmrc);
}

inline double wl_statistic(const FusionInput& in, int deflection_kind) {
    const Rule r = deflection_kind == 1 ? Rule::wl_modified : Rule::wl_normal;
    return evaluate_rules(in, rule_bit(r)).at(r);
}

inline double maxlog_statistic(const FusionInput& in) {
    return evaluate_rules(in, rule_bit(Rule::max_log)).at(Rule::max_log);
}

inline DecisionVector decode_ml(const FusionInput& in) {
    return detail::decode_ml_impl(detail::quadratic_form(in), in.rho, in.exhaustive_limit);
}

/// Soft MMSE symbol estimates; hard decisions via hard_decision().
inline Eigen::VectorXd decode_mmse(const FusionInput& in) {
    return detail::mmse_weights(detail::quadratic_form(in), in);
}

}  // namespace stsfusion

#endif  // STSFUSION_FUSION_HPP
