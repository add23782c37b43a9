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
// Test-only oracles and statistics helpers. The oracles enumerate decision
// vectors directly and evaluate actual residual norms, independent of the
// Gram-matrix / Gray-code path used by the library.

#ifndef STSFUSION_TESTS_SUPPORT_HPP
#define STSFUSION_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "stsfusion/fusion.hpp"
#include "stsfusion/rng.hpp"
#include "stsfusion/sensors.hpp"

namespace testsupport {

using stsfusion::DecisionVector;
using stsfusion::FusionInput;
using stsfusion::Hypothesis;
using stsfusion::Rng;
using stsfusion::SensorProfile;

// ---- decision-vector enumeration (lexicographic, +1 before -1) ------------

inline std::vector<DecisionVector> all_decision_vectors(int m) {
    std::vector<DecisionVector> out;
    const std::uint32_t total = 1u << m;
    for (std::uint32_t k = 0; k < total; ++k) {
        DecisionVector x(m);
        for (int i = 0; i < m; ++i) x[i] = ((k >> (m - 1 - i)) & 1u) ? -1.0 : 1.0;
        out.push_back(x);
    }
    return out;
}

inline double residual2(const FusionInput& in, const DecisionVector& x) {
    return (in.y - std::sqrt(in.rho) *
                       (in.signatures * x.cast<std::complex<double>>()))
        .squaredNorm();
}

// ---- brute-force oracles ---------------------------------------------------

/// Direct-sum LLR without log-sum-exp (long double accumulators); valid at
/// moderate SNR where the exponentials stay inside the representable range.
inline double naive_llr(const FusionInput& in) {
    long double num = 0.0L, den = 0.0L;
    for (const auto& x : all_decision_vectors(static_cast<int>(in.signatures.cols()))) {
        const long double w =
            std::exp(static_cast<long double>(-residual2(in, x) / in.sigma_w2));
        num += w * static_cast<long double>(
                       stsfusion::decision_prior(x, Hypothesis::h1, in.profile));
        den += w * static_cast<long double>(
                       stsfusion::decision_prior(x, Hypothesis::h0, in.profile));
    }
    return static_cast<double>(std::log(num) - std::log(den));
}

inline double naive_maxlog(const FusionInput& in) {
    double min1 = std::numeric_limits<double>::infinity();
    double min0 = min1;
    for (const auto& x : all_decision_vectors(static_cast<int>(in.signatures.cols()))) {
        const double d = residual2(in, x) / in.sigma_w2;
        const double lp1 = stsfusion::log_decision_prior(x, Hypothesis::h1, in.profile);
        const double lp0 = stsfusion::log_decision_prior(x, Hypothesis::h0, in.profile);
        if (std::isfinite(lp1)) min1 = std::min(min1, d - lp1);
        if (std::isfinite(lp0)) min0 = std::min(min0, d - lp0);
    }
    return min0 - min1;  // library sign convention: large favors H1
}

/// Argmin of the actual residual norm; first vector wins ties, which is the
/// lexicographically smallest because of the enumeration order.
inline DecisionVector naive_ml(const FusionInput& in) {
    DecisionVector best;
    double best_metric = std::numeric_limits<double>::infinity();
    for (const auto& x : all_decision_vectors(static_cast<int>(in.signatures.cols()))) {
        const double metric = residual2(in, x);
        if (metric < best_metric) {
            best_metric = metric;
            best = x;
        }
    }
    return best;
}

// ---- dense widely linear route ---------------------------------------------

inline Eigen::VectorXd bpsk_variance(const SensorProfile& prof, int kind) {
    const Eigen::VectorXd& p = (kind == 1) ? prof.pd : prof.pf;
    Eigen::VectorXd v(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double mean = 2.0 * p[i] - 1.0;
        v[i] = 1.0 - mean * mean;
    }
    return v;
}

inline Eigen::MatrixXcd dense_augmented_covariance(const FusionInput& in, int kind) {
    const auto aug = stsfusion::make_augmented(in);
    const Eigen::VectorXd sx = bpsk_variance(in.profile, kind);
    Eigen::MatrixXcd sigma = in.rho * aug.sig_aug *
                             sx.cast<std::complex<double>>().asDiagonal() *
                             aug.sig_aug.adjoint();
    sigma.diagonal().array() += in.sigma_w2;
    return sigma;
}

/// Solves the full 2NT x 2NT system of the deflection-optimal direction.
inline Eigen::VectorXcd dense_wl_direction(const FusionInput& in, int kind) {
    const auto aug = stsfusion::make_augmented(in);
    const Eigen::VectorXd mu = 2.0 * (in.profile.pd - in.profile.pf);
    const Eigen::VectorXcd rhs = aug.sig_aug * mu.cast<std::complex<double>>();
    const Eigen::VectorXcd t = dense_augmented_covariance(in, kind).fullPivLu().solve(rhs);
    return t / t.norm();
}

/// Closed-form Gaussian-approximation deflection of a conjugate-symmetric
/// combining vector: squared mean separation over the variance under H_kind.
inline double deflection(const FusionInput& in, int kind, const Eigen::VectorXcd& r) {
    const auto aug = stsfusion::make_augmented(in);
    const Eigen::VectorXd mu = 2.0 * (in.profile.pd - in.profile.pf);
    const std::complex<double> mean_sep =
        r.adjoint() * (aug.sig_aug * mu.cast<std::complex<double>>());
    const double num = in.rho * mean_sep.real() * mean_sep.real();
    const std::complex<double> var = (r.adjoint() * (dense_augmented_covariance(in, kind) * r));
    return num / var.real();
}

// ---- random instances --------------------------------------------------------

inline FusionInput random_input(Rng& rng, int m, int nt, double rho, double sigma_w2,
                                const SensorProfile& prof, bool with_signal = true) {
    FusionInput in;
    in.signatures = Eigen::MatrixXcd(nt, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < nt; ++r) in.signatures(r, c) = rng.cnormal();
    in.rho = rho;
    in.sigma_w2 = sigma_w2;
    in.profile = prof;
    in.n_antennas = nt;  // treat the whole stack as antennas for unit tests
    Eigen::VectorXcd noise(nt);
    for (int r = 0; r < nt; ++r) noise[r] = rng.cnormal(sigma_w2);
    if (with_signal) {
        DecisionVector x = stsfusion::draw_decisions(Hypothesis::h1, prof, rng);
        in.y = std::sqrt(rho) * (in.signatures * x.cast<std::complex<double>>()) + noise;
    } else {
        in.y = noise;
    }
    return in;
}

// ---- rank statistics ----------------------------------------------------------

/// Kendall tau-a over paired samples; 1.0 iff no discordant pair.
inline double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = (a[i] - a[j]) * (b[i] - b[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return (static_cast<double>(concordant) - static_cast<double>(discordant)) / total;
}

/// Mann-Whitney AUC: P(stat_H1 > stat_H0) + 0.5 P(equal).
inline double auc(const std::vector<double>& h0, const std::vector<double>& h1) {
    std::vector<double> s0 = h0;
    std::sort(s0.begin(), s0.end());
    double acc = 0.0;
    for (double v : h1) {
        const auto lo = std::lower_bound(s0.begin(), s0.end(), v) - s0.begin();
        const auto hi = std::upper_bound(s0.begin(), s0.end(), v) - s0.begin();
        acc += static_cast<double>(lo) + 0.5 * static_cast<double>(hi - lo);
    }
    return acc / (static_cast<double>(h0.size()) * static_cast<double>(h1.size()));
}

// ---- Kolmogorov-Smirnov ---------------------------------------------------------

/// One-sample KS distance against a CDF callable.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

/// Two-sample KS test p-value (asymptotic Q_KS with small-sample correction).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace testsupport

#endif  // STSFUSION_TESTS_SUPPORT_HPP
