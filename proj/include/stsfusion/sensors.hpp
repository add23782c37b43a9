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

#ifndef STSFUSION_SENSORS_HPP
#define STSFUSION_SENSORS_HPP

#include <Eigen/Dense>
#include <limits>

#include "stsfusion/errors.hpp"
#include "stsfusion/rng.hpp"

namespace stsfusion {

/// Vector of BPSK-mapped local decisions, entries in {+1, -1}.
using DecisionVector = Eigen::VectorXd;

enum class Hypothesis : int { h0 = 0, h1 = 1 };

/**
 * @brief Per-sensor detection / false-alarm operating points.
 *
 * Heterogeneous (P_D,m, P_F,m) pairs are supported; iid networks replicate
 * one pair M times. Informative sensors satisfy P_F <= P_D; violations are
 * rejected at config load unless explicitly allowed for adversarial studies.
 */
struct SensorProfile {
    Eigen::VectorXd pd;
    Eigen::VectorXd pf;

    int sensors() const { return static_cast<int>(pd.size()); }

    static SensorProfile iid(int m, double pd_value, double pf_value) {
        return {Eigen::VectorXd::Constant(m, pd_value),
                Eigen::VectorXd::Constant(m, pf_value)};
    }
};

/// Global hypothesis plus the local decisions drawn under it.
struct TrialTruth {
    Hypothesis hypothesis;
    DecisionVector x;
};

/// Draws independent local decisions: x_m = +1 with probability P_D,m under
/// H1 and P_F,m under H0, -1 otherwise.
inline DecisionVector draw_decisions(Hypothesis h, const SensorProfile& profile, Rng& rng) {
    const int m = profile.sensors();
    const Eigen::VectorXd& p = (h == Hypothesis::h1) ? profile.pd : profile.pf;
    DecisionVector x(m);
    for (int i = 0; i < m; ++i) x[i] = (rng.uniform() < p[i]) ? 1.0 : -1.0;
    return x;
}

/// P(x | hypothesis) under independent sensing, as a direct product so that
/// boundary probabilities give exact 0/1.
inline double decision_prior(const DecisionVector& x, Hypothesis h,
                             const SensorProfile& profile) {
    if (x.size() != profile.sensors())
        throw DimensionMismatch("decision vector length does not match sensor count");
    const Eigen::VectorXd& p = (h == Hypothesis::h1) ? profile.pd : profile.pf;
    double prob = 1.0;
    for (int m = 0; m < x.size(); ++m) prob *= (x[m] > 0.0) ? p[m] : 1.0 - p[m];
    return prob;
}

/// Log-domain prior; returns -infinity for zero-probability vectors so that
/// callers can restrict sums and searches to the support.
inline double log_decision_prior(const DecisionVector& x, Hypothesis h,
                                 const SensorProfile& profile) {
    if (x.size() != profile.sensors())
        throw DimensionMismatch("decision vector length does not match sensor count");
    const Eigen::VectorXd& p = (h == Hypothesis::h1) ? profile.pd : profile.pf;
    double acc = 0.0;
    for (int m = 0; m < x.size(); ++m) {
        const double pm = (x[m] > 0.0) ? p[m] : 1.0 - p[m];
        if (pm == 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(pm);
    }
    return acc;
}

}  // namespace stsfusion

#endif  // STSFUSION_SENSORS_HPP
