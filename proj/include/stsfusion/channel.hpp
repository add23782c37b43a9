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
// Deployment geometry, large-scale fading (path loss + log-normal
// shadowing), Rayleigh block fading, receiver noise, and CSI-error
// corrupted channel estimates. Fading is flat within a block: the received
// model uses a single N x M coefficient matrix per block.

#ifndef STSFUSION_CHANNEL_HPP
#define STSFUSION_CHANNEL_HPP

#include <Eigen/Dense>
#include <cmath>

#include "stsfusion/errors.hpp"
#include "stsfusion/rng.hpp"

namespace stsfusion {

/// Sensor distances from the fusion center, confined to a circular annulus.
struct DeploymentGeometry {
    double phi_min = 0.0;
    double phi_max = 0.0;
    Eigen::VectorXd positions;  // phi_m, meters
};

/// Per-sensor large-scale coefficients lambda_m = psi_m (phi_min/phi_m)^eta,
/// constant across antennas and across blocks within a frame.
struct LargeScaleFading {
    Eigen::VectorXd lambda;

    Eigen::MatrixXd D() const { return Eigen::MatrixXd(lambda.asDiagonal()); }
};

/// One block's channel state: G = H sqrt(D) plus its CSI estimate.
struct ChannelRealization {
    Eigen::MatrixXcd H;      // fast fading, N x M
    Eigen::MatrixXcd G;      // H sqrt(D)
    Eigen::MatrixXcd G_hat;  // CSI estimate available at the fusion center
    double sigma_w2 = 0.0;
};

/// Uniform-over-annulus-area sensor placement: distance density is
/// proportional to phi on [phi_min, phi_max], sampled by inverting
/// F(phi) = (phi^2 - phi_min^2) / (phi_max^2 - phi_min^2).
inline DeploymentGeometry deploy_sensors(int m, double phi_min, double phi_max, Rng& rng) {
    if (m < 1) throw InvalidGeometry("sensor count must be at least 1");
    if (!(phi_min > 0.0) || phi_max < phi_min)
        throw InvalidGeometry("annulus radii must satisfy 0 < phi_min <= phi_max");
    DeploymentGeometry geo{phi_min, phi_max, Eigen::VectorXd(m)};
    const double lo2 = phi_min * phi_min;
    const double hi2 = phi_max * phi_max;
    for (int i = 0; i < m; ++i)
        geo.positions[i] = std::sqrt(lo2 + rng.uniform() * (hi2 - lo2));
    return geo;
}

/// Log-normal shadowing coefficient: 10 log10(psi) ~ N(mu_dB, sigma_dB^2).
inline double draw_shadowing(double mu_db, double sigma_db, Rng& rng) {
    const double z = mu_db + sigma_db * rng.normal();
    return std::pow(10.0, z / 10.0);
}

/// lambda_m = psi (phi_min / phi_m)^eta.
inline double pathloss(double phi_m, double phi_min, double eta, double psi) {
    if (phi_m < phi_min || !(phi_min > 0.0))
        throw InvalidGeometry("sensor distance below the reference radius");
    return psi * std::pow(phi_min / phi_m, eta);
}

inline LargeScaleFading large_scale_fading(const DeploymentGeometry& geo, double eta,
                                           double mu_db, double sigma_db, Rng& rng) {
    LargeScaleFading ls{Eigen::VectorXd(geo.positions.size())};
    for (Eigen::Index i = 0; i < geo.positions.size(); ++i) {
        const double psi = draw_shadowing(mu_db, sigma_db, rng);
        ls.lambda[i] = pathloss(geo.positions[i], geo.phi_min, eta, psi);
    }
    return ls;
}

/// N x M iid circularly-symmetric complex Gaussian fast fading, unit variance.
inline Eigen::MatrixXcd draw_fading(int n, int m, Rng& rng) {
    Eigen::MatrixXcd h(n, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < n; ++r) h(r, c) = rng.cnormal();
    return h;
}

/// Additive Gaussian CSI error; returns G unchanged (no draws) when
/// sigma_e2 == 0 so the perfect-CSI mode is exact.
inline Eigen::MatrixXcd corrupt_csi(const Eigen::MatrixXcd& g, double sigma_e2, Rng& rng) {
    if (sigma_e2 == 0.0) return g;
    Eigen::MatrixXcd g_hat = g;
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r) g_hat(r, c) += rng.cnormal(sigma_e2);
    return g_hat;
}

/// N x T receiver noise, iid complex Gaussian with variance sigma_w2 per entry.
inline Eigen::MatrixXcd draw_noise(int n, int t, double sigma_w2, Rng& rng) {
    Eigen::MatrixXcd w(n, t);
    for (Eigen::Index c = 0; c < t; ++c)
        for (Eigen::Index r = 0; r < n; ++r) w(r, c) = rng.cnormal(sigma_w2);
    return w;
}

/// Draws one block's fast fading and assembles G = H sqrt(D) with its
/// CSI-error-corrupted estimate.
inline ChannelRealization realize_channel(int n, const LargeScaleFading& ls,
                                          double sigma_e2, double sigma_w2, Rng& rng) {
    ChannelRealization ch;
    ch.H = draw_fading(n, static_cast<int>(ls.lambda.size()), rng);
    ch.G = ch.H * ls.lambda.cwiseSqrt().asDiagonal();
    ch.G_hat = corrupt_csi(ch.G, sigma_e2, rng);
    ch.sigma_w2 = sigma_w2;
    return ch;
}

}  // namespace stsfusion

#endif  // STSFUSION_CHANNEL_HPP
