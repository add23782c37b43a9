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

#ifndef STSFUSION_ENCODING_HPP
#define STSFUSION_ENCODING_HPP

#include <Eigen/Dense>

#include "stsfusion/dispersion.hpp"
#include "stsfusion/errors.hpp"
#include "stsfusion/sensors.hpp"

namespace stsfusion {

/// One encoded space-time block: row m of S is x_m times the spreading
/// vector of sensor m. q_index (1-based) records the active matrix.
struct EncodedBlock {
    Eigen::MatrixXcd S;
    int q_index = 1;
};

/// Column-stacking vectorization.
inline Eigen::VectorXcd vec(const Eigen::MatrixXcd& y) {
    return Eigen::Map<const Eigen::VectorXcd>(y.data(), y.size());
}

/// Dense Kronecker product (used by the explicit linearized model; the
/// Monte-Carlo path uses effective_channel instead).
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline EncodedBlock encode_block(const DecisionVector& x, const Eigen::MatrixXcd& a_q,
                                 int q_index = 1) {
    if (x.size() != a_q.rows())
        throw DimensionMismatch("decision vector length must equal dispersion matrix rows");
    EncodedBlock block;
    block.S = x.cast<std::complex<double>>().asDiagonal() * a_q;
    block.q_index = q_index;
    return block;
}

/// No-STS reporting: each sensor transmits its BPSK decision in a single
/// slot, S = x as an M x 1 block, so the received model collapses to
/// Y = sqrt(rho) G x + w.
inline EncodedBlock baseline_encode(const DecisionVector& x) {
    EncodedBlock block;
    block.S = x.cast<std::complex<double>>();
    block.q_index = 1;
    return block;
}

/**
 * @brief Vectorized linear form of one received block.
 *
 * y = vec(Y) under column stacking and g_kron = I_T (x) G_hat, arranged so
 * that g_kron * vec(S) == vec(G_hat * S). Combined with an effective
 * dispersion map a_map this gives y = sqrt(rho) * g_kron * a_map * x + vec(W).
 */
struct LinearizedModel {
    Eigen::MatrixXcd g_kron;  // NT x MT
    Eigen::MatrixXcd a_map;   // MT x M (empty if not supplied)
    Eigen::VectorXcd y;       // NT
};

inline LinearizedModel linearize_received(const Eigen::MatrixXcd& y_block,
                                          const Eigen::MatrixXcd& g_hat) {
    if (y_block.rows() != g_hat.rows())
        throw DimensionMismatch("received block and channel estimate row counts differ");
    LinearizedModel model;
    model.g_kron =
        kron(Eigen::MatrixXcd::Identity(y_block.cols(), y_block.cols()), g_hat);
    model.y = vec(y_block);
    return model;
}

inline LinearizedModel linearize_received(const Eigen::MatrixXcd& y_block,
                                          const Eigen::MatrixXcd& g_hat,
                                          const Eigen::MatrixXcd& a_q) {
    if (a_q.rows() != g_hat.cols())
        throw DimensionMismatch("dispersion matrix rows must equal channel columns");
    if (a_q.cols() != y_block.cols())
        throw DimensionMismatch("dispersion matrix columns must equal block length");
    LinearizedModel model = linearize_received(y_block, g_hat);
    model.a_map = build_effective_map(a_q);
    return model;
}

/**
 * Effective receive signatures: the NT x M matrix (I_T (x) G) * map(A) whose
 * column m stacks A(m, t) * g_m over the T slots. Computed blockwise in
 * O(NTM) without materializing the Kronecker factor.
 */
inline Eigen::MatrixXcd effective_channel(const Eigen::MatrixXcd& g,
                                          const Eigen::MatrixXcd& a) {
    if (a.rows() != g.cols())
        throw DimensionMismatch("dispersion matrix rows must equal channel columns");
    const Eigen::Index n = g.rows();
    const Eigen::Index m = g.cols();
    const Eigen::Index t = a.cols();
    Eigen::MatrixXcd sig(n * t, m);
    for (Eigen::Index j = 0; j < t; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            sig.block(j * n, i, n, 1) = a(i, j) * g.col(i);
    return sig;
}

}  // namespace stsfusion

#endif  // STSFUSION_ENCODING_HPP
