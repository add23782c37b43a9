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

#ifndef STSFUSION_DISPERSION_HPP
#define STSFUSION_DISPERSION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stsfusion/errors.hpp"
#include "stsfusion/matrix_io.hpp"
#include "stsfusion/rng.hpp"

namespace stsfusion {

/**
 * @brief Ordered set of Q complex M x T dispersion matrices.
 *
 * Row m of matrix q is the spreading vector of sensor m while matrix q is
 * active. Every matrix satisfies the block power constraint
 * trace(A^H A) = T, i.e. unit energy per space-time block.
 */
struct DispersionSet {
    std::vector<Eigen::MatrixXcd> matrices;

    int count() const { return static_cast<int>(matrices.size()); }
    int sensors() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
    int block_length() const {
        return matrices.empty() ? 0 : static_cast<int>(matrices[0].cols());
    }
};

/// Scales a raw matrix so that trace(A^H A) = T (Frobenius norm sqrt(T)).
inline Eigen::MatrixXcd normalize_dispersion(const Eigen::MatrixXcd& raw) {
    const double fnorm = raw.norm();
    if (fnorm == 0.0) throw ZeroMatrix("cannot normalize an all-zero dispersion matrix");
    const double t = static_cast<double>(raw.cols());
    return raw * (std::sqrt(t) / fnorm);
}

/// Q random dispersion matrices: iid circularly-symmetric complex Gaussian
/// entries, each matrix normalized to the block power constraint.
inline DispersionSet generate_dispersion_set(int m, int t, int q, Rng& rng) {
    DispersionSet set;
    set.matrices.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        Eigen::MatrixXcd a(m, t);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < t; ++c) a(r, c) = rng.cnormal();
        set.matrices.push_back(normalize_dispersion(a));
    }
    return set;
}

/**
 * Effective dispersion map of one matrix: the MT x M matrix whose block t
 * (rows tM..tM+M-1) is diag(column t of A), so that map * x == vec(S) for
 * every decision vector x with S the row-scaled encoded block.
 */
inline Eigen::MatrixXcd build_effective_map(const Eigen::MatrixXcd& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index t = a.cols();
    Eigen::MatrixXcd map = Eigen::MatrixXcd::Zero(m * t, m);
    for (Eigen::Index j = 0; j < t; ++j)
        for (Eigen::Index i = 0; i < m; ++i) map(j * m + i, i) = a(i, j);
    return map;
}

// ---- serialization ------------------------------------------------------
//
// Text file layout ("re,im" tokens, see matrix_io.hpp):
//   stsfusion-dispersion-set v1
//   Q M T
//   <matrix 1: M lines of T entries>
//   ...
//   <matrix Q>

inline void save_dispersion_set(const DispersionSet& set, std::ostream& os) {
    os << "stsfusion-dispersion-set v1\n";
    os << set.count() << ' ' << set.sensors() << ' ' << set.block_length() << '\n';
    for (const auto& a : set.matrices) write_complex_matrix(os, a);
}

inline void save_dispersion_set(const DispersionSet& set, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open '" + path + "' for writing");
    save_dispersion_set(set, os);
}

inline DispersionSet load_dispersion_set(std::istream& is) {
    std::string line;
    while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
    }
    if (line != "stsfusion-dispersion-set v1")
        throw ParseError("missing dispersion-set header line");
    int q = 0, m = 0, t = 0;
    if (!(is >> q >> m >> t) || q < 1 || m < 1 || t < 1)
        throw ParseError("bad dispersion-set dimensions");
    is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    DispersionSet set;
    set.matrices.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) set.matrices.push_back(read_complex_matrix(is, m, t));
    return set;
}

inline DispersionSet load_dispersion_set(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open dispersion set '" + path + "'");
    return load_dispersion_set(is);
}

/// FNV-1a hash of the serialized set; identifies the exact matrices a run used.
inline std::uint64_t dispersion_hash(const DispersionSet& set) {
    std::ostringstream os;
    save_dispersion_set(set, os);
    const std::string text = os.str();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace stsfusion

#endif  // STSFUSION_DISPERSION_HPP
