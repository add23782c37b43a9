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
// Plain-text matrix format used for dispersion sets and channel dumps:
// one "re,im" token per entry, T tokens per line, M lines per matrix,
// row-major. Doubles are printed with 17 significant digits so that a
// write/read round trip is bit-exact. Lines starting with '#' are comments.

#ifndef STSFUSION_MATRIX_IO_HPP
#define STSFUSION_MATRIX_IO_HPP

#include <Eigen/Dense>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stsfusion/errors.hpp"

namespace stsfusion {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_complex_matrix(std::ostream& os, const Eigen::MatrixXcd& a) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            if (c) os << ' ';
            os << format_double(a(r, c).real()) << ',' << format_double(a(r, c).imag());
        }
        os << '\n';
    }
}

/// Reads one rows x cols complex matrix of "re,im" tokens; '#' lines skipped.
inline Eigen::MatrixXcd read_complex_matrix(std::istream& is, Eigen::Index rows,
                                            Eigen::Index cols) {
    Eigen::MatrixXcd a(rows, cols);
    Eigen::Index r = 0;
    std::string line;
    while (r < rows && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        for (Eigen::Index c = 0; c < cols; ++c) {
            std::string tok;
            if (!(ls >> tok)) throw ParseError("matrix row has too few entries");
            double re = 0.0, im = 0.0;
            if (std::sscanf(tok.c_str(), "%lf,%lf", &re, &im) != 2)
                throw ParseError("bad complex entry '" + tok + "' (expected re,im)");
            a(r, c) = {re, im};
        }
        std::string extra;
        if (ls >> extra) throw ParseError("matrix row has too many entries");
        ++r;
    }
    if (r < rows) throw ParseError("unexpected end of matrix data");
    return a;
}

}  // namespace stsfusion

#endif  // STSFUSION_MATRIX_IO_HPP
