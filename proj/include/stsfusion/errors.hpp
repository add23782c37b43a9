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

#ifndef STSFUSION_ERRORS_HPP
#define STSFUSION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stsfusion {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Thrown when a matrix with zero Frobenius norm cannot be normalized.
struct ZeroMatrix : Error {
    using Error::Error;
};

struct InvalidGeometry : Error {
    using Error::Error;
};

/// A combining matrix has a (near-)zero diagonal gain and cannot be inverted.
struct SingularChannel : Error {
    using Error::Error;
};

/// Covariance solve failed even after ridge regularization.
struct SingularCovariance : Error {
    using Error::Error;
};

/// All sensors have P_D == P_F; the deflection direction is undefined.
struct DegenerateProfile : Error {
    using Error::Error;
};

/// 2^M enumeration requested beyond the configured limit.
struct ExhaustiveLimitExceeded : Error {
    using Error::Error;
};

struct InsufficientTrials : Error {
    using Error::Error;
};

struct UnknownPreset : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    ValidationError(const std::string& key, const std::string& why)
        : Error("config key '" + key + "': " + why), key(key) {}
    std::string key;
};

}  // namespace stsfusion

#endif  // STSFUSION_ERRORS_HPP
