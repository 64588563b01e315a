// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace adisar {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;

/// Thrown for malformed configuration files or invalid parameter combinations.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when no delay bin exceeds the detection threshold.
struct NoTargetDetected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Any other pipeline-stage failure.
struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace adisar
