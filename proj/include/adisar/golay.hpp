// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adisar/types.hpp"

namespace adisar {

/// Bipolar complementary pair: aperiodic autocorrelations satisfy
/// R_a[k] + R_b[k] = 2N for k = 0 and 0 for every other lag.
struct GolayPair {
    std::vector<int8_t> a;
    std::vector<int8_t> b;
    int n = 0;
};

/// Recursive delay/weight construction. `delays` must hold log2(n) distinct
/// powers of two below n; `weights` entries are +/-1. Deterministic.
GolayPair generate_golay_pair(int n, std::span<const int> delays,
                              std::span<const int> weights);

/// The 128-sample pair used by the single-carrier PHY preamble
/// (standard generator parameters, outputs reversed per the standard's
/// indexing). Validated by the complementarity property, not transcription.
GolayPair ieee80211ad_pair_128();

/// SC PHY training field: STF (16 x a128 then -a128, 2176 samples) followed
/// by the channel-estimation field (Gu512, Gv512, -b128; 1152 samples).
/// samples[2048..2560) is the zero-sidelobe segment used for ranging.
struct Preamble {
    static constexpr int kLength = 3328;
    static constexpr int kStfLen = 2176;
    static constexpr int kCefLen = 1152;
    static constexpr int kS512Offset = 2048;   // 0-indexed ("2049-th sample")
    static constexpr int kS512Len = 512;

    std::vector<int8_t> samples;

    std::span<const int8_t> s512() const {
        return {samples.data() + kS512Offset, kS512Len};
    }
};

Preamble assemble_preamble(const GolayPair& pair);

/// R[l] = sum_k s512[k] * conj(y[l + k]) for l in [lag_begin, lag_end).
/// Lags index into y; throws std::out_of_range if a window leaves y.
std::vector<cplx> xcorr_s512(std::span<const int8_t> s512, std::span<const cplx> y,
                             long lag_begin, long lag_end);

}  // namespace adisar
