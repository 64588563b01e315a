// SPDX-License-Identifier: Apache-2.0
#include "adisar/golay.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace adisar {

namespace {

bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

GolayPair generate_golay_pair(int n, std::span<const int> delays,
                              std::span<const int> weights) {
    if (!is_pow2(n) || n < 2) {
        throw std::invalid_argument("golay: length must be a power of two >= 2");
    }
    int levels = 0;
    for (int v = n; v > 1; v >>= 1) ++levels;
    if (static_cast<int>(delays.size()) != levels ||
        static_cast<int>(weights.size()) != levels) {
        throw std::invalid_argument("golay: need log2(n) delays and weights");
    }
    std::set<int> seen;
    for (int d : delays) {
        if (!is_pow2(d) || d >= n) {
            throw std::invalid_argument("golay: delays must be distinct powers of two < n");
        }
        if (!seen.insert(d).second) {
            throw std::invalid_argument("golay: duplicate delay");
        }
    }
    for (int w : weights) {
        if (w != 1 && w != -1) throw std::invalid_argument("golay: weights must be +/-1");
    }

    // a_k(t) = w_k a_{k-1}(t) + b_{k-1}(t - d_k);  b_k(t) = w_k a_{k-1}(t) - b_{k-1}(t - d_k)
    std::vector<int> a(n, 0), b(n, 0);
    a[0] = 1;
    b[0] = 1;
    std::vector<int> a2(n), b2(n);
    for (int k = 0; k < levels; ++k) {
        const int d = delays[k];
        const int w = weights[k];
        for (int t = 0; t < n; ++t) {
            const int bd = (t >= d) ? b[t - d] : 0;
            a2[t] = w * a[t] + bd;
            b2[t] = w * a[t] - bd;
        }
        a.swap(a2);
        b.swap(b2);
    }

    GolayPair out;
    out.n = n;
    out.a.resize(n);
    out.b.resize(n);
    for (int t = 0; t < n; ++t) {
        out.a[t] = static_cast<int8_t>(a[t]);
        out.b[t] = static_cast<int8_t>(b[t]);
    }
    return out;
}

GolayPair ieee80211ad_pair_128() {
    static constexpr int kDelays[7] = {1, 8, 2, 4, 16, 32, 64};
    static constexpr int kWeights[7] = {-1, -1, -1, -1, 1, -1, -1};
    GolayPair p = generate_golay_pair(128, kDelays, kWeights);
    std::reverse(p.a.begin(), p.a.end());
    std::reverse(p.b.begin(), p.b.end());
    return p;
}

Preamble assemble_preamble(const GolayPair& pair) {
    if (pair.n != 128) throw std::invalid_argument("preamble: pair length must be 128");
    Preamble pre;
    pre.samples.reserve(Preamble::kLength);

    auto push = [&pre](const std::vector<int8_t>& seq, int sign) {
        for (int8_t v : seq) pre.samples.push_back(static_cast<int8_t>(sign * v));
    };

    for (int rep = 0; rep < 16; ++rep) push(pair.a, +1);
    push(pair.a, -1);
    // Gu512 = [-b -a b -a], Gv512 = [-b a -b -a], then -b
    push(pair.b, -1);
    push(pair.a, -1);
    push(pair.b, +1);
    push(pair.a, -1);
    push(pair.b, -1);
    push(pair.a, +1);
    push(pair.b, -1);
    push(pair.a, -1);
    push(pair.b, -1);

    return pre;
}

std::vector<cplx> xcorr_s512(std::span<const int8_t> s512, std::span<const cplx> y,
                             long lag_begin, long lag_end) {
    const long n = static_cast<long>(s512.size());
    if (lag_end < lag_begin) throw std::out_of_range("xcorr: empty lag range");
    if (lag_begin < 0 || lag_end - 1 + n > static_cast<long>(y.size())) {
        throw std::out_of_range("xcorr: lag range exceeds available samples");
    }
    std::vector<cplx> r(static_cast<std::size_t>(lag_end - lag_begin));
    for (long l = lag_begin; l < lag_end; ++l) {
        double re = 0, im = 0;
        const cplx* yp = y.data() + l;
        for (long k = 0; k < n; ++k) {
            const double s = static_cast<double>(s512[k]);
            re += s * yp[k].real();
            im -= s * yp[k].imag();   // conjugation on y
        }
        r[static_cast<std::size_t>(l - lag_begin)] = {re, im};
    }
    return r;
}

}  // namespace adisar
