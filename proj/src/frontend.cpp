// SPDX-License-Identifier: Apache-2.0
#include "adisar/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adisar/parallel.hpp"

namespace adisar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::pair<double, double> spatial_frequencies(double phi, double theta, double d_x,
                                              double d_y, double lambda) {
    const double wx = kTwoPi * d_x * std::cos(theta) * std::sin(phi) / lambda;
    const double wy = kTwoPi * d_y * std::sin(theta) / lambda;
    return {wx, wy};
}

std::vector<cplx> steering_vector(double omega_x, double omega_y, int nx, int ny) {
    std::vector<cplx> v(static_cast<std::size_t>(nx) * ny);
    for (int ix = 0; ix < nx; ++ix) {
        const cplx ax = std::polar(1.0, ix * omega_x);
        for (int iy = 0; iy < ny; ++iy) {
            v[static_cast<std::size_t>(ix) * ny + iy] = ax * std::polar(1.0, iy * omega_y);
        }
    }
    return v;
}

Beamformers design_beamformers(const SimConfig& cfg) {
    const double r0 = cfg.range_to_reference();
    const double phi0 = std::atan2(cfg.x0_m, cfg.y0_m);
    const double theta0 = std::asin(cfg.z0_m / r0);
    const double lam = cfg.lambda_m();
    const double d = lam / 2.0;

    const auto [wxt, wyt] = spatial_frequencies(phi0, theta0, d, d, lam);
    Beamformers bf;
    bf.tx = steering_vector(wxt, wyt, cfg.nx_tx, cfg.ny_tx);
    bf.rx = steering_vector(wxt, wyt, cfg.nx_rx, cfg.ny_rx);
    const double stx = 1.0 / std::sqrt(static_cast<double>(bf.tx.size()));
    const double srx = 1.0 / std::sqrt(static_cast<double>(bf.rx.size()));
    for (auto& v : bf.tx) v *= stx;
    // matched to the conjugated RX steering vector in the channel model
    for (auto& v : bf.rx) v = std::conj(v) * srx;
    return bf;
}

std::vector<cplx> backscatter_truth(const SimConfig& cfg, const SceneTruth& truth,
                                    const Beamformers& bf) {
    const double lam = cfg.lambda_m();
    const double d = lam / 2.0;
    std::vector<cplx> h(truth.n_scatterers);
    for (int p = 0; p < truth.n_scatterers; ++p) {
        const std::size_t i = truth.idx(p, 0);
        const auto [wx, wy] = spatial_frequencies(truth.phi[i], truth.theta[i], d, d, lam);
        const auto atx = steering_vector(wx, wy, cfg.nx_tx, cfg.ny_tx);
        const auto arx = steering_vector(wx, wy, cfg.nx_rx, cfg.ny_rx);
        cplx rx_gain = 0;   // f_rx^H conj(a_rx)
        for (std::size_t j = 0; j < arx.size(); ++j) {
            rx_gain += std::conj(bf.rx[j]) * std::conj(arx[j]);
        }
        cplx tx_gain = 0;   // a_tx^H f_tx
        for (std::size_t j = 0; j < atx.size(); ++j) {
            tx_gain += std::conj(atx[j]) * bf.tx[j];
        }
        h[p] = std::sqrt(truth.gain[i]) * truth.beta[p] * rx_gain * tx_gain;
    }
    return h;
}

FrameSamples synthesize_frame(const SimConfig& cfg, const SceneTruth& truth,
                              std::span<const cplx> h, const Preamble& pre, int m,
                              Xoshiro256pp& rng, bool noiseless) {
    const int np = truth.n_scatterers;
    long ell_min = truth.ell_at(0, m), ell_max = ell_min;
    for (int p = 1; p < np; ++p) {
        ell_min = std::min(ell_min, truth.ell_at(p, m));
        ell_max = std::max(ell_max, truth.ell_at(p, m));
    }
    const long k0 = ell_min;
    const long k1 = cfg.training_len - 1 + ell_max;
    const std::size_t n = static_cast<std::size_t>(k1 - k0 + 1);

    FrameSamples frame;
    frame.m = m;
    frame.k0 = k0;
    frame.sigma_nc2 = cfg.sigma_nc2();
    frame.y.assign(n, cplx{0, 0});

    const double ts = cfg.ts_s();
    const double amp = std::sqrt(cfg.symbol_energy());
    for (int p = 0; p < np; ++p) {
        const long ell = truth.ell_at(p, m);
        const double nu = truth.nu_at(p, m);
        const long start = ell - k0;
        // phase advances by 2*pi*nu*Ts per sample; rotate incrementally
        const cplx step = std::polar(1.0, kTwoPi * nu * ts);
        cplx rot = std::polar(1.0, kTwoPi * nu *
                                       (static_cast<double>(ell) +
                                        static_cast<double>(m) * cfg.frame_len) *
                                       ts);
        const cplx base = amp * h[p];
        for (int k = 0; k < cfg.training_len; ++k) {
            frame.y[start + k] += base * rot * static_cast<double>(pre.samples[k]);
            rot *= step;
        }
    }
    if (!noiseless) {
        for (auto& v : frame.y) v += rng.cgaussian(frame.sigma_nc2);
    }
    return frame;
}

std::vector<FrameSamples> synthesize_all_frames(const SimConfig& cfg,
                                                const SceneTruth& truth,
                                                std::span<const cplx> h,
                                                const Preamble& pre, bool noiseless) {
    std::vector<FrameSamples> frames(truth.n_frames);
    parallel_for(truth.n_frames, cfg.threads, [&](int m) {
        auto rng = Xoshiro256pp::for_stream(cfg.seed, static_cast<uint64_t>(m));
        frames[m] = synthesize_frame(cfg, truth, h, pre, m, rng, noiseless);
    });
    return frames;
}

}  // namespace adisar
