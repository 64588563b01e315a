// SPDX-License-Identifier: Apache-2.0
#include "adisar/image.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "adisar/parallel.hpp"

namespace adisar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

RangeProfile range_profile(const SimConfig& cfg, const DelaySet& delays,
                           const Eigen::VectorXcd& h_hat) {
    if (h_hat.size() != delays.count()) throw StageError("range_profile: size mismatch");
    RangeProfile rp;
    rp.delta_r_m = cfg.range_resolution();
    const int n_r = static_cast<int>(std::floor(cfg.x_size_m / rp.delta_r_m));
    // center the vehicle in the window
    const long mid = std::llround((delays.first() + delays.last()) / 2.0);
    rp.origin_ell = mid - n_r / 2;
    rp.bins.assign(n_r, cplx{0, 0});
    for (int j = 0; j < delays.count(); ++j) {
        const long bin = delays.ells[j] - rp.origin_ell;
        if (bin < 0 || bin >= n_r) {
            throw StageError("delay " + std::to_string(delays.ells[j]) +
                             " outside the range window");
        }
        rp.bins[static_cast<std::size_t>(bin)] += h_hat[j];
    }
    return rp;
}

double rotational_velocity(const SimConfig& cfg, double v_hat) {
    return v_hat * std::cos(std::atan2(cfg.x0_m, cfg.y0_m)) / cfg.range_to_reference();
}

CrossRangeSignal cross_range_signal(const SimConfig& cfg, const DopplerMatrix& doppler,
                                    double omega) {
    if (omega <= 0) throw StageError("cross_range_signal: omega must be positive");
    CrossRangeSignal cr;
    cr.n_scatterers = doppler.n_scatterers;
    cr.n_frames = doppler.n_frames;
    cr.delta_cr_m = cfg.y_size_m / doppler.n_frames;
    const double scale =
        kSpeedOfLight / (2.0 * cfg.f_c_hz * omega * cr.delta_cr_m);
    cr.bin_coords.resize(cr.n_scatterers);
    cr.tones.resize(static_cast<std::size_t>(cr.n_scatterers) * cr.n_frames);
    const int mframes = cr.n_frames;
    for (int j = 0; j < cr.n_scatterers; ++j) {
        // anchor-frame value: the corrected row minus the common drift
        const double b = scale * doppler.corrected_at(j, doppler.anchor_m);
        cr.bin_coords[j] = b;
        for (int m = 0; m < mframes; ++m) {
            cr.tones[static_cast<std::size_t>(j) * mframes + m] =
                std::polar(1.0, kTwoPi * b * m / mframes);
        }
    }
    return cr;
}

int cross_range_column(double bin_coord, int n_cr) {
    long k = std::lround(bin_coord);
    k %= n_cr;
    if (k < 0) k += n_cr;
    return static_cast<int>((k + n_cr / 2) % n_cr);
}

IsarImage form_image(const SimConfig& cfg, const RangeProfile& profile,
                     const DelaySet& delays, const CrossRangeSignal& cr,
                     const Eigen::VectorXcd& h_hat) {
    if (cr.n_scatterers != delays.count() || h_hat.size() != delays.count()) {
        throw StageError("form_image: dimension mismatch");
    }
    const int n_r = static_cast<int>(profile.bins.size());
    const int n_cr = cr.n_frames;

    IsarImage img;
    img.n_r = n_r;
    img.n_cr = n_cr;
    img.delta_r_m = profile.delta_r_m;
    img.delta_cr_m = cr.delta_cr_m;
    img.flipped = false;
    img.mag.assign(static_cast<std::size_t>(n_r) * n_cr, 0.0);

    // coherent sum of tones sharing a range bin
    std::map<int, std::vector<cplx>> rows;
    for (int j = 0; j < delays.count(); ++j) {
        const int bin = static_cast<int>(delays.ells[j] - profile.origin_ell);
        auto& row = rows.try_emplace(bin, std::vector<cplx>(n_cr, cplx{0, 0})).first->second;
        const cplx w = h_hat[j];
        for (int m = 0; m < n_cr; ++m) {
            row[m] += w * cr.tones[static_cast<std::size_t>(j) * n_cr + m];
        }
    }

    // unnormalized forward DFT per occupied row, spectrum shifted so zero
    // Doppler lands in the middle column
    std::vector<cplx> twiddle(n_cr);
    for (int t = 0; t < n_cr; ++t) twiddle[t] = std::polar(1.0, -kTwoPi * t / n_cr);
    std::vector<std::pair<int, const std::vector<cplx>*>> work;
    work.reserve(rows.size());
    for (const auto& [bin, row] : rows) work.emplace_back(bin, &row);

    parallel_for(static_cast<int>(work.size()), cfg.threads, [&](int wi) {
        const auto& [bin, rowp] = work[static_cast<std::size_t>(wi)];
        const auto& row = *rowp;
        for (int k = 0; k < n_cr; ++k) {
            cplx acc{0, 0};
            long idx = 0;
            for (int m = 0; m < n_cr; ++m) {
                acc += row[m] * twiddle[idx];
                idx += k;
                if (idx >= n_cr) idx -= n_cr;
            }
            const int col = static_cast<int>((k + n_cr / 2) % n_cr);
            img.mag[static_cast<std::size_t>(bin) * n_cr + col] = std::abs(acc);
        }
    });
    return img;
}

IsarImage flip_cross_range(const IsarImage& img) {
    IsarImage out = img;
    out.flipped = !img.flipped;
    for (int r = 0; r < img.n_r; ++r) {
        for (int c = 0; c < img.n_cr; ++c) {
            out.mag[static_cast<std::size_t>(r) * img.n_cr + c] =
                img.mag[static_cast<std::size_t>(r) * img.n_cr + (img.n_cr - 1 - c)];
        }
    }
    return out;
}

}  // namespace adisar
