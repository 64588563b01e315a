// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "adisar/estimate.hpp"
#include "adisar/frontend.hpp"
#include "adisar/image.hpp"
#include "adisar/types.hpp"

namespace adisar {

/// Frame container format: little-endian header (magic "GISR", u32 version,
/// u32 M, per-frame table of {u64 byte offset, i64 k0, u64 sample count,
/// f64 sigma_nc2}), then interleaved f64 re/im per frame.
void write_frames_bin(const std::filesystem::path& path,
                      const std::vector<FrameSamples>& frames);
std::vector<FrameSamples> read_frames_bin(const std::filesystem::path& path);

/// CSV fallback, columns m,k,re,im (sigma_nc2 is not carried; the reader
/// takes it as an argument, typically from the config).
void write_frames_csv(const std::filesystem::path& path,
                      const std::vector<FrameSamples>& frames);
std::vector<FrameSamples> read_frames_csv(const std::filesystem::path& path,
                                          double sigma_nc2);

/// Estimation artifacts bundled for JSON export.
struct Estimates {
    DelaySet delays;
    Eigen::VectorXcd h_hat;
    DopplerMatrix doppler;
    double v_hat_mps = 0;
};

/// estimates.json with fixed key order:
/// delays, h_hat, doppler_corrected, delta_med, V_hat, N_hat_p.
void write_estimates_json(const std::filesystem::path& path, const Estimates& est);
Estimates read_estimates_json(const std::filesystem::path& path);

/// 16-bit binary PGM (P5), magnitudes max-normalized to [0, 65535],
/// rows = range bins.
void write_pgm16(const std::filesystem::path& path, const IsarImage& img);

/// Raw magnitudes, one row per range bin.
void write_image_csv(const std::filesystem::path& path, const IsarImage& img);

/// {delta_r, delta_cr, n_r, n_cr, flipped}
void write_axes_json(const std::filesystem::path& path, const IsarImage& img);

/// Single-column CSV of +/-1 with header "sample".
void write_preamble_csv(const std::filesystem::path& path, const Preamble& pre);

/// Atomic text/binary writes (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& data);

}  // namespace adisar
