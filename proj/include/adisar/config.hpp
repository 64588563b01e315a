// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "adisar/types.hpp"

namespace adisar {

enum class DetectorMode { kLseRefine, kCorrelation };

/// All physical, waveform, geometry and algorithm parameters of a run.
/// Defaults reproduce the reference vehicular scenario (60 GHz, 1.76 GHz
/// bandwidth, 8x8 arrays, 40 m/s sedan at 20 m).
struct SimConfig {
    // waveform
    double f_c_hz = 60e9;
    double bandwidth_hz = 1.76e9;
    int training_len = 3328;     // preamble samples per frame (K)
    int frame_len = 13632;       // frame spacing in samples (N_f)
    double cpi_s = 10e-3;

    // powers
    double tx_power_dbm = 30.0;
    double noise_density_dbm_hz = -174.0;
    double clutter_power_dbm = -72.275;
    double rcs_dbsm = 20.0;
    double path_loss_exp = 2.0;

    // geometry
    double x0_m = 0.0, y0_m = 20.0, z0_m = -7.0;   // vehicle reference point
    double xv_m = 5.0, yv_m = 2.0, zv_m = 1.5;     // vehicle extents
    double v_x_mps = 40.0;

    // arrays
    int nx_tx = 8, ny_tx = 8, nx_rx = 8, ny_rx = 8;

    // estimation / imaging
    int i_gap = 6;
    double x_size_m = 15.0, y_size_m = 20.0;
    DetectorMode detector = DetectorMode::kLseRefine;
    double corr_thresh_mult = 512.0;   // correlation mode: sigma_th = mult * sigma_nc
    double lse_thresh_kappa = 3.5;     // refine mode: |h| > kappa * per-coefficient noise
    double v_max_mps = 60.0;           // prior bound used by the wrap resolver
    double nu_max_hz = 6000.0;         // prior bound on |doppler| (wrap-free frame pick)
    double wrap_margin = 0.4;          // validity bound for the magnitude corrector

    // run control
    uint64_t seed = 1;
    int threads = 4;
    std::string vehicle_csv;           // empty = built-in 22-point model

    // ---- derived ----
    double ts_s() const { return 1.0 / bandwidth_hz; }
    double lambda_m() const { return kSpeedOfLight / f_c_hz; }
    int frames_per_cpi() const {
        return static_cast<int>(std::floor(cpi_s / (frame_len * ts_s())));
    }
    /// Per-sample signal power scale (linear watts).
    double symbol_energy() const { return std::pow(10.0, (tx_power_dbm - 30.0) / 10.0); }
    /// Noise + clutter variance per complex sample (linear watts).
    double sigma_nc2() const {
        return std::pow(10.0, (noise_density_dbm_hz - 30.0) / 10.0) * bandwidth_hz +
               std::pow(10.0, (clutter_power_dbm - 30.0) / 10.0);
    }
    double range_to_reference() const {
        return std::sqrt(x0_m * x0_m + y0_m * y0_m + z0_m * z0_m);
    }
    double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }

    /// Throws ConfigError when derived quantities are inconsistent.
    void validate() const;
};

/// Flat key=value file with '#' comments. Unknown keys are errors; every
/// field has a default so an empty file reproduces the reference scenario.
SimConfig parse_config_file(const std::filesystem::path& path);
SimConfig parse_config_text(const std::string& text);

/// Fixed-order emission; parse(emit(cfg)) == cfg.
std::string emit_config(const SimConfig& cfg);

}  // namespace adisar
