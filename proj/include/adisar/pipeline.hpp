// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adisar/config.hpp"
#include "adisar/estimate.hpp"
#include "adisar/image.hpp"
#include "adisar/io.hpp"
#include "adisar/scene.hpp"

namespace adisar {

struct Metrics {
    double delay_set_f1 = 0;
    double doppler_rmse_hz = 0;
    double v_hat_mps = 0;
    double v_err_pct = 0;
    int image_peak_match_count = 0;
};

/// Everything needed to reproduce a run bit-exactly.
struct RunManifest {
    SimConfig config;
    uint64_t seed = 0;
    bool noiseless = false;
    std::map<std::string, std::string> artifact_paths;
    Metrics metrics;
};

void write_manifest_json(const std::filesystem::path& path, const RunManifest& m);

struct RunOptions {
    bool noiseless = false;
    std::string format = "bin";       // frame artifact format: bin | csv
    bool write_artifacts = true;
};

/// In-memory products of one end-to-end run (kept for tests and scoring).
struct RunResult {
    SceneTruth truth;
    std::vector<Scatterer> scatterers;
    Estimates estimates;
    IsarImage image;          // unflipped
    Metrics metrics;
    RunManifest manifest;
};

/// default_vehicle -> truth_table -> synthesize M frames -> detect ->
/// per-frame LSE -> Doppler chain -> velocity -> image -> score.
RunResult run_e2e(const SimConfig& cfg, const std::filesystem::path& out_dir,
                  const RunOptions& opt = {});

/// Set-F1 of delays, Doppler RMSE over matched (p, m), velocity error,
/// and image peak matches against the truth-projected grid cells.
Metrics score(const SimConfig& cfg, const SceneTruth& truth, const Estimates& est,
              const IsarImage& image);

/// One run per value; seeds derived as seed ^ splitmix64_mix(index).
/// Returns the CSV text written to sweep.csv (value + metrics per row).
std::string sweep(const SimConfig& base, const std::string& param,
                  const std::vector<double>& values,
                  const std::filesystem::path& out_dir, const RunOptions& opt = {});

/// Truth-projected (range bin, shifted cross-range column) cells at the
/// anchor frame, through the same gridding the image uses.
std::vector<std::pair<int, int>> truth_image_cells(const SimConfig& cfg,
                                                   const SceneTruth& truth,
                                                   const RangeProfile& profile,
                                                   double omega);

/// Scatterers with an image local maximum within a +/-1 cell neighborhood.
int image_peak_match_count(const IsarImage& img,
                           const std::vector<std::pair<int, int>>& cells);

}  // namespace adisar
