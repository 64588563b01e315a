// SPDX-License-Identifier: Apache-2.0
#include "adisar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "adisar/parallel.hpp"

namespace adisar {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<Scatterer> scene_for(const SimConfig& cfg) {
    if (!cfg.vehicle_csv.empty()) return load_vehicle_csv(cfg.vehicle_csv, cfg.rcs_dbsm);
    return default_vehicle(cfg.rcs_dbsm);
}

std::vector<cplx> draw_betas(const SimConfig& cfg, std::size_t n) {
    auto rng = Xoshiro256pp::for_stream(cfg.seed, kSceneStream);
    std::vector<cplx> beta(n);
    for (auto& b : beta) b = rng.cgaussian(1.0);
    return beta;
}

}  // namespace

void write_manifest_json(const std::filesystem::path& path, const RunManifest& m) {
    ordered_json j;
    j["config"] = ordered_json::object();
    {
        // key = value lines of the full config snapshot
        std::istringstream cfgtext(emit_config(m.config));
        std::string line;
        while (std::getline(cfgtext, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) {
                j["config"][line.substr(0, eq)] = line.substr(eq + 3);
            }
        }
    }
    j["seed"] = m.seed;
    j["noiseless"] = m.noiseless;
    j["artifacts"] = ordered_json::object();
    for (const auto& [k, v] : m.artifact_paths) j["artifacts"][k] = v;
    j["metrics"] = {{"delay_set_f1", m.metrics.delay_set_f1},
                    {"doppler_rmse_hz", m.metrics.doppler_rmse_hz},
                    {"v_hat_mps", m.metrics.v_hat_mps},
                    {"v_err_pct", m.metrics.v_err_pct},
                    {"image_peak_match_count", m.metrics.image_peak_match_count}};
    atomic_write(path, j.dump(2) + "\n");
}

std::vector<std::pair<int, int>> truth_image_cells(const SimConfig& cfg,
                                                   const SceneTruth& truth,
                                                   const RangeProfile& profile,
                                                   double omega) {
    const int anchor = truth.n_frames - 1;
    const double dcr = cfg.y_size_m / truth.n_frames;
    const double scale = kSpeedOfLight / (2.0 * cfg.f_c_hz * omega * dcr);
    std::vector<std::pair<int, int>> cells;
    cells.reserve(truth.n_scatterers);
    for (int p = 0; p < truth.n_scatterers; ++p) {
        const int row = static_cast<int>(truth.ell_at(p, anchor) - profile.origin_ell);
        const int col = cross_range_column(scale * truth.nu_at(p, anchor), truth.n_frames);
        cells.emplace_back(row, col);
    }
    return cells;
}

int image_peak_match_count(const IsarImage& img,
                           const std::vector<std::pair<int, int>>& cells) {
    double gmax = 0;
    for (double v : img.mag) gmax = std::max(gmax, v);
    const double floor = 1e-9 * gmax;

    auto is_local_max = [&](int r, int c) {
        const double v = img.at(r, c);
        if (v <= floor) return false;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= img.n_r || cc < 0 || cc >= img.n_cr) continue;
                if (img.at(rr, cc) > v) return false;
            }
        }
        return true;
    };

    int matched = 0;
    for (const auto& [row, col] : cells) {
        bool ok = false;
        for (int dr = -1; dr <= 1 && !ok; ++dr) {
            for (int dc = -1; dc <= 1 && !ok; ++dc) {
                const int r = row + dr, c = col + dc;
                if (r < 0 || r >= img.n_r || c < 0 || c >= img.n_cr) continue;
                ok = is_local_max(r, c);
            }
        }
        matched += ok;
    }
    return matched;
}

Metrics score(const SimConfig& cfg, const SceneTruth& truth, const Estimates& est,
              const IsarImage& image) {
    Metrics m;

    // delay set F1 against the truth bins at m = 0
    std::set<long> truth_set;
    for (int p = 0; p < truth.n_scatterers; ++p) truth_set.insert(truth.ell_at(p, 0));
    std::set<long> est_set(est.delays.ells.begin(), est.delays.ells.end());
    int tp = 0;
    for (long l : est_set) tp += truth_set.count(l) ? 1 : 0;
    const int fp = static_cast<int>(est_set.size()) - tp;
    const int fn = static_cast<int>(truth_set.size()) - tp;
    m.delay_set_f1 = tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);

    // Doppler RMSE over matched (p, m)
    double se = 0;
    std::size_t cnt = 0;
    for (int p = 0; p < truth.n_scatterers; ++p) {
        const long ell = truth.ell_at(p, 0);
        const auto it = std::find(est.delays.ells.begin(), est.delays.ells.end(), ell);
        if (it == est.delays.ells.end()) continue;
        const int j = static_cast<int>(it - est.delays.ells.begin());
        for (int u = 0; u < truth.n_frames; ++u) {
            const double d = est.doppler.corrected_at(j, u) - truth.nu_at(p, u);
            se += d * d;
            ++cnt;
        }
    }
    m.doppler_rmse_hz = cnt ? std::sqrt(se / cnt) : 0.0;

    m.v_hat_mps = est.v_hat_mps;
    m.v_err_pct = std::abs(est.v_hat_mps - cfg.v_x_mps) / cfg.v_x_mps * 100.0;

    // peak matches on the flipped view, truth projected through the same grid
    const RangeProfile profile = range_profile(cfg, est.delays, est.h_hat);
    const double omega = rotational_velocity(cfg, est.v_hat_mps);
    auto cells = truth_image_cells(cfg, truth, profile, omega);
    const IsarImage flipped = image.flipped ? image : flip_cross_range(image);
    for (auto& [row, col] : cells) col = flipped.n_cr - 1 - col;
    m.image_peak_match_count = image_peak_match_count(flipped, cells);
    return m;
}

RunResult run_e2e(const SimConfig& cfg, const std::filesystem::path& out_dir,
                  const RunOptions& opt) {
    cfg.validate();
    RunResult res;
    res.scatterers = scene_for(cfg);
    const auto beta = draw_betas(cfg, res.scatterers.size());
    res.truth = truth_table(cfg, res.scatterers, beta);

    const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
    const Beamformers bf = design_beamformers(cfg);
    const auto h = backscatter_truth(cfg, res.truth, bf);
    const auto frames = synthesize_all_frames(cfg, res.truth, h, pre, opt.noiseless);

    const double sigma_nc = std::sqrt(cfg.sigma_nc2());
    res.estimates.delays = detect_delays(cfg, frames[0], pre, sigma_nc);

    const SymbolModel model(res.estimates.delays, pre, cfg.training_len);
    const int mframes = cfg.frames_per_cpi();
    const int np = res.estimates.delays.count();
    res.estimates.h_hat = lse_coeffs(model, frames[0]);

    std::vector<double> raw(static_cast<std::size_t>(np) * mframes, 0.0);
    std::vector<Eigen::VectorXcd> coeffs(mframes);
    parallel_for(mframes, cfg.threads,
                 [&](int m) { coeffs[m] = lse_coeffs(model, frames[m]); });
    for (int m = 1; m < mframes; ++m) {
        const auto nu =
            doppler_raw(cfg, res.estimates.delays, coeffs[m], res.estimates.h_hat, m);
        for (int p = 0; p < np; ++p) raw[static_cast<std::size_t>(p) * mframes + m] = nu[p];
    }
    res.estimates.doppler =
        doppler_difference_and_propagate(cfg, res.estimates.delays, raw, cfg.i_gap);
    res.estimates.v_hat_mps = estimate_velocity(cfg, res.estimates.doppler);

    const RangeProfile profile = range_profile(cfg, res.estimates.delays, res.estimates.h_hat);
    const double omega = rotational_velocity(cfg, res.estimates.v_hat_mps);
    const CrossRangeSignal cr = cross_range_signal(cfg, res.estimates.doppler, omega);
    res.image = form_image(cfg, profile, res.estimates.delays, cr, res.estimates.h_hat);

    res.metrics = score(cfg, res.truth, res.estimates, res.image);

    RunManifest& man = res.manifest;
    man.config = cfg;
    man.seed = cfg.seed;
    man.noiseless = opt.noiseless;
    man.metrics = res.metrics;

    if (opt.write_artifacts) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        // manifest records paths relative to its own directory so that two
        // runs into different directories stay byte-identical
        const std::string frames_name = opt.format == "csv" ? "frames.csv" : "frames.bin";
        if (opt.format == "csv") {
            write_frames_csv(out_dir / frames_name, frames);
        } else {
            write_frames_bin(out_dir / frames_name, frames);
        }
        man.artifact_paths["frames"] = frames_name;

        write_estimates_json(out_dir / "estimates.json", res.estimates);
        man.artifact_paths["estimates"] = "estimates.json";
        write_pgm16(out_dir / "image.pgm", res.image);
        man.artifact_paths["image_pgm"] = "image.pgm";
        write_pgm16(out_dir / "image_flipped.pgm", flip_cross_range(res.image));
        man.artifact_paths["image_flipped_pgm"] = "image_flipped.pgm";
        write_image_csv(out_dir / "image.csv", res.image);
        man.artifact_paths["image_csv"] = "image.csv";
        write_axes_json(out_dir / "axes.json", res.image);
        man.artifact_paths["axes"] = "axes.json";

        write_manifest_json(out_dir / "manifest.json", man);
        man.artifact_paths["manifest"] = "manifest.json";
    }
    return res;
}

std::string sweep(const SimConfig& base, const std::string& param,
                  const std::vector<double>& values,
                  const std::filesystem::path& out_dir, const RunOptions& opt) {
    if (values.empty()) throw ConfigError("sweep: empty value list");

    std::string csv =
        "param,value,seed,delay_set_f1,doppler_rmse_hz,v_hat_mps,v_err_pct,"
        "image_peak_match_count\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        SimConfig cfg = base;
        // route the value through the config parser so any numeric key works
        char valbuf[64];
        std::snprintf(valbuf, sizeof valbuf, "%.17g", values[i]);
        try {
            cfg = parse_config_text(emit_config(base) + param + " = " + valbuf + "\n");
        } catch (const ConfigError& e) {
            throw ConfigError("sweep: " + std::string(e.what()));
        }
        cfg.seed = base.seed ^ splitmix64_mix(i);
        const auto run_dir = out_dir / (param + "_" + std::to_string(i));
        const RunResult r = run_e2e(cfg, run_dir, opt);
        char line[256];
        std::snprintf(line, sizeof line, "%s,%.17g,%llu,%.6f,%.6g,%.6f,%.4f,%d\n",
                      param.c_str(), values[i],
                      static_cast<unsigned long long>(cfg.seed), r.metrics.delay_set_f1,
                      r.metrics.doppler_rmse_hz, r.metrics.v_hat_mps, r.metrics.v_err_pct,
                      r.metrics.image_peak_match_count);
        csv += line;
    }
    if (opt.write_artifacts) {
        atomic_write(out_dir / "sweep.csv", csv);
    }
    return csv;
}

}  // namespace adisar
