// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Verbs: dump-preamble, simulate, estimate, image,
// e2e, sweep. Exit codes: 0 success, 2 config error, 3 stage failure,
// 4 no target detected.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "adisar/estimate.hpp"
#include "adisar/golay.hpp"
#include "adisar/io.hpp"
#include "adisar/parallel.hpp"
#include "adisar/pipeline.hpp"

namespace fs = std::filesystem;
using namespace adisar;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir = "out";
    bool noiseless = false;
    std::string format = "bin";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value)");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_flag("--noiseless", args.noiseless, "disable noise and clutter");
    cmd->add_option("--format", args.format, "frame artifact format")
        ->check(CLI::IsMember({"bin", "csv"}));
}

SimConfig load_config(const CommonArgs& args) {
    SimConfig cfg = args.config_path.empty() ? SimConfig{} : parse_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();
    return cfg;
}

Estimates estimate_from_frames(const SimConfig& cfg,
                               const std::vector<FrameSamples>& frames) {
    const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
    const double sigma_nc = std::sqrt(frames.empty() ? cfg.sigma_nc2() : frames[0].sigma_nc2);
    Estimates est;
    est.delays = detect_delays(cfg, frames.at(0), pre, sigma_nc);
    const SymbolModel model(est.delays, pre, cfg.training_len);
    est.h_hat = lse_coeffs(model, frames[0]);

    const int mframes = static_cast<int>(frames.size());
    const int np = est.delays.count();
    std::vector<Eigen::VectorXcd> coeffs(mframes);
    parallel_for(mframes, cfg.threads,
                 [&](int m) { coeffs[m] = lse_coeffs(model, frames[m]); });
    std::vector<double> raw(static_cast<std::size_t>(np) * mframes, 0.0);
    for (int m = 1; m < mframes; ++m) {
        const auto nu = doppler_raw(cfg, est.delays, coeffs[m], est.h_hat, m);
        for (int p = 0; p < np; ++p) raw[static_cast<std::size_t>(p) * mframes + m] = nu[p];
    }
    est.doppler = doppler_difference_and_propagate(cfg, est.delays, raw, cfg.i_gap);
    est.v_hat_mps = estimate_velocity(cfg, est.doppler);
    return est;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"IEEE 802.11ad waveform vehicular radar imaging simulator"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* dump = app.add_subcommand("dump-preamble", "write the 3328-sample training field");
    add_common(dump, args);

    auto* simulate = app.add_subcommand("simulate", "synthesize received frames");
    add_common(simulate, args);

    auto* estimate = app.add_subcommand("estimate", "estimate delays/Doppler/velocity from frames");
    std::string frames_path;
    add_common(estimate, args);
    estimate->add_option("--frames", frames_path, "frame file (defaults to <out>/frames.<format>)");

    auto* image = app.add_subcommand("image", "form the image from estimates");
    std::string estimates_path;
    add_common(image, args);
    image->add_option("--estimates", estimates_path,
                      "estimates file (defaults to <out>/estimates.json)");

    auto* e2e = app.add_subcommand("e2e", "simulate, estimate, image and score in one run");
    add_common(e2e, args);

    auto* sweep_cmd = app.add_subcommand("sweep", "run e2e across values of one parameter");
    std::string sweep_param;
    std::vector<double> sweep_values;
    add_common(sweep_cmd, args);
    sweep_cmd->add_option("--param", sweep_param, "config key to vary")->required();
    sweep_cmd->add_option("--values", sweep_values, "values to sweep")->required();

    CLI11_PARSE(app, argc, argv);

    const SimConfig cfg = load_config(args);
    const fs::path out(args.out_dir);

    if (dump->parsed()) {
        const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
        fs::create_directories(out);
        write_preamble_csv(out / "preamble.csv", pre);
        std::printf("wrote %s\n", (out / "preamble.csv").string().c_str());
        return 0;
    }

    if (simulate->parsed()) {
        const auto scatterers = cfg.vehicle_csv.empty()
                                    ? default_vehicle(cfg.rcs_dbsm)
                                    : load_vehicle_csv(cfg.vehicle_csv, cfg.rcs_dbsm);
        auto rng = Xoshiro256pp::for_stream(cfg.seed, kSceneStream);
        std::vector<cplx> beta(scatterers.size());
        for (auto& b : beta) b = rng.cgaussian(1.0);
        const SceneTruth truth = truth_table(cfg, scatterers, beta);
        const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
        const Beamformers bf = design_beamformers(cfg);
        const auto h = backscatter_truth(cfg, truth, bf);
        const auto frames = synthesize_all_frames(cfg, truth, h, pre, args.noiseless);
        fs::create_directories(out);
        if (args.format == "csv") {
            write_frames_csv(out / "frames.csv", frames);
        } else {
            write_frames_bin(out / "frames.bin", frames);
        }
        std::printf("wrote %d frames\n", truth.n_frames);
        return 0;
    }

    if (estimate->parsed()) {
        if (frames_path.empty()) {
            frames_path = (out / (args.format == "csv" ? "frames.csv" : "frames.bin")).string();
        }
        const auto frames = args.format == "csv"
                                ? read_frames_csv(frames_path, cfg.sigma_nc2())
                                : read_frames_bin(frames_path);
        const Estimates est = estimate_from_frames(cfg, frames);
        fs::create_directories(out);
        write_estimates_json(out / "estimates.json", est);
        std::printf("N_hat_p=%d V_hat=%.3f m/s\n", est.delays.count(), est.v_hat_mps);
        return 0;
    }

    if (image->parsed()) {
        if (estimates_path.empty()) estimates_path = (out / "estimates.json").string();
        const Estimates est = read_estimates_json(estimates_path);
        const RangeProfile profile = range_profile(cfg, est.delays, est.h_hat);
        const double omega = rotational_velocity(cfg, est.v_hat_mps);
        const CrossRangeSignal cr = cross_range_signal(cfg, est.doppler, omega);
        const IsarImage img = form_image(cfg, profile, est.delays, cr, est.h_hat);
        fs::create_directories(out);
        write_pgm16(out / "image.pgm", img);
        write_pgm16(out / "image_flipped.pgm", flip_cross_range(img));
        write_image_csv(out / "image.csv", img);
        write_axes_json(out / "axes.json", img);
        std::printf("image %dx%d written\n", img.n_r, img.n_cr);
        return 0;
    }

    if (e2e->parsed()) {
        RunOptions opt;
        opt.noiseless = args.noiseless;
        opt.format = args.format;
        const RunResult r = run_e2e(cfg, out, opt);
        std::printf("F1=%.4f doppler_rmse=%.3f Hz V_hat=%.3f m/s (err %.2f%%) peaks=%d\n",
                    r.metrics.delay_set_f1, r.metrics.doppler_rmse_hz, r.metrics.v_hat_mps,
                    r.metrics.v_err_pct, r.metrics.image_peak_match_count);
        return 0;
    }

    if (sweep_cmd->parsed()) {
        RunOptions opt;
        opt.noiseless = args.noiseless;
        opt.format = args.format;
        const std::string csv = adisar::sweep(cfg, sweep_param, sweep_values, out, opt);
        std::fputs(csv.c_str(), stdout);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NoTargetDetected& e) {
        std::fprintf(stderr, "no target detected: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stage failure: %s\n", e.what());
        return 3;
    }
}
