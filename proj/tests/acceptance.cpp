// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Runs every shipping criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion; exits nonzero when
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "adisar/pipeline.hpp"

using namespace adisar;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr uint64_t kNoiselessSeed = 3;   // all 22 reflectivities detectable
constexpr int kSeeds = 20;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SeedOutcome {
    double f1 = 0;
    double v_hat = 0;
    int peaks = 0;
    bool failed = false;
};

// xorshift-free standalone uniform for the synthetic wrap instances
struct MiniRng {
    uint64_t s;
    double next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
    long intrange(long lo, long hi) {
        return lo + static_cast<long>(next() * static_cast<double>(hi - lo + 1));
    }
};

}  // namespace

int main() {
    const SimConfig defaults;

    // ---- criterion 1: complementarity of the generated 128 pair, < 1 s
    {
        const auto t0 = std::chrono::steady_clock::now();
        const GolayPair p = ieee80211ad_pair_128();
        bool ok = true;
        for (int k = 0; k < 128 && ok; ++k) {
            long ra = 0, rb = 0;
            for (int t = 0; t + k < 128; ++t) {
                ra += long(p.a[t]) * long(p.a[t + k]);
                rb += long(p.b[t]) * long(p.b[t + k]);
            }
            ok = (k == 0) ? (ra + rb == 256) : (ra + rb == 0);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(1, ok && secs < 1.0,
               "Golay 128 complementarity exact over all lags (" +
                   std::to_string(secs) + " s)");
    }

    // ---- criterion 2: zero-sidelobe window of the training segment
    {
        const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
        std::vector<cplx> y(pre.samples.size());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = double(pre.samples[k]);
        const long peak = Preamble::kS512Offset;
        const auto r = xcorr_s512(pre.s512(), y, peak - 64, peak + 129);
        const double pk = std::abs(r[64]);
        double worst = 0;
        for (long d = -64; d <= 128; ++d) {
            if (d != 0) worst = std::max(worst, std::abs(r[d + 64]) / pk);
        }
        report(2, worst < 1e-12,
               "relative sidelobe within [-64,+128] lags = " + std::to_string(worst));
    }

    // ---- criterion 3: range resolution from defaults
    {
        const double dr = defaults.range_resolution();
        report(3, std::abs(dr - 0.0852) <= 1e-4,
               "delta_r = " + std::to_string(dr) + " m");
    }

    // ---- shared noisy runs for criteria 4, 7, 8
    std::vector<SeedOutcome> outcomes(kSeeds);
    for (int s = 0; s < kSeeds; ++s) {
        SimConfig cfg = defaults;
        cfg.seed = static_cast<uint64_t>(s + 1);
        RunOptions opt;
        opt.write_artifacts = false;
        try {
            const RunResult r = run_e2e(cfg, {}, opt);
            outcomes[s].f1 = r.metrics.delay_set_f1;
            outcomes[s].v_hat = r.metrics.v_hat_mps;
            outcomes[s].peaks = r.metrics.image_peak_match_count;
        } catch (const std::exception& e) {
            outcomes[s].failed = true;
            std::printf("  seed %d failed: %s\n", s + 1, e.what());
        }
    }

    // ---- noiseless run shared by criteria 4, 6, 7
    SimConfig noiseless_cfg = defaults;
    noiseless_cfg.seed = kNoiselessSeed;
    RunOptions noiseless_opt;
    noiseless_opt.noiseless = true;
    noiseless_opt.write_artifacts = false;
    const RunResult nl = run_e2e(noiseless_cfg, {}, noiseless_opt);

    // ---- criterion 4: range reconstruction
    {
        int full = 0;
        for (const auto& o : outcomes) full += (!o.failed && o.f1 == 1.0);

        // noiseless coefficient accuracy per detected scatterer
        const auto h_true = backscatter_truth(noiseless_cfg, nl.truth,
                                              design_beamformers(noiseless_cfg));
        const double amp = std::sqrt(noiseless_cfg.symbol_energy());
        double worst_h = 0;
        bool matched_all = nl.metrics.delay_set_f1 == 1.0;
        for (int j = 0; j < nl.estimates.delays.count(); ++j) {
            for (int p = 0; p < nl.truth.n_scatterers; ++p) {
                if (nl.truth.ell_at(p, 0) == nl.estimates.delays.ells[j]) {
                    const cplx expect = amp * h_true[p];
                    worst_h = std::max(worst_h, std::abs(nl.estimates.h_hat[j] - expect) /
                                                    std::abs(expect));
                }
            }
        }

        // zero-doppler noiseless run: coefficients exact to solver precision
        SimConfig zcfg = noiseless_cfg;
        zcfg.v_x_mps = 0.0;
        const auto scat = default_vehicle(zcfg.rcs_dbsm);
        auto rng = Xoshiro256pp::for_stream(zcfg.seed, kSceneStream);
        std::vector<cplx> beta(scat.size());
        for (auto& b : beta) b = rng.cgaussian(1.0);
        const SceneTruth ztruth = truth_table(zcfg, scat, beta);
        const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
        const auto zh = backscatter_truth(zcfg, ztruth, design_beamformers(zcfg));
        auto zrng = Xoshiro256pp::for_stream(zcfg.seed, 0);
        const FrameSamples zf = synthesize_frame(zcfg, ztruth, zh, pre, 0, zrng, true);
        const DelaySet zds = detect_delays(zcfg, zf, pre, std::sqrt(zcfg.sigma_nc2()));
        const SymbolModel zmodel(zds, pre, zcfg.training_len);
        const Eigen::VectorXcd zcoef = lse_coeffs(zmodel, zf);
        double worst_h0 = 0;
        for (int j = 0; j < zds.count(); ++j) {
            for (int p = 0; p < ztruth.n_scatterers; ++p) {
                if (ztruth.ell_at(p, 0) == zds.ells[j]) {
                    const cplx expect = std::sqrt(zcfg.symbol_energy()) * zh[p];
                    worst_h0 = std::max(worst_h0,
                                        std::abs(zcoef[j] - expect) / std::abs(expect));
                }
            }
        }

        const bool pass = full >= 18 && matched_all && worst_h < 0.05 && worst_h0 < 1e-9;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "F1=1.0 on %d/20 seeds (need 18); noiseless max |h| error %.3g "
                      "(<0.05), %.3g with zero doppler (<1e-9)",
                      full, worst_h, worst_h0);
        report(4, pass, buf);
    }

    // ---- criterion 5: wrap corrector against the brute-force oracle
    {
        MiniRng rng{0x2024ULL};
        int nonboundary = 0, agree = 0, boundary = 0;
        DelaySet ds;
        ds.ells = {241, 262};
        for (int trial = 0; trial < 1000; ++trial) {
            SimConfig cfg = defaults;
            const int m = static_cast<int>(rng.intrange(cfg.i_gap + 1, cfg.frames_per_cpi() - 1));
            const int i = static_cast<int>(rng.intrange(1, std::min(12, m - 1)));
            const double dm = doppler_denominator_inv(cfg, ds, m);
            const double dmi = doppler_denominator_inv(cfg, ds, m - i);
            const long wraps_true = rng.intrange(-50, 50);
            const double nu_m = rng.range(-2500.0, 2500.0);
            const double nu_mi = nu_m - rng.range(-0.3, 0.3) * i;
            const std::vector<double> raw_m{nu_m - kTwoPi * wraps_true * dm};
            const std::vector<double> raw_mi{nu_mi - kTwoPi * wraps_true * dmi};

            const auto res = wrap_correct(raw_m, raw_mi, m, i, dm, dmi);
            long oracle = 0;
            double best = 1e300;
            for (long c = -60; c <= 60; ++c) {
                const double diff = std::abs((raw_m[0] + kTwoPi * c * dm) -
                                             (raw_mi[0] + kTwoPi * c * dmi));
                if (diff < best) {
                    best = diff;
                    oracle = c;
                }
            }
            const double gap = kTwoPi * (dmi - dm);
            const double c = std::abs(raw_m[0]) - std::abs(raw_mi[0]);
            const double x = raw_m[0] >= 0 ? c / gap : -c / gap;
            if (std::abs(x - std::round(x)) < 0.4) {
                ++nonboundary;
                agree += (res.state.wrap_counts[0] == oracle);
            } else {
                ++boundary;
            }
        }
        const double rate = 100.0 * agree / std::max(nonboundary, 1);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "corrector agrees with the search oracle on %.2f%% of %d "
                      "non-boundary cases (need 99%%); %d boundary cases reported",
                      rate, nonboundary, boundary);
        report(5, rate >= 99.0, buf);
    }

    // ---- criterion 6: noiseless corrected doppler accuracy
    {
        bool pass = nl.metrics.delay_set_f1 == 1.0;
        double worst_anchor = 0, worst_zero = 0;
        const int last = nl.truth.n_frames - 1;
        for (int j = 0; j < nl.estimates.delays.count(); ++j) {
            for (int p = 0; p < nl.truth.n_scatterers; ++p) {
                if (nl.truth.ell_at(p, 0) != nl.estimates.delays.ells[j]) continue;
                const double ra =
                    std::abs(nl.estimates.doppler.corrected_at(j, last) -
                             nl.truth.nu_at(p, last)) /
                    std::abs(nl.truth.nu_at(p, last));
                const double r0 = std::abs(nl.estimates.doppler.corrected_at(j, 0) -
                                           nl.truth.nu_at(p, 0)) /
                                  std::abs(nl.truth.nu_at(p, 0));
                worst_anchor = std::max(worst_anchor, ra);
                worst_zero = std::max(worst_zero, r0);
            }
        }
        pass = pass && worst_anchor < 0.01 && worst_zero < 0.02;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "noiseless max relative error %.4f%% at m=M-1 (<1%%), %.4f%% at "
                      "m=0 (<2%%), all scatterers",
                      100 * worst_anchor, 100 * worst_zero);
        report(6, pass, buf);
    }

    // ---- criterion 7: velocity accuracy
    {
        std::vector<double> vs;
        for (const auto& o : outcomes) {
            if (!o.failed) vs.push_back(o.v_hat);
        }
        const double vmed = lower_median(vs);
        const double noisy_err = std::abs(vmed - defaults.v_x_mps) / defaults.v_x_mps;
        const double nl_err =
            std::abs(nl.metrics.v_hat_mps - defaults.v_x_mps) / defaults.v_x_mps;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "median V over 20 noisy seeds = %.3f m/s (err %.2f%%, <10%%); "
                      "noiseless V = %.3f (err %.2f%%, <5%%)",
                      vmed, 100 * noisy_err, nl.metrics.v_hat_mps, 100 * nl_err);
        report(7, noisy_err < 0.10 && nl_err < 0.05, buf);
    }

    // ---- criterion 8: image peaks against the truth-projected cells
    {
        int good = 0;
        for (const auto& o : outcomes) good += (!o.failed && o.peaks >= 20);
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      ">=20/22 peak matches on %d/20 seeds (need 18); noiseless %d/22",
                      good, nl.metrics.image_peak_match_count);
        report(8, good >= 18 && nl.metrics.image_peak_match_count >= 20, buf);
    }

    // ---- criterion 9: end-to-end runtime with artifacts, 4 threads
    {
        SimConfig cfg = defaults;
        cfg.seed = 1;
        cfg.threads = 4;
        const fs::path dir = fs::temp_directory_path() / "adisar_accept_rt";
        fs::remove_all(dir);
        const auto t0 = std::chrono::steady_clock::now();
        run_e2e(cfg, dir, {});
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fs::remove_all(dir);
        char buf[128];
        std::snprintf(buf, sizeof buf, "full e2e with M=%d frames took %.2f s (<60 s)",
                      cfg.frames_per_cpi(), secs);
        report(9, secs < 60.0, buf);
    }

    // ---- criterion 10: byte-identical artifacts on repeated runs
    {
        SimConfig cfg = defaults;
        cfg.seed = 7;
        const fs::path d1 = fs::temp_directory_path() / "adisar_accept_det1";
        const fs::path d2 = fs::temp_directory_path() / "adisar_accept_det2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        run_e2e(cfg, d1, {});
        run_e2e(cfg, d2, {});
        bool same = true;
        for (const char* name : {"frames.bin", "estimates.json", "image.pgm",
                                 "image_flipped.pgm", "image.csv", "axes.json",
                                 "manifest.json"}) {
            same = same && slurp(d1 / name) == slurp(d2 / name);
        }
        fs::remove_all(d1);
        fs::remove_all(d2);
        report(10, same, "repeated e2e artifacts byte-identical");
    }

    if (g_failures != 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
