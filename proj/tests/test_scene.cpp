// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "adisar/rng.hpp"
#include "adisar/scene.hpp"

using namespace adisar;

namespace {

std::vector<cplx> unit_betas(std::size_t n) { return std::vector<cplx>(n, cplx{1, 0}); }

}  // namespace

TEST_CASE("default vehicle: count, total RCS, extents") {
    const auto v = default_vehicle(20.0);
    REQUIRE(v.size() == 22);
    double total = 0, xmin = 1e9, xmax = -1e9, zmin = 1e9, zmax = -1e9;
    for (const auto& s : v) {
        total += s.rcs_m2;
        xmin = std::min(xmin, s.x_m);
        xmax = std::max(xmax, s.x_m);
        zmin = std::min(zmin, s.z_m);
        zmax = std::max(zmax, s.z_m);
        CHECK(s.rcs_m2 > 0);
        CHECK(std::abs(s.y_m) <= 1.0);
    }
    CHECK(total == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(xmax - xmin == doctest::Approx(5.0));
    CHECK(zmax - zmin == doctest::Approx(1.5));
}

TEST_CASE("vehicle csv round trip and normalization") {
    const auto v = default_vehicle(20.0);
    const auto path = std::filesystem::temp_directory_path() / "adisar_vehicle_test.csv";
    write_vehicle_csv(path, v);
    const auto v2 = load_vehicle_csv(path, 20.0);
    REQUIRE(v2.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v2[i].x_m == doctest::Approx(v[i].x_m));
        CHECK(v2[i].y_m == doctest::Approx(v[i].y_m));
        CHECK(v2[i].z_m == doctest::Approx(v[i].z_m));
        CHECK(v2[i].rcs_m2 == doctest::Approx(v[i].rcs_m2).epsilon(1e-9));
    }
    std::filesystem::remove(path);
}

TEST_CASE("repository vehicle file matches the built-in model") {
    const auto repo_csv =
        std::filesystem::path(ADISAR_SOURCE_DIR) / "data" / "vehicle.csv";
    REQUIRE(std::filesystem::exists(repo_csv));
    const auto file = load_vehicle_csv(repo_csv, 20.0);
    const auto builtin = default_vehicle(20.0);
    REQUIRE(file.size() == builtin.size());
    for (std::size_t i = 0; i < file.size(); ++i) {
        CHECK(file[i].x_m == doctest::Approx(builtin[i].x_m).epsilon(1e-12));
        CHECK(file[i].y_m == doctest::Approx(builtin[i].y_m).epsilon(1e-12));
        CHECK(file[i].z_m == doctest::Approx(builtin[i].z_m).epsilon(1e-12));
    }
}

TEST_CASE("kinematics at broadside and at the reference point") {
    SimConfig cfg;
    // scatterer exactly at the reference: r = sqrt(449), zero closing speed at x=0
    const Scatterer ref{0, 0, 0, 1.0};
    const Kinematics k0 = kinematics_at(cfg, ref, 0);
    CHECK(k0.r_m == doctest::Approx(std::sqrt(449.0)).epsilon(1e-12));
    CHECK(k0.v_radial_mps == doctest::Approx(0.0));
    CHECK(k0.phi_rad == doctest::Approx(0.0));
    CHECK(k0.theta_rad == doctest::Approx(std::asin(-7.0 / std::sqrt(449.0))));

    // vehicle displaces by about V*CPI along x over the CPI
    const int last = cfg.frames_per_cpi() - 1;
    const double t_last = last * cfg.frame_len * cfg.ts_s();
    CHECK(cfg.v_x_mps * t_last == doctest::Approx(0.4).epsilon(0.01));
}

TEST_CASE("truth table: sampled delay and doppler examples") {
    SimConfig cfg;
    const std::vector<Scatterer> sc{{0, 0, 0, 100.0}};
    const auto truth = truth_table(cfg, sc, unit_betas(1));
    // r = sqrt(449) -> tau ~ 141.4 ns -> bin 248
    CHECK(truth.tau[0] == doctest::Approx(1.4136192912776407e-07).epsilon(1e-12));
    CHECK(truth.ell_at(0, 0) == 248);
    CHECK(truth.tau_f[0] == doctest::Approx(truth.tau[0] - 248 * cfg.ts_s()));

    // hypothetical head-on closing at 40 m/s: nu = 2 v / lambda ~ 16.01 kHz
    const std::vector<Scatterer> far{{-1e9, 0, 0, 100.0}};
    const auto t2 = truth_table(cfg, far, unit_betas(1));
    CHECK(t2.nu_at(0, 0) ==
          doctest::Approx(2.0 * 40.0 / cfg.lambda_m()).epsilon(1e-6));
    CHECK(t2.nu_at(0, 0) == doctest::Approx(16011.076569).epsilon(1e-6));
}

TEST_CASE("two scatterers one range-resolution apart take distinct bins") {
    SimConfig cfg;
    // radial separation of 8.6 cm across the bin edge near 20 m
    const std::vector<Scatterer> sc{{0, 0.0, 0, 50.0}, {0, 0.086, 0, 50.0}};
    const auto truth = truth_table(cfg, sc, unit_betas(2));
    CHECK(truth.ell_at(0, 0) != truth.ell_at(1, 0));
}

TEST_CASE("large scale gain laws") {
    SimConfig cfg;
    const double g1 = large_scale_gain(cfg, 10.0, 4.0);
    CHECK(large_scale_gain(cfg, 20.0, 4.0) == doctest::Approx(g1 / 16.0).epsilon(1e-12));
    CHECK(large_scale_gain(cfg, 10.0, 8.0) == doctest::Approx(2.0 * g1).epsilon(1e-12));
    // frozen oracle value at the reference range with the per-scatterer share
    CHECK(large_scale_gain(cfg, 21.19, 100.0 / 22.0) ==
          doctest::Approx(2.8363694913613506e-13).epsilon(1e-12));
    CHECK_THROWS_AS(large_scale_gain(cfg, 0.0, 1.0), StageError);
}

TEST_CASE("delay decomposition reproduces the round-trip delay") {
    SimConfig cfg;
    const auto sc = default_vehicle(cfg.rcs_dbsm);
    auto rng = Xoshiro256pp::for_stream(7, kSceneStream);
    std::vector<cplx> beta(sc.size());
    for (auto& b : beta) b = rng.cgaussian(1.0);
    const auto truth = truth_table(cfg, sc, beta);
    for (int p = 0; p < truth.n_scatterers; ++p) {
        for (int m : {0, 100, truth.n_frames - 1}) {
            const auto i = truth.idx(p, m);
            const double recon = truth.ell[i] * cfg.ts_s() + truth.tau_f[i];
            CHECK(recon == doctest::Approx(truth.tau[i]).epsilon(1e-15));
            CHECK(truth.tau[i] == doctest::Approx(2.0 * truth.r[i] / kSpeedOfLight));
            CHECK(truth.tau_f[i] >= 0.0);
            CHECK(truth.tau_f[i] < cfg.ts_s());
        }
    }
}

TEST_CASE("default scene: distinct and frame-invariant delay set") {
    SimConfig cfg;
    const auto sc = default_vehicle(cfg.rcs_dbsm);
    const auto truth = truth_table(cfg, sc, unit_betas(sc.size()));
    std::set<long> first;
    for (int p = 0; p < truth.n_scatterers; ++p) first.insert(truth.ell_at(p, 0));
    CHECK(first.size() == 22);
    for (int m = 1; m < truth.n_frames; ++m) {
        std::set<long> s;
        for (int p = 0; p < truth.n_scatterers; ++p) s.insert(truth.ell_at(p, m));
        if (s != first) {
            FAIL("delay set changed at frame ", m);
        }
    }
}

TEST_CASE("doppler difference is nearly constant over the CPI") {
    SimConfig cfg;
    const auto sc = default_vehicle(cfg.rcs_dbsm);
    const auto truth = truth_table(cfg, sc, unit_betas(sc.size()));
    for (int p = 0; p < truth.n_scatterers; ++p) {
        const int m1 = truth.n_frames - 1;
        const double d_head = truth.nu_at(p, 1) - truth.nu_at(p, 0);
        const double d_tail = truth.nu_at(p, m1) - truth.nu_at(p, m1 - 1);
        const double mean = (truth.nu_at(p, m1) - truth.nu_at(p, 0)) / m1;
        CHECK(std::abs(d_head - mean) / std::abs(mean) < 0.01);
        CHECK(std::abs(d_tail - mean) / std::abs(mean) < 0.01);
        // monotone history
        CHECK(((d_head < 0) == (d_tail < 0)));
    }
}

TEST_CASE("scatterer at the array is rejected") {
    SimConfig cfg;
    cfg.x0_m = 0;
    cfg.y0_m = 1;
    cfg.z0_m = 0;
    const std::vector<Scatterer> sc{{0, -1.0, 0, 1.0}};
    CHECK_THROWS_AS(truth_table(cfg, sc, unit_betas(1)), StageError);
}
