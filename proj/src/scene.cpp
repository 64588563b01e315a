// SPDX-License-Identifier: Apache-2.0
#include "adisar/scene.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "adisar/io.hpp"

namespace adisar {

namespace {

// 22-point sedan side profile (x: rear bumper to grille, z: wheels to roof).
// y offsets use the vehicle width so all round-trip delay bins are distinct
// at the reference geometry and stay so over a CPI.
constexpr double kVehicle[22][3] = {
    {-2.50, -0.9570, -0.42},  // rear bumper, low
    {-2.48, -0.7232, -0.05},  // tail light
    {-2.30, -0.5294, 0.18},   // trunk lid edge
    {-1.95, -0.3696, 0.28},   // trunk mid
    {-1.60, -0.1475, 0.32},   // rear deck
    {-1.15, 0.2459, 0.62},    // rear window
    {-0.70, 0.9257, 0.75},    // roof, rear
    {0.60, 0.7291, 0.72},     // roof, front
    {1.10, 0.8881, 0.45},     // windshield
    {1.45, 0.4401, 0.25},     // cowl
    {1.85, 0.9206, 0.18},     // hood mid
    {2.20, 0.9471, 0.10},     // hood edge
    {2.50, -0.0717, -0.12},   // grille
    {2.45, 0.9093, -0.45},    // front bumper, low
    {1.60, 0.0353, -0.60},    // front wheel arch, front
    {1.30, -0.4556, -0.75},   // front wheel
    {1.00, 0.6447, -0.55},    // front wheel arch, rear
    {0.55, 0.3452, -0.68},    // sill, front
    {-0.85, -0.0158, -0.68},  // sill, rear
    {-1.20, -0.2545, -0.55},  // rear wheel arch, front
    {-1.50, 0.8425, -0.74},   // rear wheel
    {-1.80, -0.5495, -0.50},  // rear wheel arch, rear
};

}  // namespace

std::vector<Scatterer> default_vehicle(double rcs_dbsm) {
    const double total = std::pow(10.0, rcs_dbsm / 10.0);
    std::vector<Scatterer> v(22);
    for (int i = 0; i < 22; ++i) {
        v[i] = {kVehicle[i][0], kVehicle[i][1], kVehicle[i][2], total / 22.0};
    }
    return v;
}

std::vector<Scatterer> load_vehicle_csv(const std::filesystem::path& path,
                                        double rcs_dbsm) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vehicle file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x_m,y_m,z_m,rcs_share", 0) != 0) {
        throw ConfigError("vehicle file must start with header x_m,y_m,z_m,rcs_share");
    }
    std::vector<Scatterer> v;
    std::vector<double> shares;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        double vals[4];
        for (double& val : vals) {
            if (!std::getline(ss, cell, ',')) throw ConfigError("vehicle row needs 4 columns");
            val = std::stod(cell);
        }
        if (vals[3] <= 0) throw ConfigError("rcs_share must be positive");
        v.push_back({vals[0], vals[1], vals[2], 0.0});
        shares.push_back(vals[3]);
    }
    if (v.empty()) throw ConfigError("vehicle file has no scatterers");
    double sum = 0;
    for (double s : shares) sum += s;
    const double total = std::pow(10.0, rcs_dbsm / 10.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i].rcs_m2 = total * shares[i] / sum;
    return v;
}

void write_vehicle_csv(const std::filesystem::path& path,
                       std::span<const Scatterer> scatterers) {
    double total = 0;
    for (const auto& s : scatterers) total += s.rcs_m2;
    std::ostringstream out;
    out << "x_m,y_m,z_m,rcs_share\n";
    char buf[128];
    for (const auto& s : scatterers) {
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.17g\n", s.x_m, s.y_m, s.z_m,
                      s.rcs_m2 / total);
        out << buf;
    }
    atomic_write(path, out.str());
}

Kinematics kinematics_at(const SimConfig& cfg, const Scatterer& s, int m) {
    const double t = m * cfg.frame_len * cfg.ts_s();
    const double qx = cfg.x0_m + s.x_m + cfg.v_x_mps * t;
    const double qy = cfg.y0_m + s.y_m;
    const double qz = cfg.z0_m + s.z_m;
    const double r = std::sqrt(qx * qx + qy * qy + qz * qz);
    if (r <= 0) throw StageError("scatterer coincides with the array");
    Kinematics k;
    k.r_m = r;
    k.v_radial_mps = -cfg.v_x_mps * qx / r;   // closing speed
    k.phi_rad = std::atan2(qx, qy);
    k.theta_rad = std::asin(qz / r);
    return k;
}

double large_scale_gain(const SimConfig& cfg, double r_m, double rcs_m2) {
    if (r_m <= 0) throw StageError("large_scale_gain: range must be positive");
    const double lam = cfg.lambda_m();
    const double four_pi = 4.0 * std::numbers::pi;
    return rcs_m2 * lam * lam /
           (four_pi * four_pi * four_pi * std::pow(r_m, 2.0 * cfg.path_loss_exp));
}

SceneTruth truth_table(const SimConfig& cfg, std::span<const Scatterer> scatterers,
                       std::span<const cplx> beta_draws) {
    if (beta_draws.size() != scatterers.size()) {
        throw StageError("truth_table: one beta draw per scatterer required");
    }
    const int np = static_cast<int>(scatterers.size());
    const int mframes = cfg.frames_per_cpi();
    SceneTruth t;
    t.n_scatterers = np;
    t.n_frames = mframes;
    const std::size_t total = static_cast<std::size_t>(np) * mframes;
    t.r.resize(total);
    t.tau.resize(total);
    t.tau_f.resize(total);
    t.nu.resize(total);
    t.phi.resize(total);
    t.theta.resize(total);
    t.gain.resize(total);
    t.ell.resize(total);
    t.beta.assign(beta_draws.begin(), beta_draws.end());

    const double ts = cfg.ts_s();
    const double lam = cfg.lambda_m();
    for (int p = 0; p < np; ++p) {
        for (int m = 0; m < mframes; ++m) {
            const Kinematics k = kinematics_at(cfg, scatterers[p], m);
            const std::size_t i = t.idx(p, m);
            t.r[i] = k.r_m;
            t.tau[i] = 2.0 * k.r_m / kSpeedOfLight;
            t.ell[i] = static_cast<long>(std::floor(t.tau[i] / ts));
            t.tau_f[i] = t.tau[i] - t.ell[i] * ts;
            t.nu[i] = 2.0 * k.v_radial_mps / lam;
            t.phi[i] = k.phi_rad;
            t.theta[i] = k.theta_rad;
            t.gain[i] = large_scale_gain(cfg, k.r_m, scatterers[p].rcs_m2);
        }
    }
    return t;
}

}  // namespace adisar
