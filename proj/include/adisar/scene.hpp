// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "adisar/config.hpp"
#include "adisar/types.hpp"

namespace adisar {

/// Point scatterer, offset relative to the vehicle reference point.
struct Scatterer {
    double x_m = 0, y_m = 0, z_m = 0;
    double rcs_m2 = 0;   // linear RCS share, sums to 10^(rcs_dbsm/10)
};

/// Built-in 22-point sedan model (5 m x 1.5 m side profile, scatterers
/// spread across the 2 m width so every sampled delay bin is distinct).
std::vector<Scatterer> default_vehicle(double rcs_dbsm);

/// CSV with header x_m,y_m,z_m,rcs_share; shares are normalized to 1.
std::vector<Scatterer> load_vehicle_csv(const std::filesystem::path& path,
                                        double rcs_dbsm);
void write_vehicle_csv(const std::filesystem::path& path,
                       std::span<const Scatterer> scatterers);

/// Instantaneous geometry of one scatterer at frame m.
/// v_radial is the closing speed (-dr/dt): approaching => positive.
struct Kinematics {
    double r_m = 0;
    double v_radial_mps = 0;
    double phi_rad = 0;     // azimuth, atan2(q_x, q_y)
    double theta_rad = 0;   // elevation, asin(q_z / r)
};

Kinematics kinematics_at(const SimConfig& cfg, const Scatterer& s, int m);

double large_scale_gain(const SimConfig& cfg, double r_m, double rcs_m2);

/// Ground truth per (scatterer, frame): flat arrays indexed p * M + m.
struct SceneTruth {
    int n_scatterers = 0;
    int n_frames = 0;
    std::vector<double> r, tau, tau_f, nu, phi, theta, gain;
    std::vector<long> ell;
    std::vector<cplx> beta;   // per scatterer, constant over the CPI

    std::size_t idx(int p, int m) const {
        return static_cast<std::size_t>(p) * n_frames + m;
    }
    long ell_at(int p, int m) const { return ell[idx(p, m)]; }
    double nu_at(int p, int m) const { return nu[idx(p, m)]; }
};

/// beta_draws: one unit-variance circular Gaussian per scatterer.
SceneTruth truth_table(const SimConfig& cfg, std::span<const Scatterer> scatterers,
                       std::span<const cplx> beta_draws);

}  // namespace adisar
