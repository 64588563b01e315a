// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adisar/config.hpp"
#include "adisar/estimate.hpp"
#include "adisar/types.hpp"

namespace adisar {

/// Coefficients assigned to range bins; bin 0 corresponds to origin_ell.
struct RangeProfile {
    std::vector<cplx> bins;
    double delta_r_m = 0;
    long origin_ell = 0;
};

/// Assigns h_hat[j] to bin ells[j] - origin_ell; origin centers the vehicle
/// in the x_size_m window. Throws StageError when a delay falls outside.
RangeProfile range_profile(const SimConfig& cfg, const DelaySet& delays,
                           const Eigen::VectorXcd& h_hat);

/// omega = V cos(atan(X0/Y0)) / R0.
double rotational_velocity(const SimConfig& cfg, double v_hat);

/// Complex tones whose M-point DFT concentrates scatterer j at its
/// cross-range bin b_j = nu_j * c / (2 f_c omega delta_cr). The corrected
/// rows are affine in m, so the anchor-frame value carries each scatterer's
/// cross-range coordinate with the common translation drift removed.
struct CrossRangeSignal {
    int n_scatterers = 0;
    int n_frames = 0;
    std::vector<cplx> tones;          // j * M + m
    std::vector<double> bin_coords;   // b_j per scatterer
    double delta_cr_m = 0;
};

CrossRangeSignal cross_range_signal(const SimConfig& cfg, const DopplerMatrix& doppler,
                                    double omega);

/// Magnitude grid, rows = range bins, columns = cross-range bins
/// (DFT-shifted so zero Doppler is the middle column).
struct IsarImage {
    int n_r = 0;
    int n_cr = 0;
    std::vector<double> mag;   // row-major
    double delta_r_m = 0;
    double delta_cr_m = 0;
    bool flipped = false;

    double at(int r, int c) const { return mag[static_cast<size_t>(r) * n_cr + c]; }
};

/// Rows with scatterers hold sum_j h_hat[j] * tone_j; M-point DFT per row.
IsarImage form_image(const SimConfig& cfg, const RangeProfile& profile,
                     const DelaySet& delays, const CrossRangeSignal& cr,
                     const Eigen::VectorXcd& h_hat);

/// Mirror of the cross-range axis (involution).
IsarImage flip_cross_range(const IsarImage& img);

/// DFT-shifted column for a (possibly fractional) cross-range bin coordinate.
int cross_range_column(double bin_coord, int n_cr);

}  // namespace adisar
