// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "adisar/config.hpp"
#include "adisar/frontend.hpp"
#include "adisar/golay.hpp"
#include "adisar/types.hpp"

namespace adisar {

/// Sorted, distinct sampled delays detected at the first frame.
struct DelaySet {
    std::vector<long> ells;
    int ell_max_idx = 0;   // index into ells of the peak-correlation delay

    long first() const { return ells.front(); }
    long last() const { return ells.back(); }
    int count() const { return static_cast<int>(ells.size()); }
};

/// Peak search plus thresholded collection around the peak. In
/// DetectorMode::kCorrelation the threshold is corr_thresh_mult * sigma_nc on
/// |R|; in kLseRefine every window lag is fitted jointly over the full
/// training length and kept when its coefficient exceeds lse_thresh_kappa
/// per-coefficient noise. Both modes drop candidates outside the clean
/// correlation zone (64 back / 128 forward) of a stronger accepted delay.
DelaySet detect_delays(const SimConfig& cfg, const FrameSamples& frame0,
                       const Preamble& pre, double sigma_nc);

/// Shifted-preamble regressor: column j is the preamble delayed by
/// ells[j] - ells[0]; rows cover k = ells[0] .. K - 1 + ells[last].
Eigen::MatrixXd build_symbol_matrix(const DelaySet& delays, const Preamble& pre,
                                    int k_train);

/// Precomputed QR of the symbol matrix, shared across frames.
class SymbolModel {
  public:
    SymbolModel(const DelaySet& delays, const Preamble& pre, int k_train);

    /// Least-squares coefficients for one frame (rows clipped to the frame
    /// window when it does not cover the full regressor span).
    Eigen::VectorXcd solve(const FrameSamples& frame) const;

    /// Per-coefficient noise scale: sigma * sqrt(diag((S^T S)^-1)).
    const Eigen::VectorXd& coeff_noise_diag() const { return invdiag_sqrt_; }

    const DelaySet& delays() const { return delays_; }
    long row_k0() const { return row_k0_; }
    const Eigen::MatrixXd& matrix() const { return s_; }

  private:
    DelaySet delays_;
    Eigen::MatrixXd s_;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
    Eigen::VectorXd invdiag_sqrt_;
    long row_k0_ = 0;
};

/// hat h_m = argmin || y_m - S h ||_2 via the model's QR.
Eigen::VectorXcd lse_coeffs(const SymbolModel& model, const FrameSamples& frame);

/// Inverse of the phase-to-frequency denominator at frame m:
/// D_m = 1 / (2 pi ((ell_0 + ell_last + K - 1)/2 + m N_f) T_s).
double doppler_denominator_inv(const SimConfig& cfg, const DelaySet& delays, int m);

/// Raw per-scatterer estimates from the phase of h_m / h_0 (wraps in (-pi, pi]).
std::vector<double> doppler_raw(const SimConfig& cfg, const DelaySet& delays,
                                const Eigen::VectorXcd& h_m,
                                const Eigen::VectorXcd& h_0, int m);

struct WrapState {
    std::vector<double> corrector;     // |nu^m| - |nu^{m-i}|
    std::vector<long> wrap_counts;     // resolved integer wrap counts
    double d_m = 0, d_m_minus_i = 0;   // denominator inverses of the pair
};

/// Magnitude-difference wrap resolution for one frame pair. Valid when the
/// true Doppler change across the pair is small against 2 pi (D_{m-i} - D_m).
struct WrapResult {
    std::vector<double> nu_m;          // corrected values at m
    std::vector<double> nu_m_minus_i;  // corrected values at m-i
    WrapState state;
};
WrapResult wrap_correct(std::span<const double> nu_m, std::span<const double> nu_m_minus_i,
                        int m, int i, double d_m, double d_m_minus_i);

/// Doppler histories: raw per-frame estimates plus the wrap-resolved,
/// median-slope-propagated matrix (rows affine in the frame index).
struct DopplerMatrix {
    int n_scatterers = 0;
    int n_frames = 0;
    std::vector<double> raw;         // p * M + m
    std::vector<double> corrected;   // p * M + m
    double delta_med_hz = 0;         // per-frame Doppler difference (median)
    int i_gap = 0;
    int anchor_m = 0;                // M - 1
    int bootstrap_m = 0;             // pair used for the magnitude corrector
    int reference_m = 0;             // wrap-free low-m frame

    double raw_at(int p, int m) const { return raw[static_cast<size_t>(p) * n_frames + m]; }
    double corrected_at(int p, int m) const {
        return corrected[static_cast<size_t>(p) * n_frames + m];
    }
};

/// Wrap-resolve and propagate: magnitude corrector at its validity bound,
/// per-scatterer references from a wrap-free frame, geometric prediction
/// ladder to the anchor M-1, then affine fill with the median slope.
DopplerMatrix doppler_difference_and_propagate(const SimConfig& cfg,
                                               const DelaySet& delays,
                                               const std::vector<double>& raw_matrix,
                                               int i_gap);

/// hat V = sqrt(lambda R0 (nu^0 - nu^{M-1}) / (2 CPI)), median over scatterers.
/// Scatterers with a negative radicand are excluded; all excluded is an error.
double estimate_velocity(const SimConfig& cfg, const DopplerMatrix& doppler);

/// Lower median (order statistic at floor((n-1)/2)) for determinism.
double lower_median(std::vector<double> v);

}  // namespace adisar
