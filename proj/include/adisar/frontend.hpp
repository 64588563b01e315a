// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "adisar/config.hpp"
#include "adisar/golay.hpp"
#include "adisar/rng.hpp"
#include "adisar/scene.hpp"
#include "adisar/types.hpp"

namespace adisar {

/// omega_x = 2*pi*d_x*cos(theta)*sin(phi)/lambda, omega_y = 2*pi*d_y*sin(theta)/lambda.
std::pair<double, double> spatial_frequencies(double phi, double theta, double d_x,
                                              double d_y, double lambda);

/// Kronecker product of the x and y phase ramps; length nx*ny, |entry| = 1.
std::vector<cplx> steering_vector(double omega_x, double omega_y, int nx, int ny);

struct Beamformers {
    std::vector<cplx> tx;   // unit norm, matched to the reference point at t=0
    std::vector<cplx> rx;
};

Beamformers design_beamformers(const SimConfig& cfg);

/// Per-scatterer backscattering coefficients h_p = sqrt(G_p) * beta_p *
/// (f_rx^H a_rx^*) (a_tx^H f_tx), evaluated at the frame-0 angles.
std::vector<cplx> backscatter_truth(const SimConfig& cfg, const SceneTruth& truth,
                                    const Beamformers& bf);

/// One frame of received training-region samples, k = k0 .. k0 + y.size() - 1.
struct FrameSamples {
    int m = 0;
    long k0 = 0;
    std::vector<cplx> y;
    double sigma_nc2 = 0;   // noise+clutter variance used at synthesis
};

/// y[m,k] = sum_p sqrt(Es) h_p exp(j 2 pi nu_p^m (k + m N_f) T_s) s[k - ell_p^m] + z.
/// Noise is an independent substream per frame: Xoshiro256pp::for_stream(seed, m).
FrameSamples synthesize_frame(const SimConfig& cfg, const SceneTruth& truth,
                              std::span<const cplx> h, const Preamble& pre, int m,
                              Xoshiro256pp& rng, bool noiseless = false);

/// All M frames, parallel over frames (cfg.threads workers).
std::vector<FrameSamples> synthesize_all_frames(const SimConfig& cfg,
                                                const SceneTruth& truth,
                                                std::span<const cplx> h,
                                                const Preamble& pre, bool noiseless);

}  // namespace adisar
