// SPDX-License-Identifier: Apache-2.0
#include "adisar/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace adisar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Clean aperiodic-correlation zone of the ranging segment inside the
// training field: zero sidelobes 64 lags back, 128 forward.
constexpr long kCleanBack = 64;
constexpr long kCleanFwd = 128;

int search_halfwidth(const SimConfig& cfg) {
    return static_cast<int>(std::ceil(1.5 * cfg.xv_m / cfg.range_resolution()));
}

/// Strongest-first acceptance; drops lags in the sidelobe zone of an
/// already accepted delay.
std::vector<long> prune_to_clean_zone(std::vector<std::pair<double, long>> cand) {
    std::sort(cand.begin(), cand.end(), std::greater<>());
    std::vector<long> acc;
    for (const auto& [mag, l] : cand) {
        bool ok = true;
        for (long a : acc) {
            if (l - a < -kCleanBack || l - a > kCleanFwd) {
                ok = false;
                break;
            }
        }
        if (ok) acc.push_back(l);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

DelaySet finish_delay_set(std::vector<long> ells, long ell_peak) {
    if (ells.empty()) throw NoTargetDetected("no delay bin exceeds the detection threshold");
    DelaySet ds;
    ds.ells = std::move(ells);
    const auto it = std::find(ds.ells.begin(), ds.ells.end(), ell_peak);
    ds.ell_max_idx = it == ds.ells.end() ? 0 : static_cast<int>(it - ds.ells.begin());
    return ds;
}

}  // namespace

DelaySet detect_delays(const SimConfig& cfg, const FrameSamples& frame0,
                       const Preamble& pre, double sigma_nc) {
    const auto s512 = pre.s512();
    const long off = Preamble::kS512Offset;
    // delay hypothesis l needs samples y[l + off .. l + off + 511]
    const long lag_lo = frame0.k0 - off;
    const long lag_hi = frame0.k0 + static_cast<long>(frame0.y.size()) - off -
                        Preamble::kS512Len;   // inclusive
    if (lag_hi < lag_lo) throw StageError("frame too short for delay search");

    const auto r = xcorr_s512(s512, frame0.y, lag_lo - frame0.k0 + off,
                              lag_hi - frame0.k0 + off + 1);
    long ell_peak = lag_lo;
    double peak = -1;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double mag = std::abs(r[j]);
        if (mag > peak) {
            peak = mag;
            ell_peak = lag_lo + static_cast<long>(j);
        }
    }

    const int w = search_halfwidth(cfg);
    const long win_lo = std::max(lag_lo, ell_peak - std::min<long>(kCleanBack, w));
    const long win_hi = std::min(lag_hi, ell_peak + std::min<long>(kCleanFwd, w));

    if (cfg.detector == DetectorMode::kCorrelation) {
        const double threshold = cfg.corr_thresh_mult * sigma_nc;
        std::vector<std::pair<double, long>> cand;
        for (long l = win_lo; l <= win_hi; ++l) {
            const double mag = std::abs(r[static_cast<std::size_t>(l - lag_lo)]);
            if (mag > threshold) cand.emplace_back(mag, l);
        }
        return finish_delay_set(prune_to_clean_zone(std::move(cand)), ell_peak);
    }

    // LSE refinement: joint fit of every window lag over the full training
    // length, keep coefficients above kappa * per-coefficient noise.
    DelaySet all;
    for (long l = win_lo; l <= win_hi; ++l) all.ells.push_back(l);
    SymbolModel model(all, pre, cfg.training_len);
    const Eigen::VectorXcd h = model.solve(frame0);
    const Eigen::VectorXd& noise = model.coeff_noise_diag();
    std::vector<std::pair<double, long>> cand;
    for (int j = 0; j < h.size(); ++j) {
        const double mag = std::abs(h[j]);
        if (mag > cfg.lse_thresh_kappa * sigma_nc * noise[j]) {
            cand.emplace_back(mag, all.ells[j]);
        }
    }
    return finish_delay_set(prune_to_clean_zone(std::move(cand)), ell_peak);
}

Eigen::MatrixXd build_symbol_matrix(const DelaySet& delays, const Preamble& pre,
                                    int k_train) {
    if (delays.ells.empty()) throw StageError("empty delay set");
    if (!std::is_sorted(delays.ells.begin(), delays.ells.end())) {
        throw StageError("delay set must be sorted");
    }
    for (std::size_t j = 1; j < delays.ells.size(); ++j) {
        if (delays.ells[j] == delays.ells[j - 1]) {
            throw StageError("colliding delays " + std::to_string(delays.ells[j]) +
                             " and " + std::to_string(delays.ells[j - 1]) +
                             ": symbol matrix is rank-deficient");
        }
    }
    const long rows = k_train + delays.last() - delays.first();
    const int cols = delays.count();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, cols);
    for (int j = 0; j < cols; ++j) {
        const long shift = delays.ells[j] - delays.first();
        for (int k = 0; k < k_train; ++k) {
            s(shift + k, j) = static_cast<double>(pre.samples[k]);
        }
    }
    return s;
}

SymbolModel::SymbolModel(const DelaySet& delays, const Preamble& pre, int k_train)
    : delays_(delays),
      s_(build_symbol_matrix(delays, pre, k_train)),
      qr_(s_),
      row_k0_(delays.first()) {
    // diag((S^T S)^-1)^(1/2) from R^-1 row norms
    const int n = static_cast<int>(s_.cols());
    const Eigen::MatrixXd r =
        qr_.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rinv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    invdiag_sqrt_ = rinv.rowwise().norm();
}

Eigen::VectorXcd SymbolModel::solve(const FrameSamples& frame) const {
    const long rows = s_.rows();
    const long lo = std::max(row_k0_, frame.k0);
    const long hi = std::min(row_k0_ + rows, frame.k0 + static_cast<long>(frame.y.size()));
    if (hi - lo < s_.cols()) throw StageError("frame window too small for the delay set");

    if (lo == row_k0_ && hi == row_k0_ + rows) {
        Eigen::VectorXd re(rows), im(rows);
        for (long k = 0; k < rows; ++k) {
            const cplx v = frame.y[static_cast<std::size_t>(lo - frame.k0 + k)];
            re[k] = v.real();
            im[k] = v.imag();
        }
        return qr_.solve(re) + cplx{0, 1} * qr_.solve(im);
    }
    // window does not cover the regressor span: refit on the overlap
    const Eigen::MatrixXd sc = s_.middleRows(lo - row_k0_, hi - lo);
    Eigen::VectorXd re(hi - lo), im(hi - lo);
    for (long k = 0; k < hi - lo; ++k) {
        const cplx v = frame.y[static_cast<std::size_t>(lo - frame.k0 + k)];
        re[k] = v.real();
        im[k] = v.imag();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sc);
    return qr.solve(re) + cplx{0, 1} * qr.solve(im);
}

Eigen::VectorXcd lse_coeffs(const SymbolModel& model, const FrameSamples& frame) {
    return model.solve(frame);
}

double doppler_denominator_inv(const SimConfig& cfg, const DelaySet& delays, int m) {
    const double mid = (delays.first() + delays.last() + cfg.training_len - 1) / 2.0;
    return 1.0 / (kTwoPi * (mid + static_cast<double>(m) * cfg.frame_len) * cfg.ts_s());
}

std::vector<double> doppler_raw(const SimConfig& cfg, const DelaySet& delays,
                                const Eigen::VectorXcd& h_m,
                                const Eigen::VectorXcd& h_0, int m) {
    if (h_m.size() != h_0.size()) throw StageError("doppler_raw: size mismatch");
    const double d = doppler_denominator_inv(cfg, delays, m);
    std::vector<double> nu(static_cast<std::size_t>(h_m.size()));
    for (int p = 0; p < h_m.size(); ++p) {
        if (h_0[p] == cplx{0, 0}) throw StageError("doppler_raw: zero reference coefficient");
        nu[p] = std::arg(h_m[p] / h_0[p]) * d;
    }
    return nu;
}

WrapResult wrap_correct(std::span<const double> nu_m, std::span<const double> nu_m_minus_i,
                        int m, int i, double d_m, double d_m_minus_i) {
    if (i < 1) throw StageError("wrap_correct: i must be >= 1");
    if (!(d_m_minus_i > d_m) || d_m <= 0) {
        throw StageError("wrap_correct: denominator inverses must be positive and decreasing");
    }
    if (nu_m.size() != nu_m_minus_i.size()) throw StageError("wrap_correct: size mismatch");
    (void)m;
    const double gap = kTwoPi * (d_m_minus_i - d_m);
    WrapResult out;
    const std::size_t n = nu_m.size();
    out.nu_m.resize(n);
    out.nu_m_minus_i.resize(n);
    out.state.corrector.resize(n);
    out.state.wrap_counts.resize(n);
    out.state.d_m = d_m;
    out.state.d_m_minus_i = d_m_minus_i;
    for (std::size_t p = 0; p < n; ++p) {
        const double c = std::abs(nu_m[p]) - std::abs(nu_m_minus_i[p]);
        // branch by the sign of the measured wrapped phase at frame m
        const double x = (nu_m[p] >= 0) ? c / gap : -c / gap;
        const long wraps = std::llround(x);
        out.state.corrector[p] = c;
        out.state.wrap_counts[p] = wraps;
        out.nu_m[p] = nu_m[p] + kTwoPi * wraps * d_m;
        out.nu_m_minus_i[p] = nu_m_minus_i[p] + kTwoPi * wraps * d_m_minus_i;
    }
    return out;
}

double lower_median(std::vector<double> v) {
    if (v.empty()) throw StageError("median of empty set");
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

DopplerMatrix doppler_difference_and_propagate(const SimConfig& cfg,
                                               const DelaySet& delays,
                                               const std::vector<double>& raw_matrix,
                                               int i_gap) {
    const int mframes = cfg.frames_per_cpi();
    const int np = delays.count();
    if (raw_matrix.size() != static_cast<std::size_t>(np) * mframes) {
        throw StageError("raw doppler matrix has wrong shape");
    }
    if (i_gap >= mframes) throw StageError("M must exceed i_gap");

    DopplerMatrix dm;
    dm.n_scatterers = np;
    dm.n_frames = mframes;
    dm.raw = raw_matrix;
    dm.i_gap = i_gap;
    dm.anchor_m = mframes - 1;

    auto tau_mid = [&](int m) {
        const double mid = (delays.first() + delays.last() + cfg.training_len - 1) / 2.0;
        return (mid + static_cast<double>(m) * cfg.frame_len) * cfg.ts_s();
    };
    auto d_inv = [&](int m) { return doppler_denominator_inv(cfg, delays, m); };
    auto raw_col = [&](int m) {
        std::vector<double> col(np);
        for (int p = 0; p < np; ++p) col[p] = dm.raw_at(p, m);
        return col;
    };

    // magnitude corrector is valid while the Doppler drift across the pair
    // is small against one wrap quantum: nudot_max * tau_m * tau_{m-i} <= margin
    const double nudot_max =
        2.0 * cfg.v_max_mps * cfg.v_max_mps / (cfg.lambda_m() * cfg.range_to_reference());
    int mb = mframes - 1;
    while (mb > i_gap + 1 && nudot_max * tau_mid(mb) * tau_mid(mb - i_gap) > cfg.wrap_margin) {
        --mb;
    }
    dm.bootstrap_m = mb;

    // wrap-free reference: |nu| <= nu_max cannot wrap while tau_m <= 1/(2 nu_max)
    int mr = 1;
    while (mr + 1 < mb && tau_mid(mr + 1) <= 1.0 / (2.0 * cfg.nu_max_hz)) ++mr;
    dm.reference_m = mr;

    const auto boot = wrap_correct(raw_col(mb), raw_col(mb - i_gap), mb, i_gap,
                                   d_inv(mb), d_inv(mb - i_gap));
    std::vector<double> diff(np);
    for (int p = 0; p < np; ++p) diff[p] = (boot.nu_m[p] - boot.nu_m_minus_i[p]) / i_gap;
    double slope = lower_median(diff);

    // prediction-based unwrap of one frame from (reference values, slope)
    auto unwrap_from = [&](int m, const std::vector<double>& ref, int ref_m,
                           double slope_est) {
        const auto col = raw_col(m);
        const double d = d_inv(m);
        std::vector<double> out(np);
        for (int p = 0; p < np; ++p) {
            const double pred = ref[p] + (m - ref_m) * slope_est;
            const long wraps = std::llround((pred - col[p]) / (kTwoPi * d));
            out[p] = col[p] + kTwoPi * wraps * d;
        }
        return out;
    };

    // geometric ladder from the wrap-free reference up to the anchor; the
    // slope is re-estimated at each rung, which keeps the prediction error a
    // roughly constant fraction of the local half-wrap pi*D_m
    std::vector<double> cur = raw_col(mr);
    int cur_m = mr;
    std::vector<int> rungs;
    for (int m = mr; m < mframes - 1;) {
        m = std::min(std::max(2 * m, i_gap + 1), mframes - 1);
        rungs.push_back(m);
    }
    for (int m : rungs) {
        const auto at_m = unwrap_from(m, cur, cur_m, slope);
        const auto at_mi = unwrap_from(m - i_gap, cur, cur_m, slope);
        for (int p = 0; p < np; ++p) diff[p] = (at_m[p] - at_mi[p]) / i_gap;
        slope = lower_median(diff);
        cur = at_m;
        cur_m = m;
    }

    dm.delta_med_hz = slope;
    dm.corrected.resize(dm.raw.size());
    for (int p = 0; p < np; ++p) {
        for (int u = 0; u < mframes; ++u) {
            dm.corrected[static_cast<std::size_t>(p) * mframes + u] =
                cur[p] + (u - (mframes - 1)) * slope;
        }
    }
    return dm;
}

double estimate_velocity(const SimConfig& cfg, const DopplerMatrix& doppler) {
    const int np = doppler.n_scatterers;
    const int last = doppler.n_frames - 1;
    const double scale =
        cfg.lambda_m() * cfg.range_to_reference() / (2.0 * cfg.cpi_s);
    std::vector<double> v;
    v.reserve(np);
    std::vector<int> rejected;
    for (int p = 0; p < np; ++p) {
        const double radicand =
            scale * (doppler.corrected_at(p, 0) - doppler.corrected_at(p, last));
        if (radicand < 0) {
            rejected.push_back(p);
            continue;
        }
        v.push_back(std::sqrt(radicand));
    }
    if (v.empty()) {
        std::string who;
        for (int p : rejected) who += (who.empty() ? "" : ",") + std::to_string(p);
        throw StageError("geometry violates small-angle/receding assumption (scatterers " +
                         who + ")");
    }
    return lower_median(std::move(v));
}

}  // namespace adisar
