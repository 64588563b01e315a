// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adisar/pipeline.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace adisar;

namespace {

py::array_t<int8_t> as_i8_array(const std::vector<int8_t>& v) {
    return py::array_t<int8_t>({static_cast<py::ssize_t>(v.size())}, v.data());
}

py::array_t<cplx> as_cplx_array(const std::vector<cplx>& v) {
    return py::array_t<cplx>({static_cast<py::ssize_t>(v.size())}, v.data());
}

py::array_t<double> matrix_2d(const std::vector<double>& flat, int rows, int cols) {
    return py::array_t<double>({static_cast<py::ssize_t>(rows),
                                static_cast<py::ssize_t>(cols)},
                               flat.data());
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["delay_set_f1"] = m.delay_set_f1;
    d["doppler_rmse_hz"] = m.doppler_rmse_hz;
    d["v_hat_mps"] = m.v_hat_mps;
    d["v_err_pct"] = m.v_err_pct;
    d["image_peak_match_count"] = m.image_peak_match_count;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "IEEE 802.11ad waveform vehicular radar imaging simulator";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NoTargetDetected>(m, "NoTargetDetected");

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("f_c_hz", &SimConfig::f_c_hz)
        .def_readwrite("bandwidth_hz", &SimConfig::bandwidth_hz)
        .def_readwrite("training_len", &SimConfig::training_len)
        .def_readwrite("frame_len", &SimConfig::frame_len)
        .def_readwrite("cpi_s", &SimConfig::cpi_s)
        .def_readwrite("tx_power_dbm", &SimConfig::tx_power_dbm)
        .def_readwrite("noise_density_dbm_hz", &SimConfig::noise_density_dbm_hz)
        .def_readwrite("clutter_power_dbm", &SimConfig::clutter_power_dbm)
        .def_readwrite("rcs_dbsm", &SimConfig::rcs_dbsm)
        .def_readwrite("path_loss_exp", &SimConfig::path_loss_exp)
        .def_readwrite("x0_m", &SimConfig::x0_m)
        .def_readwrite("y0_m", &SimConfig::y0_m)
        .def_readwrite("z0_m", &SimConfig::z0_m)
        .def_readwrite("xv_m", &SimConfig::xv_m)
        .def_readwrite("yv_m", &SimConfig::yv_m)
        .def_readwrite("zv_m", &SimConfig::zv_m)
        .def_readwrite("v_x_mps", &SimConfig::v_x_mps)
        .def_readwrite("nx_tx", &SimConfig::nx_tx)
        .def_readwrite("ny_tx", &SimConfig::ny_tx)
        .def_readwrite("nx_rx", &SimConfig::nx_rx)
        .def_readwrite("ny_rx", &SimConfig::ny_rx)
        .def_readwrite("i_gap", &SimConfig::i_gap)
        .def_readwrite("x_size_m", &SimConfig::x_size_m)
        .def_readwrite("y_size_m", &SimConfig::y_size_m)
        .def_readwrite("corr_thresh_mult", &SimConfig::corr_thresh_mult)
        .def_readwrite("lse_thresh_kappa", &SimConfig::lse_thresh_kappa)
        .def_readwrite("v_max_mps", &SimConfig::v_max_mps)
        .def_readwrite("nu_max_hz", &SimConfig::nu_max_hz)
        .def_readwrite("wrap_margin", &SimConfig::wrap_margin)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("threads", &SimConfig::threads)
        .def_readwrite("vehicle_csv", &SimConfig::vehicle_csv)
        .def_property_readonly("ts_s", &SimConfig::ts_s)
        .def_property_readonly("lambda_m", &SimConfig::lambda_m)
        .def_property_readonly("frames_per_cpi", &SimConfig::frames_per_cpi)
        .def_property_readonly("sigma_nc2", &SimConfig::sigma_nc2)
        .def_property_readonly("range_resolution", &SimConfig::range_resolution)
        .def("validate", &SimConfig::validate);

    m.def("parse_config_file", &parse_config_file);
    m.def("parse_config_text", &parse_config_text);
    m.def("emit_config", &emit_config);

    m.def(
        "golay_pair",
        [](int n, const std::vector<int>& delays, const std::vector<int>& weights) {
            const GolayPair p = generate_golay_pair(n, delays, weights);
            return py::make_tuple(as_i8_array(p.a), as_i8_array(p.b));
        },
        py::arg("n"), py::arg("delays"), py::arg("weights"),
        "Delay/weight recursive Golay pair construction");
    m.def("ieee80211ad_pair_128", []() {
        const GolayPair p = ieee80211ad_pair_128();
        return py::make_tuple(as_i8_array(p.a), as_i8_array(p.b));
    });
    m.def("preamble", []() {
        return as_i8_array(assemble_preamble(ieee80211ad_pair_128()).samples);
    });

    m.def(
        "simulate",
        [](const SimConfig& cfg, bool noiseless) {
            cfg.validate();
            const auto sc = cfg.vehicle_csv.empty()
                                ? default_vehicle(cfg.rcs_dbsm)
                                : load_vehicle_csv(cfg.vehicle_csv, cfg.rcs_dbsm);
            auto rng = Xoshiro256pp::for_stream(cfg.seed, kSceneStream);
            std::vector<cplx> beta(sc.size());
            for (auto& b : beta) b = rng.cgaussian(1.0);
            const SceneTruth truth = truth_table(cfg, sc, beta);
            const Preamble pre = assemble_preamble(ieee80211ad_pair_128());
            const auto h = backscatter_truth(cfg, truth, design_beamformers(cfg));
            const auto frames = synthesize_all_frames(cfg, truth, h, pre, noiseless);
            py::list out;
            for (const auto& f : frames) {
                py::dict d;
                d["m"] = f.m;
                d["k0"] = f.k0;
                d["y"] = as_cplx_array(f.y);
                d["sigma_nc2"] = f.sigma_nc2;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("cfg"), py::arg("noiseless") = false,
        "Synthesize all frames of one CPI; returns a list of frame dicts");

    m.def(
        "run_e2e",
        [](const SimConfig& cfg, const std::string& out_dir, bool noiseless) {
            RunOptions opt;
            opt.noiseless = noiseless;
            opt.write_artifacts = !out_dir.empty();
            const RunResult r = run_e2e(cfg, out_dir.empty() ? fs::path{} : fs::path(out_dir), opt);
            py::dict d;
            d["metrics"] = metrics_dict(r.metrics);
            d["delays"] = r.estimates.delays.ells;
            d["h_hat"] = py::array_t<cplx>(
                {static_cast<py::ssize_t>(r.estimates.h_hat.size())},
                r.estimates.h_hat.data());
            d["delta_med_hz"] = r.estimates.doppler.delta_med_hz;
            d["v_hat_mps"] = r.estimates.v_hat_mps;
            d["doppler_corrected"] =
                matrix_2d(r.estimates.doppler.corrected, r.estimates.doppler.n_scatterers,
                          r.estimates.doppler.n_frames);
            d["image"] = matrix_2d(r.image.mag, r.image.n_r, r.image.n_cr);
            d["delta_r_m"] = r.image.delta_r_m;
            d["delta_cr_m"] = r.image.delta_cr_m;
            return d;
        },
        py::arg("cfg"), py::arg("out_dir") = std::string{}, py::arg("noiseless") = false,
        "Full pipeline: simulate, estimate, image, score");

    m.def(
        "sweep",
        [](const SimConfig& cfg, const std::string& param, const std::vector<double>& values,
           const std::string& out_dir, bool noiseless) {
            RunOptions opt;
            opt.noiseless = noiseless;
            opt.write_artifacts = !out_dir.empty();
            return sweep(cfg, param, values, out_dir.empty() ? fs::path{} : fs::path(out_dir),
                         opt);
        },
        py::arg("cfg"), py::arg("param"), py::arg("values"),
        py::arg("out_dir") = std::string{}, py::arg("noiseless") = false,
        "Run e2e across values of one config key; returns the metrics CSV text");

    m.def("default_vehicle", [](double rcs_dbsm) {
        py::list out;
        for (const auto& s : default_vehicle(rcs_dbsm)) {
            out.append(py::make_tuple(s.x_m, s.y_m, s.z_m, s.rcs_m2));
        }
        return out;
    });
}
