// SPDX-License-Identifier: Apache-2.0
#include "adisar/config.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace adisar {

void SimConfig::validate() const {
    if (f_c_hz <= 0 || bandwidth_hz <= 0) throw ConfigError("carrier/bandwidth must be positive");
    if (training_len <= 0) throw ConfigError("training_len must be positive");
    if (frame_len < training_len) throw ConfigError("frame_len must be >= training_len");
    if (cpi_s <= 0) throw ConfigError("cpi_s must be positive");
    if (i_gap < 1) throw ConfigError("i_gap must be >= 1");
    if (frames_per_cpi() < i_gap + 1) throw ConfigError("M must exceed i_gap");
    if (nx_tx < 1 || ny_tx < 1 || nx_rx < 1 || ny_rx < 1) throw ConfigError("array dims must be >= 1");
    if (!(std::isfinite(tx_power_dbm) && std::isfinite(noise_density_dbm_hz) &&
          std::isfinite(clutter_power_dbm) && std::isfinite(rcs_dbsm))) {
        throw ConfigError("powers must be finite");
    }
    if (x_size_m <= 0 || y_size_m <= 0) throw ConfigError("image plane must be positive");
    if (range_to_reference() <= 0) throw ConfigError("reference point coincides with the array");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (corr_thresh_mult <= 0 || lse_thresh_kappa <= 0) throw ConfigError("thresholds must be positive");
    if (v_max_mps <= 0 || nu_max_hz <= 0 || wrap_margin <= 0) throw ConfigError("wrap priors must be positive");
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Field {
    std::function<std::string(const SimConfig&)> get;
    std::function<void(SimConfig&, const std::string&)> set;
};

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value: " + s);
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw ConfigError("bad numeric value: " + s);
    return v;
}

int parse_int(const std::string& s) {
    const double v = parse_double(s);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError("expected integer: " + s);
    return i;
}

const std::vector<std::pair<std::string, Field>>& field_table() {
    auto dbl = [](double SimConfig::*member) {
        return Field{[member](const SimConfig& c) { return fmt_double(c.*member); },
                     [member](SimConfig& c, const std::string& s) { c.*member = parse_double(s); }};
    };
    auto intf = [](int SimConfig::*member) {
        return Field{[member](const SimConfig& c) { return std::to_string(c.*member); },
                     [member](SimConfig& c, const std::string& s) { c.*member = parse_int(s); }};
    };
    static const std::vector<std::pair<std::string, Field>> table = {
        {"f_c_hz", dbl(&SimConfig::f_c_hz)},
        {"bandwidth_hz", dbl(&SimConfig::bandwidth_hz)},
        {"training_len", intf(&SimConfig::training_len)},
        {"frame_len", intf(&SimConfig::frame_len)},
        {"cpi_s", dbl(&SimConfig::cpi_s)},
        {"tx_power_dbm", dbl(&SimConfig::tx_power_dbm)},
        {"noise_density_dbm_hz", dbl(&SimConfig::noise_density_dbm_hz)},
        {"clutter_power_dbm", dbl(&SimConfig::clutter_power_dbm)},
        {"rcs_dbsm", dbl(&SimConfig::rcs_dbsm)},
        {"path_loss_exp", dbl(&SimConfig::path_loss_exp)},
        {"x0_m", dbl(&SimConfig::x0_m)},
        {"y0_m", dbl(&SimConfig::y0_m)},
        {"z0_m", dbl(&SimConfig::z0_m)},
        {"xv_m", dbl(&SimConfig::xv_m)},
        {"yv_m", dbl(&SimConfig::yv_m)},
        {"zv_m", dbl(&SimConfig::zv_m)},
        {"v_x_mps", dbl(&SimConfig::v_x_mps)},
        {"nx_tx", intf(&SimConfig::nx_tx)},
        {"ny_tx", intf(&SimConfig::ny_tx)},
        {"nx_rx", intf(&SimConfig::nx_rx)},
        {"ny_rx", intf(&SimConfig::ny_rx)},
        {"i_gap", intf(&SimConfig::i_gap)},
        {"x_size_m", dbl(&SimConfig::x_size_m)},
        {"y_size_m", dbl(&SimConfig::y_size_m)},
        {"detector", Field{[](const SimConfig& c) {
                               return std::string(c.detector == DetectorMode::kLseRefine
                                                      ? "lse"
                                                      : "correlation");
                           },
                           [](SimConfig& c, const std::string& s) {
                               if (s == "lse") c.detector = DetectorMode::kLseRefine;
                               else if (s == "correlation") c.detector = DetectorMode::kCorrelation;
                               else throw ConfigError("detector must be lse or correlation");
                           }}},
        {"corr_thresh_mult", dbl(&SimConfig::corr_thresh_mult)},
        {"lse_thresh_kappa", dbl(&SimConfig::lse_thresh_kappa)},
        {"v_max_mps", dbl(&SimConfig::v_max_mps)},
        {"nu_max_hz", dbl(&SimConfig::nu_max_hz)},
        {"wrap_margin", dbl(&SimConfig::wrap_margin)},
        {"seed", Field{[](const SimConfig& c) { return std::to_string(c.seed); },
                       [](SimConfig& c, const std::string& s) {
                           try {
                               std::size_t pos = 0;
                               c.seed = std::stoull(s, &pos);
                               if (pos != s.size()) throw ConfigError("bad seed: " + s);
                           } catch (const ConfigError&) {
                               throw;
                           } catch (const std::exception&) {
                               throw ConfigError("bad seed: " + s);
                           }
                       }}},
        {"threads", intf(&SimConfig::threads)},
        {"vehicle_csv", Field{[](const SimConfig& c) { return c.vehicle_csv; },
                              [](SimConfig& c, const std::string& s) { c.vehicle_csv = s; }}},
    };
    return table;
}

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        bool found = false;
        for (const auto& [name, field] : field_table()) {
            if (name == key) {
                field.set(cfg, val);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("unknown config key: " + key);
    }
    cfg.validate();
    return cfg;
}

SimConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const SimConfig& cfg) {
    std::ostringstream out;
    for (const auto& [name, field] : field_table()) {
        out << name << " = " << field.get(cfg) << "\n";
    }
    return out.str();
}

}  // namespace adisar
