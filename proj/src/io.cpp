// SPDX-License-Identifier: Apache-2.0
#include "adisar/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "frame container format requires a little-endian host");

namespace adisar {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[4] = {'G', 'I', 'S', 'R'};
constexpr uint32_t kVersion = 1;

struct FrameTableEntry {
    uint64_t offset;
    int64_t k0;
    uint64_t count;
    double sigma_nc2;
};

template <typename T>
void put(std::string& buf, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf.append(p, sizeof(T));
}

template <typename T>
T take(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw StageError("truncated frame file");
    return v;
}

std::string json_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& data) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StageError("cannot open " + tmp.string() + " for writing");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw StageError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_frames_bin(const std::filesystem::path& path,
                      const std::vector<FrameSamples>& frames) {
    std::string buf;
    const uint32_t m = static_cast<uint32_t>(frames.size());
    buf.append(kMagic, 4);
    put(buf, kVersion);
    put(buf, m);
    uint64_t offset = 12 + static_cast<uint64_t>(m) * sizeof(FrameTableEntry);
    for (const auto& f : frames) {
        FrameTableEntry e{offset, f.k0, f.y.size(), f.sigma_nc2};
        put(buf, e);
        offset += f.y.size() * 2 * sizeof(double);
    }
    for (const auto& f : frames) {
        for (const cplx& v : f.y) {
            put(buf, v.real());
            put(buf, v.imag());
        }
    }
    atomic_write(path, buf);
}

std::vector<FrameSamples> read_frames_bin(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StageError("cannot open frame file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw StageError("bad frame file magic");
    const auto version = take<uint32_t>(in);
    if (version != kVersion) throw StageError("unsupported frame file version");
    const auto m = take<uint32_t>(in);
    std::vector<FrameTableEntry> table(m);
    for (auto& e : table) e = take<FrameTableEntry>(in);
    std::vector<FrameSamples> frames(m);
    for (uint32_t i = 0; i < m; ++i) {
        in.seekg(static_cast<std::streamoff>(table[i].offset));
        frames[i].m = static_cast<int>(i);
        frames[i].k0 = table[i].k0;
        frames[i].sigma_nc2 = table[i].sigma_nc2;
        frames[i].y.resize(table[i].count);
        for (auto& v : frames[i].y) {
            const double re = take<double>(in);
            const double im = take<double>(in);
            v = {re, im};
        }
    }
    return frames;
}

void write_frames_csv(const std::filesystem::path& path,
                      const std::vector<FrameSamples>& frames) {
    std::string buf = "m,k,re,im\n";
    char line[128];
    for (const auto& f : frames) {
        for (std::size_t j = 0; j < f.y.size(); ++j) {
            std::snprintf(line, sizeof line, "%d,%ld,%.17g,%.17g\n", f.m, f.k0 + (long)j,
                          f.y[j].real(), f.y[j].imag());
            buf += line;
        }
    }
    atomic_write(path, buf);
}

std::vector<FrameSamples> read_frames_csv(const std::filesystem::path& path,
                                          double sigma_nc2) {
    std::ifstream in(path);
    if (!in) throw StageError("cannot open frame file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("m,k,re,im", 0) != 0) {
        throw StageError("frame csv must start with header m,k,re,im");
    }
    std::vector<FrameSamples> frames;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int m;
        long k;
        double re, im;
        if (std::sscanf(line.c_str(), "%d,%ld,%lf,%lf", &m, &k, &re, &im) != 4) {
            throw StageError("bad frame csv row: " + line);
        }
        if (m < 0) throw StageError("negative frame index");
        if (frames.size() <= static_cast<std::size_t>(m)) frames.resize(m + 1);
        auto& f = frames[static_cast<std::size_t>(m)];
        if (f.y.empty()) {
            f.m = m;
            f.k0 = k;
            f.sigma_nc2 = sigma_nc2;
        }
        f.y.emplace_back(re, im);
    }
    return frames;
}

void write_estimates_json(const std::filesystem::path& path, const Estimates& est) {
    ordered_json j;
    j["delays"] = est.delays.ells;
    auto& hh = j["h_hat"] = ordered_json::array();
    for (int i = 0; i < est.h_hat.size(); ++i) {
        hh.push_back({est.h_hat[i].real(), est.h_hat[i].imag()});
    }
    auto& dc = j["doppler_corrected"] = ordered_json::array();
    for (int p = 0; p < est.doppler.n_scatterers; ++p) {
        ordered_json row = ordered_json::array();
        for (int m = 0; m < est.doppler.n_frames; ++m) {
            row.push_back(est.doppler.corrected_at(p, m));
        }
        dc.push_back(std::move(row));
    }
    j["delta_med"] = est.doppler.delta_med_hz;
    j["V_hat"] = est.v_hat_mps;
    j["N_hat_p"] = est.delays.count();
    atomic_write(path, json_dump(j));
}

Estimates read_estimates_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StageError("cannot open estimates file: " + path.string());
    ordered_json j = ordered_json::parse(in);
    Estimates est;
    est.delays.ells = j.at("delays").get<std::vector<long>>();
    const auto& hh = j.at("h_hat");
    est.h_hat.resize(static_cast<Eigen::Index>(hh.size()));
    for (std::size_t i = 0; i < hh.size(); ++i) {
        est.h_hat[static_cast<Eigen::Index>(i)] = {hh[i][0].get<double>(),
                                                   hh[i][1].get<double>()};
    }
    const auto& dc = j.at("doppler_corrected");
    est.doppler.n_scatterers = static_cast<int>(dc.size());
    est.doppler.n_frames = dc.empty() ? 0 : static_cast<int>(dc[0].size());
    est.doppler.corrected.reserve(static_cast<std::size_t>(est.doppler.n_scatterers) *
                                  est.doppler.n_frames);
    for (const auto& row : dc) {
        for (const auto& v : row) est.doppler.corrected.push_back(v.get<double>());
    }
    est.doppler.raw.assign(est.doppler.corrected.size(), 0.0);
    est.doppler.delta_med_hz = j.at("delta_med").get<double>();
    est.doppler.anchor_m = est.doppler.n_frames - 1;
    est.v_hat_mps = j.at("V_hat").get<double>();
    return est;
}

void write_pgm16(const std::filesystem::path& path, const IsarImage& img) {
    double maxv = 0;
    for (double v : img.mag) maxv = std::max(maxv, v);
    std::string buf = "P5\n" + std::to_string(img.n_cr) + " " + std::to_string(img.n_r) +
                      "\n65535\n";
    buf.reserve(buf.size() + img.mag.size() * 2);
    for (double v : img.mag) {
        const auto q = static_cast<uint16_t>(
            maxv > 0 ? std::lround(v / maxv * 65535.0) : 0);
        // 16-bit PGM samples are big-endian
        buf.push_back(static_cast<char>(q >> 8));
        buf.push_back(static_cast<char>(q & 0xFF));
    }
    atomic_write(path, buf);
}

void write_image_csv(const std::filesystem::path& path, const IsarImage& img) {
    std::string buf;
    char cell[32];
    for (int r = 0; r < img.n_r; ++r) {
        for (int c = 0; c < img.n_cr; ++c) {
            std::snprintf(cell, sizeof cell, "%.17g", img.at(r, c));
            buf += cell;
            buf += (c + 1 == img.n_cr) ? '\n' : ',';
        }
    }
    atomic_write(path, buf);
}

void write_axes_json(const std::filesystem::path& path, const IsarImage& img) {
    ordered_json j;
    j["delta_r"] = img.delta_r_m;
    j["delta_cr"] = img.delta_cr_m;
    j["n_r"] = img.n_r;
    j["n_cr"] = img.n_cr;
    j["flipped"] = img.flipped;
    atomic_write(path, json_dump(j));
}

void write_preamble_csv(const std::filesystem::path& path, const Preamble& pre) {
    std::string buf = "sample\n";
    for (int8_t v : pre.samples) {
        buf += std::to_string(static_cast<int>(v));
        buf += '\n';
    }
    atomic_write(path, buf);
}

}  // namespace adisar
