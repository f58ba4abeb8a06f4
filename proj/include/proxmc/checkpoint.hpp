#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "proxmc/errors.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Binary chain checkpoint.
 *
 * Layout (little-endian, fixed-width):
 *   magic   u64   0x50584d43'48505431  ("PXMC" "HPT1")
 *   version u32   1
 *   conf_len u32, conf bytes            config echo (text, verbatim)
 *   seed    u64
 *   stream  u64
 *   iteration u64                       last completed step index
 *   kept    u64                         kept samples folded into moments
 *   dim     u64
 *   mean    dim f64                     running posterior mean
 *   m2      dim f64                     running second moment
 *   state   dim f64                     current (or last finite) chain state
 *   n_samples u64, then n_samples*dim f64   optional stored sample block
 */

constexpr std::uint64_t kCheckpointMagic = 0x50584d4348505431ull;
constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    std::string config_echo;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t iteration = 0;
    std::uint64_t kept_count = 0;
    Vec mean;
    Vec second_moment;
    Vec state;
    std::vector<Vec> samples;
};

namespace detail {

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw input_error("checkpoint: truncated file");
    return v;
}

inline void put_vec(std::ofstream& f, const Vec& v) {
    if (!v.empty()) f.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
}

inline void get_vec(std::ifstream& f, Vec& v, std::size_t n) {
    v.resize(n);
    if (n) {
        f.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(double)));
        if (!f) throw input_error("checkpoint: truncated sample data");
    }
}

}  // namespace detail

inline void write_checkpoint(const std::string& path, const Checkpoint& cp) {
    if (cp.mean.size() != cp.second_moment.size() || cp.mean.size() != cp.state.size())
        throw input_error("write_checkpoint: mean/second_moment/state dimension mismatch");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("write_checkpoint: cannot open '" + path + "'");
    detail::put(f, kCheckpointMagic);
    detail::put(f, kCheckpointVersion);
    detail::put(f, std::uint32_t(cp.config_echo.size()));
    f.write(cp.config_echo.data(), std::streamsize(cp.config_echo.size()));
    detail::put(f, cp.seed);
    detail::put(f, cp.stream);
    detail::put(f, cp.iteration);
    detail::put(f, cp.kept_count);
    detail::put(f, std::uint64_t(cp.state.size()));
    detail::put_vec(f, cp.mean);
    detail::put_vec(f, cp.second_moment);
    detail::put_vec(f, cp.state);
    detail::put(f, std::uint64_t(cp.samples.size()));
    for (const Vec& s : cp.samples) {
        if (s.size() != cp.state.size()) throw input_error("write_checkpoint: sample dimension mismatch");
        detail::put_vec(f, s);
    }
    if (!f) throw input_error("write_checkpoint: write failed for '" + path + "'");
}

inline Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw input_error("read_checkpoint: cannot open '" + path + "'");
    if (detail::get<std::uint64_t>(f) != kCheckpointMagic)
        throw input_error("read_checkpoint: bad magic in '" + path + "'");
    const auto version = detail::get<std::uint32_t>(f);
    if (version != kCheckpointVersion)
        throw input_error("read_checkpoint: unsupported version " + std::to_string(version));
    Checkpoint cp;
    const auto conf_len = detail::get<std::uint32_t>(f);
    cp.config_echo.resize(conf_len);
    if (conf_len) {
        f.read(cp.config_echo.data(), conf_len);
        if (!f) throw input_error("checkpoint: truncated config echo");
    }
    cp.seed = detail::get<std::uint64_t>(f);
    cp.stream = detail::get<std::uint64_t>(f);
    cp.iteration = detail::get<std::uint64_t>(f);
    cp.kept_count = detail::get<std::uint64_t>(f);
    const auto dim = std::size_t(detail::get<std::uint64_t>(f));
    detail::get_vec(f, cp.mean, dim);
    detail::get_vec(f, cp.second_moment, dim);
    detail::get_vec(f, cp.state, dim);
    const auto n_samples = std::size_t(detail::get<std::uint64_t>(f));
    cp.samples.resize(n_samples);
    for (auto& s : cp.samples) detail::get_vec(f, s, dim);
    return cp;
}

}  // namespace proxmc
