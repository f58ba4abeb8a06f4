#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/image.hpp"

namespace proxmc {

/* Minimal 8-bit grayscale PNG writer (report images only): IHDR + one IDAT
 * (zlib level 6, filter 0 scanlines) + IEND. Deterministic output for a
 * given input.
 */

namespace detail {

inline void png_write_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
    out.push_back(static_cast<unsigned char>(v & 0xFF));
}

inline void png_chunk(std::vector<unsigned char>& out, const char type[4],
                      const std::vector<unsigned char>& payload) {
    png_write_u32(out, static_cast<std::uint32_t>(payload.size()));
    std::vector<unsigned char> body(type, type + 4);
    body.insert(body.end(), payload.begin(), payload.end());
    out.insert(out.end(), body.begin(), body.end());
    const auto c = crc32(0L, body.data(), static_cast<uInt>(body.size()));
    png_write_u32(out, static_cast<std::uint32_t>(c));
}

}  // namespace detail

inline void write_png_gray8(const ImageField& img, const std::string& path, double lo = 0.0,
                            double hi = 1.0) {
    if (!(hi > lo)) throw input_error("write_png_gray8: requires hi > lo");
    const int w = img.width, h = img.height;

    // filter byte 0 + row, quantized to 8 bits
    std::vector<unsigned char> raw(static_cast<std::size_t>(h) * (w + 1));
    const double scale = 255.0 / (hi - lo);
    for (int y = 0; y < h; ++y) {
        raw[static_cast<std::size_t>(y) * (w + 1)] = 0;
        for (int x = 0; x < w; ++x) {
            const double t = (img.at(x, y) - lo) * scale;
            raw[static_cast<std::size_t>(y) * (w + 1) + 1 + x] =
                static_cast<unsigned char>(std::lround(std::min(std::max(t, 0.0), 255.0)));
        }
    }

    uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> comp(comp_cap);
    if (compress2(comp.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw numerical_error("write_png_gray8: zlib compression failed");
    comp.resize(comp_cap);

    std::vector<unsigned char> out = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    std::vector<unsigned char> ihdr;
    detail::png_write_u32(ihdr, static_cast<std::uint32_t>(w));
    detail::png_write_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // no interlace
    detail::png_chunk(out, "IHDR", ihdr);
    detail::png_chunk(out, "IDAT", comp);
    detail::png_chunk(out, "IEND", {});

    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("write_png_gray8: cannot open '" + path + "' for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw input_error("write_png_gray8: write failed for '" + path + "'");
}

}  // namespace proxmc
