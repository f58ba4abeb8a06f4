#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/image.hpp"

namespace proxmc {

/* Binary PGM (P5) I/O. 8-bit for maxval <= 255, 16-bit big-endian above
 * (the format's required byte order). Values are written by affine mapping
 * [lo, hi] -> [0, maxval] with clamping and round-half-up; reading returns
 * the raw integer levels as doubles plus the file's maxval, so round trips
 * are bit-exact at the integer level.
 */

inline void write_pgm(const ImageField& img, const std::string& path, int maxval = 255,
                      double lo = 0.0, double hi = 1.0) {
    if (maxval < 1 || maxval > 65535) throw input_error("write_pgm: maxval must be in [1, 65535]");
    if (!(hi > lo)) throw input_error("write_pgm: requires hi > lo");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("write_pgm: cannot open '" + path + "' for writing");
    f << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    const double scale = static_cast<double>(maxval) / (hi - lo);
    for (double v : img.data) {
        double t = (v - lo) * scale;
        long level = std::lround(std::min(std::max(t, 0.0), static_cast<double>(maxval)));
        if (maxval > 255) {
            const unsigned char bytes[2] = {static_cast<unsigned char>((level >> 8) & 0xFF),
                                            static_cast<unsigned char>(level & 0xFF)};
            f.write(reinterpret_cast<const char*>(bytes), 2);
        } else {
            const unsigned char b = static_cast<unsigned char>(level & 0xFF);
            f.write(reinterpret_cast<const char*>(&b), 1);
        }
    }
    if (!f) throw input_error("write_pgm: write failed for '" + path + "'");
}

struct PgmImage {
    ImageField field;  // integer levels stored as doubles
    int maxval = 255;
};

inline PgmImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw input_error("read_pgm: cannot open '" + path + "'");
    std::string magic;
    f >> magic;
    if (magic != "P5") throw input_error("read_pgm: '" + path + "' is not binary PGM (P5)");
    auto next_int = [&f, &path]() {
        // skip whitespace and '#' comment lines, standard PNM tokenizing
        int c = f.get();
        while (c == '#' || std::isspace(c)) {
            if (c == '#')
                while (c != '\n' && c != EOF) c = f.get();
            c = f.get();
        }
        long v = 0;
        bool any = false;
        while (c >= '0' && c <= '9') {
            v = v * 10 + (c - '0');
            any = true;
            c = f.get();
        }
        if (!any) throw input_error("read_pgm: malformed header in '" + path + "'");
        return v;
    };
    const long w = next_int();
    const long h = next_int();
    const long maxval = next_int();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw input_error("read_pgm: invalid dimensions/maxval in '" + path + "'");
    // the single whitespace byte before the raster was consumed by next_int

    PgmImage out;
    out.maxval = static_cast<int>(maxval);
    out.field = ImageField(static_cast<int>(w), static_cast<int>(h));
    const std::size_t n = out.field.size();
    if (maxval > 255) {
        std::vector<unsigned char> buf(2 * n);
        f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(f.gcount()) != buf.size())
            throw input_error("read_pgm: truncated raster in '" + path + "'");
        for (std::size_t i = 0; i < n; ++i)
            out.field.data[i] = static_cast<double>((buf[2 * i] << 8) | buf[2 * i + 1]);
    } else {
        std::vector<unsigned char> buf(n);
        f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(f.gcount()) != buf.size())
            throw input_error("read_pgm: truncated raster in '" + path + "'");
        for (std::size_t i = 0; i < n; ++i) out.field.data[i] = static_cast<double>(buf[i]);
    }
    return out;
}

}  // namespace proxmc
