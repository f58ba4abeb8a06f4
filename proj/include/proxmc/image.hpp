#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "proxmc/errors.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Row-major 2-D field of doubles. A width*1 field doubles as a plain vector,
 * which keeps the 1-D desk problems and the image problems on one code path. */
struct ImageField {
    Vec data;
    int width = 0;
    int height = 0;

    ImageField() = default;
    ImageField(int w, int h, double fill = 0.0) : data(static_cast<std::size_t>(w) * h, fill), width(w), height(h) {
        if (w <= 0 || h <= 0) throw input_error("ImageField: non-positive dimensions");
    }
    ImageField(Vec v, int w, int h) : data(std::move(v)), width(w), height(h) {
        if (w <= 0 || h <= 0) throw input_error("ImageField: non-positive dimensions");
        if (data.size() != static_cast<std::size_t>(w) * h)
            throw input_error("ImageField: data size does not match dimensions");
    }

    std::size_t size() const { return data.size(); }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

inline void check_same_shape(const ImageField& a, const ImageField& b, const char* where) {
    if (a.width != b.width || a.height != b.height)
        throw input_error(std::string(where) + ": image shape mismatch");
}

}  // namespace proxmc
