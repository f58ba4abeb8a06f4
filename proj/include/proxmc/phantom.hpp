#pragma once

#include <algorithm>
#include <cmath>

#include "proxmc/errors.hpp"
#include "proxmc/image.hpp"
#include "proxmc/rng.hpp"

namespace proxmc {

/* Deterministic synthetic test images on [0, 1] (or sparse spike trains),
 * used when a config does not point at a real image file.  Piecewise
 * constant by construction, so TV priors are the natural fit.
 */

// Nested rectangles and a disc on a dark background.
inline ImageField blocks_phantom(int width, int height) {
    ImageField img(width, height, 0.05);
    const auto rect = [&](double x0, double y0, double x1, double y1, double v) {
        const int ax = std::max(0, int(std::floor(x0 * width)));
        const int bx = std::min(width, int(std::ceil(x1 * width)));
        const int ay = std::max(0, int(std::floor(y0 * height)));
        const int by = std::min(height, int(std::ceil(y1 * height)));
        for (int y = ay; y < by; ++y)
            for (int x = ax; x < bx; ++x) img.at(x, y) = v;
    };
    rect(0.10, 0.10, 0.55, 0.60, 0.45);
    rect(0.20, 0.20, 0.45, 0.50, 0.80);
    rect(0.60, 0.15, 0.90, 0.40, 0.65);
    rect(0.15, 0.70, 0.85, 0.90, 0.30);
    rect(0.40, 0.74, 0.60, 0.86, 0.95);
    const double cx = 0.72 * width, cy = 0.58 * height;
    const double r = 0.10 * std::min(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
            if (dx * dx + dy * dy <= r * r) img.at(x, y) = 1.0;
        }
    return img;
}

/* k spikes of alternating-sign amplitudes in [amp/2, amp] at positions drawn
 * without replacement from a dedicated RNG stream; everything else zero.
 */
inline ImageField sparse_spikes(int width, int height, int n_spikes, double amplitude,
                                std::uint64_t seed) {
    if (n_spikes <= 0) throw input_error("sparse_spikes: n_spikes must be positive");
    const int n = width * height;
    if (n_spikes > n) throw input_error("sparse_spikes: more spikes than pixels");
    ImageField img(width, height, 0.0);
    CounterRng rng(seed, /*stream=*/0x51D3);
    int placed = 0;
    while (placed < n_spikes) {
        const int idx = int(rng.next_u64() % std::uint64_t(n));
        if (img.data[std::size_t(idx)] != 0.0) continue;
        const double u = rng.uniform01();
        const double sign = (placed % 2 == 0) ? 1.0 : -1.0;
        img.data[std::size_t(idx)] = sign * amplitude * (0.5 + 0.5 * u);
        ++placed;
    }
    return img;
}

}  // namespace proxmc
