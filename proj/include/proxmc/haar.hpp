#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "proxmc/errors.hpp"
#include "proxmc/prox.hpp"
#include "proxmc/rng.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Orthonormal multilevel Haar transform (Mallat layout) and the exact l1
 * prox in an orthonormal basis: prox_{theta |Psi .|_1} = Psi^T soft_theta Psi.
 *
 * 2-D images use the separable 2x2 block transform; the mixing matrix
 *   M = (1/2) [ 1  1  1  1 ; 1 -1  1 -1 ; 1  1 -1 -1 ; 1 -1 -1  1 ]
 * is symmetric orthogonal, so analysis and synthesis are the same butterfly.
 * Height-1 fields use the 1-D pair transform (s,d) = ((a+b), (a-b))/sqrt(2).
 * Each level halves the approximation block, so the transformed extent must
 * be divisible by 2^levels.
 */

inline void check_haar_dims(int w, int h, int levels) {
    if (levels < 1) throw config_error("haar: levels must be >= 1");
    const int div = 1 << levels;
    if (h == 1) {
        if (w % div != 0) throw config_error("haar: width not divisible by 2^levels");
    } else {
        if (w % div != 0 || h % div != 0)
            throw config_error("haar: dimensions not divisible by 2^levels");
    }
}

namespace detail {

// one analysis level on the top-left cw x ch block (cw, ch even), 2-D case
inline void haar_level_fwd_2d(Vec& a, int stride, int cw, int ch, Vec& tmp) {
    tmp.resize(static_cast<std::size_t>(cw) * ch);
    const int hw = cw / 2, hh = ch / 2;
    for (int i = 0; i < hh; ++i)
        for (int j = 0; j < hw; ++j) {
            const double p = a[static_cast<std::size_t>(2 * i) * stride + 2 * j];
            const double q = a[static_cast<std::size_t>(2 * i) * stride + 2 * j + 1];
            const double r = a[static_cast<std::size_t>(2 * i + 1) * stride + 2 * j];
            const double s = a[static_cast<std::size_t>(2 * i + 1) * stride + 2 * j + 1];
            tmp[static_cast<std::size_t>(i) * cw + j] = 0.5 * (p + q + r + s);              // LL
            tmp[static_cast<std::size_t>(i) * cw + hw + j] = 0.5 * (p - q + r - s);         // LH
            tmp[static_cast<std::size_t>(hh + i) * cw + j] = 0.5 * (p + q - r - s);         // HL
            tmp[static_cast<std::size_t>(hh + i) * cw + hw + j] = 0.5 * (p - q - r + s);    // HH
        }
    for (int i = 0; i < ch; ++i)
        for (int j = 0; j < cw; ++j)
            a[static_cast<std::size_t>(i) * stride + j] = tmp[static_cast<std::size_t>(i) * cw + j];
}

inline void haar_level_inv_2d(Vec& a, int stride, int cw, int ch, Vec& tmp) {
    tmp.resize(static_cast<std::size_t>(cw) * ch);
    const int hw = cw / 2, hh = ch / 2;
    for (int i = 0; i < hh; ++i)
        for (int j = 0; j < hw; ++j) {
            const double ll = a[static_cast<std::size_t>(i) * stride + j];
            const double lh = a[static_cast<std::size_t>(i) * stride + hw + j];
            const double hl = a[static_cast<std::size_t>(hh + i) * stride + j];
            const double hh_ = a[static_cast<std::size_t>(hh + i) * stride + hw + j];
            tmp[static_cast<std::size_t>(2 * i) * cw + 2 * j] = 0.5 * (ll + lh + hl + hh_);
            tmp[static_cast<std::size_t>(2 * i) * cw + 2 * j + 1] = 0.5 * (ll - lh + hl - hh_);
            tmp[static_cast<std::size_t>(2 * i + 1) * cw + 2 * j] = 0.5 * (ll + lh - hl - hh_);
            tmp[static_cast<std::size_t>(2 * i + 1) * cw + 2 * j + 1] = 0.5 * (ll - lh - hl + hh_);
        }
    for (int i = 0; i < ch; ++i)
        for (int j = 0; j < cw; ++j)
            a[static_cast<std::size_t>(i) * stride + j] = tmp[static_cast<std::size_t>(i) * cw + j];
}

}  // namespace detail

inline void haar_forward(const Vec& x, int w, int h, int levels, Vec& coeff) {
    check_haar_dims(w, h, levels);
    if (x.size() != static_cast<std::size_t>(w) * h) throw input_error("haar_forward: size mismatch");
    coeff = x;
    Vec tmp;
    if (h == 1) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        int cw = w;
        for (int l = 0; l < levels; ++l, cw /= 2) {
            tmp.assign(coeff.begin(), coeff.begin() + cw);
            for (int j = 0; j < cw / 2; ++j) {
                coeff[j] = (tmp[2 * j] + tmp[2 * j + 1]) * inv_sqrt2;
                coeff[cw / 2 + j] = (tmp[2 * j] - tmp[2 * j + 1]) * inv_sqrt2;
            }
        }
        return;
    }
    int cw = w, ch = h;
    for (int l = 0; l < levels; ++l, cw /= 2, ch /= 2) detail::haar_level_fwd_2d(coeff, w, cw, ch, tmp);
}

inline void haar_inverse(const Vec& coeff, int w, int h, int levels, Vec& x) {
    check_haar_dims(w, h, levels);
    if (coeff.size() != static_cast<std::size_t>(w) * h) throw input_error("haar_inverse: size mismatch");
    x = coeff;
    Vec tmp;
    if (h == 1) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        int cw = w >> (levels - 1);
        for (int l = levels - 1; l >= 0; --l, cw *= 2) {
            tmp.assign(x.begin(), x.begin() + cw);
            for (int j = 0; j < cw / 2; ++j) {
                x[2 * j] = (tmp[j] + tmp[cw / 2 + j]) * inv_sqrt2;
                x[2 * j + 1] = (tmp[j] - tmp[cw / 2 + j]) * inv_sqrt2;
            }
        }
        return;
    }
    int cw = w >> (levels - 1), ch = h >> (levels - 1);
    for (int l = levels - 1; l >= 0; --l, cw *= 2, ch *= 2) detail::haar_level_inv_2d(x, w, cw, ch, tmp);
}

/* A generic orthonormal analysis/synthesis pair. `forward` maps a signal to
 * coefficients, `inverse` back; both directions must be exact transposes of
 * each other (orthonormality), which is probed at validation time.
 */
struct LinearTransformPair {
    std::function<void(const Vec&, Vec&)> forward;
    std::function<void(const Vec&, Vec&)> inverse;
};

/* Round-trip orthonormality probe: on a handful of fixed-seed random vectors
 * checks |Psi^T Psi x - x| <= 1e-10 and norm preservation |Psi x| = |x|.
 * Throws config_error on failure; the exact-prox identity below is only valid
 * for orthonormal Psi.
 */
inline void validate_orthonormal(const LinearTransformPair& psi, std::size_t dim, int n_probes = 4) {
    CounterRng rng(0x5eedu, 0xABCDu);
    Vec x(dim), c, back;
    for (int p = 0; p < n_probes; ++p) {
        rng.fill_normal(x);
        psi.forward(x, c);
        psi.inverse(c, back);
        check_same_size(x, back, "validate_orthonormal");
        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) err = std::max(err, std::abs(back[i] - x[i]));
        if (err > 1e-10)
            throw config_error("validate_orthonormal: round trip error " + std::to_string(err));
        if (std::abs(norm2(c) - norm2(x)) > 1e-10 * std::max(1.0, norm2(x)))
            throw config_error("validate_orthonormal: transform does not preserve norms");
    }
}

// prox of theta * |Psi x|_1 for orthonormal Psi: analysis, soft threshold, synthesis.
inline void prox_l1_orthonormal(const Vec& x, double theta, const LinearTransformPair& psi, Vec& out) {
    check_theta(theta, "prox_l1_orthonormal");
    Vec c;
    psi.forward(x, c);
    for (double& v : c) v = soft_threshold(v, theta);
    psi.inverse(c, out);
}

inline Vec prox_l1_orthonormal(const Vec& x, double theta, const LinearTransformPair& psi) {
    Vec out;
    prox_l1_orthonormal(x, theta, psi, out);
    return out;
}

inline LinearTransformPair make_haar_pair(int w, int h, int levels) {
    check_haar_dims(w, h, levels);
    LinearTransformPair psi;
    psi.forward = [w, h, levels](const Vec& x, Vec& c) { haar_forward(x, w, h, levels, c); };
    psi.inverse = [w, h, levels](const Vec& c, Vec& x) { haar_inverse(c, w, h, levels, x); };
    return psi;
}

// |Psi x|_1 with orthonormal multilevel Haar Psi; validated at construction.
inline NonSmoothTerm make_wavelet_l1_term(int w, int h, int levels) {
    LinearTransformPair psi = make_haar_pair(w, h, levels);
    const std::size_t dim = static_cast<std::size_t>(w) * h;
    validate_orthonormal(psi, dim);
    NonSmoothTerm g;
    g.label = "wavelet_l1";
    g.lip_const = std::sqrt(static_cast<double>(dim));
    g.eval = [psi](const Vec& x) {
        Vec c;
        psi.forward(x, c);
        double s = 0.0;
        for (double v : c) s += std::abs(v);
        return s;
    };
    g.prox = [psi](const Vec& x, double theta, Vec& p) { prox_l1_orthonormal(x, theta, psi, p); };
    return g;
}

}  // namespace proxmc
