#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxmc/errors.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Closed-form proximal operators. Each prox_*(x, theta) solves
 *   argmin_p { penalty(p) + |x - p|^2 / (2 theta) }
 * exactly; theta = 0 degenerates to the identity map. Negative or non-finite
 * theta is rejected once per call.
 */

inline void check_theta(double theta, const char* where) {
    if (theta < 0.0 || !std::isfinite(theta))
        throw input_error(std::string(where) + ": prox parameter must be nonnegative and finite");
}

inline double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// penalty |x|_1: componentwise soft threshold
inline void prox_l1(const Vec& x, double theta, Vec& out) {
    check_theta(theta, "prox_l1");
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = soft_threshold(x[i], theta);
}

inline Vec prox_l1(const Vec& x, double theta) {
    Vec out;
    prox_l1(x, theta, out);
    return out;
}

// penalty |x|_2 (whole-vector Euclidean norm): block soft threshold.
// prox(0) = 0 by continuity; shrinkage factor max(0, 1 - theta/|x|).
inline void prox_l2norm(const Vec& x, double theta, Vec& out) {
    check_theta(theta, "prox_l2norm");
    const double r = norm2(x);
    const double scale = (r <= theta) ? 0.0 : 1.0 - theta / r;
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
}

inline Vec prox_l2norm(const Vec& x, double theta) {
    Vec out;
    prox_l2norm(x, theta, out);
    return out;
}

// penalty = indicator of the box [lo, hi]^d: Euclidean projection (clamp).
// Independent of theta; lo = hi degenerates to a single point.
inline void prox_box(const Vec& x, double lo, double hi, Vec& out) {
    if (!(lo <= hi)) throw input_error("prox_box: requires lo <= hi");
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], lo, hi);
}

inline Vec prox_box(const Vec& x, double lo, double hi) {
    Vec out;
    prox_box(x, lo, hi, out);
    return out;
}

// ------------------------------------------------------------ term factories

inline NonSmoothTerm make_l1_term() {
    NonSmoothTerm g;
    g.label = "l1";
    g.lip_const = std::numeric_limits<double>::infinity();  // sqrt(d) really; set per-dim below
    g.eval = [](const Vec& x) {
        double s = 0.0;
        for (double v : x) s += std::abs(v);
        return s;
    };
    g.prox = [](const Vec& x, double theta, Vec& p) { prox_l1(x, theta, p); };
    return g;
}

// dim-aware variant: |.|_1 is sqrt(d)-Lipschitz w.r.t. the Euclidean norm
inline NonSmoothTerm make_l1_term(std::size_t dim) {
    NonSmoothTerm g = make_l1_term();
    g.lip_const = std::sqrt(static_cast<double>(dim));
    return g;
}

inline NonSmoothTerm make_l2norm_term() {
    NonSmoothTerm g;
    g.label = "l2norm";
    g.lip_const = 1.0;
    g.eval = [](const Vec& x) { return norm2(x); };
    g.prox = [](const Vec& x, double theta, Vec& p) { prox_l2norm(x, theta, p); };
    return g;
}

inline NonSmoothTerm make_box_term(double lo, double hi) {
    if (!(lo <= hi)) throw config_error("make_box_term: requires lo <= hi");
    NonSmoothTerm g;
    g.label = "box";
    g.lip_const = std::numeric_limits<double>::infinity();  // indicator: not Lipschitz
    g.eval = [lo, hi](const Vec& x) {
        for (double v : x)
            if (v < lo || v > hi) return std::numeric_limits<double>::infinity();
        return 0.0;
    };
    g.prox = [lo, hi](const Vec& x, double, Vec& p) { prox_box(x, lo, hi, p); };
    return g;
}

}  // namespace proxmc
