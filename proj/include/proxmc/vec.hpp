#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"

namespace proxmc {

using Vec = std::vector<double>;

inline void check_same_size(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size())
        throw input_error(std::string(where) + ": size mismatch (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline double dot(const Vec& a, const Vec& b) {
    check_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double sqdist(const Vec& a, const Vec& b) {
    check_same_size(a, b, "sqdist");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
    check_same_size(x, y, "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// Numerically safe log(sum(exp(v))) over a non-empty range.
inline double log_sum_exp(const Vec& v) {
    if (v.empty()) throw input_error("log_sum_exp: empty input");
    double m = v[0];
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;  // all -inf, or a +inf/nan dominates
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace proxmc
