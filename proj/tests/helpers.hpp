#pragma once

#include <cmath>
#include <vector>

#include "proxmc/rng.hpp"
#include "proxmc/vec.hpp"

namespace testutil {

// Seeded random vectors; every test draws from its own (seed, stream) pair so
// adding cases never disturbs existing ones.
inline proxmc::Vec rand_vec(proxmc::CounterRng& rng, std::size_t n, double scale = 1.0) {
    proxmc::Vec v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double max_abs_diff(const proxmc::Vec& a, const proxmc::Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double mean_of(const proxmc::Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double var_of(const proxmc::Vec& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

// least-squares slope of y against x
inline double ls_slope(const proxmc::Vec& x, const proxmc::Vec& y) {
    const double mx = mean_of(x), my = mean_of(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace testutil
