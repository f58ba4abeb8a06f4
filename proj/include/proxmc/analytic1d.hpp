#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Closed-form smoothed densities for the two 1-D reference targets, plus a
 * kink-aware quadrature for total-variation distances between 1-D densities.
 *
 * Laplace target pi ~ exp(-|x|)/2. Envelope potential = Huber:
 *   g_lambda(x) = x^2/(2 lambda)        for |x| <  lambda
 *               = |x| - lambda/2        for |x| >= lambda
 * Normalizer Z(lambda) = 2 e^{-lambda/2} + sqrt(2 pi lambda) (2 Phi(sqrt(lambda)) - 1),
 * obtained by integrating the two branches directly (Gaussian core, two
 * exponential tails).
 *
 * Uniform target pi ~ (1/2) 1_{[-1,1]}. The envelope of the indicator's
 * infinity-valued potential is dist^2/(2 lambda):
 *   pi_lambda(x) = exp(-max(|x|-1,0)^2/(2 lambda)) / (2 + sqrt(2 pi lambda)).
 */

inline double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

inline double laplace_pdf(double x) { return 0.5 * std::exp(-std::abs(x)); }

inline double laplace_cdf(double x) {
    return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
}

inline double laplace_pilambda_normalizer(double lambda) {
    if (!(lambda > 0.0)) throw config_error("laplace_pilambda: lambda must be positive");
    const double root = std::sqrt(lambda);
    return 2.0 * std::exp(-0.5 * lambda) +
           std::sqrt(2.0 * 3.14159265358979323846 * lambda) * (2.0 * normal_cdf(root) - 1.0);
}

inline double laplace_pilambda(double x, double lambda) {
    const double z = laplace_pilambda_normalizer(lambda);
    const double ax = std::abs(x);
    const double expo = (ax >= lambda) ? (0.5 * lambda - ax) : (-x * x / (2.0 * lambda));
    return std::exp(expo) / z;
}

// CDF of the smoothed Laplace target (piecewise: tail / Gaussian core / tail).
inline double laplace_pilambda_cdf(double x, double lambda) {
    const double z = laplace_pilambda_normalizer(lambda);
    const double root = std::sqrt(lambda);
    const double s2pi = std::sqrt(2.0 * 3.14159265358979323846 * lambda);
    if (x <= -lambda) return std::exp(0.5 * lambda + x) / z;
    if (x >= lambda) return 1.0 - std::exp(0.5 * lambda - x) / z;
    const double core = s2pi * (normal_cdf(x / root) - normal_cdf(-root));
    return (std::exp(-0.5 * lambda) + core) / z;
}

inline double uniform_pdf(double x) { return (x >= -1.0 && x <= 1.0) ? 0.5 : 0.0; }

inline double uniform_pilambda(double x, double lambda) {
    if (!(lambda > 0.0)) throw config_error("uniform_pilambda: lambda must be positive");
    const double z = 2.0 + std::sqrt(2.0 * 3.14159265358979323846 * lambda);
    const double t = std::max(std::abs(x) - 1.0, 0.0);
    return std::exp(-t * t / (2.0 * lambda)) / z;
}

inline double uniform_pilambda_cdf(double x, double lambda) {
    const double z = 2.0 + std::sqrt(2.0 * 3.14159265358979323846 * lambda);
    const double s2pi = std::sqrt(2.0 * 3.14159265358979323846 * lambda);
    const double root = std::sqrt(lambda);
    if (x <= -1.0) return s2pi * normal_cdf((x + 1.0) / root) / z;
    if (x >= 1.0) return 1.0 - s2pi * (1.0 - normal_cdf((x - 1.0) / root)) / z;
    return (0.5 * s2pi + (x + 1.0)) / z;
}

// ------------------------------------------------------------- quadrature

/* Integration grid for 1-D densities: [lo, hi] split at interior knots
 * (kink or jump locations), each segment integrated by composite Simpson
 * with points allocated proportionally to segment length (minimum per
 * segment enforced). Aligning kinks with segment boundaries keeps Simpson at
 * full order; at interior knots each segment evaluates its own one-sided
 * limit, so densities with jumps exactly at knots integrate exactly.
 */
struct GridSpec1D {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> knots;  // strictly inside (lo, hi), ascending
    long n_points = 200000;
};

namespace detail {

inline double simpson_segment(const std::function<double(double)>& f, double a, double b, long m,
                              double a_eval, double b_eval) {
    // m panels (even count enforced by the caller building 2m+1 points); the
    // endpoint values are taken at a_eval/b_eval so callers can request
    // one-sided limits while the panel abscissae stay on [a, b]
    const double h = (b - a) / static_cast<double>(2 * m);
    long double s = f(a_eval) + f(b_eval);
    for (long i = 1; i < 2 * m; ++i) s += f(a + h * i) * ((i % 2) ? 4.0L : 2.0L);
    return static_cast<double>(s * h / 3.0L);
}

}  // namespace detail

inline double integrate_1d(const std::function<double(double)>& f, const GridSpec1D& grid) {
    if (!(grid.lo < grid.hi)) throw config_error("integrate_1d: requires lo < hi");
    if (grid.n_points < 8) throw config_error("integrate_1d: too few points");
    std::vector<double> edges;
    edges.push_back(grid.lo);
    double prev = grid.lo;
    for (double k : grid.knots) {
        if (!(k > prev) || !(k < grid.hi))
            throw config_error("integrate_1d: knots must be ascending and interior");
        edges.push_back(k);
        prev = k;
    }
    edges.push_back(grid.hi);

    const double total_len = grid.hi - grid.lo;
    double s = 0.0;
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = edges[seg], b = edges[seg + 1];
        long m = static_cast<long>(static_cast<double>(grid.n_points) * (b - a) / total_len / 2.0);
        m = std::max<long>(m, 16);
        // one-sided limits at interior knots (outer endpoints stay exact)
        const double nudge = (b - a) * 1e-12;
        const double a_eval = seg == 0 ? a : a + nudge;
        const double b_eval = seg + 2 == edges.size() ? b : b - nudge;
        s += detail::simpson_segment(f, a, b, m, a_eval, b_eval);
    }
    return s;
}

/* Total-variation distance (probability convention, (1/2) L1) between two
 * 1-D densities on a shared grid. Both inputs must integrate to 1 on the
 * grid within 1e-10 — i.e. the grid captures all their mass — otherwise the
 * grid is rejected as a configuration error.
 */
inline double tv_distance_1d(const std::function<double(double)>& p,
                             const std::function<double(double)>& q, const GridSpec1D& grid) {
    const double ip = integrate_1d(p, grid);
    const double iq = integrate_1d(q, grid);
    if (std::abs(ip - 1.0) > 1e-10 || std::abs(iq - 1.0) > 1e-10)
        throw config_error("tv_distance_1d: density mass on the grid deviates from 1 by more than 1e-10 "
                           "(grid too small or density unnormalized)");
    auto absdiff = [&](double x) { return std::abs(p(x) - q(x)); };
    return 0.5 * integrate_1d(absdiff, grid);
}

// Default grids capturing the full mass with kink-aligned knots.
inline GridSpec1D laplace_grid(double lambda, long n_points = 200000) {
    GridSpec1D g;
    g.lo = -40.0;
    g.hi = 40.0;
    // split at the exact density's kink (0) and the smoothed density's (+-lambda)
    if (lambda > 0.0 && lambda < 40.0)
        g.knots = {-lambda, 0.0, lambda};
    else
        g.knots = {0.0};
    g.n_points = n_points;
    return g;
}

inline GridSpec1D uniform_grid(double lambda, long n_points = 200000) {
    GridSpec1D g;
    const double pad = 1.0 + 20.0 * std::sqrt(std::max(lambda, 1e-12));
    g.lo = -pad;
    g.hi = pad;
    g.knots = {-1.0, 1.0};
    g.n_points = n_points;
    return g;
}

}  // namespace proxmc
