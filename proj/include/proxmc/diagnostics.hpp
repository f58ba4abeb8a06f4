#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/fft.hpp"
#include "proxmc/model.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Chain diagnostics: autocorrelation, effective sample size, quantiles,
 * highest-posterior-density thresholds, PSNR, KS distance.
 */

/* Normalized autocorrelation rho_0..rho_max_lag of a scalar series: mean is
 * removed first, covariances use the biased 1/n normalization (standard for
 * spectral/IACT work), rho_0 = 1. Computed via an FFT of the zero-padded
 * series. A series with zero empirical variance has no ACF.
 */
inline Vec acf(const Vec& series, long max_lag) {
    const long n = static_cast<long>(series.size());
    if (n < 2) throw input_error("acf: series must have at least 2 points");
    if (max_lag < 0) throw input_error("acf: max_lag must be nonnegative");
    max_lag = std::min(max_lag, n - 1);

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    long len = 1;
    while (len < 2 * n) len *= 2;
    Vec padded(static_cast<std::size_t>(len), 0.0);
    for (long i = 0; i < n; ++i) padded[i] = series[i] - mean;

    Fft2D fft(static_cast<int>(len), 1);
    CVec spec;
    fft.forward(padded, spec);
    for (auto& c : spec) c = std::norm(c);
    Vec corr;
    fft.inverse_real(spec, corr);
    // unitary transforms: F^-1(|F d|^2) = (circular correlation)/sqrt(len)
    const double scale = std::sqrt(static_cast<double>(len));

    const double c0 = corr[0] * scale / static_cast<double>(n);
    if (!(c0 > 0.0) || !std::isfinite(c0))
        throw numerical_error("acf: series has degenerate (zero) variance");

    Vec rho(static_cast<std::size_t>(max_lag) + 1);
    for (long k = 0; k <= max_lag; ++k) rho[k] = corr[k] * scale / static_cast<double>(n) / c0;
    rho[0] = 1.0;
    return rho;
}

/* Effective sample size n/IACT with the IACT truncated by the initial
 * positive sequence rule on lag pairs Gamma_m = rho_{2m} + rho_{2m+1}
 * (summation stops at the first non-positive pair). The estimate is clamped
 * to a small positive floor so antithetic chains (alternating signs) yield a
 * finite, positive answer rather than a negative IACT.
 */
inline double iact(const Vec& series) {
    const long n = static_cast<long>(series.size());
    const Vec rho = acf(series, n - 1);
    double s = 0.0;
    for (long m = 0;; ++m) {
        const long k = 2 * m;
        if (k >= static_cast<long>(rho.size())) break;
        const double pair = rho[k] + (k + 1 < static_cast<long>(rho.size()) ? rho[k + 1] : 0.0);
        if (pair <= 0.0) break;
        s += pair;
    }
    return std::max(2.0 * s - 1.0, 1e-6);
}

inline double ess(const Vec& series) {
    return static_cast<double>(series.size()) / iact(series);
}

/* Quantile with linear interpolation between order statistics
 * (h = (n-1)q; the convention used by most numerical environments).
 */
inline double quantile(const Vec& data, double q) {
    if (data.empty()) throw input_error("quantile: empty data");
    if (!(q >= 0.0 && q <= 1.0)) throw input_error("quantile: q must lie in [0,1]");
    Vec sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct HpdResult {
    double alpha = 0.0;       // excluded tail mass
    double eta_alpha = 0.0;   // potential threshold
    long long n_used = 0;
    std::string quantile_convention = "linear_interpolation_h=(n-1)q";
};

/* Threshold eta_alpha of the highest-posterior-density region
 * {x : U(x) <= eta_alpha} estimated from a potential trace: the (1-alpha)
 * quantile of U, so the region holds fraction 1-alpha of the samples.
 */
inline HpdResult hpd_threshold(const Vec& u_trace, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("hpd_threshold: alpha must lie in (0,1)");
    if (u_trace.empty()) throw input_error("hpd_threshold: empty potential trace");
    HpdResult r;
    r.alpha = alpha;
    r.eta_alpha = quantile(u_trace, 1.0 - alpha);
    r.n_used = static_cast<long long>(u_trace.size());
    return r;
}

inline bool hpd_membership(double u_value, double eta) { return u_value <= eta; }

inline bool hpd_membership(const CompositeModel& model, const Vec& x, double eta) {
    return potential_eval(model, x) <= eta;
}

// Peak signal-to-noise ratio in dB; +inf for identical inputs.
inline double psnr(const Vec& x, const Vec& ref, double peak) {
    check_same_size(x, ref, "psnr");
    if (!(peak > 0.0)) throw input_error("psnr: peak must be positive");
    if (x.empty()) throw input_error("psnr: empty input");
    const double mse = sqdist(x, ref) / static_cast<double>(x.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
inline double ks_distance(Vec samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw input_error("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

// Index of the highest-variance component given running moments.
inline std::size_t slowest_component(const Vec& running_mean, const Vec& running_second_moment) {
    check_same_size(running_mean, running_second_moment, "slowest_component");
    if (running_mean.empty()) throw input_error("slowest_component: empty moments");
    std::size_t best = 0;
    double best_var = -1.0;
    for (std::size_t i = 0; i < running_mean.size(); ++i) {
        const double var = running_second_moment[i] - running_mean[i] * running_mean[i];
        if (var > best_var) {
            best_var = var;
            best = i;
        }
    }
    return best;
}

// Scalar trace of one coordinate from stored samples.
inline Vec extract_component(const std::vector<Vec>& samples, std::size_t idx) {
    Vec out;
    out.reserve(samples.size());
    for (const Vec& s : samples) {
        if (idx >= s.size()) throw input_error("extract_component: index out of range");
        out.push_back(s[idx]);
    }
    return out;
}

}  // namespace proxmc
