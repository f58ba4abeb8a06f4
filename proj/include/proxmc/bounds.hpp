#pragma once

#include <cmath>
#include <map>
#include <string>

#include "proxmc/errors.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Non-asymptotic convergence budgets for the smoothed-target unadjusted
 * chain: given drift/convexity constants of U^lambda, compute the horizon T,
 * the admissible step gamma_max, and the iteration budget n_min = ceil(T /
 * gamma_max) that guarantee TV(delta_x R^n, pi^lambda) <= epsilon.
 *
 * Two regimes:
 *   - convex case: U^lambda convex with a linear-growth lower bound
 *     (constants eta_c, R_c); budgets scale like d^5 polylog.
 *   - strongly-convex-outside-a-ball case (constants m, R_s >= 1); budgets
 *     scale like d log d.
 *
 * All quantities that can be astronomically large (V_c, b_c, A_1) are carried
 * as logarithms; the intermediates map reports those logs under "log_*" keys
 * together with the directly representable constants.
 *
 * Two displays need a reading to be computable, both recorded in the
 * intermediates so callers can substitute their own choice:
 *   - the factor rho^gamma inside A_1, A_2 (and exp(gamma ...) in the strong
 *     A_2) references the step size being solved for; it is evaluated at the
 *     conservative end gamma = gamma_bar, which maximizes A_1, A_2 and hence
 *     T while minimizing gamma_max (the budget stays an upper bound);
 *   - the strong-case A_1 is defined self-referentially; it is resolved as
 *     the fixed point of a = c + sqrt(a)/L from a = 5 (the map is increasing
 *     and concave with slope < 1 at the fixed point, so iteration converges
 *     monotonically).
 */

struct ConvexBoundInputs {
    double eta_c = 0.0;
    double big_r_c = 0.0;
    long d = 0;
    double l_lip = 0.0;      // L, with L <= L_f + 1/lambda
    double gamma_bar = 0.0;  // in (0, 1/L]
    double epsilon = 0.0;    // in (0, 1)
    double x_dist = 0.0;     // |x - x*| at the start point
};

struct StrongBoundInputs {
    double m_strong = 0.0;
    double big_r_s = 1.0;  // >= 1
    long d = 0;
    double l_lip = 0.0;
    double gamma_bar = 0.0;
    double epsilon = 0.0;
    double x_dist = 0.0;
};

struct BoundBudget {
    double t_horizon = 0.0;
    double gamma_max = 0.0;
    double n_min = 0.0;  // ceil(T/gamma_max); exact below 2^53
    std::map<std::string, double> intermediates;
};

// Phi^{-1}(3/4) by bisection on the erf-based normal CDF, to 1e-12.
inline double normal_quantile_3_4() {
    auto cdf = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
    double lo = 0.5, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < 0.75 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double omega(double r) {
    if (r < 0.0) throw input_error("omega: r must be nonnegative");
    static const double q = normal_quantile_3_4();
    const double denom = 2.0 * q;
    return r * r / (denom * denom);
}

namespace detail {

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw numerical_error(std::string("bounds: intermediate '") + name + "' is not finite");
}

inline void validate_common(long d, double l_lip, double gamma_bar, double epsilon, double x_dist,
                            const char* where) {
    const std::string w(where);
    if (d < 1) throw input_error(w + ": d must be a positive integer");
    if (!(l_lip > 0.0)) throw input_error(w + ": l_lip must be positive");
    if (!(gamma_bar > 0.0) || gamma_bar > 1.0 / l_lip + 1e-15)
        throw input_error(w + ": gamma_bar must lie in (0, 1/L]");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw input_error(w + ": epsilon must lie in (0,1)");
    if (!(x_dist >= 0.0)) throw input_error(w + ": x_dist must be nonnegative");
}

/* gamma_max = min(gamma_bar, [-d + sqrt(d^2 + c)] / (2 A2 / 3)) with
 * c = (2/3) A2 eps^2 / (L^2 T), computed from log A2 without forming A2:
 * the rationalized form  gamma = eps^2 / (L^2 T (d + sqrt(d^2 + c)))
 * cancels A2 in the prefactor and never underflows to 0 - 0.
 */
inline double gamma_from_log_a2(double log_a2, double d, double l_lip, double t_horizon,
                                double epsilon, double gamma_bar) {
    const double log_l2t = 2.0 * std::log(l_lip) + std::log(t_horizon);
    const double log_c = std::log(2.0 / 3.0) + log_a2 + 2.0 * std::log(epsilon) - log_l2t;
    const double log_root = 0.5 * log_add_exp(2.0 * std::log(d), log_c);  // log sqrt(d^2+c)
    const double log_denom = log_add_exp(std::log(d), log_root);          // log(d + sqrt(d^2+c))
    const double log_gamma = 2.0 * std::log(epsilon) - log_l2t - log_denom;
    return std::min(gamma_bar, std::exp(log_gamma));
}

}  // namespace detail

struct DriftConstants {
    double rho_c = 0.0;        // geometric factor of the Foster-Lyapunov drift
    double minus_log_rho = 0.0;
    double a_c = 0.0;
    double log_b_c = 0.0;
    double log_v_c = 0.0;  // log V_c at the start point
};

/* Drift constants of the convex case:
 *   V_c(x)  = exp{(eta_c/4) sqrt(|x-x*|^2 + 1)}
 *   rho_c   = exp{-eta_c^2 (sqrt(2)-1)/16}
 *   a_c     = max(1, 2d/eta_c, R_c)
 *   b_c     = {(eta_c/4)(d + eta_c gbar/4) - log rho_c}
 *             * exp{eta_c sqrt(a_c^2+1)/4 + (eta_c gbar/4)(d + eta_c gbar/4)}
 */
inline DriftConstants drift_constants(const ConvexBoundInputs& in) {
    detail::validate_common(in.d, in.l_lip, in.gamma_bar, in.epsilon, in.x_dist, "drift_constants");
    if (!(in.eta_c > 0.0)) throw input_error("drift_constants: eta_c must be positive");
    if (!(in.big_r_c >= 0.0)) throw input_error("drift_constants: R_c must be nonnegative");
    const double eta = in.eta_c, gbar = in.gamma_bar, d = static_cast<double>(in.d);
    DriftConstants c;
    c.minus_log_rho = eta * eta * (std::sqrt(2.0) - 1.0) / 16.0;
    c.rho_c = std::exp(-c.minus_log_rho);
    c.a_c = std::max({1.0, 2.0 * d / eta, in.big_r_c});
    const double lin = (eta / 4.0) * (d + eta * gbar / 4.0);
    c.log_b_c = std::log(lin + c.minus_log_rho) + eta * std::sqrt(c.a_c * c.a_c + 1.0) / 4.0 +
                (eta * gbar / 4.0) * (d + eta * gbar / 4.0);
    c.log_v_c = (eta / 4.0) * std::sqrt(in.x_dist * in.x_dist + 1.0);
    return c;
}

inline BoundBudget convex_budget(const ConvexBoundInputs& in) {
    detail::validate_common(in.d, in.l_lip, in.gamma_bar, in.epsilon, in.x_dist, "convex_budget");
    if (!(in.eta_c > 0.0)) throw input_error("convex_budget: eta_c must be positive");
    if (!(in.big_r_c >= 0.0)) throw input_error("convex_budget: R_c must be nonnegative");

    const double eta = in.eta_c, gbar = in.gamma_bar, eps = in.epsilon;
    const double d = static_cast<double>(in.d);
    const DriftConstants dc = drift_constants(in);

    // btilde_c = (eta/4)(eta alpha_c/4 + d) max{1, exp(eta sqrt(a^2+1)/4)/sqrt(a^2+1)}
    const double alpha_c = std::max({1.0, 4.0 * d / eta, in.big_r_c});
    const double s = std::sqrt(alpha_c * alpha_c + 1.0);
    const double log_btilde =
        std::log((eta / 4.0) * (eta * alpha_c / 4.0 + d)) + std::max(0.0, eta * s / 4.0 - std::log(s));
    detail::require_finite(log_btilde, "btilde_c");

    // (-rho^gamma log rho)^{-1} at gamma = gamma_bar (conservative reading)
    const double log_rho_term = gbar * dc.minus_log_rho - std::log(dc.minus_log_rho);

    // exponent E = (eta^2/32) omega((8/eta) log(32 btilde/eta^2))
    const double log_32bt = std::log(32.0) - 2.0 * std::log(eta) + log_btilde;
    if (log_32bt < 0.0) throw numerical_error("convex_budget: intermediate 'log(32 btilde/eta^2)' negative");
    const double e_exp = (eta * eta / 32.0) * omega((8.0 / eta) * log_32bt);
    detail::require_finite(e_exp, "E");

    // A1 = (1/2)(V + b rho_term + 8 btilde/eta^2) + 16 (btilde/eta^2) e^E
    const double log_first =
        log_sum_exp({dc.log_v_c, dc.log_b_c + log_rho_term,
                     std::log(8.0) - 2.0 * std::log(eta) + log_btilde}) -
        std::log(2.0);
    const double log_a1 =
        log_add_exp(log_first, std::log(16.0) - 2.0 * std::log(eta) + log_btilde + e_exp);
    detail::require_finite(log_a1, "A1");

    // A2 = L^2 (4/eta)^2 (1 + log{V + b rho_term})^2
    const double inner = log_add_exp(dc.log_v_c, dc.log_b_c + log_rho_term);
    if (!(1.0 + inner > 0.0)) throw numerical_error("convex_budget: intermediate 'A2' not positive");
    const double log_a2 = 2.0 * std::log(in.l_lip) + 2.0 * std::log(4.0 / eta * (1.0 + inner));
    detail::require_finite(log_a2, "A2");

    // -log kappa = log2 (eta^2/32) / [ log{8 btilde/eta^2 (3 + 4 e^E / eta^2)} + log2 ]
    const double log_brace = std::log(8.0) - 2.0 * std::log(eta) + log_btilde +
                             log_add_exp(std::log(3.0), std::log(4.0) - 2.0 * std::log(eta) + e_exp);
    const double minus_log_kappa = std::log(2.0) * (eta * eta / 32.0) / (log_brace + std::log(2.0));
    detail::require_finite(minus_log_kappa, "kappa");
    if (!(minus_log_kappa > 0.0)) throw numerical_error("convex_budget: intermediate 'kappa' not in (0,1)");

    // T = max{ (32/eta^2) log(8 A1 / eps), log(16/eps) / (-log kappa) }
    const double t1 = 32.0 / (eta * eta) * (std::log(8.0 / eps) + log_a1);
    const double t2 = (std::log(16.0) - std::log(eps)) / minus_log_kappa;
    const double t_horizon = std::max(t1, t2);
    detail::require_finite(t_horizon, "T");

    BoundBudget b;
    b.t_horizon = t_horizon;
    b.gamma_max = detail::gamma_from_log_a2(log_a2, d, in.l_lip, t_horizon, eps, gbar);
    detail::require_finite(b.gamma_max, "gamma_max");
    b.n_min = std::ceil(t_horizon / b.gamma_max);
    detail::require_finite(b.n_min, "n_min");

    b.intermediates = {{"rho_c", dc.rho_c},
                       {"minus_log_rho_c", dc.minus_log_rho},
                       {"a_c", dc.a_c},
                       {"alpha_c", alpha_c},
                       {"log_b_c", dc.log_b_c},
                       {"log_btilde_c", log_btilde},
                       {"log_v_c", dc.log_v_c},
                       {"log_rho_term_at_gamma_bar", log_rho_term},
                       {"exponent_e", e_exp},
                       {"log_a1", log_a1},
                       {"log_a2", log_a2},
                       {"minus_log_kappa", minus_log_kappa},
                       {"t_linear_term", t1},
                       {"t_kappa_term", t2}};
    return b;
}

inline BoundBudget strong_budget(const StrongBoundInputs& in) {
    detail::validate_common(in.d, in.l_lip, in.gamma_bar, in.epsilon, in.x_dist, "strong_budget");
    if (!(in.m_strong > 0.0)) throw input_error("strong_budget: m must be positive");
    if (!(in.big_r_s >= 1.0)) throw input_error("strong_budget: R_s must be >= 1");

    const double m = in.m_strong, L = in.l_lip, gbar = in.gamma_bar, eps = in.epsilon;
    const double d = static_cast<double>(in.d);
    const double r = std::max(1.0, in.big_r_s);

    // A1 = 5 + sqrt(d/m + R_s^2) + sqrt(A1)/L, resolved as a fixed point
    const double base = 5.0 + std::sqrt(d / m + in.big_r_s * in.big_r_s);
    double a1 = 5.0;
    int iters = 0;
    for (; iters < 200; ++iters) {
        const double next = base + std::sqrt(a1) / L;
        if (!std::isfinite(next)) throw numerical_error("strong_budget: intermediate 'A1' diverged");
        if (std::abs(next - a1) <= 1e-13 * std::max(1.0, std::abs(next))) {
            a1 = next;
            break;
        }
        a1 = next;
    }
    detail::require_finite(a1, "A1");

    // -log kappa = (log2 m/2) / [ log{(1 + e^{m omega(max(1,R_s))/4})(1 + max(1,R_s))} + log2 ]
    const double z = m * omega(r) / 4.0;
    const double log_brace = log_add_exp(0.0, z) + std::log1p(r);
    const double minus_log_kappa = std::log(2.0) * m / 2.0 / (log_brace + std::log(2.0));
    detail::require_finite(minus_log_kappa, "kappa");

    // T = (log A1 - log(eps/2)) / (-log kappa)
    const double t_horizon = (std::log(a1) - std::log(eps / 2.0)) / minus_log_kappa;
    detail::require_finite(t_horizon, "T");

    // A2 = L^2 (x_dist^2 + 2 (d + m R_s^2) (2m + gbar L^2) e^{gamma (2m + gbar L^2)}),
    // with gamma evaluated at gamma_bar (conservative reading)
    const double rate = 2.0 * m + gbar * L * L;
    const double log_big = std::log(2.0 * (d + m * in.big_r_s * in.big_r_s) * rate) + gbar * rate;
    const double log_inner = (in.x_dist > 0.0)
                                 ? log_add_exp(2.0 * std::log(in.x_dist), log_big)
                                 : log_big;
    const double log_a2 = 2.0 * std::log(L) + log_inner;
    detail::require_finite(log_a2, "A2");

    BoundBudget b;
    b.t_horizon = t_horizon;
    b.gamma_max = detail::gamma_from_log_a2(log_a2, d, L, t_horizon, eps, gbar);
    detail::require_finite(b.gamma_max, "gamma_max");
    b.n_min = std::ceil(t_horizon / b.gamma_max);
    detail::require_finite(b.n_min, "n_min");

    b.intermediates = {{"a1", a1},
                       {"a1_fixed_point_iters", static_cast<double>(iters)},
                       {"log_a2", log_a2},
                       {"minus_log_kappa", minus_log_kappa},
                       {"omega_r", omega(r)}};
    return b;
}

}  // namespace proxmc
