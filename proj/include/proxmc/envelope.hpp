#pragma once

#include <cmath>

#include "proxmc/errors.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Moreau envelope of a convex term g at smoothing parameter lambda > 0:
 *
 *   g_lambda(x)      = g(p) + |x - p|^2 / (2 lambda),   p = prox_{lambda g}(x)
 *   grad g_lambda(x) = (x - p) / lambda                  (1/lambda-Lipschitz)
 *
 * Both quantities come from the same prox solve; the fused call returns the
 * value and fills the gradient and the prox point so samplers pay for one
 * prox per step.
 */

inline void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw config_error("moreau envelope: lambda must be positive and finite");
}

// value + gradient + prox point in one prox solve
inline double my_envelope_fused(const NonSmoothTerm& g, const Vec& x, double lambda, Vec& grad,
                                Vec& prox_point) {
    check_lambda(lambda);
    g.prox(x, lambda, prox_point);
    check_same_size(x, prox_point, "my_envelope");
    const double q = sqdist(x, prox_point);
    grad.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = (x[i] - prox_point[i]) / lambda;
    return g.eval(prox_point) + q / (2.0 * lambda);
}

inline double my_envelope_eval(const NonSmoothTerm& g, const Vec& x, double lambda) {
    check_lambda(lambda);
    Vec p;
    g.prox(x, lambda, p);
    check_same_size(x, p, "my_envelope_eval");
    return g.eval(p) + sqdist(x, p) / (2.0 * lambda);
}

inline Vec my_envelope_grad(const NonSmoothTerm& g, const Vec& x, double lambda) {
    check_lambda(lambda);
    Vec p;
    g.prox(x, lambda, p);
    check_same_size(x, p, "my_envelope_grad");
    Vec grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = (x[i] - p[i]) / lambda;
    return grad;
}

/* Envelope gap gbar_lambda(x) = g_lambda(x) - g(x) <= 0. exp(gbar) is the
 * importance weight that moves an expectation under the smoothed target back
 * to the exact one.
 */
inline double my_envelope_gap(const NonSmoothTerm& g, const Vec& x, double lambda) {
    check_lambda(lambda);
    Vec p;
    g.prox(x, lambda, p);
    check_same_size(x, p, "my_envelope_gap");
    return g.eval(p) + sqdist(x, p) / (2.0 * lambda) - g.eval(x);
}

}  // namespace proxmc
