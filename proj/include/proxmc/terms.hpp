#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "proxmc/vec.hpp"

namespace proxmc {

/* A convex, lower semicontinuous, possibly non-smooth term g, exposed through
 * the two handles every algorithm here needs: point evaluation (may return
 * +inf outside the domain) and the proximal map of theta*g.
 *
 * `prox` must implement prox_{theta g}(x) = argmin_p { g(p) + |x-p|^2 / (2 theta) }
 * exactly or to high accuracy; `lip_const` is a Lipschitz constant of g itself
 * (not of a gradient), +inf when g is not Lipschitz (e.g. an indicator).
 *
 * Implementations may carry warm-start state inside the callable; a term
 * instance therefore belongs to a single chain. Factories are cheap, so
 * callers build one model per chain.
 */
struct NonSmoothTerm {
    std::string label;
    double lip_const = 0.0;
    std::function<double(const Vec&)> eval;
    std::function<void(const Vec&, double, Vec&)> prox;  // (x, theta) -> out
};

/* Smooth part f of a composite potential U = f + g: gradient is lip_grad-
 * Lipschitz. `value_and_grad` returns f(x) while filling the gradient; the
 * default just calls the two handles, but models where the value is free as a
 * by-product of the gradient (spectral least squares) install a fused one.
 */
struct SmoothTerm {
    double lip_grad = 0.0;
    std::function<double(const Vec&)> eval;
    std::function<void(const Vec&, Vec&)> grad;
    std::function<double(const Vec&, Vec&)> value_and_grad;

    double eval_with_grad(const Vec& x, Vec& g) const {
        if (value_and_grad) return value_and_grad(x, g);
        grad(x, g);
        return eval(x);
    }
};

// f == 0: lets the samplers target pure prior-type densities exp(-g).
inline SmoothTerm zero_smooth_term(std::size_t dim) {
    SmoothTerm f;
    f.lip_grad = 0.0;
    f.eval = [](const Vec&) { return 0.0; };
    f.grad = [dim](const Vec& x, Vec& g) {
        check_same_size(x, x, "zero_smooth_term");
        g.assign(dim, 0.0);
    };
    return f;
}

// beta * g as a term: values and Lipschitz constant scale, prox absorbs beta
// into its parameter (prox_{theta * beta g} = prox_{(theta beta) g}).
inline NonSmoothTerm scale_term(NonSmoothTerm g, double beta) {
    if (!(beta > 0.0)) throw config_error("scale_term: beta must be positive");
    NonSmoothTerm out;
    out.label = g.label;
    out.lip_const = g.lip_const * beta;
    auto base_eval = g.eval;
    auto base_prox = g.prox;
    out.eval = [base_eval, beta](const Vec& x) { return beta * base_eval(x); };
    out.prox = [base_prox, beta](const Vec& x, double theta, Vec& p) { base_prox(x, theta * beta, p); };
    return out;
}

}  // namespace proxmc
