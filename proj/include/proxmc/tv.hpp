#pragma once

#include <cmath>
#include <memory>

#include "proxmc/errors.hpp"
#include "proxmc/image.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Isotropic total variation on a regular grid with forward differences and
 * reflecting (Neumann) boundary:
 *
 *   (Gx)_{ij} = ( x_{i,j+1}-x_{ij} if j<W-1 else 0 ,
 *                 x_{i+1,j}-x_{ij} if i<H-1 else 0 )
 *   TV(x)     = sum_{ij} |(Gx)_{ij}|_2
 *
 * A height-1 field reduces to the 1-D forward-difference TV.
 *
 * prox_{theta TV} is computed by dual projection (fixed-point iteration on
 * the dual field p with step tau = 1/8 <= 1/|G G^T|), stopping on the duality
 * gap
 *
 *   gap(p) = TV(y_p) - <G y_p, p>,   y_p = x - theta G^T p,
 *
 * which is exactly primal(y_p) - dual(p) >= 0, relative to max(1, primal).
 */

// gx, gy same size as x; zero on the last column / row respectively.
inline void tv_grad_op(const Vec& x, int w, int h, Vec& gx, Vec& gy) {
    gx.assign(x.size(), 0.0);
    gy.assign(x.size(), 0.0);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * w + j;
            if (j < w - 1) gx[k] = x[k + 1] - x[k];
            if (i < h - 1) gy[k] = x[k + w] - x[k];
        }
}

// out = G^T p (negative divergence), the exact adjoint of tv_grad_op.
inline void tv_grad_adjoint(const Vec& px, const Vec& py, int w, int h, Vec& out) {
    out.assign(px.size(), 0.0);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * w + j;
            if (j < w - 1) {
                out[k] -= px[k];
                out[k + 1] += px[k];
            }
            if (i < h - 1) {
                out[k] -= py[k];
                out[k + w] += py[k];
            }
        }
}

inline double tv_eval(const Vec& x, int w, int h) {
    if (x.size() != static_cast<std::size_t>(w) * h) throw input_error("tv_eval: size mismatch");
    double s = 0.0;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * w + j;
            const double dx = (j < w - 1) ? x[k + 1] - x[k] : 0.0;
            const double dy = (i < h - 1) ? x[k + w] - x[k] : 0.0;
            s += std::sqrt(dx * dx + dy * dy);
        }
    return s;
}

inline double tv_eval(const ImageField& x) { return tv_eval(x.data, x.width, x.height); }

// Dual variable of the TV prox; reusable across calls for warm starts.
struct TvDualState {
    Vec px, py;
    void reset(std::size_t n) {
        px.assign(n, 0.0);
        py.assign(n, 0.0);
    }
};

struct TvProxResult {
    int iterations = 0;
    double gap = 0.0;   // last duality gap (absolute)
    bool converged = false;
};

/* Chambolle dual iteration for out = prox_{theta TV}(x). `state` carries the
 * dual field; pass a zero-initialized (or stale, for warm starts) state of
 * matching size. Non-convergence inside max_iter is reported in the result,
 * not thrown: the iterate is still feasible and callers decide how strict to
 * be.
 */
inline TvProxResult prox_tv_chambolle(const Vec& x, int w, int h, double theta, Vec& out,
                                      TvDualState& state, int max_iter = 200, double tol = 1e-5) {
    if (theta < 0.0 || !std::isfinite(theta))
        throw input_error("prox_tv_chambolle: prox parameter must be nonnegative and finite");
    if (max_iter < 1) throw config_error("prox_tv_chambolle: max_iter must be >= 1");
    if (x.size() != static_cast<std::size_t>(w) * h) throw input_error("prox_tv_chambolle: size mismatch");
    const std::size_t n = x.size();
    if (theta == 0.0) {  // zero penalty: the prox is the identity
        out = x;
        TvProxResult res;
        res.converged = true;
        return res;
    }
    if (state.px.size() != n) state.reset(n);

    const double tau = 0.125;  // 1/8 <= 1 / |G G^T|
    Vec wx(n), wy(n);
    TvProxResult res;
    out.resize(n);

    for (int it = 1; it <= max_iter; ++it) {
        // y_p = x - theta G^T p
        tv_grad_adjoint(state.px, state.py, w, h, out);
        for (std::size_t k = 0; k < n; ++k) out[k] = x[k] - theta * out[k];

        // w = G y_p; duality gap and primal value come along for free
        tv_grad_op(out, w, h, wx, wy);
        double tv_y = 0.0, pair = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            tv_y += std::sqrt(wx[k] * wx[k] + wy[k] * wy[k]);
            pair += wx[k] * state.px[k] + wy[k] * state.py[k];
        }
        const double gap = tv_y - pair;
        const double primal = tv_y + sqdist(out, x) / (2.0 * theta);
        res.iterations = it;
        res.gap = gap;
        if (gap <= tol * std::max(1.0, primal)) {
            res.converged = true;
            return res;
        }

        // semi-implicit dual ascent: p <- (p + (tau/theta) w) / (1 + (tau/theta)|w|)
        const double step = tau / theta;
        for (std::size_t k = 0; k < n; ++k) {
            const double nw = std::sqrt(wx[k] * wx[k] + wy[k] * wy[k]);
            const double denom = 1.0 + step * nw;
            state.px[k] = (state.px[k] + step * wx[k]) / denom;
            state.py[k] = (state.py[k] + step * wy[k]) / denom;
        }
    }

    // recompute the primal point for the final dual iterate
    tv_grad_adjoint(state.px, state.py, w, h, out);
    for (std::size_t k = 0; k < n; ++k) out[k] = x[k] - theta * out[k];
    return res;
}

// Cold-start convenience overload on image fields.
inline ImageField prox_tv_chambolle(const ImageField& x, double theta, int max_iter = 200,
                                    double tol = 1e-5, TvProxResult* info = nullptr) {
    TvDualState state;
    Vec out;
    TvProxResult r = prox_tv_chambolle(x.data, x.width, x.height, theta, out, state, max_iter, tol);
    if (info) *info = r;
    return ImageField(std::move(out), x.width, x.height);
}

/* TV as a NonSmoothTerm. The dual state is captured in the closure so
 * successive prox calls warm-start from the previous dual field: along a
 * slowly moving chain this cuts the iteration count substantially. A term
 * instance is therefore stateful and belongs to one chain.
 */
inline NonSmoothTerm make_tv_term(int w, int h, int max_iter = 200, double tol = 1e-5,
                                  bool warm_start = true) {
    if (w <= 0 || h <= 0) throw config_error("make_tv_term: non-positive dimensions");
    NonSmoothTerm g;
    g.label = "tv";
    const double n = static_cast<double>(w) * h;
    g.lip_const = std::sqrt(8.0 * n);  // TV(a)-TV(b) <= sqrt(N)|G(a-b)| <= sqrt(8N)|a-b|
    g.eval = [w, h](const Vec& x) { return tv_eval(x, w, h); };
    auto state = std::make_shared<TvDualState>();
    g.prox = [w, h, max_iter, tol, warm_start, state](const Vec& x, double theta, Vec& p) {
        if (!warm_start) state->reset(x.size());
        prox_tv_chambolle(x, w, h, theta, p, *state, max_iter, tol);
    };
    return g;
}

}  // namespace proxmc
