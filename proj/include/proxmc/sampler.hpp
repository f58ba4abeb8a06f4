#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "proxmc/envelope.hpp"
#include "proxmc/errors.hpp"
#include "proxmc/model.hpp"
#include "proxmc/rng.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Proximal unadjusted Langevin sampler (smoothed target) and its
 * Metropolis-adjusted companion (exact target).
 *
 * One step of the unadjusted chain targeting pi_lambda ~ exp(-f - g_lambda):
 *
 *   X' = (1 - gamma/lambda) X - gamma grad f(X)
 *        + (gamma/lambda) prox_{lambda g}(X) + sqrt(2 gamma) Z
 *
 * Step sizes are admissible iff 0 < gamma <= lambda / (lambda L_f + 1); any
 * violation is a configuration error raised before the first iteration.
 *
 * The adjusted chain proposes from the same drift with covariance
 * 2 gamma I and accepts with the exact potential U = f + g, so its invariant
 * law is pi itself regardless of lambda.
 */

struct SamplerConfig {
    double lambda = 0.0;
    double gamma = 0.0;
    long long n_iter = 0;
    long long burn_in = 0;
    long long thin = 1;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;  // one stream per chain; never reuse within a seed
    Vec x0;

    bool record_u_trace = true;
    long long record_samples = 0;  // keep every k-th retained sample; 0 = none
    bool record_gbar = false;      // envelope gap trace for importance reweighting

    // Px-MALA only: Robbins-Monro tuning of gamma during burn-in
    bool adapt_gamma = false;
    double target_accept = 0.45;

    // potentials of other models evaluated at the retained samples
    std::vector<const CompositeModel*> cross_models;

    // Divergence loses the chain to the thrown error; when set, the last
    // finite state and its step index are stored here before the throw so
    // callers can checkpoint them. One sink per chain.
    Vec* divergence_state = nullptr;
    long long* divergence_step = nullptr;
};

struct ChainOutput {
    Vec u_trace;               // exact U at retained samples (if recorded)
    std::vector<Vec> samples;  // retained samples at the configured stride
    long long sample_stride = 0;
    Vec running_mean;           // mean over all retained samples
    Vec running_second_moment;  // elementwise second moment over the same
    Vec final_state;            // chain state after the last step
    long long kept_count = 0;
    std::uint64_t seed_used = 0;
    double gamma_used = 0.0;
    double acceptance_rate = -1.0;        // adjusted chain only
    Vec gbar_trace;                       // envelope gap at retained samples (if recorded)
    std::vector<Vec> cross_u_traces;      // [model i][retained k]
};

struct StepSizeGuideline {
    double lambda = 0.0;     // 1 / L_f
    double gamma_lo = 0.0;   // 1 / (10 L_f)
    double gamma_hi = 0.0;   // 1 / (4 L_f)
    double gamma_cap = 0.0;  // lambda / (lambda L_f + 1) = 1 / (2 L_f)
};

inline double step_size_cap(double lambda, double lip_grad) {
    return lambda / (lambda * lip_grad + 1.0);
}

// Default tuning for a model with gradient Lipschitz constant L_f: the
// regularisation lambda = 1/L_f and a recommended step range, always inside
// the admissible cap (1/(4 L_f) <= 1/(2 L_f)).
inline StepSizeGuideline step_size_guideline(double lip_grad) {
    if (!(lip_grad > 0.0) || !std::isfinite(lip_grad))
        throw config_error("step_size_guideline: L_f must be positive and finite");
    StepSizeGuideline g;
    g.lambda = 1.0 / lip_grad;
    g.gamma_lo = 1.0 / (10.0 * lip_grad);
    g.gamma_hi = 1.0 / (4.0 * lip_grad);
    g.gamma_cap = step_size_cap(g.lambda, lip_grad);
    return g;
}

inline void validate_sampler_config(const CompositeModel& model, const SamplerConfig& cfg,
                                    const char* where) {
    const std::string w(where);
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda))
        throw config_error(w + ": lambda must be positive and finite");
    const double cap = step_size_cap(cfg.lambda, model.smooth.lip_grad);
    if (!(cfg.gamma > 0.0) || cfg.gamma > cap)
        throw config_error(w + ": gamma=" + std::to_string(cfg.gamma) +
                           " outside the admissible range (0, " + std::to_string(cap) + "]");
    if (cfg.n_iter < 1) throw config_error(w + ": n_iter must be >= 1");
    if (cfg.burn_in < 0 || cfg.burn_in >= cfg.n_iter)
        throw config_error(w + ": burn_in must lie in [0, n_iter)");
    if (cfg.thin < 1) throw config_error(w + ": thin must be >= 1");
    if (cfg.x0.size() != model.dim) throw config_error(w + ": x0 dimension mismatch");
    if (!all_finite(cfg.x0)) throw config_error(w + ": x0 has non-finite entries");
    for (const CompositeModel* cm : cfg.cross_models)
        if (!cm || cm->dim != model.dim) throw config_error(w + ": cross model dimension mismatch");
}

// Single unadjusted step with caller-supplied standard normal noise.
inline Vec myula_step(const Vec& x, const CompositeModel& model, double lambda, double gamma,
                      const Vec& noise) {
    check_lambda(lambda);
    const double cap = step_size_cap(lambda, model.smooth.lip_grad);
    if (!(gamma > 0.0) || gamma > cap)
        throw config_error("myula_step: gamma outside the admissible range (0, " +
                           std::to_string(cap) + "]");
    if (x.size() != model.dim) throw input_error("myula_step: x dimension mismatch");
    check_same_size(x, noise, "myula_step");

    Vec grad, prox;
    model.smooth.grad(x, grad);
    model.nonsmooth.prox(x, lambda, prox);
    const double a = 1.0 - gamma / lambda;
    const double b = gamma / lambda;
    const double c = std::sqrt(2.0 * gamma);
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = a * x[i] - gamma * grad[i] + b * prox[i] + c * noise[i];
    return out;
}

namespace detail {

struct KeptRecorder {
    const CompositeModel* model;
    const SamplerConfig* cfg;
    ChainOutput* out;
    Vec mean_acc, m2_acc;
    long long kept_idx = 0;

    explicit KeptRecorder(const CompositeModel& m, const SamplerConfig& c, ChainOutput& o)
        : model(&m), cfg(&c), out(&o), mean_acc(m.dim, 0.0), m2_acc(m.dim, 0.0) {
        out->cross_u_traces.resize(cfg->cross_models.size());
    }

    // called with the retained state itself (moments, samples, cross-model U)
    void on_keep(const Vec& x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            mean_acc[i] += x[i];
            m2_acc[i] += x[i] * x[i];
        }
        if (cfg->record_samples > 0 && kept_idx % cfg->record_samples == 0) out->samples.push_back(x);
        for (std::size_t m = 0; m < cfg->cross_models.size(); ++m)
            out->cross_u_traces[m].push_back(potential_eval(*cfg->cross_models[m], x));
        ++kept_idx;
    }

    /* called once the smooth value and prox of a retained state are in hand
     * (they fall out of the next step's own computation) */
    void on_values(const Vec& x, double f_val, const Vec& prox_point) {
        double g_x = 0.0;
        if (cfg->record_u_trace || cfg->record_gbar) g_x = model->nonsmooth.eval(x);
        if (cfg->record_u_trace) out->u_trace.push_back(f_val + g_x);
        if (cfg->record_gbar) {
            const double g_p = model->nonsmooth.eval(prox_point);
            out->gbar_trace.push_back(g_p + sqdist(x, prox_point) / (2.0 * cfg->lambda) - g_x);
        }
    }

    void finalize(long long kept_count) {
        out->kept_count = kept_count;
        if (kept_count > 0) {
            out->running_mean.resize(mean_acc.size());
            out->running_second_moment.resize(m2_acc.size());
            for (std::size_t i = 0; i < mean_acc.size(); ++i) {
                out->running_mean[i] = mean_acc[i] / static_cast<double>(kept_count);
                out->running_second_moment[i] = m2_acc[i] / static_cast<double>(kept_count);
            }
        }
        out->seed_used = cfg->seed;
    }
};

inline bool keep_step(long long k, const SamplerConfig& cfg) {
    return k > cfg.burn_in && (k - cfg.burn_in) % cfg.thin == 0;
}

}  // namespace detail

/* Unadjusted chain. Retains X_k for k in (burn_in, n_iter] at the thinning
 * stride; kept_count = floor((n_iter - burn_in)/thin). The potential trace
 * stores the exact U = f + g at retained states; the smooth value and the
 * prox point are reused from the following step's computation, so recording
 * costs one extra g evaluation per retained sample.
 */
inline ChainOutput run_myula(const CompositeModel& model, const SamplerConfig& cfg) {
    validate_sampler_config(model, cfg, "run_myula");
    ChainOutput out;
    detail::KeptRecorder rec(model, cfg, out);
    CounterRng rng(cfg.seed, cfg.stream);

    const double a = 1.0 - cfg.gamma / cfg.lambda;
    const double b = cfg.gamma / cfg.lambda;
    const double c = std::sqrt(2.0 * cfg.gamma);
    const bool need_values = cfg.record_u_trace || cfg.record_gbar;

    Vec x = cfg.x0, grad, prox;
    Vec x_prev;  // maintained only when a divergence sink is attached
    bool pending = false;  // the current state is retained, values not yet recorded
    long long kept = 0;

    for (long long k = 1; k <= cfg.n_iter; ++k) {
        const double f_val = model.smooth.eval_with_grad(x, grad);
        model.nonsmooth.prox(x, cfg.lambda, prox);
        if (pending) rec.on_values(x, f_val, prox);

        if (cfg.divergence_state) x_prev = x;
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = a * x[i] - cfg.gamma * grad[i] + b * prox[i] + c * rng.normal();

        if (!all_finite(x)) {
            if (cfg.divergence_state) *cfg.divergence_state = x_prev;
            if (cfg.divergence_step) *cfg.divergence_step = k;
            throw numerical_error("run_myula: chain diverged at step " + std::to_string(k));
        }

        pending = false;
        if (detail::keep_step(k, cfg)) {
            rec.on_keep(x);
            ++kept;
            pending = need_values;
        }
    }
    if (pending) {  // last state was retained: one extra evaluation pays for its values
        const double f_val = model.smooth.eval(x);
        model.nonsmooth.prox(x, cfg.lambda, prox);
        rec.on_values(x, f_val, prox);
    }

    rec.finalize(kept);
    out.sample_stride = cfg.record_samples;
    out.gamma_used = cfg.gamma;
    out.final_state = std::move(x);
    return out;
}

/* Single adjusted step: proposal from the unadjusted drift, accept/reject
 * with the exact potential. Returns the new state and the accept flag.
 * Draw order per step is fixed (d normals, then one uniform), so chains are
 * reproducible from (seed, stream).
 */
inline std::pair<Vec, bool> pxmala_step(const Vec& x, const CompositeModel& model, double lambda,
                                        double gamma, CounterRng& rng) {
    check_lambda(lambda);
    const double cap = step_size_cap(lambda, model.smooth.lip_grad);
    if (!(gamma > 0.0) || gamma > cap)
        throw config_error("pxmala_step: gamma outside the admissible range (0, " +
                           std::to_string(cap) + "]");
    if (x.size() != model.dim) throw input_error("pxmala_step: x dimension mismatch");

    const double u_cur = potential_eval(model, x);
    if (!std::isfinite(u_cur)) throw config_error("pxmala_step: potential not finite at the current state");

    Vec grad, prox, mean_cur(x.size());
    model.smooth.grad(x, grad);
    model.nonsmooth.prox(x, lambda, prox);
    const double a = 1.0 - gamma / lambda;
    const double b = gamma / lambda;
    for (std::size_t i = 0; i < x.size(); ++i) mean_cur[i] = a * x[i] - gamma * grad[i] + b * prox[i];

    const double c = std::sqrt(2.0 * gamma);
    Vec prop(x.size());
    double z_sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = rng.normal();
        z_sq += z * z;
        prop[i] = mean_cur[i] + c * z;
    }
    const double u_unif = rng.uniform01();

    const double u_prop = potential_eval(model, prop);
    double log_alpha = -std::numeric_limits<double>::infinity();
    if (std::isfinite(u_prop)) {
        model.smooth.grad(prop, grad);
        model.nonsmooth.prox(prop, lambda, prox);
        double back_sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double mp = a * prop[i] - gamma * grad[i] + b * prox[i];
            const double d = x[i] - mp;
            back_sq += d * d;
        }
        // log q(x | prop) = -|x - m(prop)|^2/(4 gamma); log q(prop | x) = -|z|^2/2
        log_alpha = (u_cur - u_prop) - back_sq / (4.0 * gamma) + 0.5 * z_sq;
    }
    if (std::log(u_unif) < log_alpha) return {std::move(prop), true};
    return {x, false};
}

/* Adjusted chain with optional Robbins-Monro tuning of gamma on a log scale
 * during burn-in (frozen afterwards), targeting cfg.target_accept. The tuned
 * gamma stays inside (0, cap]; cfg.gamma is the starting point.
 */
inline ChainOutput run_pxmala(const CompositeModel& model, const SamplerConfig& cfg) {
    validate_sampler_config(model, cfg, "run_pxmala");
    if (cfg.record_gbar)
        throw config_error("run_pxmala: gbar recording is a smoothed-chain feature");
    ChainOutput out;
    detail::KeptRecorder rec(model, cfg, out);
    CounterRng rng(cfg.seed, cfg.stream);

    const double cap = step_size_cap(cfg.lambda, model.smooth.lip_grad);
    const double gamma_floor = cap * 1e-9;
    double gamma = cfg.gamma;

    Vec x = cfg.x0;
    double u_cur = potential_eval(model, x);
    if (!std::isfinite(u_cur))
        throw config_error("run_pxmala: potential not finite at x0");

    Vec grad_cur, prox_cur;
    model.smooth.grad(x, grad_cur);
    model.nonsmooth.prox(x, cfg.lambda, prox_cur);

    Vec prop(x.size()), grad_prop, prox_prop, mean_cur(x.size());
    long long kept = 0, accepted_post = 0, post_steps = 0;

    auto drift = [&](const Vec& s, const Vec& g, const Vec& p, Vec& m) {
        const double a = 1.0 - gamma / cfg.lambda;
        const double b = gamma / cfg.lambda;
        for (std::size_t i = 0; i < s.size(); ++i) m[i] = a * s[i] - gamma * g[i] + b * p[i];
    };
    drift(x, grad_cur, prox_cur, mean_cur);

    for (long long k = 1; k <= cfg.n_iter; ++k) {
        const double c = std::sqrt(2.0 * gamma);
        double z_sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double z = rng.normal();
            z_sq += z * z;
            prop[i] = mean_cur[i] + c * z;
        }
        const double u_unif = rng.uniform01();

        const double f_prop = model.smooth.eval_with_grad(prop, grad_prop);
        const double g_prop = model.nonsmooth.eval(prop);
        const double u_prop = f_prop + g_prop;
        double log_alpha = -std::numeric_limits<double>::infinity();
        bool accept = false;
        if (std::isfinite(u_prop)) {
            model.nonsmooth.prox(prop, cfg.lambda, prox_prop);
            double back_sq = 0.0;
            {
                const double a = 1.0 - gamma / cfg.lambda;
                const double b = gamma / cfg.lambda;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double mp = a * prop[i] - gamma * grad_prop[i] + b * prox_prop[i];
                    const double d = x[i] - mp;
                    back_sq += d * d;
                }
            }
            log_alpha = (u_cur - u_prop) - back_sq / (4.0 * gamma) + 0.5 * z_sq;
            accept = std::log(u_unif) < log_alpha;
        }

        if (accept) {
            x.swap(prop);
            grad_cur.swap(grad_prop);
            prox_cur.swap(prox_prop);
            u_cur = u_prop;
        }

        // Robbins-Monro on log gamma, burn-in only
        if (cfg.adapt_gamma && k <= cfg.burn_in) {
            const double alpha_val = std::isfinite(log_alpha) ? std::exp(std::min(0.0, log_alpha)) : 0.0;
            const double rate = std::pow(static_cast<double>(k), -0.6);
            gamma = std::clamp(gamma * std::exp(rate * (alpha_val - cfg.target_accept)), gamma_floor, cap);
        }
        drift(x, grad_cur, prox_cur, mean_cur);

        if (k > cfg.burn_in) {
            ++post_steps;
            if (accept) ++accepted_post;
        }
        if (detail::keep_step(k, cfg)) {
            rec.on_keep(x);
            ++kept;
            if (cfg.record_u_trace) out.u_trace.push_back(u_cur);
        }
    }

    rec.finalize(kept);
    out.sample_stride = cfg.record_samples;
    out.gamma_used = gamma;
    out.acceptance_rate = post_steps > 0 ? static_cast<double>(accepted_post) / post_steps : 0.0;
    out.final_state = std::move(x);
    return out;
}

// --------------------------------------------------------- reweighting

struct ImportanceWeights {
    Vec log_weights;  // normalized: log-sum-exp equals 0
    double ess = 0.0;
};

/* Importance weights that undo the envelope smoothing: w_k proportional to
 * exp(gbar_lambda(X_k)) with gbar = g(prox) + |x-prox|^2/(2 lambda) - g(x).
 * Uses the recorded gbar trace when available, otherwise recomputes it from
 * stored samples.
 */
inline ImportanceWeights importance_reweight(const ChainOutput& chain, const CompositeModel& model,
                                             double lambda) {
    check_lambda(lambda);
    Vec raw;
    if (!chain.gbar_trace.empty()) {
        raw = chain.gbar_trace;
    } else if (!chain.samples.empty()) {
        raw.reserve(chain.samples.size());
        for (const Vec& s : chain.samples) raw.push_back(my_envelope_gap(model.nonsmooth, s, lambda));
    } else {
        throw input_error("importance_reweight: chain has neither a gbar trace nor stored samples");
    }
    for (double v : raw)
        if (!(v <= 1e-12) || !std::isfinite(v))
            throw numerical_error("importance_reweight: envelope gap must be finite and <= 0");

    const double lse = log_sum_exp(raw);
    ImportanceWeights w;
    w.log_weights.resize(raw.size());
    Vec twice(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        w.log_weights[i] = raw[i] - lse;
        twice[i] = 2.0 * w.log_weights[i];
    }
    w.ess = std::exp(-log_sum_exp(twice));
    return w;
}

// Weighted average of scalar values under normalized importance weights.
inline double weighted_average(const Vec& values, const ImportanceWeights& w) {
    check_same_size(values, w.log_weights, "weighted_average");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * std::exp(w.log_weights[i]);
    return s;
}

}  // namespace proxmc
