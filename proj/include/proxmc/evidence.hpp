#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "proxmc/diagnostics.hpp"
#include "proxmc/errors.hpp"
#include "proxmc/model.hpp"
#include "proxmc/sampler.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Model comparison by the truncated harmonic-mean identity: for any region A
 * with finite volume and a density f_j = exp(-U_j) with normalizer Z_j,
 *
 *   E_{pi_j}[ exp(U_j(X)) 1_A(X) ] = Vol(A) / Z_j ,
 *
 * so the sample mean of exp(U_j) over region hits, with a region A shared by
 * all models, turns ratios of estimates into Bayes factors (Vol(A) cancels).
 * The region is a union of per-model HPD level sets, which keeps every
 * model's posterior mass represented in A and the weights exp(U) bounded on
 * it. Everything is carried in log space.
 */

struct HmeResult {
    double log_sum = 0.0;  // log sum over region hits of exp(U_j(X_k))
    long long n_in = 0;
    long long n_total = 0;

    // mean normalization: the estimator of Vol(A)/Z_j
    double log_i_hat() const { return log_sum - std::log(static_cast<double>(n_total)); }
};

/* Core estimator: u_values are the model's own potential at its chain's
 * retained samples; in_region flags membership of the same samples in the
 * shared region. An empty intersection leaves the estimator undefined.
 */
inline HmeResult truncated_hme(const Vec& u_values, const std::vector<unsigned char>& in_region) {
    if (u_values.size() != in_region.size()) throw input_error("truncated_hme: size mismatch");
    if (u_values.empty()) throw input_error("truncated_hme: empty input");
    HmeResult r;
    r.n_total = static_cast<long long>(u_values.size());
    Vec hits;
    for (std::size_t k = 0; k < u_values.size(); ++k)
        if (in_region[k]) hits.push_back(u_values[k]);
    r.n_in = static_cast<long long>(hits.size());
    if (r.n_in == 0)
        throw estimator_undefined_error("truncated_hme: no samples fell inside the region");
    r.log_sum = log_sum_exp(hits);
    return r;
}

/* Shared region A = union over models j of {x : U_j(x) <= eta_j}, with eta_j
 * the (1-alpha)-quantile of model j's own potential trace (so each level set
 * holds fraction 1-alpha of its own chain).
 */
struct RegionSpec {
    double alpha = 0.0;
    Vec eta;  // per model
    std::vector<std::string> labels;
};

inline RegionSpec build_region(const std::vector<Vec>& own_u_traces,
                               const std::vector<std::string>& labels, double alpha) {
    if (own_u_traces.empty()) throw input_error("build_region: no traces");
    if (labels.size() != own_u_traces.size()) throw input_error("build_region: label count mismatch");
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("build_region: alpha must lie in (0,1)");
    RegionSpec r;
    r.alpha = alpha;
    r.labels = labels;
    for (const Vec& u : own_u_traces) r.eta.push_back(hpd_threshold(u, alpha).eta_alpha);
    return r;
}

// u_at_sample[i] = U_i(x) for the same sample across all models
inline bool region_contains(const RegionSpec& region, const Vec& u_at_sample) {
    check_same_size(region.eta, u_at_sample, "region_contains");
    for (std::size_t i = 0; i < region.eta.size(); ++i)
        if (u_at_sample[i] <= region.eta[i]) return true;
    return false;
}

// ------------------------------------------------------------ evidence

/* Everything improper_prior_evidence needs from one model's chain: the
 * potential of every candidate model evaluated at this chain's retained
 * samples (own model included at position own_index).
 */
struct ModelChainRecord {
    std::string label;
    std::string prior_tag;              // must agree across models (shared improper prior)
    double log_offset = 0.0;            // known log-normalizer differences (0 when likelihoods match)
    std::vector<Vec> cross_u;           // [model i][retained sample k]
    std::size_t own_index = 0;
};

struct ModelEvidence {
    std::string label;
    double log_i_hat = 0.0;
    long long n_in = 0;
    long long n_total = 0;
    double log_evidence_rel = 0.0;  // log Z_j up to the shared Vol(A) constant
};

struct EvidenceReport {
    RegionSpec region;
    std::vector<ModelEvidence> models;
    std::vector<std::vector<double>> log_bayes_factors;  // [i][j] = log B_ij = log Z_i - log Z_j
    Vec posterior_probs;                                 // uniform model prior
    std::string normalization_mode = "shared_improper_prior";
};

inline Vec posterior_model_probs(const Vec& log_evidences) {
    if (log_evidences.empty()) throw input_error("posterior_model_probs: empty input");
    const double lse = log_sum_exp(log_evidences);
    Vec p(log_evidences.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_evidences[i] - lse);
    return p;
}

inline double log_bayes_factor(const Vec& log_evidences, std::size_t i, std::size_t j) {
    if (i >= log_evidences.size() || j >= log_evidences.size())
        throw input_error("log_bayes_factor: index out of range");
    return log_evidences[i] - log_evidences[j];
}

inline EvidenceReport improper_prior_evidence(const std::vector<ModelChainRecord>& chains,
                                              double alpha) {
    const std::size_t n_models = chains.size();
    if (n_models < 2) throw input_error("improper_prior_evidence: need at least two models");
    for (const auto& c : chains) {
        if (c.cross_u.size() != n_models)
            throw input_error("improper_prior_evidence: cross potential traces incomplete for '" +
                              c.label + "'");
        if (c.own_index >= n_models)
            throw input_error("improper_prior_evidence: bad own_index for '" + c.label + "'");
        if (c.prior_tag != chains.front().prior_tag)
            throw config_error("improper_prior_evidence: models do not share one prior (" +
                               chains.front().prior_tag + " vs " + c.prior_tag + ")");
    }

    // region thresholds from each chain's own trace
    std::vector<Vec> own;
    std::vector<std::string> labels;
    for (const auto& c : chains) {
        own.push_back(c.cross_u[c.own_index]);
        labels.push_back(c.label);
    }
    EvidenceReport rep;
    rep.region = build_region(own, labels, alpha);

    Vec log_evidences;
    for (const auto& c : chains) {
        const std::size_t n_kept = c.cross_u[c.own_index].size();
        std::vector<unsigned char> in(n_kept, 0);
        Vec u_at(n_models);
        for (std::size_t k = 0; k < n_kept; ++k) {
            for (std::size_t i = 0; i < n_models; ++i) {
                if (c.cross_u[i].size() != n_kept)
                    throw input_error("improper_prior_evidence: ragged cross traces for '" + c.label +
                                      "'");
                u_at[i] = c.cross_u[i][k];
            }
            in[k] = region_contains(rep.region, u_at) ? 1 : 0;
        }
        HmeResult h;
        try {
            h = truncated_hme(c.cross_u[c.own_index], in);
        } catch (const estimator_undefined_error&) {
            throw estimator_undefined_error(
                "improper_prior_evidence: no region hits for model '" + c.label + "'");
        }
        ModelEvidence ev;
        ev.label = c.label;
        ev.log_i_hat = h.log_i_hat();
        ev.n_in = h.n_in;
        ev.n_total = h.n_total;
        ev.log_evidence_rel = c.log_offset - ev.log_i_hat;  // log Z_j + const
        rep.models.push_back(ev);
        log_evidences.push_back(ev.log_evidence_rel);
    }

    rep.log_bayes_factors.assign(n_models, std::vector<double>(n_models, 0.0));
    for (std::size_t i = 0; i < n_models; ++i)
        for (std::size_t j = 0; j < n_models; ++j)
            rep.log_bayes_factors[i][j] = log_evidences[i] - log_evidences[j];
    rep.posterior_probs = posterior_model_probs(log_evidences);
    return rep;
}

// ------------------------------------------------- normalizer utilities

/* Exact log normalizer ratio for argument-scaled penalties g_i = g(lambda_i x):
 * substituting u = lambda x gives int exp(-g(lambda x)) dx = lambda^{-d} Z(1),
 * so Z_2 / Z_1 = (lambda_1 / lambda_2)^d. Returned as a log so image-scale
 * dimensions cannot overflow.
 */
inline double norm_ratio_scaling(double lambda1, double lambda2, long d) {
    if (d < 1) throw input_error("norm_ratio_scaling: dimension must be positive");
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw input_error("norm_ratio_scaling: scales must be positive");
    return static_cast<double>(d) * (std::log(lambda1) - std::log(lambda2));
}

struct NormRatioResult {
    double log_ratio = 0.0;  // log( Z_2 / Z_1 )
    double se = 0.0;         // jackknife standard error (contiguous blocks)
    long long n_in_1 = 0;
    long long n_in_2 = 0;
};

namespace detail {

inline double hme_log_mean_masked(const Vec& u, const std::vector<unsigned char>& in,
                                  std::size_t skip_lo, std::size_t skip_hi) {
    Vec hits;
    long long total = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (k >= skip_lo && k < skip_hi) continue;
        ++total;
        if (in[k]) hits.push_back(u[k]);
    }
    if (hits.empty() || total == 0)
        throw estimator_undefined_error("norm_ratio_monte_carlo: a jackknife block emptied the region");
    return log_sum_exp(hits) - std::log(static_cast<double>(total));
}

}  // namespace detail

/* Monte-Carlo estimate of Z_2/Z_1 = int exp(-g2) / int exp(-g1): one
 * smoothed chain per density (f = 0), a shared union region built from both
 * potential traces, and the truncated harmonic mean on each chain. The
 * standard error combines independent delete-one-block jackknives of the two
 * chains (region thresholds held fixed).
 */
inline NormRatioResult norm_ratio_monte_carlo(const CompositeModel& m1, const CompositeModel& m2,
                                              SamplerConfig cfg, double alpha, int n_blocks = 20) {
    if (m1.dim != m2.dim) throw input_error("norm_ratio_monte_carlo: dimension mismatch");
    if (n_blocks < 2) throw config_error("norm_ratio_monte_carlo: need at least 2 jackknife blocks");

    cfg.record_u_trace = true;
    cfg.cross_models.clear();

    SamplerConfig c1 = cfg;
    c1.cross_models = {&m1, &m2};
    c1.stream = cfg.stream;
    ChainOutput ch1 = run_myula(m1, c1);

    SamplerConfig c2 = cfg;
    c2.cross_models = {&m1, &m2};
    c2.stream = cfg.stream + 1;  // independent stream, same seed family
    ChainOutput ch2 = run_myula(m2, c2);

    RegionSpec region = build_region({ch1.cross_u_traces[0], ch2.cross_u_traces[1]},
                                     {m1.label.empty() ? "g1" : m1.label, m2.label.empty() ? "g2" : m2.label},
                                     alpha);

    auto membership = [&](const ChainOutput& ch) {
        const std::size_t n = ch.cross_u_traces[0].size();
        std::vector<unsigned char> in(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const Vec u_at = {ch.cross_u_traces[0][k], ch.cross_u_traces[1][k]};
            in[k] = region_contains(region, u_at) ? 1 : 0;
        }
        return in;
    };
    const std::vector<unsigned char> in1 = membership(ch1);
    const std::vector<unsigned char> in2 = membership(ch2);
    const Vec& u1 = ch1.cross_u_traces[0];
    const Vec& u2 = ch2.cross_u_traces[1];

    NormRatioResult res;
    const double full1 = detail::hme_log_mean_masked(u1, in1, 0, 0);
    const double full2 = detail::hme_log_mean_masked(u2, in2, 0, 0);
    res.log_ratio = full1 - full2;  // log I1 - log I2 = log(Z2/Z1), Vol(A) cancels
    for (unsigned char f : in1) res.n_in_1 += f;
    for (unsigned char f : in2) res.n_in_2 += f;

    auto jackknife_var = [&](const Vec& u, const std::vector<unsigned char>& in) {
        const std::size_t n = u.size();
        const std::size_t b = std::max<std::size_t>(1, n / n_blocks);
        Vec theta;
        for (int block = 0; block < n_blocks; ++block) {
            const std::size_t lo = static_cast<std::size_t>(block) * b;
            const std::size_t hi = (block == n_blocks - 1) ? n : lo + b;
            if (lo >= n) break;
            theta.push_back(detail::hme_log_mean_masked(u, in, lo, hi));
        }
        const double nb = static_cast<double>(theta.size());
        double mean = 0.0;
        for (double t : theta) mean += t;
        mean /= nb;
        double ss = 0.0;
        for (double t : theta) ss += (t - mean) * (t - mean);
        return (nb - 1.0) / nb * ss;
    };
    res.se = std::sqrt(jackknife_var(u1, in1) + jackknife_var(u2, in2));
    return res;
}

}  // namespace proxmc
