/* End-to-end acceptance checks. Each invocation runs one numbered criterion
 * and prints exactly one line:
 *
 *   acceptance criterion <n>: PASS (<key numbers>)
 *   acceptance criterion <n>: FAIL (<first failures>)
 *
 * Tolerances are pinned here, next to each check. Criteria 8, 9 and 11 drive
 * the installed CLI end-to-end; its path arrives in the PROXMC_CLI
 * environment variable (set by the test harness).
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "helpers.hpp"
#include "oracles.hpp"
#include "proxmc/analytic1d.hpp"
#include "proxmc/bounds.hpp"
#include "proxmc/diagnostics.hpp"
#include "proxmc/envelope.hpp"
#include "proxmc/errors.hpp"
#include "proxmc/evidence.hpp"
#include "proxmc/haar.hpp"
#include "proxmc/model.hpp"
#include "proxmc/prox.hpp"
#include "proxmc/rng.hpp"
#include "proxmc/sampler.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/tv.hpp"
#include "proxmc/vec.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using proxmc::CompositeModel;
using proxmc::CounterRng;
using proxmc::NonSmoothTerm;
using proxmc::SamplerConfig;
using proxmc::Vec;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// Collects sub-check failures; keeps the report to one line.
struct Crit {
    bool ok = true;
    int n_fail = 0;
    std::string fail_msgs;
    std::string notes;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (++n_fail <= 3) fail_msgs += (fail_msgs.empty() ? "" : "; ") + what;
    }
    void note(const std::string& s) { notes += (notes.empty() ? "" : ", ") + s; }
    std::string detail() const {
        if (ok) return notes;
        std::string d = fail_msgs;
        if (n_fail > 3) d += "; +" + std::to_string(n_fail - 3) + " more";
        return d;
    }
};

// ------------------------------------------------------------ model builders

CompositeModel quadratic_model(double curvature) {
    CompositeModel m;
    m.dim = 1;
    m.label = "gauss";
    m.smooth.lip_grad = curvature;
    m.smooth.eval = [curvature](const Vec& x) { return 0.5 * curvature * x[0] * x[0]; };
    m.smooth.grad = [curvature](const Vec& x, Vec& g) {
        g.resize(1);
        g[0] = curvature * x[0];
    };
    m.nonsmooth.label = "zero";
    m.nonsmooth.eval = [](const Vec&) { return 0.0; };
    m.nonsmooth.prox = [](const Vec& x, double, Vec& p) { p = x; };
    return m;
}

CompositeModel laplace_model() {
    CompositeModel m;
    m.dim = 1;
    m.label = "laplace";
    m.smooth = proxmc::zero_smooth_term(1);
    m.nonsmooth = proxmc::make_l1_term(1);
    return m;
}

CompositeModel gaussian_likelihood_model(double mu, double s, const std::string& label) {
    CompositeModel m = quadratic_model(1.0 / (s * s));
    m.label = label;
    m.sigma = s;
    const double inv_var = 1.0 / (s * s);
    m.smooth.eval = [mu, inv_var](const Vec& x) {
        return 0.5 * inv_var * (x[0] - mu) * (x[0] - mu);
    };
    m.smooth.grad = [mu, inv_var](const Vec& x, Vec& g) {
        g.resize(1);
        g[0] = inv_var * (x[0] - mu);
    };
    return m;
}

CompositeModel laplace_scaled(double c, const std::string& label) {
    CompositeModel m;
    m.dim = 1;
    m.label = label;
    m.smooth = proxmc::zero_smooth_term(1);
    m.nonsmooth = c == 1.0 ? proxmc::make_l1_term(1) : proxmc::scale_term(proxmc::make_l1_term(1), c);
    return m;
}

// --------------------------------------------------------------- CLI driving

std::string cli_path() {
    const char* p = std::getenv("PROXMC_CLI");
    return p ? std::string(p) : std::string();
}

int run_cli(const std::string& sub, const fs::path& config, const fs::path& root, int threads,
            const std::string& log_name) {
    std::ostringstream cmd;
    cmd << "PROXMC_OUTPUT_ROOT='" << root.string() << "'";
    if (threads > 0) cmd << " PROXMC_THREADS=" << threads;
    cmd << " '" << cli_path() << "' " << sub << " '" << config.string() << "'"
        << " > '" << (root / log_name).string() << "' 2>&1";
    return std::system(cmd.str().c_str());
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return {};
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// =========================================================== criterion 1
// Envelope gradients match central finite differences of the envelope value
// to 1e-5 relative accuracy at 100 random points per nonsmooth term.

bool crit1(Crit& c) {
    const double h = 1e-6, tol = 1e-5, lambda = 0.5;
    double worst = 0.0;

    struct Row {
        const char* name;
        NonSmoothTerm term;
        std::size_t dim;
        double scale;
    };
    std::vector<Row> rows;
    rows.push_back({"abs", proxmc::make_l1_term(1), 1, 2.0});
    rows.push_back({"box", proxmc::make_box_term(-1.0, 1.0), 6, 1.5});
    rows.push_back({"l1", proxmc::make_l1_term(16), 16, 2.0});

    for (std::size_t r = 0; r < rows.size(); ++r) {
        CounterRng rng(101 + r, 0);
        for (int p = 0; p < 100; ++p) {
            const Vec x = testutil::rand_vec(rng, rows[r].dim, rows[r].scale);
            const Vec grad = proxmc::my_envelope_grad(rows[r].term, x, lambda);
            for (std::size_t j = 0; j < x.size(); ++j) {
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const double fd = (proxmc::my_envelope_eval(rows[r].term, xp, lambda) -
                                   proxmc::my_envelope_eval(rows[r].term, xm, lambda)) /
                                  (2.0 * h);
                const double rel = std::abs(fd - grad[j]) / std::max(1.0, std::abs(fd));
                worst = std::max(worst, rel);
                c.expect(rel < tol, std::string(rows[r].name) + " coord fd rel " + fmt(rel));
            }
        }
    }

    // TV envelope along random directions. The library's own dual solver
    // certifies envelope *values* only to ~1e-7 (its prox point is far more
    // accurate), which a 1/(2h) difference quotient would amplify past tol,
    // so the differenced value comes from an independent dense-ADMM solve of
    // the defining objective instead.
    const double h_tv = 1e-5;
    const int tv_grids[2][2] = {{4, 3}, {4, 4}};
    CounterRng rng(104, 0);
    for (const auto& wh : tv_grids) {
        const int gw = wh[0], gh = wh[1];
        const std::size_t n = static_cast<std::size_t>(gw) * gh;
        NonSmoothTerm tv = proxmc::make_tv_term(gw, gh, 400000, 1e-15);
        const auto env_oracle = [&](const Vec& y) {
            const auto p = oracle::prox_tv_admm(y, gw, gh, lambda, 200000, 1e-13);
            double q = 0.0;
            for (std::size_t i = 0; i < n; ++i) q += (y[i] - p[i]) * (y[i] - p[i]);
            return oracle::tv_value(p, gw, gh) + q / (2.0 * lambda);
        };
        for (int p = 0; p < 50; ++p) {
            const Vec x = testutil::rand_vec(rng, n, 1.0);
            const Vec grad = proxmc::my_envelope_grad(tv, x, lambda);
            for (int dir = 0; dir < 3; ++dir) {
                Vec v = testutil::rand_vec(rng, n, 1.0);
                const double nv = proxmc::norm2(v);
                for (double& t : v) t /= nv;
                Vec xp = x, xm = x;
                proxmc::axpy(h_tv, v, xp);
                proxmc::axpy(-h_tv, v, xm);
                const double fd = (env_oracle(xp) - env_oracle(xm)) / (2.0 * h_tv);
                const double want = proxmc::dot(grad, v);
                const double rel = std::abs(fd - want) / std::max(1.0, std::abs(fd));
                worst = std::max(worst, rel);
                c.expect(rel < tol, "tv directional fd rel " + fmt(rel));
            }
        }
    }
    c.note("max fd rel err " + fmt(worst));
    return c.ok;
}

// =========================================================== criterion 2
// Every shipped prox agrees with a brute-force minimizer of the defining
// objective to 1e-4 on >= 50 random low-dimensional instances each.

bool crit2(Crit& c) {
    const double tol = 1e-4;
    double worst = 0.0;
    const auto track = [&](double d, bool cond, const std::string& what) {
        worst = std::max(worst, d);
        c.expect(cond, what + " diff " + fmt(d));
    };

    {  // soft threshold
        CounterRng rng(201, 0);
        for (int k = 0; k < 60; ++k) {
            const std::size_t dim = 1 + rng.next_u64() % 6;
            const Vec x = testutil::rand_vec(rng, dim, 3.0);
            const double theta = 0.05 + 2.0 * rng.uniform01();
            const Vec got = proxmc::prox_l1(x, theta);
            const Vec want =
                oracle::prox_separable([](double z) { return std::abs(z); }, x, theta, theta + 2.0);
            track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol, "l1");
        }
    }
    {  // box projection
        CounterRng rng(202, 0);
        for (int k = 0; k < 60; ++k) {
            const std::size_t dim = 1 + rng.next_u64() % 6;
            const Vec x = testutil::rand_vec(rng, dim, 2.0);
            const double theta = 0.05 + 2.0 * rng.uniform01();
            const Vec got = proxmc::prox_box(x, -1.0, 1.0);
            Vec want(dim);
            const auto pen = [](double z) { return (z < -1.0 || z > 1.0) ? 1e12 : 0.0; };
            for (std::size_t i = 0; i < dim; ++i)
                want[i] = oracle::prox_1d(pen, x[i], theta, -1.0 - 1e-9, 1.0 + 1e-9);
            track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol, "box");
        }
    }
    {  // euclidean-norm shrinkage
        CounterRng rng(203, 0);
        for (int k = 0; k < 60; ++k) {
            const std::size_t dim = 2 + rng.next_u64() % 5;
            const Vec x = testutil::rand_vec(rng, dim, 2.0);
            const double theta = 0.05 + 2.0 * rng.uniform01();
            const Vec got = proxmc::prox_l2norm(x, theta);
            const Vec want = oracle::prox_l2_radial(x, theta);
            track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol,
                  "l2norm");
        }
    }
    {  // isotropic TV via the dual ascent, against an ADMM oracle
        const int grids[3][2] = {{3, 3}, {4, 4}, {5, 2}};
        CounterRng rng(204, 0);
        int done = 0;
        for (int g = 0; g < 3; ++g) {
            NonSmoothTerm term = proxmc::make_tv_term(grids[g][0], grids[g][1], 30000, 1e-12);
            for (int k = 0; k < 17; ++k, ++done) {
                const std::size_t n = std::size_t(grids[g][0]) * grids[g][1];
                const Vec x = testutil::rand_vec(rng, n, 1.5);
                const double theta = 0.2 + rng.uniform01();
                Vec got;
                term.prox(x, theta, got);
                const Vec want = oracle::prox_tv_admm(x, grids[g][0], grids[g][1], theta);
                track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol,
                      "tv");
            }
        }
        c.expect(done >= 50, "tv instance count");
    }
    {  // l1 in an orthonormal wavelet frame, against a dense-matrix oracle
        const int w = 4, hgt = 4, levels = 2;
        const std::size_t n = 16;
        NonSmoothTerm term = proxmc::make_wavelet_l1_term(w, hgt, levels);
        // materialize the analysis matrix column by column
        std::vector<Vec> cols(n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec e(n, 0.0);
            e[j] = 1.0;
            proxmc::haar_forward(e, w, hgt, levels, cols[j]);
        }
        // independent orthonormality certificate for the materialized matrix
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                const double ip = proxmc::dot(cols[a], cols[b]);
                c.expect(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10, "haar orthonormality");
            }
        CounterRng rng(205, 0);
        for (int k = 0; k < 50; ++k) {
            const Vec x = testutil::rand_vec(rng, n, 2.0);
            const double theta = 0.05 + rng.uniform01();
            Vec got;
            term.prox(x, theta, got);
            Vec coeff(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) proxmc::axpy(x[j], cols[j], coeff);
            const Vec shrunk =
                oracle::prox_separable([](double z) { return std::abs(z); }, coeff, theta,
                                       theta + 2.0);
            Vec want(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) want[j] = proxmc::dot(cols[j], shrunk);
            track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol,
                  "wavelet");
        }
    }
    {  // beta-scaled l1 (the prior weighting the experiment configs use)
        CounterRng rng(206, 0);
        NonSmoothTerm term = proxmc::scale_term(proxmc::make_l1_term(4), 0.37);
        for (int k = 0; k < 50; ++k) {
            const Vec x = testutil::rand_vec(rng, 4, 3.0);
            const double theta = 0.05 + 2.0 * rng.uniform01();
            Vec got;
            term.prox(x, theta, got);
            const Vec want = oracle::prox_separable([](double z) { return 0.37 * std::abs(z); }, x,
                                                    theta, theta + 2.0);
            track(testutil::max_abs_diff(got, want), testutil::max_abs_diff(got, want) < tol,
                  "scaled l1");
        }
    }
    c.note("max prox diff " + fmt(worst));
    return c.ok;
}

// =========================================================== criterion 3
// Smoothing-family structure: (a) the envelope is sandwiched below the term
// and decreases in lambda; (b) the 1-D smoothed laws converge to their
// targets monotonically in total variation; (c) the Laplace family obeys the
// Lipschitz total-variation bound (paper convention: twice the probability
// half-L1 value).

bool crit3(Crit& c) {
    {  // (a) sandwich and monotonicity at random points
        struct Row {
            const char* name;
            NonSmoothTerm term;
            std::size_t dim;
        };
        std::vector<Row> rows;
        rows.push_back({"l1", proxmc::make_l1_term(8), 8});
        rows.push_back({"box", proxmc::make_box_term(-1.0, 1.0), 8});
        rows.push_back({"l2norm", proxmc::make_l2norm_term(), 6});
        rows.push_back({"tv", proxmc::make_tv_term(6, 6, 6000, 1e-11), 36});
        rows.push_back({"wavelet", proxmc::make_wavelet_l1_term(4, 4, 2), 16});
        const double lambdas[4] = {2.0, 0.5, 0.1, 0.02};
        const double slack = 1e-8;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            CounterRng rng(301 + r, 0);
            for (int p = 0; p < 40; ++p) {
                const Vec x = testutil::rand_vec(rng, rows[r].dim, 1.5);
                const double g = rows[r].term.eval(x);
                double prev = -std::numeric_limits<double>::infinity();
                for (double l : lambdas) {
                    const double e = proxmc::my_envelope_eval(rows[r].term, x, l);
                    c.expect(e >= prev - slack,
                             std::string(rows[r].name) + " envelope not increasing toward g");
                    c.expect(std::isinf(g) || e <= g + slack,
                             std::string(rows[r].name) + " envelope above g");
                    prev = e;
                }
            }
        }
    }
    {  // (b) TV(pi, pi^lambda) decreasing to zero for both 1-D families
        const double lambdas[5] = {1.0, 0.3, 0.1, 0.03, 0.01};
        Vec tl, tu;
        for (double l : lambdas) {
            tl.push_back(proxmc::tv_distance_1d([](double x) { return proxmc::laplace_pdf(x); },
                                                [l](double x) { return proxmc::laplace_pilambda(x, l); },
                                                proxmc::laplace_grid(l)));
            tu.push_back(proxmc::tv_distance_1d([](double x) { return proxmc::uniform_pdf(x); },
                                                [l](double x) { return proxmc::uniform_pilambda(x, l); },
                                                proxmc::uniform_grid(l)));
        }
        for (int i = 0; i < 5; ++i) {
            c.expect(tl[std::size_t(i)] > 0.0 && tu[std::size_t(i)] > 0.0, "tv positive");
            if (i > 0) {
                c.expect(tl[std::size_t(i)] < tl[std::size_t(i) - 1], "laplace tv not decreasing");
                c.expect(tu[std::size_t(i)] < tu[std::size_t(i) - 1], "uniform tv not decreasing");
            }
        }
        c.expect(tl.back() < 1e-3, "laplace tv tail " + fmt(tl.back()));
        c.expect(tu.back() < 0.25 * tu.front(), "uniform tv tail " + fmt(tu.back()));
        c.note("tv(0.01): laplace " + fmt(tl.back()) + ", uniform " + fmt(tu.back()));
    }
    {  // (c) Lipschitz bound: 2 tv <= lambda * Lip(|.|) = lambda
        for (double l : {1.0, 0.1, 0.01}) {
            const double tv = proxmc::tv_distance_1d(
                [](double x) { return proxmc::laplace_pdf(x); },
                [l](double x) { return proxmc::laplace_pilambda(x, l); }, proxmc::laplace_grid(l));
            c.expect(2.0 * tv <= l, "lipschitz bound at lambda " + fmt(l));
        }
    }
    return c.ok;
}

// =========================================================== criterion 4
// Log-log decay rates of the smoothing error over lambda in [1e-3, 1e-1]:
// quadratic for the Laplace family, square-root for the uniform family.

bool crit4(Crit& c) {
    Vec loglam, logtl, logtu;
    for (int i = 0; i < 7; ++i) {
        const double l = 1e-3 * std::pow(10.0, 2.0 * i / 6.0);
        loglam.push_back(std::log(l));
        logtl.push_back(std::log(proxmc::tv_distance_1d(
            [](double x) { return proxmc::laplace_pdf(x); },
            [l](double x) { return proxmc::laplace_pilambda(x, l); }, proxmc::laplace_grid(l))));
        logtu.push_back(std::log(proxmc::tv_distance_1d(
            [](double x) { return proxmc::uniform_pdf(x); },
            [l](double x) { return proxmc::uniform_pilambda(x, l); }, proxmc::uniform_grid(l))));
    }
    const double sl = testutil::ls_slope(loglam, logtl);
    const double su = testutil::ls_slope(loglam, logtu);
    c.expect(sl > 1.8 && sl < 2.2, "laplace slope " + fmt(sl));
    c.expect(su > 0.4 && su < 0.6, "uniform slope " + fmt(su));
    c.note("slopes: laplace " + fmt(sl) + ", uniform " + fmt(su));
    return c.ok;
}

// =========================================================== criterion 5
// Chain-level correctness: (i) on a Gaussian target the unadjusted chain's
// stationary variance matches the AR(1) closed form within 3% at n = 1e6;
// (ii) on the Laplace target the adjusted chain matches the exact law within
// KS 0.01 and the unadjusted chain matches the smoothed law (lambda = 0.01)
// within KS 0.02, three seeds each.

bool crit5(Crit& c) {
    {  // (i)
        const double gamma = 0.1;
        const double ref = oracle::ar1_stationary_var(gamma, 1.0);
        const CompositeModel m = quadratic_model(1.0);
        double worst = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            SamplerConfig cfg;
            cfg.lambda = 1.0;
            cfg.gamma = gamma;
            cfg.n_iter = 1000000;
            cfg.burn_in = 10000;
            cfg.seed = seed;
            cfg.x0 = {0.0};
            cfg.record_u_trace = false;
            const auto out = proxmc::run_myula(m, cfg);
            const double var =
                out.running_second_moment[0] - out.running_mean[0] * out.running_mean[0];
            const double rel = std::abs(var - ref) / ref;
            worst = std::max(worst, rel);
            c.expect(rel < 0.03, "gaussian var rel " + fmt(rel) + " seed " + std::to_string(seed));
        }
        c.note("var rel err " + fmt(worst));
    }
    {  // (ii) adjusted chain vs the exact Laplace law
        const CompositeModel m = laplace_model();
        double worst = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            SamplerConfig cfg;
            cfg.lambda = 1.0;
            cfg.gamma = 0.25;
            cfg.n_iter = 500000;
            cfg.burn_in = 20000;
            cfg.thin = 2;
            cfg.seed = seed;
            cfg.x0 = {0.0};
            cfg.record_u_trace = false;
            cfg.record_samples = 1;
            const auto out = proxmc::run_pxmala(m, cfg);
            const double ks = proxmc::ks_distance(proxmc::extract_component(out.samples, 0),
                                                  [](double x) { return proxmc::laplace_cdf(x); });
            worst = std::max(worst, ks);
            c.expect(ks < 0.01, "pxmala ks " + fmt(ks) + " seed " + std::to_string(seed));
        }
        c.note("pxmala ks " + fmt(worst));
    }
    {  // (ii) unadjusted chain vs the smoothed law at lambda = 0.01
        const CompositeModel m = laplace_model();
        const double lambda = 0.01;
        double worst = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            SamplerConfig cfg;
            cfg.lambda = lambda;
            cfg.gamma = 0.005;
            cfg.n_iter = 4000000;
            cfg.burn_in = 40000;
            cfg.thin = 16;
            cfg.seed = seed;
            cfg.x0 = {0.0};
            cfg.record_u_trace = false;
            cfg.record_samples = 1;
            const auto out = proxmc::run_myula(m, cfg);
            const double ks =
                proxmc::ks_distance(proxmc::extract_component(out.samples, 0), [lambda](double x) {
                    return proxmc::laplace_pilambda_cdf(x, lambda);
                });
            worst = std::max(worst, ks);
            c.expect(ks < 0.02, "myula ks " + fmt(ks) + " seed " + std::to_string(seed));
        }
        c.note("myula ks " + fmt(worst));
    }
    return c.ok;
}

// =========================================================== criterion 6
// Importance reweighting undoes the smoothing: weighted posterior moments of
// the Laplace target recover E[x] = 0 and E[|x|] = 1 within 2% at 1e6 kept
// samples.

bool crit6(Crit& c) {
    const CompositeModel m = laplace_model();
    SamplerConfig cfg;
    cfg.lambda = 0.1;
    // the reweighting removes the smoothing bias exactly but not the
    // discretization bias (~0.5 gamma on E|x|), so run a small step long
    cfg.gamma = 0.02;
    cfg.n_iter = 24040000;
    cfg.burn_in = 40000;
    cfg.thin = 24;
    cfg.seed = 1;
    cfg.x0 = {0.0};
    cfg.record_u_trace = false;
    cfg.record_samples = 1;
    cfg.record_gbar = true;
    const auto out = proxmc::run_myula(m, cfg);
    const auto w = proxmc::importance_reweight(out, m, cfg.lambda);
    c.expect(w.ess > 0.9 * static_cast<double>(out.kept_count),
             "reweighting ess " + fmt(w.ess) + " of " + std::to_string(out.kept_count));

    Vec xs(out.samples.size()), axs(out.samples.size());
    for (std::size_t k = 0; k < out.samples.size(); ++k) {
        xs[k] = out.samples[k][0];
        axs[k] = std::abs(xs[k]);
    }
    const double mean_x = proxmc::weighted_average(xs, w);
    const double mean_ax = proxmc::weighted_average(axs, w);
    c.expect(std::abs(mean_x) < 0.02, "weighted E[x] " + fmt(mean_x));
    c.expect(std::abs(mean_ax - 1.0) < 0.02, "weighted E[|x|] " + fmt(mean_ax));
    c.note("E[x] " + fmt(mean_x) + ", E[|x|] " + fmt(mean_ax) + ", ess/n " +
           fmt(w.ess / static_cast<double>(out.kept_count)));
    return c.ok;
}

// =========================================================== criterion 7
// Evidence machinery: the truncated harmonic-mean identity on the unit
// Gaussian within 2% at n = 1e6; the two-Gaussian flat-prior Bayes factor
// (exactly 1) within 5%; the Monte-Carlo normalizer ratio of the Laplace
// pair (exactly 1/2) within 5%.

bool crit7(Crit& c) {
    {  // harmonic-mean identity, iid draws
        const std::size_t n = 1000000;
        CounterRng rng(701, 0);
        Vec u(n);
        std::vector<unsigned char> in(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const double x = rng.normal();
            u[k] = 0.5 * x * x;
            in[k] = std::abs(x) <= 1.0 ? 1 : 0;
        }
        const auto h = proxmc::truncated_hme(u, in);
        const double z = 2.0 / std::exp(h.log_i_hat());
        const double root_2pi = std::sqrt(2.0 * 3.14159265358979323846);
        const double rel = std::abs(z - root_2pi) / root_2pi;
        c.expect(rel < 0.02, "normalizer rel " + fmt(rel));
        c.note("Z rel err " + fmt(rel));
    }
    {  // two-Gaussian Bayes factor
        const double y = 0.3;
        const double sigmas[2] = {1.0, 2.0};
        std::vector<CompositeModel> models;
        for (int j = 0; j < 2; ++j)
            models.push_back(gaussian_likelihood_model(y, sigmas[j], "g" + std::to_string(j)));
        std::vector<proxmc::ModelChainRecord> recs(2);
        for (int j = 0; j < 2; ++j) {
            SamplerConfig cfg;
            cfg.lambda = sigmas[j] * sigmas[j];
            cfg.gamma = 0.25 * cfg.lambda;
            cfg.n_iter = 1000000;
            cfg.burn_in = 50000;
            cfg.thin = 2;
            cfg.seed = 1;
            cfg.stream = static_cast<std::uint64_t>(j);
            cfg.x0 = {y};
            cfg.record_u_trace = false;
            cfg.cross_models = {&models[0], &models[1]};
            const auto out = proxmc::run_pxmala(models[std::size_t(j)], cfg);
            recs[j].label = models[j].label;
            recs[j].prior_tag = "flat";
            recs[j].log_offset =
                -0.5 * std::log(2.0 * 3.14159265358979323846 * sigmas[j] * sigmas[j]);
            recs[j].cross_u = out.cross_u_traces;
            recs[j].own_index = std::size_t(j);
        }
        const auto rep = proxmc::improper_prior_evidence(recs, 0.8);
        const double bf = std::exp(rep.log_bayes_factors[0][1]);
        c.expect(std::abs(bf - 1.0) < 0.05, "two-gaussian bf " + fmt(bf));
        c.note("bf " + fmt(bf));
    }
    {  // normalizer ratio of exp(-|x|) vs exp(-2|x|)
        const auto g1 = laplace_scaled(1.0, "exp1");
        const auto g2 = laplace_scaled(2.0, "exp2");
        SamplerConfig cfg;
        cfg.lambda = 0.01;
        cfg.gamma = 0.005;
        cfg.n_iter = 4000000;
        cfg.burn_in = 40000;
        cfg.thin = 4;
        cfg.seed = 3;
        cfg.x0 = {0.0};
        const auto r = proxmc::norm_ratio_monte_carlo(g1, g2, cfg, 0.8);
        const double ratio = std::exp(r.log_ratio);
        c.expect(std::abs(ratio - 0.5) < 0.025, "laplace-pair ratio " + fmt(ratio));
        c.note("ratio " + fmt(ratio) + " (se " + fmt(r.se) + ")");
    }
    return c.ok;
}

// =========================================================== criterion 8
// Model selection end to end through the CLI: three blur widths sharing the
// TV prior on a 64x64 deconvolution, 1e5 iterations per model; the
// generating width must carry the highest posterior probability in at least
// 9 of 10 seeded replications.

bool crit8(Crit& c) {
    if (cli_path().empty()) {
        c.expect(false, "PROXMC_CLI not set");
        return false;
    }
    const fs::path root = "acceptance_runs/c8";
    fs::create_directories(root);
    const fs::path config = root / "config.ini";
    spit(config,
         "[experiment]\n"
         "kind = deconv_tv\n"
         "[data]\n"
         "image = blocks\n"
         "width = 64\n"
         "height = 64\n"
         "true_model = m6\n"
         "noise_seed = 900\n"
         "[model:m5]\n"
         "prior = tv\n"
         "beta = 0.03\n"
         "sigma = 0.47\n"
         "kernel_size = 5\n"
         "tv_iters = 6\n"
         "tv_tol = 1e-5\n"
         "[model:m6]\n"
         "prior = tv\n"
         "beta = 0.03\n"
         "sigma = 0.47\n"
         "kernel_size = 6\n"
         "tv_iters = 6\n"
         "tv_tol = 1e-5\n"
         "[model:m7]\n"
         "prior = tv\n"
         "beta = 0.03\n"
         "sigma = 0.47\n"
         "kernel_size = 7\n"
         "tv_iters = 6\n"
         "tv_tol = 1e-5\n"
         "[sampler]\n"
         "algorithm = myula\n"
         "n_iter = 100000\n"
         "burn_in = 10000\n"
         "thin = 10\n"
         "seeds = 1, 2, 3, 4, 5, 6, 7, 8, 9, 10\n"
         "threads = 1\n"
         "[analysis]\n"
         "select_alpha = 0.8\n"
         "select_alphas = 0.8\n"
         "acf_max_lag = 100\n"
         "[output]\n"
         "dir = run\n");
    const int rc = run_cli("select", config, root, 1, "cli.log");
    c.expect(rc == 0, "cli select exit " + std::to_string(rc));
    if (rc != 0) return false;

    const std::string ev = slurp(root / "run" / "evidence.json");
    c.expect(!ev.empty(), "evidence.json missing");
    if (ev.empty()) return false;
    const json j = json::parse(ev);
    int strict_wins = 0, runs = 0;
    for (const auto& run : j.at("runs")) {
        for (const auto& res : run.at("results")) {
            if (res.at("alpha").get<double>() != 0.8) continue;
            ++runs;
            const auto& probs = res.at("posterior_probs");
            const double p5 = probs.at("m5").get<double>();
            const double p6 = probs.at("m6").get<double>();
            const double p7 = probs.at("m7").get<double>();
            if (p6 > p5 && p6 > p7) ++strict_wins;
        }
    }
    c.expect(runs == 10, "replication count " + std::to_string(runs));
    c.expect(strict_wins >= 9, "generating model strict wins " + std::to_string(strict_wins) +
                                   " of " + std::to_string(runs));
    c.note("strict wins " + std::to_string(strict_wins) + "/10");
    return c.ok;
}

// =========================================================== criterion 9
// Credibility thresholds agree between the unadjusted chain and the
// step-tuned adjusted chain on an undersampled 32x32 tomography problem
// (10 frequency lines kept): eta_alpha within 5% for alpha in
// {0.05, 0.1, 0.2, 0.5}.  The problem is sized so both chains reach useful
// effective sample sizes in about a minute: at sigma = 0.2 the guideline
// step is 7e-3 and the slowest statistic (the pooled potential trace)
// decorrelates in a few thousand steps.

bool crit9(Crit& c) {
    if (cli_path().empty()) {
        c.expect(false, "PROXMC_CLI not set");
        return false;
    }
    const fs::path root = "acceptance_runs/c9";
    fs::create_directories(root);
    const fs::path config = root / "config.ini";
    spit(config,
         "[experiment]\n"
         "kind = tomography_tv\n"
         "[data]\n"
         "image = blocks\n"
         "width = 32\n"
         "height = 32\n"
         "noise_seed = 901\n"
         "[model:tomo]\n"
         "prior = tv\n"
         "beta = 0.05\n"
         "sigma = 0.2\n"
         "mask_lines = 10\n"
         "tv_iters = 10\n"
         "tv_tol = 1e-6\n"
         "[sampler]\n"
         "algorithm = myula\n"
         "n_iter = 300000\n"
         "burn_in = 60000\n"
         "thin = 5\n"
         "seeds = 1, 2\n"
         "threads = 1\n"
         "adapt_gamma = true\n"
         "target_accept = 0.45\n"
         "[compare]\n"
         "algorithms = myula, pxmala\n"
         "[analysis]\n"
         "hpd_alphas = 0.05, 0.1, 0.2, 0.5\n"
         "acf_max_lag = 100\n"
         "[output]\n"
         "dir = run\n");
    const int rc = run_cli("compare", config, root, 1, "cli.log");
    c.expect(rc == 0, "cli compare exit " + std::to_string(rc));
    if (rc != 0) return false;

    const std::string rep = slurp(root / "run" / "compare_report.json");
    c.expect(!rep.empty(), "compare_report.json missing");
    if (rep.empty()) return false;
    const json j = json::parse(rep);
    const double hpd_rel = j.at("hpd_max_rel_diff").get<double>();
    c.expect(hpd_rel < 0.05, "hpd threshold rel diff " + fmt(hpd_rel));
    if (j.contains("acceptance_rate_pxmala")) {
        const double acc = j.at("acceptance_rate_pxmala").get<double>();
        c.expect(acc > 0.1 && acc < 0.9, "tuned acceptance " + fmt(acc));
        c.note("hpd rel " + fmt(hpd_rel) + ", pxmala acc " + fmt(acc));
    } else {
        c.expect(false, "acceptance_rate_pxmala missing");
    }
    return c.ok;
}

// =========================================================== criterion 10
// Budget calculator: the quantile constant, monotonicity in the accuracy
// target, dimension-order fits for both regimes, and conservativeness of the
// iteration budgets against simulated mixing on 1-D probes.

bool crit10(Crit& c) {
    c.expect(std::abs(proxmc::omega(1.0) - 0.5495) <= 1e-4, "omega(1) " + fmt(proxmc::omega(1.0)));

    proxmc::ConvexBoundInputs cin;
    cin.eta_c = 1.0;
    cin.big_r_c = 1.0;
    cin.d = 10;
    cin.l_lip = 2.0;
    cin.gamma_bar = 0.5;
    cin.epsilon = 0.1;
    cin.x_dist = 1.0;
    proxmc::StrongBoundInputs sin_;
    sin_.m_strong = 1.0;
    sin_.big_r_s = 1.0;
    sin_.d = 10;
    sin_.l_lip = 2.0;
    sin_.gamma_bar = 0.5;
    sin_.epsilon = 0.1;
    sin_.x_dist = 1.0;

    {  // tighter epsilon costs strictly more in both regimes
        double pc = 0.0, ps = 0.0;
        for (double eps : {0.3, 0.1, 0.03, 0.01}) {
            auto c2 = cin;
            c2.epsilon = eps;
            auto s2 = sin_;
            s2.epsilon = eps;
            const double nc = proxmc::convex_budget(c2).n_min;
            const double ns = proxmc::strong_budget(s2).n_min;
            c.expect(nc > pc && ns > ps, "epsilon monotonicity at " + fmt(eps));
            pc = nc;
            ps = ns;
        }
    }
    {  // dimension-order fits
        Vec logd_c, logn_c;
        for (long d : {4L, 8L, 16L, 32L, 64L}) {
            auto c2 = cin;
            c2.d = d;
            logd_c.push_back(std::log(static_cast<double>(d)));
            logn_c.push_back(std::log(proxmc::convex_budget(c2).n_min));
        }
        const double slope_c = testutil::ls_slope(logd_c, logn_c);
        c.expect(slope_c > 4.0 && slope_c < 6.0, "convex d-slope " + fmt(slope_c));

        Vec logd_s, logn_s;
        for (long d : {16L, 64L, 256L, 1024L}) {
            auto s2 = sin_;
            s2.d = d;
            logd_s.push_back(std::log(static_cast<double>(d)));
            logn_s.push_back(std::log(proxmc::strong_budget(s2).n_min));
        }
        const double slope_s = testutil::ls_slope(logd_s, logn_s);
        c.expect(slope_s > 1.0 && slope_s < 1.25, "strong d-slope " + fmt(slope_s));
        c.note("d-slopes: convex " + fmt(slope_c) + ", strong " + fmt(slope_s));
    }

    // Conservativeness probes: replica simulations reach the accuracy target
    // in far fewer steps than the guaranteed budgets.
    const auto histogram_tv = [](const Vec& xs, const std::function<double(double, double)>& mass,
                                 double lo, double hi, int bins) {
        std::vector<double> counts(std::size_t(bins), 0.0);
        double outside = 0.0;
        for (double x : xs) {
            if (x < lo || x >= hi)
                outside += 1.0;
            else
                counts[std::size_t((x - lo) / (hi - lo) * bins)] += 1.0;
        }
        const double n = static_cast<double>(xs.size());
        double tv = outside / n;  // target mass beyond [lo, hi) is negligible
        for (int b = 0; b < bins; ++b) {
            const double a = lo + (hi - lo) * b / bins;
            const double bnd = lo + (hi - lo) * (b + 1) / bins;
            tv += std::abs(counts[std::size_t(b)] / n - mass(a, bnd));
        }
        return 0.5 * tv;
    };

    {  // convex probe: the smoothed Laplace potential at lambda = 1
        auto probe = cin;
        probe.eta_c = 0.5;  // huber(x) >= |x|/2 outside radius 1
        probe.big_r_c = 1.0;
        probe.d = 1;
        probe.l_lip = 1.0;  // L_f + 1/lambda with L_f = 0
        probe.gamma_bar = 1.0;
        probe.epsilon = 0.1;
        probe.x_dist = 1.0;
        const double n_min = proxmc::convex_budget(probe).n_min;

        const double lambda = 1.0, gamma = 0.25;  // practical step below gamma_bar
        const std::size_t n_rep = 4000;
        Vec xs(n_rep, 1.0);  // the budget's point-mass start
        std::vector<CounterRng> rngs;
        rngs.reserve(n_rep);
        for (std::size_t r = 0; r < n_rep; ++r) rngs.emplace_back(1001, r);
        const double z_norm = oracle::laplace_smoothed_normalizer(lambda);
        const auto mass = [&](double a, double b) {
            return oracle::simpson([&](double x) { return std::exp(-oracle::huber(x, lambda)) / z_norm; },
                                   a, b, 16);
        };
        long n_emp = -1;
        for (long step = 1; step <= 2000; ++step) {
            const double noise = std::sqrt(2.0 * gamma);
            for (std::size_t r = 0; r < n_rep; ++r) {
                const double x = xs[r];
                const double soft = std::abs(x) <= lambda ? 0.0 : (x > 0 ? x - lambda : x + lambda);
                xs[r] = x - (gamma / lambda) * (x - soft) + noise * rngs[r].normal();
            }
            if (step % 10 == 0 && histogram_tv(xs, mass, -8.0, 8.0, 48) <= probe.epsilon) {
                n_emp = step;
                break;
            }
        }
        c.expect(n_emp > 0, "convex probe never reached epsilon");
        c.expect(n_emp > 0 && static_cast<double>(n_emp) <= n_min,
                 "convex probe n_emp " + std::to_string(n_emp) + " vs n_min " + fmt(n_min));
        c.note("convex n_emp " + std::to_string(n_emp) + " << n_min " + fmt(n_min));
    }
    {  // strong probe: the unit Gaussian, run at the certified step size
        auto probe = sin_;
        probe.m_strong = 1.0;
        probe.big_r_s = 1.0;
        probe.d = 1;
        probe.l_lip = 1.0;
        probe.gamma_bar = 1.0;
        probe.epsilon = 0.1;
        probe.x_dist = 1.0;
        const auto budget = proxmc::strong_budget(probe);
        const double gamma = budget.gamma_max;
        c.expect(gamma > 1e-6, "certified step usable " + fmt(gamma));

        const std::size_t n_rep = 4000;
        Vec xs(n_rep, 1.0);
        std::vector<CounterRng> rngs;
        rngs.reserve(n_rep);
        for (std::size_t r = 0; r < n_rep; ++r) rngs.emplace_back(1002, r);
        const auto mass = [](double a, double b) {
            return oracle::normal_cdf(b) - oracle::normal_cdf(a);
        };
        const double noise = std::sqrt(2.0 * gamma);
        long n_emp = -1;
        const long horizon = 200000, check = 2500;
        for (long step = 1; step <= horizon; ++step) {
            for (std::size_t r = 0; r < n_rep; ++r)
                xs[r] += -gamma * xs[r] + noise * rngs[r].normal();
            if (step % check == 0 && histogram_tv(xs, mass, -6.0, 6.0, 48) <= probe.epsilon) {
                n_emp = step;
                break;
            }
        }
        c.expect(n_emp > 0, "strong probe never reached epsilon");
        c.expect(n_emp > 0 && static_cast<double>(n_emp) <= budget.n_min,
                 "strong probe n_emp " + std::to_string(n_emp) + " vs n_min " + fmt(budget.n_min));
        c.note("strong n_emp " + std::to_string(n_emp) + " <= n_min " + fmt(budget.n_min));
    }
    return c.ok;
}

// =========================================================== criterion 11
// Reproducibility: rerunning the same configuration, and running it on a
// different worker-pool size, produce byte-identical artifacts.

bool crit11(Crit& c) {
    if (cli_path().empty()) {
        c.expect(false, "PROXMC_CLI not set");
        return false;
    }
    const std::string config_text =
        "[experiment]\n"
        "kind = deconv_tv\n"
        "[data]\n"
        "image = blocks\n"
        "width = 16\n"
        "height = 16\n"
        "true_model = m3\n"
        "noise_seed = 905\n"
        "[model:m3]\n"
        "prior = tv\n"
        "beta = 0.05\n"
        "sigma = 0.47\n"
        "kernel_size = 3\n"
        "tv_iters = 5\n"
        "tv_tol = 1e-4\n"
        "[model:m5]\n"
        "prior = tv\n"
        "beta = 0.05\n"
        "sigma = 0.47\n"
        "kernel_size = 5\n"
        "tv_iters = 5\n"
        "tv_tol = 1e-4\n"
        "[sampler]\n"
        "algorithm = myula\n"
        "n_iter = 2000\n"
        "burn_in = 400\n"
        "thin = 2\n"
        "seeds = 1, 2\n"
        "threads = 1\n"
        "[analysis]\n"
        "acf_max_lag = 50\n"
        "[output]\n"
        "dir = run\n";

    const fs::path roots[3] = {"acceptance_runs/c11_a", "acceptance_runs/c11_b",
                               "acceptance_runs/c11_c"};
    const int threads[3] = {1, 1, 4};  // repetition, then a wider pool
    for (int i = 0; i < 3; ++i) {
        fs::create_directories(roots[i]);
        const fs::path config = roots[i] / "config.ini";
        spit(config, config_text);
        const int rc = run_cli("sample", config, roots[i], threads[i], "cli.log");
        c.expect(rc == 0, "cli run " + std::to_string(i) + " exit " + std::to_string(rc));
        if (rc != 0) return false;
    }

    const std::string man_a = slurp(roots[0] / "run" / "manifest.json");
    c.expect(!man_a.empty(), "manifest missing");
    c.expect(man_a == slurp(roots[1] / "run" / "manifest.json"), "manifest differs on rerun");
    c.expect(man_a == slurp(roots[2] / "run" / "manifest.json"),
             "manifest differs across pool sizes");
    if (man_a.empty()) return false;

    int n_files = 0;
    const json man = json::parse(man_a);
    for (const auto& [rel, hash] : man.at("files").items()) {
        (void)hash;
        const std::string bytes = slurp(roots[0] / "run" / rel);
        c.expect(!bytes.empty(), rel + " empty");
        c.expect(bytes == slurp(roots[1] / "run" / rel), rel + " differs on rerun");
        c.expect(bytes == slurp(roots[2] / "run" / rel), rel + " differs across pool sizes");
        ++n_files;
    }
    c.expect(n_files >= 10, "artifact count " + std::to_string(n_files));
    c.note(std::to_string(n_files) + " artifacts byte-identical across 3 runs");
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..11>\n");
        return 2;
    }
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 11) {
        std::fprintf(stderr, "criterion must be in 1..11\n");
        return 2;
    }
    Crit c;
    try {
        switch (n) {
            case 1: crit1(c); break;
            case 2: crit2(c); break;
            case 3: crit3(c); break;
            case 4: crit4(c); break;
            case 5: crit5(c); break;
            case 6: crit6(c); break;
            case 7: crit7(c); break;
            case 8: crit8(c); break;
            case 9: crit9(c); break;
            case 10: crit10(c); break;
            case 11: crit11(c); break;
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    std::string d = c.detail();
    if (d.size() > 400) d = d.substr(0, 400) + "...";
    std::printf("acceptance criterion %d: %s%s%s%s\n", n, c.ok ? "PASS" : "FAIL",
                d.empty() ? "" : " (", d.c_str(), d.empty() ? "" : ")");
    return c.ok ? 0 : 1;
}
