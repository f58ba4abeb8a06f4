/* proxmc: experiment runner for proximal MCMC on imaging inverse problems.
 *
 * Subcommands (each takes a single config file; see README for the format):
 *   sample      run one or more models, emit chain artifacts (+ evidence if
 *               several models are configured)
 *   select      like sample but requires >= 2 models; model-comparison focus
 *   compare     run two samplers on the same model and report differences
 *   hpd         chain run emitting only potential traces and HPD tables
 *   bounds      evaluate a non-asymptotic budget (no sampling)
 *   analytic1d  closed-form 1D density and TV-distance curves
 *
 * Exit codes: 0 success, 2 config/input error, 3 numerical error,
 * 4 estimator undefined (empty harmonic-mean region).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "proxmc/analytic1d.hpp"
#include "proxmc/bounds.hpp"
#include "proxmc/checkpoint.hpp"
#include "proxmc/config.hpp"
#include "proxmc/csv.hpp"
#include "proxmc/diagnostics.hpp"
#include "proxmc/errors.hpp"
#include "proxmc/evidence.hpp"
#include "proxmc/fft.hpp"
#include "proxmc/forward_models.hpp"
#include "proxmc/haar.hpp"
#include "proxmc/image.hpp"
#include "proxmc/manifest.hpp"
#include "proxmc/model.hpp"
#include "proxmc/pgm.hpp"
#include "proxmc/phantom.hpp"
#include "proxmc/png.hpp"
#include "proxmc/pool.hpp"
#include "proxmc/prox.hpp"
#include "proxmc/rng.hpp"
#include "proxmc/sampler.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/tv.hpp"
#include "proxmc/vec.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace proxmc;

namespace {

constexpr const char* kToolVersion = "proxmc 1.0.0";
constexpr std::uint64_t kDataNoiseStream = 1ull << 40;  // clear of per-chain streams

std::string output_root() {
    const char* env = std::getenv("PROXMC_OUTPUT_ROOT");
    return (env && *env) ? std::string(env) : std::string(".");
}

fs::path resolve_run_dir(const ConfigFile& cfg) {
    fs::path p(cfg.get_string("output", "dir"));
    if (!p.is_absolute()) p = fs::path(output_root()) / p;
    fs::create_directories(p);
    return p;
}

int entry_line(const ConfigFile& cfg, const std::string& section, const std::string& key) {
    for (const auto& s : cfg.sections())
        if (s.name == section)
            if (const ConfigEntry* e = s.find(key)) return e->line;
    return 0;
}

[[noreturn]] void bad_value(const ConfigFile& cfg, const std::string& section, const std::string& key,
                            const std::string& msg) {
    throw config_error(cfg.where(entry_line(cfg, section, key)) + ": " + msg);
}

void require_file_exists(const ConfigFile& cfg, const std::string& section, const std::string& key,
                         const std::string& path) {
    if (!fs::exists(path)) bad_value(cfg, section, key, "file not found: '" + path + "'");
}

// ----------------------------------------------------------- experiment

const std::vector<std::string> kImageKinds = {"deconv_tv", "deconv_wavelet_l1", "deconv_l1_sparse",
                                              "tomography_tv"};

bool is_deconv_kind(const std::string& k) { return k.rfind("deconv", 0) == 0; }
bool is_image_kind(const std::string& k) {
    return std::find(kImageKinds.begin(), kImageKinds.end(), k) != kImageKinds.end();
}

struct ModelSpec {
    std::string section;  // config section name, e.g. "model:m5"
    std::string label;
    std::string prior;  // tv | wavelet_l1 | l1 | box (image kinds); laplace/uniform pick theirs
    std::string target;  // analytic1d kind only: laplace | uniform
    double beta = 1.0;
    double sigma = 1.0;
    int kernel_size = 0;
    std::string kernel_file;
    int mask_lines = 0;
    int levels = 2;
    int tv_iters = 20;
    double tv_tol = 1e-4;
    double box_lo = -1.0, box_hi = 1.0;
    std::size_t dim = 1;  // analytic1d kind only

    std::string prior_tag() const {
        std::string t = prior + ":beta=" + format_double(beta);
        if (prior == "wavelet_l1") t += ":levels=" + std::to_string(levels);
        if (prior == "box") t += ":[" + format_double(box_lo) + "," + format_double(box_hi) + "]";
        return t;
    }
};

std::vector<std::string> model_section_names(const ConfigFile& cfg) {
    std::vector<std::string> out;
    for (const auto& s : cfg.sections())
        if (s.name == "model" || s.name.rfind("model:", 0) == 0) out.push_back(s.name);
    if (out.empty()) throw config_error("config needs at least one [model:<label>] section");
    return out;
}

ModelSpec read_model_spec(const ConfigFile& cfg, const std::string& section, const std::string& kind) {
    ModelSpec m;
    m.section = section;
    m.label = section == "model" ? "model" : section.substr(std::string("model:").size());
    if (m.label.empty()) throw config_error("empty model label in [" + section + "]");

    if (kind == "analytic1d") {
        m.target = cfg.get_string(section, "target");
        if (m.target != "laplace" && m.target != "uniform")
            bad_value(cfg, section, "target", "target must be laplace or uniform");
        m.prior = m.target == "laplace" ? "l1" : "box";
        m.beta = cfg.get_double(section, "beta", 1.0);
        m.dim = static_cast<std::size_t>(cfg.get_int(section, "dim", 1));
        if (m.dim < 1) bad_value(cfg, section, "dim", "dim must be >= 1");
        return m;
    }

    m.prior = cfg.get_string(section, "prior");
    m.beta = cfg.get_double(section, "beta");
    m.sigma = cfg.get_double(section, "sigma");
    if (!(m.sigma > 0.0)) bad_value(cfg, section, "sigma", "sigma must be positive");
    if (!(m.beta > 0.0)) bad_value(cfg, section, "beta", "beta must be positive");

    if (is_deconv_kind(kind)) {
        if (cfg.has(section, "kernel_file")) {
            m.kernel_file = cfg.get_string(section, "kernel_file");
            require_file_exists(cfg, section, "kernel_file", m.kernel_file);
        } else {
            m.kernel_size = static_cast<int>(cfg.get_int(section, "kernel_size"));
            if (m.kernel_size < 1) bad_value(cfg, section, "kernel_size", "kernel_size must be >= 1");
        }
    } else {  // tomography
        m.mask_lines = static_cast<int>(cfg.get_int(section, "mask_lines"));
        if (m.mask_lines < 1) bad_value(cfg, section, "mask_lines", "mask_lines must be >= 1");
    }

    const std::string expected_prior = kind == "deconv_tv" || kind == "tomography_tv" ? "tv"
                                       : kind == "deconv_wavelet_l1"                  ? "wavelet_l1"
                                                                                      : "l1";
    if (m.prior != expected_prior)
        bad_value(cfg, section, "prior", "experiment kind " + kind + " uses prior " + expected_prior);

    if (m.prior == "wavelet_l1") m.levels = static_cast<int>(cfg.get_int(section, "levels", 2));
    if (m.prior == "tv") {
        m.tv_iters = static_cast<int>(cfg.get_int(section, "tv_iters", 20));
        m.tv_tol = cfg.get_double(section, "tv_tol", 1e-4);
        if (m.tv_iters < 1) bad_value(cfg, section, "tv_iters", "tv_iters must be >= 1");
    }
    return m;
}

struct ExperimentData {
    std::string kind;
    int width = 1, height = 1;
    ImageField truth{1, 1, 0.0};
    bool has_truth = false;
    ImageField y_image{1, 1, 0.0};  // deconv observation
    CVec y_spec;                    // tomography observation (masked spectrum)
    FourierMask mask;
    Vec x0;
    std::vector<ModelSpec> specs;
    std::size_t true_index = 0;
};

ImageField load_truth(const ConfigFile& cfg) {
    const std::string image = cfg.get_string("data", "image", "blocks");
    const int w = static_cast<int>(cfg.get_int("data", "width", 64));
    const int h = static_cast<int>(cfg.get_int("data", "height", 64));
    if (image == "blocks") return blocks_phantom(w, h);
    if (image == "spikes") {
        const int n_spikes = static_cast<int>(cfg.get_int("data", "n_spikes", 16));
        const double amp = cfg.get_double("data", "spike_amplitude", 8.0);
        const auto seed = static_cast<std::uint64_t>(cfg.get_int("data", "spike_seed", 7));
        return sparse_spikes(w, h, n_spikes, amp, seed);
    }
    require_file_exists(cfg, "data", "image", image);
    const PgmImage pgm = read_pgm(image);
    ImageField img = pgm.field;
    for (double& v : img.data) v /= static_cast<double>(pgm.maxval);
    return img;
}

ExperimentData build_experiment(const ConfigFile& cfg) {
    ExperimentData ex;
    ex.kind = cfg.get_string("experiment", "kind");
    if (!is_image_kind(ex.kind) && ex.kind != "analytic1d")
        bad_value(cfg, "experiment", "kind", "unknown experiment kind '" + ex.kind + "'");

    for (const std::string& s : model_section_names(cfg))
        ex.specs.push_back(read_model_spec(cfg, s, ex.kind));

    if (ex.kind == "analytic1d") {
        ex.width = static_cast<int>(ex.specs.front().dim);
        ex.height = 1;
        for (const auto& sp : ex.specs)
            if (sp.dim != ex.specs.front().dim)
                throw config_error("analytic1d models must share one dimension");
        ex.x0.assign(ex.specs.front().dim, 0.0);
        return ex;
    }

    ex.truth = load_truth(cfg);
    ex.has_truth = true;
    ex.width = ex.truth.width;
    ex.height = ex.truth.height;

    const std::string true_label = cfg.get_string("data", "true_model", ex.specs.front().label);
    bool found = false;
    for (std::size_t i = 0; i < ex.specs.size(); ++i)
        if (ex.specs[i].label == true_label) {
            ex.true_index = i;
            found = true;
        }
    if (!found) bad_value(cfg, "data", "true_model", "no model section labelled '" + true_label + "'");

    const auto noise_seed = static_cast<std::uint64_t>(cfg.get_int("data", "noise_seed", 900));
    CounterRng rng(noise_seed, kDataNoiseStream);
    const ModelSpec& truth_spec = ex.specs[ex.true_index];

    if (is_deconv_kind(ex.kind)) {
        const ImageField kernel = truth_spec.kernel_file.empty()
                                      ? uniform_kernel(truth_spec.kernel_size)
                                      : read_pgm(truth_spec.kernel_file).field;
        BlurOperator blur(kernel, kernel.width / 2, kernel.height / 2, ex.width, ex.height);
        ex.y_image = make_blurred_data(ex.truth, blur, truth_spec.sigma, rng);
        ex.x0 = ex.y_image.data;
    } else {
        for (const auto& sp : ex.specs)
            if (sp.mask_lines != truth_spec.mask_lines)
                throw config_error("tomography candidates must share the acquisition mask");
        ex.mask = radial_line_mask(ex.width, ex.height, truth_spec.mask_lines);
        ex.y_spec = make_tomography_data(ex.truth, ex.mask, truth_spec.sigma, rng);
        Fft2D fft(ex.width, ex.height);
        fft.inverse_real(ex.y_spec, ex.x0);  // zero-filled backprojection
    }
    return ex;
}

// Fresh model per chain job: prox state (TV dual warm start) and FFT plans
// are per-instance, which keeps concurrent chains independent and runs
// byte-identical for every pool size.
CompositeModel build_model(const ExperimentData& ex, const ModelSpec& spec) {
    if (ex.kind == "analytic1d") {
        CompositeModel m;
        m.dim = spec.dim;
        m.smooth = zero_smooth_term(spec.dim);
        m.nonsmooth = spec.target == "laplace"
                          ? scale_term(make_l1_term(spec.dim), spec.beta)
                          : make_box_term(spec.box_lo, spec.box_hi);
        m.sigma = 0.0;
        m.beta = spec.beta;
        m.label = spec.label;
        return m;
    }

    NonSmoothTerm prior;
    if (spec.prior == "tv")
        prior = make_tv_term(ex.width, ex.height, spec.tv_iters, spec.tv_tol);
    else if (spec.prior == "wavelet_l1")
        prior = make_wavelet_l1_term(ex.width, ex.height, spec.levels);
    else
        prior = make_l1_term(static_cast<std::size_t>(ex.width) * ex.height);

    if (is_deconv_kind(ex.kind)) {
        const ImageField kernel = spec.kernel_file.empty() ? uniform_kernel(spec.kernel_size)
                                                           : read_pgm(spec.kernel_file).field;
        return make_deconv_model(ex.y_image, kernel, kernel.width / 2, kernel.height / 2, spec.sigma,
                                 prior, spec.beta, spec.label);
    }
    return make_tomography_model(ex.y_spec, ex.mask, spec.sigma, prior, spec.beta, spec.label);
}

// Known additive constant omitted from the coded potential: the Gaussian
// likelihood normalizer. Shared-prior constants cancel in Bayes factors.
double model_log_offset(const ExperimentData& ex, const ModelSpec& spec) {
    if (ex.kind == "analytic1d") return 0.0;
    const double n_obs = is_deconv_kind(ex.kind)
                             ? static_cast<double>(ex.width) * ex.height
                             : static_cast<double>(ex.mask.n_kept);
    const double two_pi = 6.283185307179586476925286766559;
    return -0.5 * n_obs * std::log(two_pi * spec.sigma * spec.sigma);
}

// ----------------------------------------------------------- sampler plan

struct SamplerPlan {
    std::string algorithm = "myula";
    bool lambda_guideline = true;
    double lambda_explicit = 0.0;
    bool gamma_guideline = true;
    double gamma_explicit = 0.0;
    double gamma_fraction = 0.5;
    long long n_iter = 0, burn_in = 0, thin = 1, sample_stride = 0;
    std::vector<std::uint64_t> seeds;
    std::size_t threads = 1;
    bool adapt_gamma = false;
    double target_accept = 0.45;
};

SamplerPlan read_sampler_plan(const ConfigFile& cfg) {
    SamplerPlan p;
    p.algorithm = cfg.get_string("sampler", "algorithm", "myula");
    if (p.algorithm != "myula" && p.algorithm != "pxmala")
        bad_value(cfg, "sampler", "algorithm", "algorithm must be myula or pxmala");

    const std::string lm = cfg.get_string("sampler", "lambda_mode", "guideline");
    if (lm == "explicit") {
        p.lambda_guideline = false;
        p.lambda_explicit = cfg.get_double("sampler", "lambda");
    } else if (lm != "guideline") {
        bad_value(cfg, "sampler", "lambda_mode", "lambda_mode must be guideline or explicit");
    }

    const std::string gm = cfg.get_string("sampler", "gamma_mode", "guideline");
    if (gm == "explicit") {
        p.gamma_guideline = false;
        p.gamma_explicit = cfg.get_double("sampler", "gamma");
    } else if (gm == "guideline") {
        p.gamma_fraction = cfg.get_double("sampler", "gamma_fraction", 0.5);
        if (!(p.gamma_fraction >= 0.0 && p.gamma_fraction <= 1.0))
            bad_value(cfg, "sampler", "gamma_fraction", "gamma_fraction must lie in [0, 1]");
    } else {
        bad_value(cfg, "sampler", "gamma_mode", "gamma_mode must be guideline or explicit");
    }

    p.n_iter = cfg.get_int("sampler", "n_iter");
    p.burn_in = cfg.get_int("sampler", "burn_in", p.n_iter / 20);
    p.thin = cfg.get_int("sampler", "thin", 1);
    p.sample_stride = cfg.get_int("analysis", "sample_stride", 0);
    if (cfg.has("sampler", "seeds"))
        for (long long s : cfg.get_int_list("sampler", "seeds"))
            p.seeds.push_back(static_cast<std::uint64_t>(s));
    else
        p.seeds = {1};
    p.threads = static_cast<std::size_t>(cfg.get_int("sampler", "threads", 1));
    if (const char* env = std::getenv("PROXMC_THREADS"); env && *env)
        p.threads = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    if (p.threads < 1) bad_value(cfg, "sampler", "threads", "threads must be >= 1");
    p.adapt_gamma = cfg.get_bool("sampler", "adapt_gamma", false);
    p.target_accept = cfg.get_double("sampler", "target_accept", 0.45);
    return p;
}

struct ResolvedSteps {
    double lambda = 0.0;
    double gamma = 0.0;
};

/* lambda guideline: 1/L_f. gamma guideline: interpolate the recommended
 * [1/(10 L_f), 1/(4 L_f)] by gamma_fraction; for f = 0 targets (L_f = 0,
 * where the range degenerates) use the fraction of the cap lambda instead.
 */
ResolvedSteps resolve_steps(const SamplerPlan& p, double lip_grad) {
    ResolvedSteps r;
    if (p.lambda_guideline) {
        r.lambda = step_size_guideline(lip_grad).lambda;  // rejects L_f = 0
    } else {
        r.lambda = p.lambda_explicit;
    }
    if (!p.gamma_guideline) {
        r.gamma = p.gamma_explicit;
    } else if (lip_grad > 0.0) {
        const StepSizeGuideline g = step_size_guideline(lip_grad);
        r.gamma = g.gamma_lo + p.gamma_fraction * (g.gamma_hi - g.gamma_lo);
    } else {
        r.gamma = p.gamma_fraction * step_size_cap(r.lambda, 0.0);
    }
    return r;
}

// ----------------------------------------------------------- chain jobs

struct ChainJobSpec {
    std::size_t model_index = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    bool pxmala = false;
    bool cross = false;  // record every model's potential at retained samples
};

struct JobResult {
    ChainOutput out;
    double lambda = 0.0;
    double gamma0 = 0.0;
    bool diverged = false;
    Vec last_finite;
    long long diverge_step = 0;
    std::string what;
};

std::vector<JobResult> run_chain_jobs(const ExperimentData& ex, const SamplerPlan& plan,
                                      const std::vector<ChainJobSpec>& jobs) {
    std::vector<JobResult> results(jobs.size());
    parallel_for_ordered(jobs.size(), plan.threads, [&](std::size_t j) {
        const ChainJobSpec& job = jobs[j];
        std::vector<CompositeModel> models;
        models.reserve(ex.specs.size());
        for (const ModelSpec& sp : ex.specs) models.push_back(build_model(ex, sp));
        const CompositeModel& m = models[job.model_index];

        const ResolvedSteps st = resolve_steps(plan, m.smooth.lip_grad);
        JobResult& r = results[j];
        r.lambda = st.lambda;
        r.gamma0 = st.gamma;

        SamplerConfig sc;
        sc.lambda = st.lambda;
        sc.gamma = st.gamma;
        sc.n_iter = plan.n_iter;
        sc.burn_in = plan.burn_in;
        sc.thin = plan.thin;
        sc.seed = job.seed;
        sc.stream = job.stream;
        sc.x0 = ex.x0;
        sc.record_u_trace = true;
        sc.record_samples = plan.sample_stride;
        sc.adapt_gamma = plan.adapt_gamma && job.pxmala;
        sc.target_accept = plan.target_accept;
        std::vector<const CompositeModel*> cross;
        if (job.cross) {
            for (const CompositeModel& cm : models) cross.push_back(&cm);
            sc.cross_models = cross;
        }
        Vec sink;
        long long sink_step = 0;
        sc.divergence_state = &sink;
        sc.divergence_step = &sink_step;
        try {
            r.out = job.pxmala ? run_pxmala(m, sc) : run_myula(m, sc);
        } catch (const numerical_error& e) {
            r.diverged = true;
            r.last_finite = sink.empty() ? ex.x0 : sink;
            r.diverge_step = sink_step;
            r.what = e.what();
        }
    });
    return results;
}

/* On blow-up: checkpoint the last finite state of the first failed chain,
 * then surface the numerical error (exit code 3).
 */
void handle_divergence(const std::vector<ChainJobSpec>& jobs, const std::vector<JobResult>& results,
                       const ExperimentData& ex, const ConfigFile& cfg, const fs::path& run_dir) {
    for (std::size_t j = 0; j < results.size(); ++j) {
        if (!results[j].diverged) continue;
        const JobResult& r = results[j];
        Checkpoint cp;
        cp.config_echo = cfg.serialize();
        cp.seed = jobs[j].seed;
        cp.stream = jobs[j].stream;
        cp.iteration = static_cast<std::uint64_t>(r.diverge_step);
        cp.kept_count = 0;
        cp.mean.assign(r.last_finite.size(), 0.0);
        cp.second_moment.assign(r.last_finite.size(), 0.0);
        cp.state = r.last_finite;
        const std::string name = "blowup_" + ex.specs[jobs[j].model_index].label + "_s" +
                                 std::to_string(jobs[j].seed) + ".ckpt";
        write_checkpoint((run_dir / name).string(), cp);
        std::cerr << "chain diverged; last finite state checkpointed to " << name << "\n";
        throw numerical_error(r.what);
    }
}

// ----------------------------------------------------------- artifacts

void write_u_trace_csv(const fs::path& path, const Vec& u, long long burn_in, long long thin) {
    CsvWriter w(path.string());
    w.header({"iteration", "u"});
    for (std::size_t k = 0; k < u.size(); ++k)
        w.row({static_cast<double>(burn_in + (static_cast<long long>(k) + 1) * thin), u[k]});
}

void write_acf_csv(const fs::path& path, const Vec& series, long max_lag) {
    const Vec a = acf(series, max_lag);
    CsvWriter w(path.string());
    w.header({"lag", "acf"});
    for (std::size_t l = 0; l < a.size(); ++l) w.row({static_cast<double>(l), a[l]});
}

void write_hpd_csv(const fs::path& path, const Vec& u, const std::vector<double>& alphas) {
    CsvWriter w(path.string());
    w.header({"alpha", "eta_alpha"});
    for (double a : alphas) w.row({a, hpd_threshold(u, a).eta_alpha});
}

void write_mean_images(const fs::path& run_dir, const std::string& stem, const Vec& mean, int w,
                       int h, Manifest& man) {
    ImageField img(mean, w, h);
    double lo = img.data[0], hi = img.data[0];
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    write_pgm(img, (run_dir / (stem + ".pgm")).string(), 65535, lo, hi);
    write_png_gray8(img, (run_dir / (stem + ".png")).string(), lo, hi);
    man.add_file(run_dir.string(), stem + ".pgm");
    man.add_file(run_dir.string(), stem + ".png");
}

double safe_iact(const Vec& u) {
    try {
        return iact(u);
    } catch (const numerical_error&) {
        return -1.0;  // degenerate (constant) trace
    }
}

Vec pooled_mean(const std::vector<const ChainOutput*>& chains) {
    Vec m(chains.front()->running_mean.size(), 0.0);
    for (const ChainOutput* c : chains) axpy(1.0, c->running_mean, m);
    for (double& v : m) v /= static_cast<double>(chains.size());
    return m;
}

Vec pooled_sd(const std::vector<const ChainOutput*>& chains) {
    const std::size_t d = chains.front()->running_mean.size();
    Vec m(d, 0.0), m2(d, 0.0);
    for (const ChainOutput* c : chains) {
        axpy(1.0, c->running_mean, m);
        axpy(1.0, c->running_second_moment, m2);
    }
    Vec sd(d);
    for (std::size_t i = 0; i < d; ++i) {
        m[i] /= static_cast<double>(chains.size());
        m2[i] /= static_cast<double>(chains.size());
        sd[i] = std::sqrt(std::max(0.0, m2[i] - m[i] * m[i]));
    }
    return sd;
}

Vec pooled_u(const std::vector<const ChainOutput*>& chains) {
    Vec u;
    for (const ChainOutput* c : chains) u.insert(u.end(), c->u_trace.begin(), c->u_trace.end());
    return u;
}

void write_config_echo(const ConfigFile& cfg, const fs::path& run_dir, Manifest& man) {
    std::ofstream f((run_dir / "config_echo.ini").string(), std::ios::binary);
    if (!f) throw input_error("cannot write config_echo.ini");
    f << cfg.serialize();
    f.close();
    man.add_file(run_dir.string(), "config_echo.ini");
}

// ----------------------------------------------------------- evidence

json evidence_report_json(const ExperimentData& ex, const SamplerPlan& plan,
                          const std::vector<ChainJobSpec>& jobs, const std::vector<JobResult>& results,
                          const std::vector<double>& select_alphas, double select_alpha) {
    const std::size_t n_models = ex.specs.size();
    json out;
    out["alpha_default"] = select_alpha;
    out["alphas"] = select_alphas;
    json model_names = json::array();
    for (const auto& sp : ex.specs) model_names.push_back(sp.label);
    out["models"] = model_names;
    out["normalization_mode"] = "shared_improper_prior";

    std::map<std::string, int> winner_counts;
    json runs = json::array();
    for (std::size_t k = 0; k < plan.seeds.size(); ++k) {
        std::vector<ModelChainRecord> records(n_models);
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].seed != plan.seeds[k]) continue;
            const std::size_t i = jobs[j].model_index;
            records[i].label = ex.specs[i].label;
            records[i].prior_tag = ex.specs[i].prior_tag();
            records[i].log_offset = model_log_offset(ex, ex.specs[i]);
            records[i].cross_u = results[j].out.cross_u_traces;
            records[i].own_index = i;
        }
        json run;
        run["seed"] = plan.seeds[k];
        json per_alpha = json::array();
        for (double alpha : select_alphas) {
            const EvidenceReport rep = improper_prior_evidence(records, alpha);
            json entry;
            entry["alpha"] = alpha;
            json ev = json::object(), probs = json::object(), nin = json::object();
            std::size_t best = 0;
            for (std::size_t i = 0; i < n_models; ++i) {
                ev[rep.models[i].label] = rep.models[i].log_evidence_rel;
                probs[rep.models[i].label] = rep.posterior_probs[i];
                nin[rep.models[i].label] = rep.models[i].n_in;
                if (rep.posterior_probs[i] > rep.posterior_probs[best]) best = i;
            }
            entry["log_evidence_rel"] = ev;
            entry["posterior_probs"] = probs;
            entry["n_in"] = nin;
            entry["winner"] = rep.models[best].label;
            json lbf = json::object();
            for (std::size_t i = 0; i < n_models; ++i)
                for (std::size_t jj = 0; jj < n_models; ++jj)
                    if (i != jj)
                        lbf[rep.models[i].label + "_vs_" + rep.models[jj].label] =
                            rep.log_bayes_factors[i][jj];
            entry["log_bayes_factors"] = lbf;
            per_alpha.push_back(entry);
            if (alpha == select_alpha) winner_counts[entry["winner"].get<std::string>()]++;
        }
        run["results"] = per_alpha;
        runs.push_back(run);
    }
    out["runs"] = runs;
    json wc = json::object();
    for (const auto& [label, count] : winner_counts) wc[label] = count;
    out["winner_counts"] = wc;
    return out;
}

// ----------------------------------------------------------- subcommands

struct AnalysisPlan {
    std::vector<double> hpd_alphas;
    long acf_max_lag = 200;
    std::vector<double> select_alphas;
    double select_alpha = 0.8;
    double mean_rel_tol = 0.03;
};

AnalysisPlan read_analysis_plan(const ConfigFile& cfg) {
    AnalysisPlan a;
    a.hpd_alphas = cfg.has("analysis", "hpd_alphas") ? cfg.get_double_list("analysis", "hpd_alphas")
                                                     : std::vector<double>{0.01, 0.05, 0.1, 0.2, 0.5};
    a.acf_max_lag = static_cast<long>(cfg.get_int("analysis", "acf_max_lag", 200));
    a.select_alphas = cfg.has("analysis", "select_alphas")
                          ? cfg.get_double_list("analysis", "select_alphas")
                          : std::vector<double>{0.5, 0.8, 0.9};
    a.select_alpha = cfg.get_double("analysis", "select_alpha", 0.8);
    a.mean_rel_tol = cfg.get_double("analysis", "mean_rel_tol", 0.03);
    if (std::find(a.select_alphas.begin(), a.select_alphas.end(), a.select_alpha) ==
        a.select_alphas.end())
        a.select_alphas.push_back(a.select_alpha);
    return a;
}

// shared by `sample` (any model count), `select` (>= 2) and `hpd` (light artifacts)
int cmd_sample(const std::string& config_path, const std::string& subcommand) {
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    const ExperimentData ex = build_experiment(cfg);
    const SamplerPlan plan = read_sampler_plan(cfg);
    const AnalysisPlan ana = read_analysis_plan(cfg);
    const fs::path run_dir = resolve_run_dir(cfg);
    cfg.check_all_consumed();

    const bool light = subcommand == "hpd";
    const bool multi = ex.specs.size() > 1;
    if (subcommand == "select" && !multi)
        throw config_error("select needs at least two [model:<label>] sections");

    std::vector<ChainJobSpec> jobs;
    for (std::uint64_t seed : plan.seeds)
        for (std::size_t i = 0; i < ex.specs.size(); ++i)
            jobs.push_back({i, seed, static_cast<std::uint64_t>(i), plan.algorithm == "pxmala", multi});
    const std::vector<JobResult> results = run_chain_jobs(ex, plan, jobs);
    handle_divergence(jobs, results, ex, cfg, run_dir);

    Manifest man;
    man.tool_version = kToolVersion;
    man.subcommand = subcommand;
    man.base_seed = plan.seeds.front();
    man.chain_seeds = plan.seeds;
    write_config_echo(cfg, run_dir, man);

    json summary;
    summary["kind"] = ex.kind;
    summary["tool_version"] = kToolVersion;
    summary["algorithm"] = plan.algorithm;
    json jmodels = json::array();

    for (std::size_t i = 0; i < ex.specs.size(); ++i) {
        const std::string& label = ex.specs[i].label;
        std::vector<const ChainOutput*> chains;
        json jchains = json::array();
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].model_index != i) continue;
            const ChainOutput& out = results[j].out;
            chains.push_back(&out);
            const std::string stem = label + "_s" + std::to_string(jobs[j].seed);

            write_u_trace_csv(run_dir / ("utrace_" + stem + ".csv"), out.u_trace, plan.burn_in,
                              plan.thin);
            man.add_file(run_dir.string(), "utrace_" + stem + ".csv");
            if (!light) {
                write_acf_csv(run_dir / ("acf_" + stem + ".csv"), out.u_trace, ana.acf_max_lag);
                man.add_file(run_dir.string(), "acf_" + stem + ".csv");
                write_hpd_csv(run_dir / ("hpd_" + stem + ".csv"), out.u_trace, ana.hpd_alphas);
                man.add_file(run_dir.string(), "hpd_" + stem + ".csv");

                Checkpoint cp;
                cp.config_echo = cfg.serialize();
                cp.seed = jobs[j].seed;
                cp.stream = jobs[j].stream;
                cp.iteration = static_cast<std::uint64_t>(plan.n_iter);
                cp.kept_count = static_cast<std::uint64_t>(out.kept_count);
                cp.mean = out.running_mean;
                cp.second_moment = out.running_second_moment;
                cp.state = out.final_state;
                cp.samples = out.samples;
                write_checkpoint((run_dir / ("chain_" + stem + ".ckpt")).string(), cp);
                man.add_file(run_dir.string(), "chain_" + stem + ".ckpt");
            }

            json jc;
            jc["seed"] = jobs[j].seed;
            jc["kept"] = out.kept_count;
            jc["gamma_used"] = out.gamma_used;
            if (out.acceptance_rate >= 0.0) jc["acceptance_rate"] = out.acceptance_rate;
            const double ia = safe_iact(out.u_trace);
            if (ia > 0.0) {
                jc["iact_u"] = ia;
                jc["ess_u"] = static_cast<double>(out.u_trace.size()) / ia;
            }
            double um = 0.0;
            for (double u : out.u_trace) um += u;
            jc["u_mean"] = out.u_trace.empty() ? 0.0 : um / static_cast<double>(out.u_trace.size());
            jchains.push_back(jc);
        }

        const Vec pooled = pooled_u(chains);
        write_hpd_csv(run_dir / ("hpd_" + label + ".csv"), pooled, ana.hpd_alphas);
        man.add_file(run_dir.string(), "hpd_" + label + ".csv");

        json jm;
        jm["label"] = label;
        jm["lambda"] = results[i].lambda;  // same resolution for every seed of model i
        jm["gamma0"] = results[i].gamma0;
        jm["chains"] = jchains;
        if (!light && ex.has_truth) {
            const Vec mean = pooled_mean(chains);
            write_mean_images(run_dir, "mean_" + label, mean, ex.width, ex.height, man);
            double peak = 0.0;
            for (double v : ex.truth.data) peak = std::max(peak, v);
            jm["psnr_mean_vs_truth"] = psnr(mean, ex.truth.data, peak > 0.0 ? peak : 1.0);
        }
        jmodels.push_back(jm);
    }
    summary["models"] = jmodels;

    if (multi && !light) {
        const json evidence =
            evidence_report_json(ex, plan, jobs, results, ana.select_alphas, ana.select_alpha);
        std::ofstream f((run_dir / "evidence.json").string(), std::ios::binary);
        f << evidence.dump(2) << "\n";
        f.close();
        man.add_file(run_dir.string(), "evidence.json");
    }

    {
        std::ofstream f((run_dir / "summary.json").string(), std::ios::binary);
        f << summary.dump(2) << "\n";
    }
    man.add_file(run_dir.string(), "summary.json");
    man.write(run_dir.string());
    std::cout << "wrote " << run_dir.string() << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path) {
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    const ExperimentData ex = build_experiment(cfg);
    if (ex.specs.size() != 1) throw config_error("compare expects exactly one [model:<label>] section");
    const SamplerPlan plan = read_sampler_plan(cfg);
    const AnalysisPlan ana = read_analysis_plan(cfg);
    std::vector<std::string> algos = {"myula", "pxmala"};
    if (cfg.has("compare", "algorithms")) {
        algos.clear();
        std::string raw = cfg.get_string("compare", "algorithms");
        std::string cur;
        for (char c : raw + ",") {
            if (c == ',') {
                const std::string t = detail::trim(cur);
                if (!t.empty()) algos.push_back(t);
                cur.clear();
            } else
                cur += c;
        }
    }
    if (algos.size() != 2) throw config_error("compare needs exactly two algorithms");
    for (const auto& a : algos)
        if (a != "myula" && a != "pxmala")
            bad_value(cfg, "compare", "algorithms", "algorithms must be myula or pxmala");
    const fs::path run_dir = resolve_run_dir(cfg);
    cfg.check_all_consumed();

    std::vector<ChainJobSpec> jobs;
    for (std::size_t a = 0; a < 2; ++a) {
        const std::uint64_t stream = fnv1a64(algos[a].data(), algos[a].size()) & 0xffffffffull;
        for (std::uint64_t seed : plan.seeds) jobs.push_back({0, seed, stream, algos[a] == "pxmala", false});
    }
    const std::vector<JobResult> results = run_chain_jobs(ex, plan, jobs);
    handle_divergence(jobs, results, ex, cfg, run_dir);

    Manifest man;
    man.tool_version = kToolVersion;
    man.subcommand = "compare";
    man.base_seed = plan.seeds.front();
    man.chain_seeds = plan.seeds;
    write_config_echo(cfg, run_dir, man);

    const std::size_t k = plan.seeds.size();
    std::vector<std::vector<const ChainOutput*>> by_algo(2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t s = 0; s < k; ++s) by_algo[a].push_back(&results[a * k + s].out);

    // per-chain potential traces
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t s = 0; s < k; ++s) {
            const std::string stem =
                algos[a] + (a == 1 && algos[0] == algos[1] ? "_2" : "") + "_s" +
                std::to_string(plan.seeds[s]);
            write_u_trace_csv(run_dir / ("utrace_" + stem + ".csv"), by_algo[a][s]->u_trace,
                              plan.burn_in, plan.thin);
            man.add_file(run_dir.string(), "utrace_" + stem + ".csv");
        }

    const std::string col0 = algos[0];
    const std::string col1 = algos[1] + (algos[0] == algos[1] ? "_2" : "");

    // seed-averaged autocorrelation of the potential trace, paired by lag
    {
        std::vector<Vec> avg(2);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t s = 0; s < k; ++s) {
                const Vec acf_s = acf(by_algo[a][s]->u_trace, ana.acf_max_lag);
                if (avg[a].empty()) avg[a].assign(acf_s.size(), 0.0);
                axpy(1.0, acf_s, avg[a]);
            }
            for (double& v : avg[a]) v /= static_cast<double>(k);
        }
        CsvWriter w((run_dir / "acf_compare.csv").string());
        w.header({"lag", "acf_" + col0, "acf_" + col1});
        for (std::size_t l = 0; l < avg[0].size(); ++l)
            w.row({static_cast<double>(l), avg[0][l], avg[1][l]});
    }
    man.add_file(run_dir.string(), "acf_compare.csv");

    // HPD threshold curves from pooled traces; the second algorithm is the reference
    const Vec u0 = pooled_u(by_algo[0]), u1 = pooled_u(by_algo[1]);
    double hpd_max_rel = 0.0;
    {
        CsvWriter w((run_dir / "hpd_compare.csv").string());
        w.header({"alpha", "eta_" + col0, "eta_" + col1, "rel_diff"});
        for (double alpha : ana.hpd_alphas) {
            const double e0 = hpd_threshold(u0, alpha).eta_alpha;
            const double e1 = hpd_threshold(u1, alpha).eta_alpha;
            const double rel = std::abs(e0 - e1) / std::max(std::abs(e1), 1e-12);
            hpd_max_rel = std::max(hpd_max_rel, rel);
            w.row({alpha, e0, e1, rel});
        }
    }
    man.add_file(run_dir.string(), "hpd_compare.csv");

    // posterior summary differences, normalized by the reference scale
    const Vec mean0 = pooled_mean(by_algo[0]), mean1 = pooled_mean(by_algo[1]);
    const Vec sd0 = pooled_sd(by_algo[0]), sd1 = pooled_sd(by_algo[1]);
    Vec dmean(mean0.size()), dsd(sd0.size());
    for (std::size_t i = 0; i < mean0.size(); ++i) {
        dmean[i] = mean0[i] - mean1[i];
        dsd[i] = sd0[i] - sd1[i];
    }
    const double ref_scale = std::max({norm2(mean1), norm2(sd1), 1e-12});
    const double mean_rel = norm2(dmean) / ref_scale;
    const double sd_rel = norm2(dsd) / std::max(norm2(sd1), 1e-12);

    json rep;
    rep["kind"] = ex.kind;
    rep["tool_version"] = kToolVersion;
    rep["algorithms"] = algos;
    rep["reference"] = col1;
    json gammas = json::object(), iacts = json::object();
    gammas[col0] = by_algo[0].front()->gamma_used;
    gammas[col1] = by_algo[1].front()->gamma_used;
    iacts[col0] = safe_iact(u0);
    iacts[col1] = safe_iact(u1);
    rep["gamma_used"] = gammas;
    rep["iact_u"] = iacts;
    for (std::size_t a = 0; a < 2; ++a)
        if (by_algo[a].front()->acceptance_rate >= 0.0) {
            double acc = 0.0;
            for (const ChainOutput* c : by_algo[a]) acc += c->acceptance_rate;
            rep["acceptance_rate_" + (a == 0 ? col0 : col1)] = acc / static_cast<double>(k);
        }
    rep["posterior_mean_rel_diff"] = mean_rel;
    rep["posterior_sd_rel_diff"] = sd_rel;
    rep["mean_rel_tol"] = ana.mean_rel_tol;
    rep["mean_within_tol"] = mean_rel <= ana.mean_rel_tol;
    rep["hpd_max_rel_diff"] = hpd_max_rel;
    {
        std::ofstream f((run_dir / "compare_report.json").string(), std::ios::binary);
        f << rep.dump(2) << "\n";
    }
    man.add_file(run_dir.string(), "compare_report.json");
    man.write(run_dir.string());
    std::cout << "wrote " << run_dir.string() << "\n";
    return 0;
}

int cmd_analytic1d(const std::string& config_path) {
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    const std::string kind = cfg.get_string("experiment", "kind");
    if (kind != "analytic1d") bad_value(cfg, "experiment", "kind", "expected kind = analytic1d");

    std::vector<double> lambdas = cfg.has("analytic1d", "lambdas")
                                      ? cfg.get_double_list("analytic1d", "lambdas")
                                      : std::vector<double>{1.0, 0.1, 0.01};
    for (double l : lambdas)
        if (!(l > 0.0)) throw config_error("analytic1d lambdas must be positive");
    const long long x_points = cfg.get_int("analytic1d", "x_points", 801);
    const double lap_xmax = cfg.get_double("analytic1d", "laplace_x_max", 4.0);
    const double uni_xmax = cfg.get_double("analytic1d", "uniform_x_max", 2.0);
    const double tv_min = cfg.get_double("analytic1d", "tv_lambda_min", 1e-3);
    const double tv_max = cfg.get_double("analytic1d", "tv_lambda_max", 10.0);
    const long long tv_points = cfg.get_int("analytic1d", "tv_points", 25);
    if (x_points < 2 || tv_points < 2) throw config_error("analytic1d needs >= 2 grid points");
    if (!(tv_min > 0.0) || !(tv_max > tv_min)) throw config_error("analytic1d: bad tv lambda range");
    const fs::path run_dir = resolve_run_dir(cfg);
    cfg.check_all_consumed();

    Manifest man;
    man.tool_version = kToolVersion;
    man.subcommand = "analytic1d";
    write_config_echo(cfg, run_dir, man);

    auto density_csv = [&](const std::string& name, double xmax, auto base_pdf, auto smoothed_pdf) {
        CsvWriter w((run_dir / name).string());
        std::vector<std::string> header = {"x", "pdf"};
        for (double l : lambdas) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "pdf_lambda_%g", l);
            header.push_back(buf);
        }
        w.header(header);
        for (long long i = 0; i < x_points; ++i) {
            const double x = -xmax + 2.0 * xmax * static_cast<double>(i) / (x_points - 1);
            std::vector<double> row = {x, base_pdf(x)};
            for (double l : lambdas) row.push_back(smoothed_pdf(x, l));
            w.row(row);
        }
    };
    density_csv("laplace_density.csv", lap_xmax, [](double x) { return laplace_pdf(x); },
                [](double x, double l) { return laplace_pilambda(x, l); });
    man.add_file(run_dir.string(), "laplace_density.csv");
    density_csv("uniform_density.csv", uni_xmax, [](double x) { return uniform_pdf(x); },
                [](double x, double l) { return uniform_pilambda(x, l); });
    man.add_file(run_dir.string(), "uniform_density.csv");

    {
        CsvWriter w((run_dir / "tv_curves.csv").string());
        w.header({"lambda", "tv_laplace", "tv_uniform"});
        const double lr = std::log(tv_max / tv_min);
        for (long long i = 0; i < tv_points; ++i) {
            const double l = tv_min * std::exp(lr * static_cast<double>(i) / (tv_points - 1));
            const double tl = tv_distance_1d([](double x) { return laplace_pdf(x); },
                                             [l](double x) { return laplace_pilambda(x, l); },
                                             laplace_grid(l));
            const double tu = tv_distance_1d([](double x) { return uniform_pdf(x); },
                                             [l](double x) { return uniform_pilambda(x, l); },
                                             uniform_grid(l));
            w.row({l, tl, tu});
        }
    }
    man.add_file(run_dir.string(), "tv_curves.csv");
    man.write(run_dir.string());
    std::cout << "wrote " << run_dir.string() << "\n";
    return 0;
}

int cmd_bounds(const std::string& config_path) {
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    const std::string kind = cfg.get_string("experiment", "kind", "bounds");
    if (kind != "bounds") bad_value(cfg, "experiment", "kind", "expected kind = bounds");
    const std::string regime = cfg.get_string("bounds", "regime");
    const fs::path run_dir = resolve_run_dir(cfg);

    json out;
    out["tool_version"] = kToolVersion;
    out["regime"] = regime;
    json inputs;
    BoundBudget budget;
    if (regime == "convex") {
        ConvexBoundInputs in;
        in.eta_c = cfg.get_double("bounds", "eta");
        in.big_r_c = cfg.get_double("bounds", "r");
        in.d = cfg.get_int("bounds", "d");
        in.l_lip = cfg.get_double("bounds", "l");
        in.gamma_bar = cfg.get_double("bounds", "gamma_bar");
        in.epsilon = cfg.get_double("bounds", "epsilon");
        in.x_dist = cfg.get_double("bounds", "x_dist", 0.0);
        cfg.check_all_consumed();
        inputs = {{"eta", in.eta_c},         {"r", in.big_r_c},        {"d", in.d},
                  {"l", in.l_lip},           {"gamma_bar", in.gamma_bar},
                  {"epsilon", in.epsilon},   {"x_dist", in.x_dist}};
        budget = convex_budget(in);
    } else if (regime == "strong") {
        StrongBoundInputs in;
        in.m_strong = cfg.get_double("bounds", "m");
        in.big_r_s = cfg.get_double("bounds", "r");
        in.d = cfg.get_int("bounds", "d");
        in.l_lip = cfg.get_double("bounds", "l");
        in.gamma_bar = cfg.get_double("bounds", "gamma_bar");
        in.epsilon = cfg.get_double("bounds", "epsilon");
        in.x_dist = cfg.get_double("bounds", "x_dist", 0.0);
        cfg.check_all_consumed();
        inputs = {{"m", in.m_strong},        {"r", in.big_r_s},        {"d", in.d},
                  {"l", in.l_lip},           {"gamma_bar", in.gamma_bar},
                  {"epsilon", in.epsilon},   {"x_dist", in.x_dist}};
        budget = strong_budget(in);
    } else {
        bad_value(cfg, "bounds", "regime", "regime must be convex or strong");
    }
    out["inputs"] = inputs;
    out["t_horizon"] = budget.t_horizon;
    out["gamma_max"] = budget.gamma_max;
    out["n_min"] = budget.n_min;
    json inter = json::object();
    for (const auto& [key, value] : budget.intermediates) inter[key] = value;
    out["intermediates"] = inter;

    Manifest man;
    man.tool_version = kToolVersion;
    man.subcommand = "bounds";
    write_config_echo(cfg, run_dir, man);
    {
        std::ofstream f((run_dir / "bounds.json").string(), std::ios::binary);
        f << out.dump(2) << "\n";
    }
    man.add_file(run_dir.string(), "bounds.json");
    man.write(run_dir.string());
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proximal MCMC for non-smooth log-concave imaging models"};
    app.require_subcommand(1);
    std::string config_path;
    const char* names[] = {"sample", "select", "compare", "hpd", "bounds", "analytic1d"};
    const char* descs[] = {"run configured models and emit chain artifacts",
                           "model selection across >= 2 configured models",
                           "run two samplers on one model and report differences",
                           "chain run emitting potential traces and HPD tables only",
                           "evaluate a non-asymptotic sampling budget",
                           "closed-form 1D density and TV-distance curves"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("config", config_path, "experiment config file")
            ->required()
            ->check(CLI::ExistingFile);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (subs[0]->parsed()) return cmd_sample(config_path, "sample");
        if (subs[1]->parsed()) return cmd_sample(config_path, "select");
        if (subs[2]->parsed()) return cmd_compare(config_path);
        if (subs[3]->parsed()) return cmd_sample(config_path, "hpd");
        if (subs[4]->parsed()) return cmd_bounds(config_path);
        if (subs[5]->parsed()) return cmd_analytic1d(config_path);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const estimator_undefined_error& e) {
        std::cerr << "estimator undefined: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
