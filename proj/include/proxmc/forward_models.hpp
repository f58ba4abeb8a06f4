#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/fft.hpp"
#include "proxmc/image.hpp"
#include "proxmc/model.hpp"
#include "proxmc/rng.hpp"
#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Linear forward operators for the imaging likelihoods. Both are diagonal in
 * the Fourier domain (circular blur; frequency-mask tomography), so gradients
 * cost two transforms and the data-fit value is free once the spectral
 * residual is in hand (unitary DFT preserves the 2-norm).
 */

// ------------------------------------------------------------------- blur

/* Circular convolution with a compactly supported kernel. The kernel is
 * normalized to unit sum at construction (photon-count preserving blur), so
 * the operator norm max|h_hat| equals 1 exactly at DC, and the data-fit
 * gradient Lipschitz constant is max|h_hat|^2 / sigma^2 = 1/sigma^2.
 */
class BlurOperator {
   public:
    /* kernel: small kernel image; anchor_x/y: kernel-grid position mapped to
     * the image origin (for a (2k+1)-tap centered kernel pass k; for even
     * sizes floor(size/2)). */
    BlurOperator(const ImageField& kernel, int anchor_x, int anchor_y, int width, int height)
        : fft_(std::make_shared<Fft2D>(width, height)), w_(width), h_(height) {
        if (kernel.width > width || kernel.height > height)
            throw config_error("BlurOperator: kernel larger than image");
        if (anchor_x < 0 || anchor_x >= kernel.width || anchor_y < 0 || anchor_y >= kernel.height)
            throw config_error("BlurOperator: anchor outside kernel support");
        double ksum = 0.0;
        for (double v : kernel.data) ksum += v;
        if (!(ksum > 0.0)) throw config_error("BlurOperator: kernel must have positive sum");

        // embed the normalized kernel with the anchor at the origin (periodic)
        Vec embedded(static_cast<std::size_t>(width) * height, 0.0);
        for (int ky = 0; ky < kernel.height; ++ky)
            for (int kx = 0; kx < kernel.width; ++kx) {
                const int ix = ((kx - anchor_x) % width + width) % width;
                const int iy = ((ky - anchor_y) % height + height) % height;
                embedded[static_cast<std::size_t>(iy) * width + ix] += kernel.at(kx, ky) / ksum;
            }

        // transfer function: unnormalized DFT of the embedded kernel, i.e.
        // sqrt(N) * unitary spectrum (convolution theorem with unitary DFTs)
        fft_->forward(embedded, transfer_);
        const double rootn = std::sqrt(static_cast<double>(transfer_.size()));
        double mx = 0.0;
        for (auto& t : transfer_) {
            t *= rootn;
            mx = std::max(mx, std::abs(t));
        }
        op_norm_ = mx;
    }

    int width() const { return w_; }
    int height() const { return h_; }
    double op_norm() const { return op_norm_; }
    const std::shared_ptr<Fft2D>& fft() const { return fft_; }
    const CVec& transfer() const { return transfer_; }

    // y = H x
    void apply(const Vec& x, Vec& y) const {
        CVec spec;
        fft_->forward(x, spec);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= transfer_[i];
        fft_->inverse_real(spec, y);
    }

    // y = H^T x (adjoint = conjugate transfer)
    void apply_adjoint(const Vec& x, Vec& y) const {
        CVec spec;
        fft_->forward(x, spec);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(transfer_[i]);
        fft_->inverse_real(spec, y);
    }

   private:
    std::shared_ptr<Fft2D> fft_;
    CVec transfer_;
    int w_, h_;
    double op_norm_ = 0.0;
};

inline ImageField uniform_kernel(int size) {
    if (size < 1) throw config_error("uniform_kernel: size must be >= 1");
    return ImageField(size, size, 1.0 / (static_cast<double>(size) * size));
}

/* Deconvolution likelihood f(x) = |y - Hx|^2 / (2 sigma^2) with circular
 * blur H, plus beta-weighted prior term. The fused value/gradient works on
 * the spectral residual r_hat = h_hat .* x_hat - y_hat:
 *   f = |r_hat|^2/(2 sigma^2),  grad f = Re F^{-1}(conj(h_hat) .* r_hat)/sigma^2.
 */
inline CompositeModel make_deconv_model(const ImageField& y, const ImageField& kernel, int anchor_x,
                                        int anchor_y, double sigma, const NonSmoothTerm& prior,
                                        double beta, const std::string& label = "deconv") {
    if (!(sigma > 0.0)) throw config_error("make_deconv_model: sigma must be positive");
    auto blur = std::make_shared<BlurOperator>(kernel, anchor_x, anchor_y, y.width, y.height);
    const std::size_t n = y.size();

    auto y_spec = std::make_shared<CVec>();
    blur->fft()->forward(y.data, *y_spec);

    CompositeModel m;
    m.dim = n;
    m.sigma = sigma;
    m.beta = beta;
    m.label = label;
    m.nonsmooth = scale_term(prior, beta);

    const double inv_var = 1.0 / (sigma * sigma);
    m.smooth.lip_grad = blur->op_norm() * blur->op_norm() * inv_var;

    m.smooth.value_and_grad = [blur, y_spec, inv_var](const Vec& x, Vec& grad) {
        CVec spec;
        blur->fft()->forward(x, spec);
        double ss = 0.0;
        const CVec& transfer = blur->transfer();
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const std::complex<double> r = transfer[i] * spec[i] - (*y_spec)[i];
            ss += std::norm(r);
            spec[i] = std::conj(transfer[i]) * r;
        }
        blur->fft()->inverse_real(spec, grad);
        for (double& v : grad) v *= inv_var;
        return 0.5 * ss * inv_var;
    };
    m.smooth.eval = [blur, y_spec, inv_var](const Vec& x) {
        CVec spec;
        blur->fft()->forward(x, spec);
        double ss = 0.0;
        const CVec& transfer = blur->transfer();
        for (std::size_t i = 0; i < spec.size(); ++i) ss += std::norm(transfer[i] * spec[i] - (*y_spec)[i]);
        return 0.5 * ss * inv_var;
    };
    m.smooth.grad = [m_vg = m.smooth.value_and_grad](const Vec& x, Vec& grad) { m_vg(x, grad); };
    return m;
}

// ------------------------------------------------------------- tomography

/* Frequency-domain sampling mask. `keep[k]` flags DFT bin k (row-major, same
 * layout as Fft2D spectra) as observed.
 */
struct FourierMask {
    std::vector<unsigned char> keep;
    int width = 0;
    int height = 0;
    std::size_t n_kept = 0;

    double fraction() const {
        return keep.empty() ? 0.0 : static_cast<double>(n_kept) / static_cast<double>(keep.size());
    }
};

/* n_lines straight lines through the DC bin at angles k*pi/n_lines,
 * rasterized in centered frequency coordinates and mirrored so the mask is
 * exactly Hermitian-symmetric (real fields stay consistent under it).
 */
inline FourierMask radial_line_mask(int width, int height, int n_lines) {
    if (width <= 0 || height <= 0) throw config_error("radial_line_mask: non-positive dimensions");
    if (n_lines < 1) throw config_error("radial_line_mask: need at least one line");
    FourierMask mask;
    mask.width = width;
    mask.height = height;
    mask.keep.assign(static_cast<std::size_t>(width) * height, 0);

    const double pi = 3.14159265358979323846;
    const int rmax = std::max(width, height);  // generous; points off-grid are skipped
    auto mark = [&](int fx, int fy) {
        // centered frequency -> DFT bin, plus the Hermitian partner
        const int ix = ((fx % width) + width) % width;
        const int iy = ((fy % height) + height) % height;
        const int jx = ((-fx % width) + width) % width;
        const int jy = ((-fy % height) + height) % height;
        mask.keep[static_cast<std::size_t>(iy) * width + ix] = 1;
        mask.keep[static_cast<std::size_t>(jy) * width + jx] = 1;
    };
    mark(0, 0);
    for (int l = 0; l < n_lines; ++l) {
        const double ang = pi * static_cast<double>(l) / n_lines;
        const double cx = std::cos(ang), sy = std::sin(ang);
        for (int r = 1; r <= rmax; ++r) {
            const int fx = static_cast<int>(std::lround(r * cx));
            const int fy = static_cast<int>(std::lround(r * sy));
            if (std::abs(fx) > width / 2 || std::abs(fy) > height / 2) break;
            mark(fx, fy);
        }
    }
    for (unsigned char k : mask.keep) mask.n_kept += k;
    return mask;
}

/* Tomography likelihood f(x) = |y - A F x|^2 / (2 sigma^2): A keeps the
 * masked unitary-DFT coefficients, y lives on the full grid with zeros off
 * the mask. grad f = Re F^{-1}( mask .* (F x - y) ) / sigma^2; |A F| = 1.
 */
inline CompositeModel make_tomography_model(const CVec& y_spec, const FourierMask& mask, double sigma,
                                            const NonSmoothTerm& prior, double beta,
                                            const std::string& label = "tomography") {
    if (!(sigma > 0.0)) throw config_error("make_tomography_model: sigma must be positive");
    if (y_spec.size() != mask.keep.size()) throw input_error("make_tomography_model: data/mask size mismatch");
    if (mask.n_kept == 0) throw config_error("make_tomography_model: empty mask");
    for (std::size_t i = 0; i < y_spec.size(); ++i)
        if (!mask.keep[i] && std::abs(y_spec[i]) != 0.0)
            throw input_error("make_tomography_model: data nonzero off the mask");

    auto fft = std::make_shared<Fft2D>(mask.width, mask.height);
    auto y = std::make_shared<CVec>(y_spec);
    auto keep = std::make_shared<std::vector<unsigned char>>(mask.keep);
    const std::size_t n = y_spec.size();
    const double inv_var = 1.0 / (sigma * sigma);

    CompositeModel m;
    m.dim = n;
    m.sigma = sigma;
    m.beta = beta;
    m.label = label;
    m.nonsmooth = scale_term(prior, beta);
    m.smooth.lip_grad = inv_var;  // A is an orthogonal projection, F unitary

    m.smooth.value_and_grad = [fft, y, keep, inv_var](const Vec& x, Vec& grad) {
        CVec spec;
        fft->forward(x, spec);
        double ss = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            if ((*keep)[i]) {
                const std::complex<double> r = spec[i] - (*y)[i];
                ss += std::norm(r);
                spec[i] = r;
            } else {
                spec[i] = 0.0;
            }
        }
        fft->inverse_real(spec, grad);
        for (double& v : grad) v *= inv_var;
        return 0.5 * ss * inv_var;
    };
    m.smooth.eval = [fft, y, keep, inv_var](const Vec& x) {
        CVec spec;
        fft->forward(x, spec);
        double ss = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i)
            if ((*keep)[i]) ss += std::norm(spec[i] - (*y)[i]);
        return 0.5 * ss * inv_var;
    };
    m.smooth.grad = [vg = m.smooth.value_and_grad](const Vec& x, Vec& grad) { vg(x, grad); };
    return m;
}

// ------------------------------------------------------- synthetic data

// y = H x_true + sigma * white noise
inline ImageField make_blurred_data(const ImageField& x_true, const BlurOperator& blur, double sigma,
                                    CounterRng& rng) {
    Vec y;
    blur.apply(x_true.data, y);
    for (double& v : y) v += sigma * rng.normal();
    return ImageField(std::move(y), x_true.width, x_true.height);
}

// y = A F (x_true + sigma * white noise): masked spectrum of a noisy image,
// Hermitian-consistent by construction since the spatial noise is real.
inline CVec make_tomography_data(const ImageField& x_true, const FourierMask& mask, double sigma,
                                 CounterRng& rng) {
    if (x_true.width != mask.width || x_true.height != mask.height)
        throw input_error("make_tomography_data: image/mask shape mismatch");
    Vec noisy = x_true.data;
    for (double& v : noisy) v += sigma * rng.normal();
    Fft2D fft(mask.width, mask.height);
    CVec spec;
    fft.forward(noisy, spec);
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (!mask.keep[i]) spec[i] = 0.0;
    return spec;
}

}  // namespace proxmc
