#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "proxmc/errors.hpp"
#include "proxmc/image.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

using CVec = std::vector<std::complex<double>>;

namespace detail {
// FFTW planning is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/* Unitary 2-D DFT on a fixed grid (height rows, width cols, row-major).
 * Owns its FFTW plans and work buffers, so one instance must not be used from
 * two threads at once; give each worker its own. FFTW_ESTIMATE keeps plans
 * deterministic (no runtime measurement).
 */
class Fft2D {
   public:
    Fft2D(int width, int height) : w_(width), h_(height), n_(static_cast<std::size_t>(width) * height) {
        if (width <= 0 || height <= 0) throw input_error("Fft2D: non-positive dimensions");
        in_ = fftw_alloc_complex(n_);
        out_ = fftw_alloc_complex(n_);
        if (!in_ || !out_) throw numerical_error("Fft2D: allocation failed");
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fwd_ = fftw_plan_dft_2d(h_, w_, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(h_, w_, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw numerical_error("Fft2D: plan creation failed");
    }

    ~Fft2D() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    std::size_t size() const { return n_; }
    int width() const { return w_; }
    int height() const { return h_; }

    // real spatial field -> unitary spectrum
    void forward(const Vec& x, CVec& spec) const {
        if (x.size() != n_) throw input_error("Fft2D::forward: size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = x[i];
            in_[i][1] = 0.0;
        }
        run(fwd_, spec);
    }

    void forward(const CVec& x, CVec& spec) const {
        if (x.size() != n_) throw input_error("Fft2D::forward: size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = x[i].real();
            in_[i][1] = x[i].imag();
        }
        run(fwd_, spec);
    }

    // unitary spectrum -> complex spatial field
    void inverse(const CVec& spec, CVec& x) const {
        if (spec.size() != n_) throw input_error("Fft2D::inverse: size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = spec[i].real();
            in_[i][1] = spec[i].imag();
        }
        run(bwd_, x);
    }

    // unitary spectrum -> real part of the spatial field
    void inverse_real(const CVec& spec, Vec& x) const {
        if (spec.size() != n_) throw input_error("Fft2D::inverse_real: size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = spec[i].real();
            in_[i][1] = spec[i].imag();
        }
        fftw_execute(bwd_);
        const double s = scale();
        x.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = out_[i][0] * s;
    }

   private:
    double scale() const { return 1.0 / std::sqrt(static_cast<double>(n_)); }

    void run(fftw_plan p, CVec& dst) const {
        fftw_execute(p);
        const double s = scale();
        dst.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) dst[i] = {out_[i][0] * s, out_[i][1] * s};
    }

    int w_, h_;
    std::size_t n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace proxmc
