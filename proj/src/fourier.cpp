#include "ekwave/fourier.hpp"

#include <fftw3.h>

#include <cstring>

#include "ekwave/errors.hpp"

namespace ekwave {

struct spectral_grid::fft_plans {
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

spectral_grid::spectral_grid(double L, int n) : n_(n), L_(L) {
    if (L <= 0.0) throw config_error("grid half-length L must be positive");
    if (n < 8 || (n & (n - 1)) != 0)
        throw config_error("grid size n must be a power of two >= 8 (got " +
                           std::to_string(n) + ")");
    dy_ = 2.0 * L / n;
    k_.resize(n / 2 + 1);
    const double pi = 3.14159265358979323846;
    for (int m = 0; m <= n / 2; ++m) k_[m] = pi * m / L;

    plans_ = new fft_plans;
    plans_->real_buf = fftw_alloc_real(n);
    plans_->cplx_buf = fftw_alloc_complex(n / 2 + 1);
    // FFTW_ESTIMATE: deterministic plans, buffers left untouched by planning
    plans_->r2c = fftw_plan_dft_r2c_1d(n, plans_->real_buf, plans_->cplx_buf, FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r_1d(n, plans_->cplx_buf, plans_->real_buf, FFTW_ESTIMATE);
    if (!plans_->r2c || !plans_->c2r) throw ek_error("FFTW plan creation failed");
}

spectral_grid::~spectral_grid() {
    if (plans_) {
        if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
        if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
        fftw_free(plans_->real_buf);
        fftw_free(plans_->cplx_buf);
        delete plans_;
    }
}

void spectral_grid::forward(const std::vector<double>& f,
                            std::vector<std::complex<double>>& out) const {
    std::memcpy(plans_->real_buf, f.data(), n_ * sizeof(double));
    fftw_execute(plans_->r2c);
    out.resize(n_ / 2 + 1);
    std::memcpy(out.data(), plans_->cplx_buf, (n_ / 2 + 1) * sizeof(fftw_complex));
}

void spectral_grid::inverse(const std::vector<std::complex<double>>& fhat,
                            std::vector<double>& out) const {
    std::memcpy(plans_->cplx_buf, fhat.data(), (n_ / 2 + 1) * sizeof(fftw_complex));
    plans_->cplx_buf[0][1] = 0.0;  // c2r requires real DC and Nyquist bins
    plans_->cplx_buf[n_ / 2][1] = 0.0;
    fftw_execute(plans_->c2r);
    out.resize(n_);
    const double inv_n = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] = plans_->real_buf[j] * inv_n;
}

void spectral_grid::derivative(const std::vector<double>& f, std::vector<double>& out) const {
    std::memcpy(plans_->real_buf, f.data(), n_ * sizeof(double));
    fftw_execute(plans_->r2c);
    auto* c = plans_->cplx_buf;
    for (int m = 0; m <= n_ / 2; ++m) {
        const double re = c[m][0], im = c[m][1];
        c[m][0] = -k_[m] * im;
        c[m][1] = k_[m] * re;
    }
    c[n_ / 2][0] = 0.0;  // odd derivative of the unpaired Nyquist mode
    c[n_ / 2][1] = 0.0;
    fftw_execute(plans_->c2r);
    out.resize(n_);
    const double inv_n = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] = plans_->real_buf[j] * inv_n;
}

void spectral_grid::dealias(std::vector<std::complex<double>>& fhat) const {
    for (int m = n_ / 3 + 1; m <= n_ / 2; ++m) fhat[m] = 0.0;
}

}  // namespace ekwave
