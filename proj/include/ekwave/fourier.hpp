#pragma once

#include <complex>
#include <vector>

namespace ekwave {

// ============================================================
// Real-to-complex spectral transforms on [-L, L), n nodes
// ============================================================
//
// Wavenumbers k_m = m*pi/L for m = 0..n/2; forward() is the unnormalized
// half-spectrum DFT (matches numpy.fft.rfft), inverse() divides by n.
// Plans run on internal scratch buffers, so the methods are const but a
// single instance must not be shared across threads.
class spectral_grid {
public:
    spectral_grid(double L, int n);  // n a power of two, >= 8
    ~spectral_grid();
    spectral_grid(const spectral_grid&) = delete;
    spectral_grid& operator=(const spectral_grid&) = delete;

    int size() const { return n_; }
    int modes() const { return n_ / 2 + 1; }
    double half_length() const { return L_; }
    double dy() const { return dy_; }
    double node(int j) const { return -L_ + dy_ * j; }
    double wavenumber(int m) const { return k_[m]; }
    const std::vector<double>& wavenumbers() const { return k_; }

    void forward(const std::vector<double>& f, std::vector<std::complex<double>>& out) const;
    void inverse(const std::vector<std::complex<double>>& fhat,
                 std::vector<double>& out) const;

    // d/dy via ik multiplication (Nyquist derivative vanishes for real data)
    void derivative(const std::vector<double>& f, std::vector<double>& out) const;

    // 2/3-rule dealiasing: zero every mode with index > n/3
    void dealias(std::vector<std::complex<double>>& fhat) const;

private:
    int n_;
    double L_, dy_;
    std::vector<double> k_;
    struct fft_plans;
    fft_plans* plans_;
};

}  // namespace ekwave
