#include "dwg/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace dwg {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft1D::Fft1D(int n) : n_(n) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    std::vector<cplx> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Fft1D::~Fft1D() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft1D::forward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft1D::inverse(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
    const double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= s;
}

std::vector<double> fft_frequencies(int n, double dx) {
    std::vector<double> xi(n);
    const double base = 2.0 * kPi / (n * dx);
    for (int k = 0; k < n; ++k) {
        const int kk = (2 * k < n) ? k : k - n;
        xi[k] = base * kk;
    }
    return xi;
}

}  // namespace dwg
