#pragma once

#include <vector>

#include "dwg/geometry.hpp"

namespace dwg {

// Complex 1D FFT of fixed size backed by FFTW. Plan creation is serialized
// internally; transform calls are safe from concurrent threads on distinct
// buffers. inverse() includes the 1/n normalization.
class Fft1D {
  public:
    explicit Fft1D(int n);
    ~Fft1D();
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const { return n_; }
    void forward(cplx* data) const;
    void inverse(cplx* data) const;

  private:
    int n_;
    void* fwd_;
    void* bwd_;
};

// Fourier frequencies 2*pi*k/(n*dx) in fftshift-free (FFTW) ordering.
std::vector<double> fft_frequencies(int n, double dx);

}  // namespace dwg
