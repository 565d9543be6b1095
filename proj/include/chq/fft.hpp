#pragma once

// Cached FFTW plans. All transforms are unnormalized; callers apply scale
// factors. Plans are built once per shape under a lock and executed with the
// new-array interface, so any FFTW-aligned buffer of the right shape works.

#include <complex>

namespace chq::fft {

using cplx = std::complex<double>;

// In-place n^3 complex transforms.
void forward(cplx* data, int n);
void backward(cplx* data, int n);

// In-place 1D transforms along one axis of an n^3 array, for every line.
void forward_axis(cplx* data, int n, int axis);
void backward_axis(cplx* data, int n, int axis);

// Out-of-place m^3 real-to-complex (m * m * (m/2+1) outputs) and its
// inverse. The inverse overwrites its input.
void r2c(double* in, cplx* out, int m);
void c2r(cplx* in, double* out, int m);

int threads();

}  // namespace chq::fft
