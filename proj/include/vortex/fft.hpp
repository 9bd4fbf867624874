#pragma once

#include <complex>

namespace vortex::fft {

// 2D real <-> half-complex transforms of an n x n row-major array, unnormalized
// (forward uses e^{-ik.x}). Plans are created once per (n, scalar type) behind a
// lock and then executed on caller-owned buffers, so concurrent calls from
// different threads are safe.

void forward(int n, const double* in, std::complex<double>* out);
void inverse(int n, std::complex<double>* in_destroyed, double* out);

void forward(int n, const float* in, std::complex<float>* out);
void inverse(int n, std::complex<float>* in_destroyed, float* out);

}  // namespace vortex::fft
