#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace tfs::fft {

using cplx = std::complex<double>;

// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t next_fast_size(std::size_t n);

// Unnormalized transforms backed by cached FFTW plans. All functions are
// safe to call concurrently; plan creation is serialized internally.
//
// forward:  X[q] = sum_n x[n] exp(-2 pi i q n / N)
// inverse:  x[n] = sum_q X[q] exp(+2 pi i q n / N)   (no 1/N factor)
void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

// Real-to-half-complex: out.size() must be in.size() / 2 + 1.
void forward_real(std::span<const double> in, std::span<cplx> out);
// Half-complex-to-real of length out.size(); in.size() must be out.size() / 2 + 1.
void inverse_real(std::span<const cplx> in, std::span<double> out);

}  // namespace tfs::fft
