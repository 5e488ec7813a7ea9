#pragma once

#include <complex>
#include <span>

namespace optisph::fft {

/// Unnormalized DFT of arbitrary length n: out[b] = sum_j in[j] e^{-2 pi i b j / n}.
/// In-place is allowed. Backed by cached FFTW plans; safe to call concurrently.
void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

/// Unnormalized inverse: out[j] = sum_b in[b] e^{+2 pi i b j / n}.
void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace optisph::fft
