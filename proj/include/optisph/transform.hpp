#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "optisph/execution.hpp"
#include "optisph/pm_system.hpp"
#include "optisph/sampling.hpp"

namespace optisph {

/// f_l^m for 0 <= l < L, |m| <= l, stored at l^2 + l + m.
class HarmonicCoefficients {
 public:
  explicit HarmonicCoefficients(int band_limit);

  static std::size_t index(int ell, int m) noexcept {
    return static_cast<std::size_t>(ell * ell + ell + m);
  }

  int band_limit() const noexcept { return band_limit_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::complex<double>& operator()(int ell, int m);
  const std::complex<double>& operator()(int ell, int m) const;

  std::span<std::complex<double>> values() noexcept { return values_; }
  std::span<const std::complex<double>> values() const noexcept { return values_; }

  friend bool operator==(const HarmonicCoefficients&, const HarmonicCoefficients&) = default;

 private:
  int band_limit_;
  ComplexVector values_;
};

/// Ring k holds f(theta_k, 2 pi j / (2k+1)), j = 0..2k. Rings are stored
/// back to back, so ring k starts at offset k^2.
class SpatialSamples {
 public:
  explicit SpatialSamples(int band_limit);

  int band_limit() const noexcept { return band_limit_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<std::complex<double>> ring(int k);
  std::span<const std::complex<double>> ring(int k) const;

  std::complex<double>& operator()(int k, int j) { return ring(k)[static_cast<std::size_t>(j)]; }
  const std::complex<double>& operator()(int k, int j) const { return ring(k)[static_cast<std::size_t>(j)]; }

  std::span<std::complex<double>> values() noexcept { return values_; }
  std::span<const std::complex<double>> values() const noexcept { return values_; }

  friend bool operator==(const SpatialSamples&, const SpatialSamples&) = default;

 private:
  int band_limit_;
  ComplexVector values_;
};

/// How the forward pass removes the order-m contribution from rings k < m.
/// Spatial subtracts f~_m sample by sample (the literal algorithm); Spectral
/// keeps one DFT per ring and subtracts at the aliased bins +-m mod (2k+1).
enum class PeelMode { Spatial, Spectral };

struct TransformOptions {
  Execution execution = Execution::Parallel;
  PeelMode peel = PeelMode::Spatial;
};

struct ForwardStats {
  double solve_seconds = 0.0;  // factorizing P_m and solving, summed over m
  double total_seconds = 0.0;
};

/// (Delta_k sum_j x_j e^{-i m phi_j}, Delta_k sum_j x_j e^{+i m phi_j}) for a
/// ring of 2k+1 samples. Throws AliasingRisk if |m| > k.
std::pair<std::complex<double>, std::complex<double>> ring_analysis(
    std::span<const std::complex<double>> ring_values, int m);

/// Separation-of-variables synthesis: G_m(theta_k) for every order, folded
/// into the ring's DFT bins and inverted with one FFT per ring.
SpatialSamples inverse_sht(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid,
                           const TransformOptions& options = {});

/// Literal accumulation of f~_m sample by sample. Serial; O(L^4).
SpatialSamples inverse_sht_reference(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid);

/// Order peeling from m = L-1 down to 0. The input is copied, not modified.
HarmonicCoefficients forward_sht(const SpatialSamples& samples, const ColatitudeGrid& grid,
                                 const TransformOptions& options = {}, ForwardStats* stats = nullptr);

/// Spin-s versions. Coefficients with l < |s| are zero. s = 0 runs exactly
/// the scalar code path.
SpatialSamples spin_inverse_sht(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid, int spin,
                                const TransformOptions& options = {});
HarmonicCoefficients spin_forward_sht(const SpatialSamples& samples, const ColatitudeGrid& grid, int spin,
                                      const TransformOptions& options = {}, ForwardStats* stats = nullptr);

}  // namespace optisph
