#include "optisph/transform.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "optisph/basis.hpp"
#include "optisph/errors.hpp"
#include "optisph/fft.hpp"

namespace optisph {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_band_limit(int band_limit) {
  if (band_limit < 1) throw Error(Errc::InvalidBandLimit, "band-limit must be >= 1, got " + std::to_string(band_limit));
}

void check_match(int data_limit, const ColatitudeGrid& grid) {
  if (data_limit != grid.band_limit())
    throw Error(Errc::BandLimitMismatch, "data band-limit " + std::to_string(data_limit) +
                                             " does not match grid band-limit " + std::to_string(grid.band_limit()));
}

int wrap(long long m, int n) {
  const long long r = m % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

/// e^{i m 2 pi j / n} with the phase reduced exactly in integers first.
cplx twiddle(int m, int j, int n) {
  const int r = wrap(static_cast<long long>(m) * j, n);
  return std::polar(1.0, kTwoPi * r / n);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Latitudinal basis for spin s. For s = 0 the -m column is (-1)^m times the
/// +m column and is never evaluated separately.
class Basis {
 public:
  Basis(int band_limit, int spin) : band_limit_(band_limit), spin_(spin) {
    if (std::abs(spin) >= band_limit)
      throw Error(Errc::OutOfRange,
                  "spin " + std::to_string(spin) + " needs band-limit > " + std::to_string(std::abs(spin)));
  }

  int band_limit() const noexcept { return band_limit_; }
  bool symmetric() const noexcept { return spin_ == 0; }
  int min_degree(int m) const noexcept { return std::max(std::abs(m), std::abs(spin_)); }
  int length(int m) const noexcept { return band_limit_ - min_degree(m); }

  void column(int m, double theta, std::span<double> out) const {
    spin_values(spin_, m, theta, band_limit_, out.first(static_cast<std::size_t>(length(m))));
  }

  /// G_m(theta) = 2 pi sum_l f_l^m Y_l^m(theta, 0), given the column for m.
  cplx g_value(const HarmonicCoefficients& f, int m, std::span<const double> col, double sign = 1.0) const {
    const int l0 = min_degree(m);
    cplx acc{0.0, 0.0};
    for (int ell = l0; ell < band_limit_; ++ell) acc += f(ell, m) * col[static_cast<std::size_t>(ell - l0)];
    return kTwoPi * sign * acc;
  }

  /// G_m and G_{-m} at theta; for m = 0 the second entry is zero.
  std::pair<cplx, cplx> g_pair(const HarmonicCoefficients& f, int m, double theta, std::span<double> scratch) const {
    column(m, theta, scratch);
    const cplx gp = g_value(f, m, scratch);
    if (m == 0) return {gp, cplx{}};
    if (symmetric()) return {gp, g_value(f, -m, scratch, (m % 2 == 0) ? 1.0 : -1.0)};
    column(-m, theta, scratch);
    return {gp, g_value(f, -m, scratch)};
  }

  LegendreBlock block(const ColatitudeGrid& grid, int m) const {
    if (symmetric()) return build_block(grid, std::abs(m));
    const auto suffix = grid.suffix(std::abs(m));
    const auto rows = static_cast<Eigen::Index>(suffix.size());
    const auto cols = static_cast<Eigen::Index>(length(m));
    LegendreBlock b;
    b.order = std::abs(m);
    b.entries.resize(rows, cols);
    std::vector<double> col(static_cast<std::size_t>(cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
      column(m, suffix[static_cast<std::size_t>(r)], col);
      for (Eigen::Index c = 0; c < cols; ++c) b.entries(r, c) = kTwoPi * col[static_cast<std::size_t>(c)];
    }
    return b;
  }

 private:
  int band_limit_;
  int spin_;
};

SpatialSamples inverse_engine(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid, const Basis& basis,
                              const TransformOptions& options) {
  check_match(coeffs.band_limit(), grid);
  const int L = grid.band_limit();
  SpatialSamples out(L);
  const bool parallel = options.execution == Execution::Parallel;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < L; ++k) {
    const int n = 2 * k + 1;
    const double theta = grid.theta(k);
    std::vector<double> scratch(static_cast<std::size_t>(L));
    ComplexVector bins(static_cast<std::size_t>(n), cplx{});
    for (int m = 0; m < L; ++m) {
      const auto [gp, gm] = basis.g_pair(coeffs, m, theta, scratch);
      bins[static_cast<std::size_t>(wrap(m, n))] += gp;
      if (m > 0) bins[static_cast<std::size_t>(wrap(-m, n))] += gm;
    }
    auto ring = out.ring(k);
    fft::backward(bins, ring);
    for (auto& v : ring) v /= kTwoPi;
  }
  return out;
}

HarmonicCoefficients forward_engine(const SpatialSamples& samples, const ColatitudeGrid& grid, const Basis& basis,
                                    const TransformOptions& options, ForwardStats* stats) {
  const auto t_start = std::chrono::steady_clock::now();
  check_match(samples.band_limit(), grid);
  const int L = grid.band_limit();
  const bool parallel = options.execution == Execution::Parallel;
  const bool spectral = options.peel == PeelMode::Spectral;

  SpatialSamples work = samples;
  // spec ring k holds (2 pi / (2k+1)) * DFT(ring k), so bin +-m reads G_{+-m}(theta_k).
  SpatialSamples spec(L);
  auto analyze = [&](int k) {
    auto dst = spec.ring(k);
    fft::forward(work.ring(k), dst);
    const double scale = kTwoPi / static_cast<double>(dst.size());
    for (auto& v : dst) v *= scale;
  };
  if (spectral) {
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 0; k < L; ++k) analyze(k);
  }

  HarmonicCoefficients f(L);
  double solve_seconds = 0.0;
  for (int m = L - 1; m >= 0; --m) {
    if (!spectral) analyze(m);

    const auto rows = static_cast<std::size_t>(L - m);
    GVector gp{m, ComplexVector(rows)};
    GVector gm{-m, ComplexVector(rows)};
    for (int k = m; k < L; ++k) {
      const auto bins = spec.ring(k);
      const int n = static_cast<int>(bins.size());
      gp.values[static_cast<std::size_t>(k - m)] = bins[static_cast<std::size_t>(wrap(m, n))];
      gm.values[static_cast<std::size_t>(k - m)] = bins[static_cast<std::size_t>(wrap(-m, n))];
    }

    auto store = [&](int order, const CoefficientSlice& slice) {
      const int l0 = basis.min_degree(order);
      for (int ell = l0; ell < L; ++ell) f(ell, order) = slice.values[static_cast<std::size_t>(ell - l0)];
    };
    if (basis.symmetric()) {
      LegendreBlock block = basis.block(grid, m);
      const auto t0 = std::chrono::steady_clock::now();
      const BlockSolver solver(std::move(block));
      store(m, solver.solve(gp));
      if (m > 0) store(-m, solver.solve(gm));
      solve_seconds += seconds_since(t0);
    } else {
      LegendreBlock block = basis.block(grid, m);
      auto t0 = std::chrono::steady_clock::now();
      store(m, BlockSolver(std::move(block)).solve(gp));
      solve_seconds += seconds_since(t0);
      if (m > 0) {
        LegendreBlock neg = basis.block(grid, -m);
        gm.order = m;  // separate block, no structural sign
        t0 = std::chrono::steady_clock::now();
        store(-m, BlockSolver(std::move(neg)).solve(gm));
        solve_seconds += seconds_since(t0);
      }
    }

    if (m == 0) break;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 0; k < m; ++k) {
      std::vector<double> scratch(static_cast<std::size_t>(L));
      const auto [g_plus, g_minus] = basis.g_pair(f, m, grid.theta(k), scratch);
      if (spectral) {
        auto bins = spec.ring(k);
        const int n = static_cast<int>(bins.size());
        bins[static_cast<std::size_t>(wrap(m, n))] -= g_plus;
        bins[static_cast<std::size_t>(wrap(-m, n))] -= g_minus;
      } else {
        auto ring = work.ring(k);
        const int n = static_cast<int>(ring.size());
        for (int j = 0; j < n; ++j) {
          const cplx e = twiddle(m, j, n);
          ring[static_cast<std::size_t>(j)] -= (e * g_plus + std::conj(e) * g_minus) / kTwoPi;
        }
      }
    }
  }

  if (stats != nullptr) {
    stats->solve_seconds = solve_seconds;
    stats->total_seconds = seconds_since(t_start);
  }
  return f;
}

}  // namespace

HarmonicCoefficients::HarmonicCoefficients(int band_limit) : band_limit_(band_limit) {
  check_band_limit(band_limit);
  values_.assign(static_cast<std::size_t>(band_limit) * static_cast<std::size_t>(band_limit), cplx{});
}

std::complex<double>& HarmonicCoefficients::operator()(int ell, int m) {
  if (ell < 0 || ell >= band_limit_ || std::abs(m) > ell)
    throw Error(Errc::OutOfRange, "coefficient (" + std::to_string(ell) + ", " + std::to_string(m) + ") outside L=" +
                                      std::to_string(band_limit_));
  return values_[index(ell, m)];
}

const std::complex<double>& HarmonicCoefficients::operator()(int ell, int m) const {
  return const_cast<HarmonicCoefficients&>(*this)(ell, m);
}

SpatialSamples::SpatialSamples(int band_limit) : band_limit_(band_limit) {
  check_band_limit(band_limit);
  values_.assign(static_cast<std::size_t>(band_limit) * static_cast<std::size_t>(band_limit), cplx{});
}

std::span<std::complex<double>> SpatialSamples::ring(int k) {
  if (k < 0 || k >= band_limit_)
    throw Error(Errc::OutOfRange, "ring " + std::to_string(k) + " outside L=" + std::to_string(band_limit_));
  return std::span<cplx>(values_).subspan(static_cast<std::size_t>(k) * static_cast<std::size_t>(k),
                                          static_cast<std::size_t>(2 * k + 1));
}

std::span<const std::complex<double>> SpatialSamples::ring(int k) const {
  return const_cast<SpatialSamples&>(*this).ring(k);
}

std::pair<std::complex<double>, std::complex<double>> ring_analysis(std::span<const std::complex<double>> ring_values,
                                                                    int m) {
  const auto size = ring_values.size();
  if (size % 2 == 0) throw Error(Errc::InvalidInput, "ring length must be odd (2k+1)");
  const int n = static_cast<int>(size);
  const int k = (n - 1) / 2;
  if (std::abs(m) > k)
    throw Error(Errc::AliasingRisk, "order " + std::to_string(m) + " aliases on a ring of " + std::to_string(n) +
                                        " samples (k=" + std::to_string(k) + ")");
  cplx plus{}, minus{};
  for (int j = 0; j < n; ++j) {
    const cplx e = twiddle(m, j, n);
    plus += ring_values[static_cast<std::size_t>(j)] * std::conj(e);
    minus += ring_values[static_cast<std::size_t>(j)] * e;
  }
  const double delta = kTwoPi / n;
  return {delta * plus, delta * minus};
}

SpatialSamples inverse_sht(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid,
                           const TransformOptions& options) {
  return inverse_engine(coeffs, grid, Basis(grid.band_limit(), 0), options);
}

SpatialSamples inverse_sht_reference(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid) {
  check_match(coeffs.band_limit(), grid);
  const int L = grid.band_limit();
  const Basis basis(L, 0);
  SpatialSamples out(L);
  std::vector<double> scratch(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m) {
    for (int k = 0; k < L; ++k) {
      const auto [gp, gm] = basis.g_pair(coeffs, m, grid.theta(k), scratch);
      auto ring = out.ring(k);
      const int n = static_cast<int>(ring.size());
      for (int j = 0; j < n; ++j) {
        const cplx e = twiddle(m, j, n);
        ring[static_cast<std::size_t>(j)] += (m == 0 ? gp : e * gp + std::conj(e) * gm) / kTwoPi;
      }
    }
  }
  return out;
}

HarmonicCoefficients forward_sht(const SpatialSamples& samples, const ColatitudeGrid& grid,
                                 const TransformOptions& options, ForwardStats* stats) {
  return forward_engine(samples, grid, Basis(grid.band_limit(), 0), options, stats);
}

SpatialSamples spin_inverse_sht(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid, int spin,
                                const TransformOptions& options) {
  return inverse_engine(coeffs, grid, Basis(grid.band_limit(), spin), options);
}

HarmonicCoefficients spin_forward_sht(const SpatialSamples& samples, const ColatitudeGrid& grid, int spin,
                                      const TransformOptions& options, ForwardStats* stats) {
  return forward_engine(samples, grid, Basis(grid.band_limit(), spin), options, stats);
}

}  // namespace optisph
