#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optisph/errors.hpp"
#include "optisph/experiments.hpp"
#include "optisph/oracle.hpp"
#include "optisph/transform.hpp"

using namespace optisph;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

double rel_diff(std::span<const cd> a, std::span<const cd> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(a[i]);
  }
  return std::sqrt(num / den);
}

double coefwise_rel(std::span<const cd> truth, std::span<const cd> got) {
  double scale = 0.0, worst = 0.0;
  for (auto x : truth) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < truth.size(); ++i) worst = std::max(worst, std::abs(truth[i] - got[i]));
  return worst / scale;
}

}  // namespace

TEST_CASE("direct synthesis examples") {
  const auto grid = make_grid(5, Measure::Uniform, Ordering::Interleaved);
  HarmonicCoefficients ones(5);
  ones(0, 0) = std::sqrt(4 * pi);
  const auto flat = oracle::direct_synthesis(ones, grid);
  for (auto v : flat.values()) CHECK(std::abs(v - 1.0) < 1e-14);

  HarmonicCoefficients d11(5);
  d11(1, 1) = 1.0;
  const auto s = oracle::direct_synthesis(d11, grid);
  for (int k = 0; k < 5; ++k) {
    const auto phis = ring_longitudes(k).phis;
    for (int j = 0; j <= 2 * k; ++j) {
      const cd expect = -std::sqrt(3 / (8 * pi)) * std::sin(grid.theta(k)) * std::polar(1.0, phis[j]);
      CHECK(std::abs(s(k, j) - expect) < 1e-14);
    }
  }
}

TEST_CASE("size guards") {
  const auto big = make_grid(oracle::kDenseAnalysisMaxBandLimit + 1, Measure::Uniform, Ordering::Interleaved);
  try {
    oracle::dense_lsq_analysis(SpatialSamples(big.band_limit()), big);
    FAIL("expected a size guard");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SizeGuard);
  }
  const auto huge = make_grid(oracle::kDirectSynthesisMaxBandLimit + 1, Measure::Uniform, Ordering::Interleaved);
  CHECK_THROWS_AS(oracle::direct_synthesis(HarmonicCoefficients(huge.band_limit()), huge), Error);

  const auto small = make_grid(4, Measure::Uniform, Ordering::Interleaved);
  try {
    oracle::direct_synthesis(HarmonicCoefficients(5), small);
    FAIL("expected a mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BandLimitMismatch);
  }
}

TEST_CASE("forward transform inverts direct synthesis") {
  for (int L : {8, 16, 32}) {
    const auto grid = make_grid(L, Measure::Uniform, Ordering::ConditionMinimized);
    UniformSource rng(4, static_cast<std::uint64_t>(L));
    const auto coeffs = random_coefficients(L, rng);
    const auto back = forward_sht(oracle::direct_synthesis(coeffs, grid), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) worst = std::max(worst, std::abs(back.values()[i] - coeffs.values()[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("dense least squares recovers coefficients and agrees with the fast path") {
  const int L = 16;
  const auto grid = make_grid(L, Measure::Uniform, Ordering::ConditionMinimized);
  UniformSource rng(12);
  const auto coeffs = random_coefficients(L, rng);
  const auto samples = oracle::direct_synthesis(coeffs, grid);

  const auto lu = oracle::dense_lsq_analysis(samples, grid);
  const auto qr = oracle::dense_lsq_analysis(samples, grid, {oracle::DenseSolver::PivotedQR});
  const auto fast = forward_sht(samples, grid);
  CHECK(rel_diff(coeffs.values(), lu.values()) <= 1e-8);
  CHECK(rel_diff(coeffs.values(), qr.values()) <= 1e-8);
  CHECK(coefwise_rel(lu.values(), fast.values()) <= 1e-8);
  CHECK(coefwise_rel(qr.values(), fast.values()) <= 1e-8);
}
