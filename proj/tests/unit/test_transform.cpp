#include <doctest.h>

#include <cmath>
#include <numbers>
#include <map>
#include <set>

#include "optisph/basis.hpp"
#include "optisph/errors.hpp"
#include "optisph/experiments.hpp"
#include "optisph/oracle.hpp"
#include "optisph/transform.hpp"

using namespace optisph;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

const ColatitudeGrid& grid_for(int L) {
  static std::map<int, ColatitudeGrid> cache;
  auto it = cache.find(L);
  if (it == cache.end()) it = cache.emplace(L, make_grid(L, Measure::Uniform, Ordering::ConditionMinimized)).first;
  return it->second;
}

double max_diff(std::span<const cd> a, std::span<const cd> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double l2(std::span<const cd> a) {
  double s = 0.0;
  for (auto x : a) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("coefficient and sample containers") {
  std::set<std::size_t> seen;
  for (int ell = 0; ell < 9; ++ell)
    for (int m = -ell; m <= ell; ++m) seen.insert(HarmonicCoefficients::index(ell, m));
  CHECK(seen.size() == 81);
  CHECK(*seen.rbegin() == 80);

  HarmonicCoefficients c(3);
  CHECK(c.size() == 9);
  c(2, -1) = {1.0, 2.0};
  CHECK(c.values()[HarmonicCoefficients::index(2, -1)] == cd(1.0, 2.0));
  CHECK_THROWS_AS(c(3, 0), Error);
  CHECK_THROWS_AS(c(1, 2), Error);
  CHECK_THROWS_AS(HarmonicCoefficients(0), Error);

  SpatialSamples s(4);
  CHECK(s.size() == 16);
  for (int k = 0; k < 4; ++k) CHECK(s.ring(k).size() == static_cast<std::size_t>(2 * k + 1));
  s(2, 3) = 5.0;
  CHECK(s.values()[4 + 3] == cd(5.0));
}

TEST_CASE("ring analysis") {
  std::vector<cd> constant(5, cd(0.5, -1.0));
  const auto [p0, n0] = ring_analysis(constant, 0);
  CHECK(std::abs(p0 - 2 * pi * cd(0.5, -1.0)) < 1e-14);
  CHECK(p0 == n0);

  std::vector<cd> tone(3);
  for (int j = 0; j < 3; ++j) tone[j] = std::polar(1.0, 2 * pi * j / 3);
  const auto [p1, n1] = ring_analysis(tone, 1);
  CHECK(std::abs(p1 - 2 * pi) < 1e-14);
  CHECK(std::abs(n1) < 1e-14);

  CHECK_THROWS_AS(ring_analysis(tone, 2), Error);
  try {
    ring_analysis(tone, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AliasingRisk);
  }
  CHECK_THROWS_AS(ring_analysis(std::vector<cd>(4), 0), Error);
}

TEST_CASE("inverse transform examples") {
  const auto& grid = grid_for(6);
  HarmonicCoefficients ones(6);
  ones(0, 0) = std::sqrt(4 * pi);
  const auto s = inverse_sht(ones, grid);
  for (auto v : s.values()) CHECK(std::abs(v - 1.0) < 1e-14);

  HarmonicCoefficients zonal(6);
  zonal(1, 0) = 1.0;
  const auto z = inverse_sht(zonal, grid);
  for (int k = 0; k < 6; ++k)
    for (auto v : z.ring(k)) CHECK(std::abs(v - std::sqrt(3 / (4 * pi)) * std::cos(grid.theta(k))) < 1e-14);

  CHECK_THROWS_AS(inverse_sht(HarmonicCoefficients(5), grid), Error);
}

TEST_CASE("inverse transform agrees with direct synthesis and the literal reference") {
  for (int L : {8, 16, 23}) {
    UniformSource rng(99, static_cast<std::uint64_t>(L));
    const auto coeffs = random_coefficients(L, rng);
    const auto fast = inverse_sht(coeffs, grid_for(L));
    CHECK(max_diff(fast.values(), oracle::direct_synthesis(coeffs, grid_for(L)).values()) <= 1e-12);
    CHECK(max_diff(fast.values(), inverse_sht_reference(coeffs, grid_for(L)).values()) <= 1e-12);
    CHECK(inverse_sht(coeffs, grid_for(L), {Execution::Serial}) == fast);
  }
}

TEST_CASE("forward transform examples") {
  const auto& grid = grid_for(10);
  SpatialSamples ones(10);
  for (auto& v : ones.values()) v = 1.0;
  const auto f = forward_sht(ones, grid);
  CHECK(std::abs(f(0, 0) - std::sqrt(4 * pi)) < 1e-12);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(std::abs(f.values()[i]) <= 1e-12);

  const int L = 16;
  const auto& g16 = grid_for(L);
  SpatialSamples top(L);
  for (int k = 0; k < L; ++k) {
    const double p = legendre_column(L - 1, g16.theta(k), L).at(L - 1);
    const auto phis = ring_longitudes(k).phis;
    for (int j = 0; j <= 2 * k; ++j) top(k, j) = 2 * pi * p * std::polar(1.0, (L - 1) * phis[j]);
  }
  const auto h = forward_sht(top, g16);
  CHECK(std::abs(h(L - 1, L - 1) - 2 * pi) < 1e-10);
  double rest = 0.0;
  for (int ell = 0; ell < L; ++ell)
    for (int m = -ell; m <= ell; ++m)
      if (ell != L - 1 || m != L - 1) rest = std::max(rest, std::abs(h(ell, m)));
  CHECK(rest < 1e-10);

  CHECK_THROWS_AS(forward_sht(SpatialSamples(9), grid), Error);
}

TEST_CASE("round trips at L = 64") {
  const auto& grid = grid_for(64);
  const auto e1 = run_exp1(grid, 3, 1);
  CHECK(e1.e_max <= 1e-7);
  CHECK(e1.e_mean <= 1e-9);
  const auto e2 = run_exp2(grid, 3, 1);
  CHECK(e2.e_max <= 1e-7);
}

TEST_CASE("forward transform is linear") {
  const int L = 32;
  UniformSource rng(5);
  const auto a = random_samples(L, rng);
  const auto b = random_samples(L, rng);
  const cd alpha(0.7, -0.2), beta(-1.3, 0.4);
  SpatialSamples mix(L);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = alpha * a.values()[i] + beta * b.values()[i];
  const auto fa = forward_sht(a, grid_for(L));
  const auto fb = forward_sht(b, grid_for(L));
  const auto fm = forward_sht(mix, grid_for(L));
  std::vector<cd> expect(fm.size());
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = alpha * fa.values()[i] + beta * fb.values()[i];
  CHECK(max_diff(fm.values(), expect) / l2(expect) <= 1e-11);
}

TEST_CASE("peel modes and execution modes agree") {
  for (int L : {1, 2, 7, 32, 64}) {
    UniformSource rng(17, static_cast<std::uint64_t>(L));
    const auto coeffs = random_coefficients(L, rng);
    const auto samples = inverse_sht(coeffs, grid_for(L));
    const auto spatial = forward_sht(samples, grid_for(L));
    const auto spectral = forward_sht(samples, grid_for(L), {Execution::Parallel, PeelMode::Spectral});
    CHECK(max_diff(spatial.values(), spectral.values()) <= 1e-12);
    CHECK(forward_sht(samples, grid_for(L), {Execution::Serial, PeelMode::Spatial}) == spatial);
    CHECK(forward_sht(samples, grid_for(L), {Execution::Serial, PeelMode::Spectral}) == spectral);
  }
}

TEST_CASE("forward transform leaves its input intact and reports timings") {
  UniformSource rng(2);
  const auto samples = random_samples(12, rng);
  const auto copy = samples;
  ForwardStats stats;
  forward_sht(samples, grid_for(12), {}, &stats);
  CHECK(samples == copy);
  CHECK(stats.solve_seconds >= 0.0);
  CHECK(stats.solve_seconds <= stats.total_seconds);
}

TEST_CASE("spin transforms") {
  const int L = 16;
  UniformSource rng(8);
  const auto coeffs = random_coefficients(L, rng);
  const auto scalar_inv = inverse_sht(coeffs, grid_for(L));
  const auto spin_inv = spin_inverse_sht(coeffs, grid_for(L), 0);
  CHECK(spin_inv == scalar_inv);
  CHECK(spin_forward_sht(scalar_inv, grid_for(L), 0) == forward_sht(scalar_inv, grid_for(L)));

  for (int s : {1, -1}) {
    HarmonicCoefficients single(L);
    single(1, 0) = 1.0;
    const auto back = spin_forward_sht(spin_inverse_sht(single, grid_for(L), s), grid_for(L), s);
    CHECK(max_diff(back.values(), single.values()) <= 1e-10);
  }

  // Spin-1 synthesis of a single coefficient is the spin harmonic itself.
  HarmonicCoefficients one(L);
  one(2, 1) = 1.0;
  const auto samples = spin_inverse_sht(one, grid_for(L), 1);
  for (int k = 1; k < L; k += 5) {
    const double v = spin_column(1, 1, grid_for(L).theta(k), L).at(2);
    const auto phis = ring_longitudes(k).phis;
    for (int j = 0; j <= 2 * k; ++j) CHECK(std::abs(samples(k, j) - v * std::polar(1.0, phis[j])) < 1e-13);
  }

  CHECK_THROWS_AS(spin_inverse_sht(coeffs, grid_for(L), 16), Error);
  CHECK_THROWS_AS(spin_forward_sht(scalar_inv, grid_for(L), -16), Error);
}

TEST_CASE("coefficient energy matches the dense least-squares oracle") {
  const int L = 8;
  UniformSource rng(21);
  const auto coeffs = random_coefficients(L, rng);
  const auto samples = oracle::direct_synthesis(coeffs, grid_for(L));
  const auto fast = forward_sht(samples, grid_for(L));
  const auto dense = oracle::dense_lsq_analysis(samples, grid_for(L));
  const double e_fast = l2(fast.values()), e_dense = l2(dense.values());
  CHECK(std::abs(e_fast * e_fast - e_dense * e_dense) <= 1e-10 * e_dense * e_dense);
  CHECK(std::abs(e_fast - l2(coeffs.values())) <= 1e-10 * e_fast);
}
