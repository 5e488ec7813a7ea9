#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "optisph/basis.hpp"
#include "optisph/errors.hpp"
#include "optisph/sampling.hpp"

using namespace optisph;
using std::numbers::pi;

TEST_CASE("legendre column examples") {
  for (double theta : {0.1, 1.0, pi / 2, 3.0, pi}) CHECK(legendre_column(0, theta, 3).at(0) == doctest::Approx(0.2820948).epsilon(1e-7));
  CHECK(std::abs(legendre_column(0, pi / 2, 2).at(1)) < 1e-16);
  CHECK(legendre_column(1, pi / 2, 2).at(1) == doctest::Approx(-std::sqrt(3.0 / (8 * pi))).epsilon(1e-15));
  CHECK(legendre_column(1, pi / 2, 2).at(1) == doctest::Approx(legendre_direct(1, 1, pi / 2)).epsilon(1e-15));
  CHECK_THROWS_AS(legendre_column(4, 1.0, 4), Error);
  CHECK_THROWS_AS(legendre_column(-4, 1.0, 4), Error);
}

TEST_CASE("legendre_direct examples") {
  CHECK(legendre_direct(0, 0, 0.7) == doctest::Approx(1.0 / std::sqrt(4 * pi)));
  CHECK(legendre_direct(1, -1, 0.7) == doctest::Approx(-legendre_direct(1, 1, 0.7)).epsilon(1e-15));
  CHECK(legendre_direct(2, 0, 1e-300) == doctest::Approx(0.6307831).epsilon(1e-7));
  CHECK_THROWS_AS(legendre_direct(31, 0, 1.0), Error);
  CHECK_THROWS_AS(legendre_direct(3, 4, 1.0), Error);
}

TEST_CASE("recurrence matches the direct definition, parity and symmetry") {
  const auto grid = make_grid(32, Measure::Uniform, Ordering::Interleaved);
  double worst = 0.0, worst_parity = 0.0, worst_sym = 0.0;
  for (double theta : grid.thetas()) {
    for (int m = -10; m <= 10; ++m) {
      const auto col = legendre_column(m, theta, 11);
      const auto mirror = legendre_column(m, theta < pi ? pi - theta : pi, 11);
      const auto neg = legendre_column(-m, theta, 11);
      for (int ell = std::abs(m); ell <= 10; ++ell) {
        worst = std::max(worst, std::abs(col.at(ell) - legendre_direct(ell, m, theta)));
        if (theta < pi) {
          const double sign = ((ell + m) % 2 == 0) ? 1.0 : -1.0;
          worst_parity = std::max(worst_parity, std::abs(mirror.at(ell) - sign * col.at(ell)));
        }
        const double msign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
        worst_sym = std::max(worst_sym, std::abs(neg.at(ell) - msign * col.at(ell)));
      }
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_parity <= 1e-12);
  CHECK(worst_sym == 0.0);
}

TEST_CASE("recurrence matches the Wigner-d formula") {
  double worst = 0.0;
  for (double theta : {0.05, 0.9, 2.2, 3.1}) {
    for (int m = -12; m <= 12; ++m) {
      const auto col = legendre_column(m, theta, 13);
      for (int ell = std::abs(m); ell <= 12; ++ell)
        worst = std::max(worst, std::abs(col.at(ell) - oracles::scalar_harmonic(ell, m, theta)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("orthonormality under Gauss quadrature") {
  const int n = 40;
  const auto [x, w] = oracles::gauss_legendre(n);
  for (int m = 0; m <= 16; ++m) {
    std::vector<std::vector<double>> cols;
    for (int i = 0; i < n; ++i) cols.push_back(legendre_column(m, std::acos(x[i]), 17).values);
    for (int a = m; a <= 16; ++a)
      for (int b = m; b <= 16; ++b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * cols[i][a - m] * cols[i][b - m];
        s *= 2.0 * pi;
        CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) <= 1e-10);
      }
  }
}

TEST_CASE("no overflow or underflow at L = 4096 near the pole") {
  const int L = 4096;
  const double theta = pi / (2.0 * L - 1.0);
  for (int m : {0, 1, 100, 2000, 4095}) {
    const auto col = legendre_column(m, theta, L);
    bool finite = true, bounded = true;
    for (int ell = m; ell < L; ++ell) {
      const double v = col.at(ell);
      finite = finite && std::isfinite(v);
      bounded = bounded && std::abs(v) <= std::sqrt((2.0 * ell + 1.0) / (4 * pi)) * (1 + 1e-12);
    }
    CHECK(finite);
    CHECK(bounded);
  }
  // Low orders are not flushed: P~_l^1 near the pole is of order l^2 * theta.
  const auto col1 = legendre_column(1, theta, L);
  CHECK(std::abs(col1.at(L - 1)) > 1e-3);
  // High orders at the pole are genuinely tiny but the column recovers to O(1)
  // magnitudes at the equator.
  const auto eq = legendre_column(4000, pi / 2, L);
  CHECK(std::abs(eq.at(4000)) > 1e-3);
}

TEST_CASE("spin columns") {
  for (double theta : {0.3, pi / 3, 2.5})
    for (int m = -3; m <= 3; ++m) {
      const auto spin = spin_column(0, m, theta, 6);
      const auto scalar = legendre_column(m, theta, 6);
      REQUIRE(spin.values.size() == scalar.values.size());
      for (std::size_t i = 0; i < spin.values.size(); ++i) CHECK(spin.values[i] == scalar.values[i]);
    }
  CHECK(spin_column(0, 1, pi / 3, 2).at(1) == legendre_column(1, pi / 3, 2).values[0]);

  // d^1_{1,1}(theta) = cos^2(theta/2).
  for (double theta : {0.2, 1.4, 2.9}) {
    const double c = std::cos(theta / 2);
    CHECK(spin_column(1, 1, theta, 2).at(1) ==
          doctest::Approx(-std::sqrt(3.0 / (4 * pi)) * c * c).epsilon(1e-14));
  }

  double worst = 0.0;
  for (double theta : {0.1, 0.8, pi / 2, 2.3, 3.0, pi})
    for (int s = -3; s <= 3; ++s)
      for (int m = -3; m <= 3; ++m) {
        const auto col = spin_column(s, m, theta, 4);
        CHECK(col.min_degree() == std::max(std::abs(m), std::abs(s)));
        for (int ell = col.min_degree(); ell <= 3; ++ell)
          worst = std::max(worst, std::abs(col.at(ell) - oracles::spin_harmonic(s, ell, m, theta)));
      }
  CHECK(worst <= 1e-12);
}

TEST_CASE("spin columns at higher degree") {
  double worst = 0.0;
  for (double theta : {0.05, 1.1, 2.7})
    for (int s : {-2, 1, 3})
      for (int m : {-9, -2, 0, 4, 11}) {
        const auto col = spin_column(s, m, theta, 16);
        for (int ell = col.min_degree(); ell < 16; ++ell)
          worst = std::max(worst, std::abs(col.at(ell) - oracles::spin_harmonic(s, ell, m, theta)));
      }
  CHECK(worst <= 1e-11);
}

TEST_CASE("spin reflection") {
  // sY_l^m(theta) = (-1)^(l+m) (-s)Y_l^m(pi - theta).
  for (double theta : {0.4, 1.3, 2.8})
    for (int s = -2; s <= 2; ++s)
      for (int m = -3; m <= 3; ++m) {
        const auto a = spin_column(s, m, theta, 5);
        const auto b = spin_column(-s, m, pi - theta, 5);
        for (int ell = a.min_degree(); ell < 5; ++ell) {
          const double sign = ((ell + m) % 2 == 0) ? 1.0 : -1.0;
          CHECK(std::abs(a.at(ell) - sign * b.at(ell)) <= 1e-12);
          CHECK(std::abs(oracles::wigner_d(ell, m, -s, pi - theta) - sign * oracles::wigner_d(ell, m, s, theta)) <=
                1e-12);
        }
      }
}

TEST_CASE("spin range errors") {
  CHECK_THROWS_AS(spin_column(4, 0, 1.0, 4), Error);
  CHECK_THROWS_AS(spin_column(0, -4, 1.0, 4), Error);
  CHECK_THROWS_AS(spin_column(1, 0, 0.0, 4), Error);
}
