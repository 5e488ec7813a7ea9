#include "optisph/basis.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "optisph/errors.hpp"

namespace optisph {
namespace {

// Magnitudes stay inside [2^-kRescaleBits, 2^kRescaleBits]; the true value is
// ldexp(scaled, exponent).
constexpr int kRescaleBits = 500;
const double kRescaleHigh = std::ldexp(1.0, kRescaleBits);
const double kRescaleLow = std::ldexp(1.0, -kRescaleBits);

/// Mantissa/exponent pair for products that leave the double range.
struct ScaledReal {
  double mant = 1.0;
  long exp = 0;

  void normalize() {
    int e = 0;
    mant = std::frexp(mant, &e);
    exp += e;
  }
  void mul(double x) {
    mant *= x;
    normalize();
  }
  void mul(const ScaledReal& o) {
    mant *= o.mant;
    exp += o.exp;
    normalize();
  }
  void div(const ScaledReal& o) {
    mant /= o.mant;
    exp -= o.exp;
    normalize();
  }
  void sqrt() {
    if (exp % 2 != 0) {
      mant *= 2.0;
      exp -= 1;
    }
    mant = std::sqrt(mant);
    exp /= 2;
    normalize();
  }
};

ScaledReal factorial(int n) {
  ScaledReal r;
  for (int i = 2; i <= n; ++i) r.mul(static_cast<double>(i));
  return r;
}

ScaledReal power(double base, int n) {
  ScaledReal r;
  for (int i = 0; i < n; ++i) r.mul(base);
  return r;
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= std::numbers::pi))
    throw Error(Errc::OutOfRange, "co-latitude " + std::to_string(theta) + " outside (0, pi]");
}

}  // namespace

void legendre_values(int m, double theta, int band_limit, std::span<double> out) {
  const int am = std::abs(m);
  if (am >= band_limit)
    throw Error(Errc::OutOfRange, "order " + std::to_string(m) + " outside band-limit " +
                                      std::to_string(band_limit));
  check_theta(theta);
  const auto n = static_cast<std::size_t>(band_limit - am);
  if (out.size() != n) throw Error(Errc::InvalidInput, "legendre_values: output length mismatch");

  const double s = std::sin(theta);
  const double c = std::cos(theta);

  // Seed: (-1)^m sqrt((2m+1)/4pi) sqrt((2m)!)/(2^m m!) sin^m
  //     = (-1)^m (4pi)^(-1/2) prod_{i=1..m} sqrt((2i+1)/(2i)) sin.
  double cur = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  int exponent = 0;
  for (int i = 1; i <= am; ++i) {
    cur *= std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
    if (std::abs(cur) < kRescaleLow) {
      cur *= kRescaleHigh;
      exponent -= kRescaleBits;
    }
  }
  if (am % 2 == 1) cur = -cur;

  double prev = 0.0;
  out[0] = exponent == 0 ? cur : std::ldexp(cur, exponent);
  const double mm = static_cast<double>(am) * am;
  double a_cur = 0.0;  // a_{l,m} at l = am
  for (int ell = am; ell + 1 < band_limit; ++ell) {
    const double l1 = ell + 1.0;
    const double a_next = std::sqrt((l1 * l1 - mm) / ((2.0 * l1 - 1.0) * (2.0 * l1 + 1.0)));
    const double next = (c * cur - a_cur * prev) / a_next;
    prev = cur;
    cur = next;
    a_cur = a_next;
    if (exponent < 0 && std::abs(cur) > kRescaleHigh) {
      cur *= kRescaleLow;
      prev *= kRescaleLow;
      exponent += kRescaleBits;
    }
    out[static_cast<std::size_t>(ell + 1 - am)] = exponent == 0 ? cur : std::ldexp(cur, exponent);
  }
  // P~_l^{-m} = (-1)^m P~_l^m
  if (m < 0 && am % 2 == 1)
    for (auto& v : out) v = -v;
}

LegendreColumn legendre_column(int m, double theta, int band_limit) {
  if (std::abs(m) >= band_limit)
    throw Error(Errc::OutOfRange, "order " + std::to_string(m) + " outside band-limit " +
                                      std::to_string(band_limit));
  LegendreColumn col{m, theta, std::vector<double>(static_cast<std::size_t>(band_limit - std::abs(m)))};
  legendre_values(m, theta, band_limit, col.values);
  return col;
}

double legendre_direct(int ell, int m, double theta) {
  if (ell < 0 || ell > kLegendreDirectMaxDegree)
    throw Error(Errc::OutOfRange, "legendre_direct: degree " + std::to_string(ell) +
                                      " outside factorial-safe range");
  if (std::abs(m) > ell) throw Error(Errc::OutOfRange, "legendre_direct: |m| > l");

  using ld = long double;
  auto fact = [](int n) {
    ld r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  auto binom = [&](int n, int k) { return fact(n) / (fact(k) * fact(n - k)); };

  const int am = std::abs(m);
  const ld x = std::cos(static_cast<ld>(theta));
  const ld sin_t = std::sin(static_cast<ld>(theta));

  // d^{l+m}/dx^{l+m} (x^2-1)^l, with (x^2-1)^l = sum_k C(l,k) (-1)^(l-k) x^(2k)
  const int order = ell + am;
  ld deriv = 0;
  for (int k = 0; k <= ell; ++k) {
    const int power_x = 2 * k - order;
    if (power_x < 0) continue;
    const ld sign = ((ell - k) % 2 == 0) ? 1 : -1;
    deriv += sign * binom(ell, k) * fact(2 * k) / fact(power_x) * std::pow(x, power_x);
  }
  const ld cs = (am % 2 == 0) ? 1 : -1;
  ld p_pos = cs / (std::pow(ld{2}, ell) * fact(ell)) * std::pow(sin_t, am) * deriv;

  const ld four_pi = 4 * std::numbers::pi_v<ld>;
  if (m >= 0) {
    const ld norm = std::sqrt((2 * ell + 1) / four_pi * fact(ell - m) / fact(ell + m));
    return static_cast<double>(norm * p_pos);
  }
  // P_l^{-|m|} = (-1)^|m| (l-|m|)!/(l+|m|)! P_l^{|m|}
  const ld p_neg = cs * fact(ell - am) / fact(ell + am) * p_pos;
  const ld norm = std::sqrt((2 * ell + 1) / four_pi * fact(ell + am) / fact(ell - am));
  return static_cast<double>(norm * p_neg);
}

int SpinColumn::min_degree() const noexcept { return std::max(std::abs(order), std::abs(spin)); }

void spin_values(int s, int m, double theta, int band_limit, std::span<double> out) {
  if (std::abs(s) >= band_limit || std::abs(m) >= band_limit)
    throw Error(Errc::OutOfRange, "spin " + std::to_string(s) + " / order " + std::to_string(m) +
                                      " inconsistent with band-limit " + std::to_string(band_limit));
  if (s == 0) {
    legendre_values(m, theta, band_limit, out);
    return;
  }
  check_theta(theta);
  const int l0 = std::max(std::abs(m), std::abs(s));
  if (out.size() != static_cast<std::size_t>(band_limit - l0))
    throw Error(Errc::InvalidInput, "spin_values: output length mismatch");

  // Seed d^{l0}_{m,s}: Wigner's sum collapses to a single k at j = max(|m|,|s|).
  const int j = l0;
  const int a = m;  // row index
  const int b = s;  // column index
  const int k_lo = std::max(0, b - a);
  const int k_hi = std::min(j + b, j - a);
  if (k_lo != k_hi) throw Error(Errc::Numeric, "spin seed: unexpected Wigner sum length");
  const int k = k_lo;
  ScaledReal seed = factorial(j + b);
  seed.mul(factorial(j - b));
  seed.mul(factorial(j + a));
  seed.mul(factorial(j - a));
  ScaledReal denom = factorial(j + b - k);
  denom.mul(factorial(k));
  denom.mul(factorial(j - k - a));
  denom.mul(factorial(k - b + a));
  denom.mul(denom);
  seed.div(denom);
  seed.sqrt();
  seed.mul(power(std::cos(theta / 2.0), 2 * j - 2 * k + b - a));
  seed.mul(power(std::sin(theta / 2.0), 2 * k - b + a));
  if ((k - b + a) % 2 != 0) seed.mant = -seed.mant;

  // Carry the seed as (scaled, exponent) with exponent a multiple of kRescaleBits.
  long exponent = 0;
  double cur = seed.mant;
  long e = seed.exp;
  while (e < -kRescaleBits) {
    e += kRescaleBits;
    exponent -= kRescaleBits;
  }
  cur = std::ldexp(cur, static_cast<int>(e));

  const double c = std::cos(theta);
  const double four_pi = 4.0 * std::numbers::pi;
  const double spin_sign = (std::abs(s) % 2 == 0) ? 1.0 : -1.0;
  auto emit = [&](int ell, double d) {
    const double v = exponent == 0 ? d : std::ldexp(d, static_cast<int>(exponent));
    out[static_cast<std::size_t>(ell - l0)] = spin_sign * std::sqrt((2.0 * ell + 1.0) / four_pi) * v;
  };
  emit(l0, cur);

  const double mm = static_cast<double>(m) * m;
  const double ss = static_cast<double>(s) * s;
  const double ms = static_cast<double>(m) * s;
  double prev = 0.0;
  for (int ell = l0; ell + 1 < band_limit; ++ell) {
    const double l = ell;
    const double l1 = ell + 1.0;
    const double lower = (l1) * std::sqrt(std::max(0.0, (l * l - mm) * (l * l - ss)));
    const double upper = l * std::sqrt((l1 * l1 - mm) * (l1 * l1 - ss));
    const double next = ((2.0 * l + 1.0) * (l * l1 * c - ms) * cur - lower * prev) / upper;
    prev = cur;
    cur = next;
    if (exponent < 0 && std::abs(cur) > kRescaleHigh) {
      cur *= kRescaleLow;
      prev *= kRescaleLow;
      exponent += kRescaleBits;
    }
    emit(ell + 1, cur);
  }
}

SpinColumn spin_column(int s, int m, double theta, int band_limit) {
  if (std::abs(s) >= band_limit || std::abs(m) >= band_limit)
    throw Error(Errc::OutOfRange, "spin " + std::to_string(s) + " / order " + std::to_string(m) +
                                      " inconsistent with band-limit " + std::to_string(band_limit));
  SpinColumn col{s, m, theta, {}};
  col.values.resize(static_cast<std::size_t>(band_limit - col.min_degree()));
  spin_values(s, m, theta, band_limit, col.values);
  return col;
}

}  // namespace optisph
