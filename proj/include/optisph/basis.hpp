#pragma once

#include <span>
#include <vector>

namespace optisph {

/// P~_l^m(theta) = Y_l^m(theta, 0) for l = |m|..L-1; values[i] holds degree |m|+i.
struct LegendreColumn {
  int order;
  double theta;
  std::vector<double> values;

  double at(int ell) const { return values.at(static_cast<std::size_t>(ell - (order < 0 ? -order : order))); }
};

/// sY_l^m(theta, 0) for l = max(|m|,|s|)..L-1; values[i] holds degree lmin+i.
struct SpinColumn {
  int spin;
  int order;
  double theta;
  std::vector<double> values;

  int min_degree() const noexcept;
  double at(int ell) const { return values.at(static_cast<std::size_t>(ell - min_degree())); }
};

/// Upward three-term recurrence in l with a fully normalized seed and
/// power-of-two rescaling, so sin^m(theta) never underflows mid-recurrence.
LegendreColumn legendre_column(int m, double theta, int band_limit);

/// Writes P~_l^m(theta), l = |m|..band_limit-1, into `out` (length L-|m|).
void legendre_values(int m, double theta, int band_limit, std::span<double> out);

/// Slow evaluator of N_l^m P_l^m(cos theta) straight from the Rodrigues
/// form (expanded polynomial, long double). Test oracle; l <= 30.
double legendre_direct(int ell, int m, double theta);

inline constexpr int kLegendreDirectMaxDegree = 30;

/// Spin-weighted harmonic sY_l^m(theta, 0) = (-1)^s sqrt((2l+1)/4pi) d^l_{m,s}(theta)
/// with d from Wigner's formula. s = 0 returns the legendre_column values.
SpinColumn spin_column(int s, int m, double theta, int band_limit);

void spin_values(int s, int m, double theta, int band_limit, std::span<double> out);

}  // namespace optisph
