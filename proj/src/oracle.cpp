#include "optisph/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "optisph/basis.hpp"
#include "optisph/errors.hpp"

namespace optisph::oracle {
namespace {

using cplx = std::complex<double>;

void check(int data_limit, const ColatitudeGrid& grid, int guard, const char* what) {
  if (data_limit != grid.band_limit())
    throw Error(Errc::BandLimitMismatch, std::string(what) + ": data band-limit " + std::to_string(data_limit) +
                                             " vs grid band-limit " + std::to_string(grid.band_limit()));
  if (data_limit > guard)
    throw Error(Errc::SizeGuard, std::string(what) + " is limited to L <= " + std::to_string(guard));
}

/// table[l^2+l+m] = P~_l^m(theta) for the full triangle.
std::vector<double> legendre_table(double theta, int band_limit) {
  std::vector<double> table(static_cast<std::size_t>(band_limit) * band_limit);
  for (int m = -(band_limit - 1); m < band_limit; ++m) {
    const auto col = legendre_column(m, theta, band_limit);
    for (int ell = std::abs(m); ell < band_limit; ++ell)
      table[HarmonicCoefficients::index(ell, m)] = col.at(ell);
  }
  return table;
}

double phi(int k, int j) { return 2.0 * std::numbers::pi * j / (2.0 * k + 1.0); }

}  // namespace

SpatialSamples direct_synthesis(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid) {
  check(coeffs.band_limit(), grid, kDirectSynthesisMaxBandLimit, "direct_synthesis");
  const int L = grid.band_limit();
  SpatialSamples out(L);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < L; ++k) {
    const auto table = legendre_table(grid.theta(k), L);
    for (int j = 0; j <= 2 * k; ++j) {
      const double p = phi(k, j);
      cplx acc{};
      for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m) {
          const auto i = HarmonicCoefficients::index(ell, m);
          acc += coeffs.values()[i] * table[i] * std::polar(1.0, m * p);
        }
      out(k, j) = acc;
    }
  }
  return out;
}

HarmonicCoefficients dense_lsq_analysis(const SpatialSamples& samples, const ColatitudeGrid& grid,
                                        const DenseOptions& options) {
  check(samples.band_limit(), grid, kDenseAnalysisMaxBandLimit, "dense_lsq_analysis");
  const int L = grid.band_limit();
  const Eigen::Index n = static_cast<Eigen::Index>(L) * L;

  Eigen::MatrixXcd a(n, n);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < L; ++k) {
    const auto table = legendre_table(grid.theta(k), L);
    for (int j = 0; j <= 2 * k; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(k) * k + j;
      const double p = phi(k, j);
      for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m) {
          const auto i = HarmonicCoefficients::index(ell, m);
          a(row, static_cast<Eigen::Index>(i)) = table[i] * std::polar(1.0, m * p);
        }
    }
  }
  Eigen::VectorXcd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = samples.values()[static_cast<std::size_t>(i)];

  Eigen::VectorXcd x;
  if (options.solver == DenseSolver::PartialPivLU) {
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const auto u = lu.matrixLU().diagonal().cwiseAbs();
    if (!(u.minCoeff() > u.maxCoeff() * 1e-14))
      throw Error(Errc::SingularSystem, "dense synthesis matrix is numerically singular");
    x = lu.solve(b);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(1e-14);
    if (qr.rank() < n)
      throw Error(Errc::SingularSystem, "dense synthesis matrix has rank " + std::to_string(qr.rank()) + " < " +
                                            std::to_string(n));
    x = qr.solve(b);
  }

  HarmonicCoefficients out(L);
  for (Eigen::Index i = 0; i < n; ++i) out.values()[static_cast<std::size_t>(i)] = x(i);
  return out;
}

}  // namespace optisph::oracle
