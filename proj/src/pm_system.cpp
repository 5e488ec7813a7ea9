#include "optisph/pm_system.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "optisph/basis.hpp"
#include "optisph/errors.hpp"

namespace optisph {

Eigen::MatrixXd block_for_suffix(int m, std::span<const double> suffix, int band_limit) {
  const int am = std::abs(m);
  if (am >= band_limit)
    throw Error(Errc::OutOfRange, "order " + std::to_string(m) + " outside band-limit " +
                                      std::to_string(band_limit));
  const auto n = static_cast<Eigen::Index>(band_limit - am);
  if (static_cast<Eigen::Index>(suffix.size()) != n)
    throw Error(Errc::InvalidInput, "block_for_suffix: suffix length must be L-|m|");
  Eigen::MatrixXd block(n, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    legendre_values(am, suffix[static_cast<std::size_t>(r)], band_limit, row);
    for (Eigen::Index c = 0; c < n; ++c) block(r, c) = 2.0 * std::numbers::pi * row[static_cast<std::size_t>(c)];
  }
  return block;
}

LegendreBlock build_block(const ColatitudeGrid& grid, int m) {
  const int am = std::abs(m);
  if (am >= grid.band_limit())
    throw Error(Errc::BandLimitMismatch, "order " + std::to_string(m) + " outside grid band-limit " +
                                             std::to_string(grid.band_limit()));
  LegendreBlock block;
  block.order = am;
  block.sign = (m < 0 && am % 2 == 1) ? -1 : 1;
  block.entries = block_for_suffix(am, grid.suffix(am), grid.band_limit());
  return block;
}

double condition_number(const Eigen::MatrixXd& block) {
  if (block.size() == 0) throw Error(Errc::InvalidInput, "condition_number: empty block");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax == 0.0) return std::numeric_limits<double>::infinity();
  const auto n = static_cast<double>(std::max(block.rows(), block.cols()));
  if (smin <= smax * n * std::numeric_limits<double>::epsilon())
    return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double singular_value_ratio(const Eigen::MatrixXd& block) {
  if (block.size() == 0) throw Error(Errc::InvalidInput, "singular_value_ratio: empty block");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  double smin = sv(sv.size() - 1);
  const auto n = static_cast<double>(std::max(block.rows(), block.cols()));
  if (smin <= smax * n * std::numeric_limits<double>::epsilon()) {
    // BDCSVD deflates tiny singular values to exact zeros; one-sided Jacobi
    // keeps them.
    Eigen::JacobiSVD<Eigen::MatrixXd> jacobi(block);
    smin = jacobi.singularValues()(jacobi.singularValues().size() - 1);
  }
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::vector<double> condition_profile(const ColatitudeGrid& grid) {
  std::vector<double> kappa(static_cast<std::size_t>(grid.band_limit()));
  for (int m = 0; m < grid.band_limit(); ++m)
    kappa[static_cast<std::size_t>(m)] = condition_number(build_block(grid, m));
  return kappa;
}

BlockSolver::BlockSolver(LegendreBlock block) : block_(std::move(block)), qr_(block_.entries) {
  // Cheap rank-revealing screen from the pivoted R diagonal; confirm with an
  // SVD before refusing.
  const auto r = qr_.matrixQR().diagonal().cwiseAbs();
  const double rmax = r.size() ? r.maxCoeff() : 0.0;
  const double rmin = r.size() ? r.minCoeff() : 0.0;
  if (!(rmin > rmax * 1e-12)) {
    const double kappa = condition_number(block_.entries);
    if (!(1.0 / kappa >= kSingularThreshold))
      throw Error(Errc::IllConditionedSolve,
                  "order " + std::to_string(block_.order) + " block is numerically singular (kappa=" +
                      std::to_string(kappa) + ")",
                  block_.order, kappa);
  }
}

Eigen::MatrixXd BlockSolver::solve_real(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != block_.entries.rows()) throw Error(Errc::InvalidInput, "solve: dimension mismatch");
  return qr_.solve(rhs);
}

CoefficientSlice BlockSolver::solve(const GVector& g) const {
  const auto rows = block_.entries.rows();
  if (static_cast<Eigen::Index>(g.values.size()) != rows)
    throw Error(Errc::InvalidInput, "solve: g has " + std::to_string(g.values.size()) + " entries, block has " +
                                        std::to_string(rows) + " rows");
  if (std::abs(g.order) != block_.order)
    throw Error(Errc::InvalidInput, "solve: g order does not match block order");
  Eigen::MatrixXd rhs(rows, 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    rhs(i, 0) = g.values[static_cast<std::size_t>(i)].real();
    rhs(i, 1) = g.values[static_cast<std::size_t>(i)].imag();
  }
  const Eigen::MatrixXd x = qr_.solve(rhs);
  CoefficientSlice out{g.order, ComplexVector(static_cast<std::size_t>(x.rows()))};
  const double sign = (g.order < 0 && (-g.order) % 2 == 1) ? -1.0 : 1.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out.values[static_cast<std::size_t>(i)] = sign * std::complex<double>(x(i, 0), x(i, 1));
  return out;
}

CoefficientSlice solve(const LegendreBlock& block, const GVector& g) { return BlockSolver(block).solve(g); }

}  // namespace optisph
