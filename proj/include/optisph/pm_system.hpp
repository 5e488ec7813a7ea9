#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "optisph/sampling.hpp"

namespace optisph {

using ComplexVector = std::vector<std::complex<double>>;

/// The order-|m| matrix P_m linking f_m to g_m over rings |m|..L-1:
/// entry (k-|m|, l-|m|) = 2*pi*P~_l^m(theta_k). Negative orders are never
/// stored; `sign` carries (-1)^m when the block was requested for -m.
struct LegendreBlock {
  int order = 0;  // |m|
  int sign = 1;
  Eigen::MatrixXd entries;

  Eigen::Index size() const noexcept { return entries.rows(); }
};

/// G_m(theta_k) for the rings of the block, k = |m|..L-1.
struct GVector {
  int order = 0;
  ComplexVector values;
};

/// f_l^m for l = |m|..L-1.
struct CoefficientSlice {
  int order = 0;
  ComplexVector values;
};

LegendreBlock build_block(const ColatitudeGrid& grid, int m);

/// Block over an arbitrary ring suffix (used while a grid is still being
/// ordered). `suffix.size()` must equal L-|m|.
Eigen::MatrixXd block_for_suffix(int m, std::span<const double> suffix, int band_limit);

/// sigma_max / sigma_min via SVD; +inf when sigma_min vanishes.
double condition_number(const Eigen::MatrixXd& block);
inline double condition_number(const LegendreBlock& block) { return condition_number(block.entries); }

/// sigma_max / sigma_min without the working-precision cutoff; +inf only
/// when sigma_min is exactly zero. Ranks blocks that are all numerically
/// singular.
double singular_value_ratio(const Eigen::MatrixXd& block);

/// kappa_m for m = 0..L-1.
std::vector<double> condition_profile(const ColatitudeGrid& grid);

/// Relative threshold sigma_min/sigma_max below which a solve is refused.
inline constexpr double kSingularThreshold = 1e-14;

/// Column-pivoted QR of one block, reused for several right-hand sides.
class BlockSolver {
 public:
  explicit BlockSolver(LegendreBlock block);

  /// Least-squares solution of P_{+-m} f = g. Throws IllConditionedSolve
  /// (with kappa) for numerically singular blocks.
  CoefficientSlice solve(const GVector& g) const;

  /// Solves P_m X = B for real multi-column B (no sign applied).
  Eigen::MatrixXd solve_real(const Eigen::MatrixXd& rhs) const;

  const LegendreBlock& block() const noexcept { return block_; }

 private:
  LegendreBlock block_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

CoefficientSlice solve(const LegendreBlock& block, const GVector& g);

}  // namespace optisph
