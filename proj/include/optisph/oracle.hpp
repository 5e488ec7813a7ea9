#pragma once

#include "optisph/sampling.hpp"
#include "optisph/transform.hpp"

namespace optisph::oracle {

inline constexpr int kDirectSynthesisMaxBandLimit = 128;
inline constexpr int kDenseAnalysisMaxBandLimit = 64;

/// Brute-force f(theta_k, phi_j) = sum_l sum_m f_l^m Y_l^m(theta_k, phi_j) at
/// every sample; no separation of variables. O(L^4).
SpatialSamples direct_synthesis(const HarmonicCoefficients& coeffs, const ColatitudeGrid& grid);

enum class DenseSolver {
  /// Square LU with partial pivoting, the default dense solve of most
  /// numerical environments.
  PartialPivLU,
  /// Column-pivoted Householder QR.
  PivotedQR,
};

struct DenseOptions {
  DenseSolver solver = DenseSolver::PartialPivLU;
};

/// Assembles the L^2 x L^2 synthesis matrix (rows: samples in (k, j) order,
/// columns: l^2+l+m) and solves it. O(L^6).
HarmonicCoefficients dense_lsq_analysis(const SpatialSamples& samples, const ColatitudeGrid& grid,
                                        const DenseOptions& options = {});

}  // namespace optisph::oracle
