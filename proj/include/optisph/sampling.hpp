#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "optisph/execution.hpp"

namespace optisph {

enum class Measure { Uniform, Sine, TanCubeRoot };
enum class Ordering { Interleaved, ConditionMinimized };

std::string_view to_string(Measure m) noexcept;
std::string_view to_string(Ordering o) noexcept;
Measure parse_measure(std::string_view text);
Ordering parse_ordering(std::string_view text);

/// Ring co-latitudes of the L^2-sample scheme. Ring k sits at thetas[k]
/// and carries 2k+1 equispaced longitudes. `permutation[k]` indexes the
/// ascending candidate set the grid was built from, so the grid can be
/// re-derived bit-exactly from (L, measure, permutation).
class ColatitudeGrid {
 public:
  ColatitudeGrid(int band_limit, Measure measure, Ordering ordering,
                 std::vector<int> permutation);
  /// Same, with the candidate set supplied by the caller; `cands` must be
  /// candidates(band_limit, measure).
  ColatitudeGrid(int band_limit, Measure measure, Ordering ordering, std::vector<int> permutation,
                 std::span<const double> cands);

  int band_limit() const noexcept { return band_limit_; }
  Measure measure() const noexcept { return measure_; }
  Ordering ordering() const noexcept { return ordering_; }
  std::span<const double> thetas() const noexcept { return thetas_; }
  std::span<const int> permutation() const noexcept { return permutation_; }
  double theta(int k) const { return thetas_.at(static_cast<std::size_t>(k)); }

  /// Rings |m|..L-1, the co-latitudes entering the order-m block.
  std::span<const double> suffix(int m) const;

  /// Total sample count, always L^2.
  long long sample_count() const noexcept;

  friend bool operator==(const ColatitudeGrid&, const ColatitudeGrid&) = default;

 private:
  void assign_thetas(std::span<const double> cands);

  int band_limit_;
  Measure measure_;
  Ordering ordering_;
  std::vector<int> permutation_;
  std::vector<double> thetas_;
};

struct RingLongitudes {
  int ring_index;
  std::vector<double> phis;
};

/// {pi(2t+1)/(2L-1)}, ascending; the last element is exactly pi.
std::vector<double> equiangular_candidates(int band_limit);

/// Partition points of the sin(theta) or |tan(theta)|^(1/3) measure into L
/// cells of equal mass, anchored at the south pole. Returned ascending, so
/// the pole is the last element. Uniform forwards to equiangular_candidates.
std::vector<double> measure_candidates(int band_limit, Measure measure);

/// Candidate set for the measure in ascending order.
std::vector<double> candidates(int band_limit, Measure measure);

/// Pole first, then alternately the smallest and the largest unused
/// candidate below the pole, so that the largest rings end up nearest
/// the equator.
ColatitudeGrid interleaved_order(std::span<const double> candidates, int band_limit,
                                 Measure measure = Measure::Uniform);

/// Fills `row` (length L-|m|) with row entries 2*pi*P~_l^m(theta),
/// l = |m|..L-1, of the order-m block for a ring at `theta`.
using BlockRowBuilder = std::function<void(int m, double theta, std::span<double> row)>;

/// The default row builder backed by basis::legendre_column.
BlockRowBuilder legendre_row_builder(int band_limit);

struct OptimizeOptions {
  Execution execution = Execution::Parallel;
  /// Evaluate every candidate with a dense SVD instead of the rank-one
  /// secular update. Slow; kept as the reference for tests and benches.
  bool exact_svd = false;
};

/// Greedy condition-number minimization. theta_{L-1} is the
/// candidate nearest the equator; then for m = L-2..0 the unused candidate
/// minimizing kappa(P_m) over {theta_m, ..., theta_{L-1}} is chosen. Ties
/// within relative 1e-9 go to the candidate nearer pi/2.
ColatitudeGrid optimize_order(std::span<const double> candidates, int band_limit,
                              Measure measure, const BlockRowBuilder& rows,
                              const OptimizeOptions& options = {});

/// Candidate generation plus ordering in one call.
ColatitudeGrid make_grid(int band_limit, Measure measure, Ordering ordering,
                         const OptimizeOptions& options = {});

RingLongitudes ring_longitudes(int ring_index);

}  // namespace optisph
