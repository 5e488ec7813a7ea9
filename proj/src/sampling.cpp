#include "optisph/sampling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "optisph/basis.hpp"
#include "optisph/errors.hpp"
#include "optisph/pm_system.hpp"

namespace optisph {

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::Uniform: return "uniform";
    case Measure::Sine: return "sine";
    case Measure::TanCubeRoot: return "tan13";
  }
  return "?";
}

std::string_view to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::Interleaved: return "interleaved";
    case Ordering::ConditionMinimized: return "condmin";
  }
  return "?";
}

Measure parse_measure(std::string_view text) {
  if (text == "uniform") return Measure::Uniform;
  if (text == "sine") return Measure::Sine;
  if (text == "tan13") return Measure::TanCubeRoot;
  throw Error(Errc::InvalidInput, "unknown measure '" + std::string(text) + "'");
}

Ordering parse_ordering(std::string_view text) {
  if (text == "interleaved") return Ordering::Interleaved;
  if (text == "condmin") return Ordering::ConditionMinimized;
  throw Error(Errc::InvalidInput, "unknown ordering '" + std::string(text) + "'");
}

namespace {

void check_band_limit(int band_limit) {
  if (band_limit < 1) throw Error(Errc::InvalidBandLimit, "band-limit must be >= 1, got " + std::to_string(band_limit));
}

void check_permutation(std::span<const int> perm, int band_limit) {
  if (static_cast<int>(perm.size()) != band_limit)
    throw Error(Errc::InvalidInput, "permutation length " + std::to_string(perm.size()) + " != L " +
                                        std::to_string(band_limit));
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= band_limit || seen[static_cast<std::size_t>(p)])
      throw Error(Errc::InvalidInput, "permutation is not a bijection on 0..L-1");
    seen[static_cast<std::size_t>(p)] = 1;
  }
}

// Integral of tan(t)^(1/3) over [0, x], x < pi/2.
double tan13_cdf(double x) {
  if (x <= 0.0) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([](double t) { return std::cbrt(std::tan(t)); }, 0.0, x, 1e-13);
}

}  // namespace

ColatitudeGrid::ColatitudeGrid(int band_limit, Measure measure, Ordering ordering, std::vector<int> permutation)
    : band_limit_(band_limit), measure_(measure), ordering_(ordering), permutation_(std::move(permutation)) {
  check_band_limit(band_limit);
  check_permutation(permutation_, band_limit);
  assign_thetas(candidates(band_limit, measure));
}

ColatitudeGrid::ColatitudeGrid(int band_limit, Measure measure, Ordering ordering, std::vector<int> permutation,
                               std::span<const double> cands)
    : band_limit_(band_limit), measure_(measure), ordering_(ordering), permutation_(std::move(permutation)) {
  check_band_limit(band_limit);
  check_permutation(permutation_, band_limit);
  if (static_cast<int>(cands.size()) != band_limit)
    throw Error(Errc::InvalidInput, "candidate count does not match band-limit");
  assign_thetas(cands);
}

void ColatitudeGrid::assign_thetas(std::span<const double> cands) {
  thetas_.resize(permutation_.size());
  for (std::size_t k = 0; k < permutation_.size(); ++k)
    thetas_[k] = cands[static_cast<std::size_t>(permutation_[k])];
}

std::span<const double> ColatitudeGrid::suffix(int m) const {
  const int am = std::abs(m);
  if (am >= band_limit_) throw Error(Errc::OutOfRange, "suffix order outside band-limit");
  return std::span<const double>(thetas_).subspan(static_cast<std::size_t>(am));
}

long long ColatitudeGrid::sample_count() const noexcept {
  long long total = 0;
  for (int k = 0; k < band_limit_; ++k) total += 2LL * k + 1;
  return total;
}

std::vector<double> equiangular_candidates(int band_limit) {
  check_band_limit(band_limit);
  std::vector<double> out(static_cast<std::size_t>(band_limit));
  const double denom = 2.0 * band_limit - 1.0;
  for (int t = 0; t < band_limit; ++t) out[static_cast<std::size_t>(t)] = std::numbers::pi * (2.0 * t + 1.0) / denom;
  out.back() = std::numbers::pi;
  return out;
}

std::vector<double> measure_candidates(int band_limit, Measure measure) {
  check_band_limit(band_limit);
  if (measure == Measure::Uniform) return equiangular_candidates(band_limit);

  const double L = band_limit;
  // theta_t for t = 0..L-1, descending from the south pole.
  std::vector<double> desc(static_cast<std::size_t>(band_limit));
  if (measure == Measure::Sine) {
    // Each cell carries 2/L of the sin measure: cos(theta_t) = -1 + 2t/L.
    for (int t = 0; t < band_limit; ++t) desc[static_cast<std::size_t>(t)] = std::acos(-1.0 + 2.0 * t / L);
  } else {
    // |tan|^(1/3) has total mass 2pi/sqrt(3), symmetric about pi/2. Cell t
    // boundary: mass below theta_t is total*(1 - t/L). For t < L/2 solve the
    // mirrored point on [0, pi/2]; for t > L/2 solve directly.
    const double total = 2.0 * std::numbers::pi / std::sqrt(3.0);
    const double half_pi = std::numbers::pi / 2.0;
    for (int t = 0; t < band_limit; ++t) {
      if (t == 0) {
        desc[0] = std::numbers::pi;
        continue;
      }
      if (2 * t == band_limit) {
        desc[static_cast<std::size_t>(t)] = half_pi;
        continue;
      }
      const bool mirrored = 2 * t < band_limit;
      const double target = mirrored ? total * t / L : total * (1.0 - t / L);
      double lo = 0.0;
      double hi = half_pi;
      int iter = 0;
      while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
        if (++iter > 200)
          throw Error(Errc::Numeric, "tan13 partition: bisection did not converge at t=" + std::to_string(t));
        const double mid = 0.5 * (lo + hi);
        if (tan13_cdf(mid) < target) lo = mid;
        else hi = mid;
      }
      const double x = 0.5 * (lo + hi);
      desc[static_cast<std::size_t>(t)] = mirrored ? std::numbers::pi - x : x;
    }
  }
  std::reverse(desc.begin(), desc.end());
  return desc;
}

std::vector<double> candidates(int band_limit, Measure measure) { return measure_candidates(band_limit, measure); }

ColatitudeGrid interleaved_order(std::span<const double> cands, int band_limit, Measure measure) {
  check_band_limit(band_limit);
  if (static_cast<int>(cands.size()) != band_limit)
    throw Error(Errc::InvalidInput, "interleaved_order: " + std::to_string(cands.size()) + " candidates for L=" +
                                        std::to_string(band_limit));
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (!(cands[i] > cands[i - 1])) throw Error(Errc::InvalidInput, "interleaved_order: candidates not increasing");

  std::vector<int> perm;
  perm.reserve(cands.size());
  perm.push_back(band_limit - 1);
  int lo = 0;
  int hi = band_limit - 2;
  bool take_low = true;
  while (lo <= hi) {
    perm.push_back(take_low ? lo++ : hi--);
    take_low = !take_low;
  }
  return ColatitudeGrid(band_limit, measure, Ordering::Interleaved, std::move(perm), cands);
}

BlockRowBuilder legendre_row_builder(int band_limit) {
  return [band_limit](int m, double theta, std::span<double> row) {
    legendre_values(m, theta, band_limit, row);
    for (auto& v : row) v *= 2.0 * std::numbers::pi;
  };
}

namespace {

// Singular values of [r; Q] from the SVD of Q ((n-1) x n): with Q = U D V^T
// and z = V^T r, they are the roots of 1 + sum_i z_i^2 / (d_i^2 - s^2) = 0,
// where the null direction of Q contributes d = 0.
class RankOneConditioner {
 public:
  explicit RankOneConditioner(const Eigen::MatrixXd& fixed_rows) : n_(fixed_rows.cols()) {
    d_ = Eigen::VectorXd::Zero(n_);
    if (fixed_rows.rows() == 0) {
      v_ = Eigen::MatrixXd::Identity(n_, n_);
    } else {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(fixed_rows, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      d_.head(sv.size()) = sv;
      v_ = svd.matrixV();
    }
    dmax_ = d_.maxCoeff();
  }

  double kappa(std::span<const double> row) const {
    const Eigen::Map<const Eigen::VectorXd> r(row.data(), n_);
    const Eigen::VectorXd z = v_.transpose() * r;
    const Eigen::VectorXd z2 = z.cwiseAbs2();

    auto secular = [&](double s) {
      double f = 1.0;
      for (Eigen::Index i = 0; i < n_; ++i) f += z2(i) / ((d_(i) - s) * (d_(i) + s));
      return f;
    };

    // Largest root lies in [dmax, sqrt(dmax^2 + |z|^2)].
    double lo = dmax_;
    double hi = std::sqrt(dmax_ * dmax_ + z2.sum());
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (secular(mid) < 0.0) lo = mid;
      else hi = mid;
    }
    const double smax = hi;

    // Smallest root lies in [0, d_(1)], d_(1) the smallest nonzero d.
    double d1 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n_; ++i)
      if (d_(i) > 0.0) d1 = std::min(d1, d_(i));
    if (!std::isfinite(d1)) d1 = smax;  // n == 1
    hi = d1;
    lo = 0.5 * hi;
    int halvings = 0;
    while (secular(lo) > 0.0) {
      hi = lo;
      lo *= 0.5;
      if (++halvings > 1100 || lo == 0.0) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (secular(mid) < 0.0) lo = mid;
      else hi = mid;
    }
    const double smin = 0.5 * (lo + hi);
    if (smin <= smax * static_cast<double>(n_) * std::numeric_limits<double>::epsilon())
      return std::numeric_limits<double>::infinity();
    return smax / smin;
  }

 private:
  Eigen::Index n_;
  Eigen::VectorXd d_;
  Eigen::MatrixXd v_;
  double dmax_ = 0.0;
};

// Relative kappa band treated as a tie; the fast estimates are re-checked
// with a dense SVD inside a wider band.
constexpr double kTieTolerance = 1e-9;
constexpr double kRecheckBand = 1e-6;
constexpr double kFastKappaLimit = 1e6;

}  // namespace

ColatitudeGrid optimize_order(std::span<const double> cands, int band_limit, Measure measure,
                              const BlockRowBuilder& rows, const OptimizeOptions& options) {
  check_band_limit(band_limit);
  if (static_cast<int>(cands.size()) != band_limit)
    throw Error(Errc::InvalidInput, "optimize_order: " + std::to_string(cands.size()) + " candidates for L=" +
                                        std::to_string(band_limit));
  {
    auto sorted = std::vector<double>(cands.begin(), cands.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(Errc::InvalidInput, "optimize_order: candidates not distinct");
  }
  const double half_pi = std::numbers::pi / 2.0;
  auto equator_distance = [&](int t) { return std::abs(cands[static_cast<std::size_t>(t)] - half_pi); };

  std::vector<int> perm(static_cast<std::size_t>(band_limit), -1);
  std::vector<char> used(static_cast<std::size_t>(band_limit), 0);

  int anchor = 0;
  if (measure == Measure::Uniform) {
    anchor = (band_limit - 1) / 2;  // pi(2*floor((L-1)/2)+1)/(2L-1)
  } else {
    for (int t = 1; t < band_limit; ++t)
      if (equator_distance(t) < equator_distance(anchor)) anchor = t;
  }
  perm.back() = anchor;
  used[static_cast<std::size_t>(anchor)] = 1;

  const bool parallel = options.execution == Execution::Parallel;
  for (int m = band_limit - 2; m >= 0; --m) {
    const int n = band_limit - m;
    Eigen::MatrixXd fixed(n - 1, n);
    {
      std::vector<double> row(static_cast<std::size_t>(n));
      for (int k = m + 1; k < band_limit; ++k) {
        rows(m, cands[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])], row);
        for (int c = 0; c < n; ++c) fixed(k - m - 1, c) = row[static_cast<std::size_t>(c)];
      }
    }
    std::vector<int> pool;
    for (int t = 0; t < band_limit; ++t)
      if (!used[static_cast<std::size_t>(t)]) pool.push_back(t);
    const auto count = static_cast<int>(pool.size());

    auto exact_kappa = [&](int t) {
      Eigen::MatrixXd block(n, n);
      block.bottomRows(n - 1) = fixed;
      std::vector<double> row(static_cast<std::size_t>(n));
      rows(m, cands[static_cast<std::size_t>(t)], row);
      for (int c = 0; c < n; ++c) block(0, c) = row[static_cast<std::size_t>(c)];
      // Unclamped, so numerically singular choices can still be ranked.
      return singular_value_ratio(block);
    };

    std::vector<double> kappa(static_cast<std::size_t>(count));
    std::vector<char> exact(static_cast<std::size_t>(count), 0);
    if (options.exact_svd) {
#pragma omp parallel for schedule(dynamic) if (parallel)
      for (int i = 0; i < count; ++i) kappa[static_cast<std::size_t>(i)] = exact_kappa(pool[static_cast<std::size_t>(i)]);
      std::fill(exact.begin(), exact.end(), 1);
    } else {
      const RankOneConditioner conditioner(fixed);
#pragma omp parallel for schedule(dynamic) if (parallel)
      for (int i = 0; i < count; ++i) {
        std::vector<double> row(static_cast<std::size_t>(n));
        rows(m, cands[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])], row);
        kappa[static_cast<std::size_t>(i)] = conditioner.kappa(row);
      }
      const double best = *std::min_element(kappa.begin(), kappa.end());
      const bool all = !(best <= kFastKappaLimit);
#pragma omp parallel for schedule(dynamic) if (parallel)
      for (int i = 0; i < count; ++i) {
        auto& k = kappa[static_cast<std::size_t>(i)];
        if (all || k <= best * (1.0 + kRecheckBand)) {
          k = exact_kappa(pool[static_cast<std::size_t>(i)]);
          exact[static_cast<std::size_t>(i)] = 1;
        }
      }
    }

    int choice = -1;
    for (int i = 0; i < count; ++i) {
      if (!exact[static_cast<std::size_t>(i)]) continue;
      if (choice < 0) {
        choice = i;
        continue;
      }
      const double kc = kappa[static_cast<std::size_t>(choice)];
      const double ki = kappa[static_cast<std::size_t>(i)];
      const int tc = pool[static_cast<std::size_t>(choice)];
      const int ti = pool[static_cast<std::size_t>(i)];
      const bool tie = (ki == kc) || (std::isfinite(ki) && std::isfinite(kc) &&
                                      std::abs(ki - kc) <= kTieTolerance * std::min(ki, kc));
      if (tie) {
        if (equator_distance(ti) < equator_distance(tc)) choice = i;
      } else if (ki < kc) {
        choice = i;
      }
    }
    if (choice < 0 || !std::isfinite(kappa[static_cast<std::size_t>(choice)]))
      throw Error(Errc::IllConditionedGrid,
                  "every candidate leaves the order-" + std::to_string(m) + " block singular", m,
                  std::numeric_limits<double>::infinity());
    const int t = pool[static_cast<std::size_t>(choice)];
    perm[static_cast<std::size_t>(m)] = t;
    used[static_cast<std::size_t>(t)] = 1;
  }
  return ColatitudeGrid(band_limit, measure, Ordering::ConditionMinimized, std::move(perm), cands);
}

ColatitudeGrid make_grid(int band_limit, Measure measure, Ordering ordering, const OptimizeOptions& options) {
  const auto cands = candidates(band_limit, measure);
  if (ordering == Ordering::Interleaved) return interleaved_order(cands, band_limit, measure);
  return optimize_order(cands, band_limit, measure, legendre_row_builder(band_limit), options);
}

RingLongitudes ring_longitudes(int ring_index) {
  if (ring_index < 0) throw Error(Errc::OutOfRange, "ring index must be >= 0");
  const int count = 2 * ring_index + 1;
  RingLongitudes out{ring_index, std::vector<double>(static_cast<std::size_t>(count))};
  for (int j = 0; j < count; ++j) out.phis[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / count;
  return out;
}

}  // namespace optisph
