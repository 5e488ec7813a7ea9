#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "optisph/sampling.hpp"
#include "optisph/transform.hpp"

namespace optisph {

/// Uniform [-1, 1) draws from mt19937_64. The double conversion is done by
/// hand so the stream is identical on every platform.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  UniformSource(std::uint64_t seed, std::uint64_t stream);

  double next();
  std::complex<double> next_complex();

 private:
  std::mt19937_64 engine_;
};

/// Real and imaginary parts uniform in [-1, 1]; l < |spin| left at zero.
HarmonicCoefficients random_coefficients(int band_limit, UniformSource& rng, int spin = 0);
SpatialSamples random_samples(int band_limit, UniformSource& rng);

struct ErrorStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double rel_l2 = 0.0;  // ||a - b|| / ||a||
};

ErrorStats compare(std::span<const std::complex<double>> truth, std::span<const std::complex<double>> result);

struct ErrorRecord {
  int band_limit = 0;
  int trials = 0;
  double e_max = 0.0;   // trial average of max |truth - result|
  double e_mean = 0.0;  // trial average of mean |truth - result|
  double rel_l2 = 0.0;
  std::string status = "ok";
};

/// Experiment 1: random coefficients -> inverse -> forward.
ErrorRecord run_exp1(const ColatitudeGrid& grid, int trials, std::uint64_t seed,
                     const TransformOptions& options = {});
/// Experiment 2: random samples -> forward -> inverse.
ErrorRecord run_exp2(const ColatitudeGrid& grid, int trials, std::uint64_t seed,
                     const TransformOptions& options = {});

/// E_l^m averaged over trials, indexed l^2+l+m.
std::vector<double> run_errsurface(const ColatitudeGrid& grid, int trials, std::uint64_t seed,
                                   const TransformOptions& options = {});

struct BenchRecord {
  int band_limit = 0;
  int trials = 0;
  double tau_inverse = 0.0;
  double tau_forward = 0.0;
  double tau_solve = 0.0;
  std::string stat = "median";
};

/// One untimed warmup, then `trials` timed inverse/forward pairs on random
/// coefficients. Reports the median, or the mean when `use_mean` is set.
BenchRecord run_bench(const ColatitudeGrid& grid, int trials, std::uint64_t seed, bool use_mean = false,
                      const TransformOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// `# optisph <command> seed=<n>`, a header row, then records.
class CsvReport {
 public:
  CsvReport(std::string command, std::uint64_t seed, std::vector<std::string> header);

  void add(std::vector<std::string> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(std::ostream& out) const;

 private:
  std::string command_;
  std::uint64_t seed_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// %.17g, with nan/inf spelled as such.
std::string format_double(double v);

}  // namespace optisph
