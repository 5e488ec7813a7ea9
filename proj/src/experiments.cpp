#include "optisph/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "optisph/errors.hpp"

namespace optisph {
namespace {

void check_trials(int trials) {
  if (trials < 1) throw Error(Errc::InvalidInput, "trials must be >= 1, got " + std::to_string(trials));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

UniformSource::UniformSource(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double UniformSource::next() {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

std::complex<double> UniformSource::next_complex() {
  const double re = next();
  const double im = next();
  return {re, im};
}

HarmonicCoefficients random_coefficients(int band_limit, UniformSource& rng, int spin) {
  HarmonicCoefficients f(band_limit);
  for (int ell = std::abs(spin); ell < band_limit; ++ell)
    for (int m = -ell; m <= ell; ++m) f(ell, m) = rng.next_complex();
  return f;
}

SpatialSamples random_samples(int band_limit, UniformSource& rng) {
  SpatialSamples s(band_limit);
  for (auto& v : s.values()) v = rng.next_complex();
  return s;
}

ErrorStats compare(std::span<const std::complex<double>> truth, std::span<const std::complex<double>> result) {
  if (truth.size() != result.size() || truth.empty())
    throw Error(Errc::InvalidInput, "compare: size mismatch");
  ErrorStats s;
  double num = 0.0, den = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = std::abs(truth[i] - result[i]);
    s.max_abs = std::max(s.max_abs, std::isnan(e) ? std::numeric_limits<double>::infinity() : e);
    sum += e;
    num += e * e;
    den += std::norm(truth[i]);
  }
  s.mean_abs = sum / static_cast<double>(truth.size());
  s.rel_l2 = std::sqrt(num / den);
  return s;
}

ErrorRecord run_exp1(const ColatitudeGrid& grid, int trials, std::uint64_t seed, const TransformOptions& options) {
  check_trials(trials);
  const int L = grid.band_limit();
  UniformSource rng(seed, static_cast<std::uint64_t>(L));
  ErrorRecord rec{L, trials};
  for (int t = 0; t < trials; ++t) {
    const auto truth = random_coefficients(L, rng);
    const auto back = forward_sht(inverse_sht(truth, grid, options), grid, options);
    const auto e = compare(truth.values(), back.values());
    rec.e_max += e.max_abs / trials;
    rec.e_mean += e.mean_abs / trials;
    rec.rel_l2 += e.rel_l2 / trials;
  }
  return rec;
}

ErrorRecord run_exp2(const ColatitudeGrid& grid, int trials, std::uint64_t seed, const TransformOptions& options) {
  check_trials(trials);
  const int L = grid.band_limit();
  UniformSource rng(seed, static_cast<std::uint64_t>(L));
  ErrorRecord rec{L, trials};
  for (int t = 0; t < trials; ++t) {
    const auto truth = random_samples(L, rng);
    const auto back = inverse_sht(forward_sht(truth, grid, options), grid, options);
    const auto e = compare(truth.values(), back.values());
    rec.e_max += e.max_abs / trials;
    rec.e_mean += e.mean_abs / trials;
    rec.rel_l2 += e.rel_l2 / trials;
  }
  return rec;
}

std::vector<double> run_errsurface(const ColatitudeGrid& grid, int trials, std::uint64_t seed,
                                   const TransformOptions& options) {
  check_trials(trials);
  const int L = grid.band_limit();
  UniformSource rng(seed, static_cast<std::uint64_t>(L));
  std::vector<double> surface(static_cast<std::size_t>(L) * L, 0.0);
  for (int t = 0; t < trials; ++t) {
    const auto truth = random_coefficients(L, rng);
    const auto back = forward_sht(inverse_sht(truth, grid, options), grid, options);
    for (std::size_t i = 0; i < surface.size(); ++i)
      surface[i] += std::abs(truth.values()[i] - back.values()[i]) / trials;
  }
  return surface;
}

BenchRecord run_bench(const ColatitudeGrid& grid, int trials, std::uint64_t seed, bool use_mean,
                      const TransformOptions& options) {
  check_trials(trials);
  using clock = std::chrono::steady_clock;
  const int L = grid.band_limit();
  UniformSource rng(seed, static_cast<std::uint64_t>(L));
  std::vector<double> ti, tf, ts;
  for (int t = 0; t <= trials; ++t) {
    const auto coeffs = random_coefficients(L, rng);
    const auto t0 = clock::now();
    const auto samples = inverse_sht(coeffs, grid, options);
    const auto t1 = clock::now();
    ForwardStats stats;
    const auto back = forward_sht(samples, grid, options, &stats);
    const auto t2 = clock::now();
    if (t == 0) continue;  // warmup
    ti.push_back(std::chrono::duration<double>(t1 - t0).count());
    tf.push_back(std::chrono::duration<double>(t2 - t1).count());
    ts.push_back(stats.solve_seconds);
  }
  BenchRecord rec{L, trials};
  rec.stat = use_mean ? "mean" : "median";
  auto reduce = [&](const std::vector<double>& v) { return use_mean ? mean(v) : median(v); };
  rec.tau_inverse = reduce(ti);
  rec.tau_forward = reduce(tf);
  rec.tau_solve = reduce(ts);
  return rec;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(Errc::InvalidInput, "loglog_slope needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CsvReport::CsvReport(std::string command, std::uint64_t seed, std::vector<std::string> header)
    : command_(std::move(command)), seed_(seed), header_(std::move(header)) {}

void CsvReport::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(Errc::InvalidInput, "csv row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvReport::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

void CsvReport::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  out << "# optisph " << command_ << " seed=" << seed_ << '\n';
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace optisph
