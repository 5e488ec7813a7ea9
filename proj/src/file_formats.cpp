#include "optisph/file_formats.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "detail/line_reader.hpp"
#include "optisph/errors.hpp"

namespace optisph {
namespace {

void append_record(std::string& out, int a, int b, std::complex<double> v) {
  char buf[96];
  const int n = std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", a, b, v.real(), v.imag());
  out.append(buf, static_cast<std::size_t>(n));
}

int read_header(detail::LineReader& reader, std::string_view magic) {
  const auto header = reader.require("header");
  const auto space = header.find(' ');
  if (space == std::string_view::npos || header.substr(0, space) != magic) reader.fail("bad header");
  if (header.substr(space + 1) != "v1")
    throw Error(Errc::VersionMismatch, std::string(magic) + ": unsupported version '" +
                                           std::string(header.substr(space + 1)) + "'");
  const int band_limit = reader.number<int>(reader.keyed(reader.require("L"), "L"));
  if (band_limit < 1) reader.fail("L must be >= 1");
  return band_limit;
}

std::complex<double> read_record(detail::LineReader& reader, int a, int b) {
  const auto f = reader.fields<4>(reader.require("record"));
  if (reader.number<int>(f[0]) != a || reader.number<int>(f[1]) != b)
    reader.fail("expected record (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  return {reader.number<double>(f[2]), reader.number<double>(f[3])};
}

void expect_end(detail::LineReader& reader) {
  std::string_view extra;
  while (reader.next(extra))
    if (!extra.empty()) reader.fail("trailing data");
}

}  // namespace

std::string serialize_coefficients(const HarmonicCoefficients& coeffs) {
  const int L = coeffs.band_limit();
  std::string out = "OPTISPH-COEF v1\nL " + std::to_string(L) + "\n";
  out.reserve(out.size() + coeffs.size() * 56);
  for (int ell = 0; ell < L; ++ell)
    for (int m = -ell; m <= ell; ++m) append_record(out, ell, m, coeffs(ell, m));
  return out;
}

HarmonicCoefficients parse_coefficients(std::string_view text) {
  detail::LineReader reader(text, "coefficient file");
  HarmonicCoefficients coeffs(read_header(reader, "OPTISPH-COEF"));
  for (int ell = 0; ell < coeffs.band_limit(); ++ell)
    for (int m = -ell; m <= ell; ++m) coeffs(ell, m) = read_record(reader, ell, m);
  expect_end(reader);
  return coeffs;
}

std::string serialize_samples(const SpatialSamples& samples) {
  const int L = samples.band_limit();
  std::string out = "OPTISPH-SIG v1\nL " + std::to_string(L) + "\n";
  out.reserve(out.size() + samples.size() * 56);
  for (int k = 0; k < L; ++k)
    for (int j = 0; j <= 2 * k; ++j) append_record(out, k, j, samples(k, j));
  return out;
}

SpatialSamples parse_samples(std::string_view text) {
  detail::LineReader reader(text, "signal file");
  SpatialSamples samples(read_header(reader, "OPTISPH-SIG"));
  for (int k = 0; k < samples.band_limit(); ++k)
    for (int j = 0; j <= 2 * k; ++j) samples(k, j) = read_record(reader, k, j);
  expect_end(reader);
  return samples;
}

std::string read_text(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(Errc::MalformedFile, "cannot read " + source.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& text, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + destination.string());
  out << text;
  if (!out) throw Error(Errc::InvalidInput, "write failed: " + destination.string());
}

void write_coefficients(const HarmonicCoefficients& coeffs, const std::filesystem::path& destination) {
  write_text(serialize_coefficients(coeffs), destination);
}

HarmonicCoefficients read_coefficients(const std::filesystem::path& source) {
  return parse_coefficients(read_text(source));
}

void write_samples(const SpatialSamples& samples, const std::filesystem::path& destination) {
  write_text(serialize_samples(samples), destination);
}

SpatialSamples read_samples(const std::filesystem::path& source) { return parse_samples(read_text(source)); }

}  // namespace optisph
