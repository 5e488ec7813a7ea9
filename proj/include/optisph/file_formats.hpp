#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "optisph/transform.hpp"

namespace optisph {

/// `OPTISPH-COEF v1`, `L <int>`, then L^2 lines `l m re im` in l^2+l+m order.
std::string serialize_coefficients(const HarmonicCoefficients& coeffs);
HarmonicCoefficients parse_coefficients(std::string_view text);

/// `OPTISPH-SIG v1`, `L <int>`, then L^2 lines `k j re im` ordered by (k, j).
std::string serialize_samples(const SpatialSamples& samples);
SpatialSamples parse_samples(std::string_view text);

void write_coefficients(const HarmonicCoefficients& coeffs, const std::filesystem::path& destination);
HarmonicCoefficients read_coefficients(const std::filesystem::path& source);
void write_samples(const SpatialSamples& samples, const std::filesystem::path& destination);
SpatialSamples read_samples(const std::filesystem::path& source);

std::string read_text(const std::filesystem::path& source);
void write_text(const std::string& text, const std::filesystem::path& destination);

}  // namespace optisph
