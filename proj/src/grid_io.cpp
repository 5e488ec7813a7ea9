#include "optisph/grid_io.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "detail/line_reader.hpp"
#include "optisph/errors.hpp"

namespace optisph {
namespace {

constexpr std::string_view kMagic = "OPTISPH-GRID";
constexpr std::string_view kVersion = "v1";

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string hex8(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

}  // namespace

std::string serialize_grid(const ColatitudeGrid& grid) {
  std::string body;
  body += std::string(kMagic) + " " + std::string(kVersion) + "\n";
  body += "L " + std::to_string(grid.band_limit()) + "\n";
  body += "measure " + std::string(to_string(grid.measure())) + "\n";
  body += "ordering " + std::string(to_string(grid.ordering())) + "\n";
  for (int p : grid.permutation()) body += std::to_string(p) + "\n";
  body += "crc32 " + hex8(crc_of(body)) + "\n";
  return body;
}

ColatitudeGrid parse_grid(std::string_view text) {
  detail::LineReader reader(text, "grid file");
  const auto header = reader.require("header");
  const auto space = header.find(' ');
  if (space == std::string_view::npos || header.substr(0, space) != kMagic) reader.fail("bad header");
  if (header.substr(space + 1) != kVersion)
    throw Error(Errc::VersionMismatch,
                "grid file: unsupported version '" + std::string(header.substr(space + 1)) + "'");

  const int band_limit = reader.number<int>(reader.keyed(reader.require("L"), "L"));
  if (band_limit < 1) reader.fail("L must be >= 1");
  Measure measure{};
  Ordering ordering{};
  const auto measure_text = reader.keyed(reader.require("measure"), "measure");
  const auto ordering_text = reader.keyed(reader.require("ordering"), "ordering");
  try {
    measure = parse_measure(measure_text);
    ordering = parse_ordering(ordering_text);
  } catch (const Error& e) {
    reader.fail(e.what());
  }

  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(band_limit));
  for (int k = 0; k < band_limit; ++k) perm.push_back(reader.number<int>(reader.require("permutation index")));
  const std::size_t covered = reader.position();
  const auto stored = reader.keyed(reader.require("checksum"), "crc32");
  if (stored != hex8(crc_of(text.substr(0, covered))))
    throw Error(Errc::ChecksumMismatch, "grid file: checksum mismatch");
  std::string_view extra;
  if (reader.next(extra)) reader.fail("trailing data after checksum");

  try {
    return ColatitudeGrid(band_limit, measure, ordering, std::move(perm));
  } catch (const Error& e) {
    reader.fail(e.what());
  }
}

void save_grid(const ColatitudeGrid& grid, const std::filesystem::path& destination) {
  const auto tmp = destination.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::InvalidInput, "cannot write " + tmp);
    out << serialize_grid(grid);
    if (!out) throw Error(Errc::InvalidInput, "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, destination);
}

ColatitudeGrid load_grid(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(Errc::MalformedFile, "cannot read grid file " + source.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

GridCache::GridCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path GridCache::path_for(int band_limit, Measure measure, Ordering ordering) const {
  return directory_ / ("grid-L" + std::to_string(band_limit) + "-" + std::string(to_string(measure)) + "-" +
                       std::string(to_string(ordering)) + ".txt");
}

ColatitudeGrid GridCache::get(int band_limit, Measure measure, Ordering ordering, const OptimizeOptions& options) {
  const auto path = path_for(band_limit, measure, ordering);
  if (std::filesystem::exists(path)) {
    try {
      return load_grid(path);
    } catch (const Error&) {
      // Corrupt entry: rebuild below.
    }
  }
  auto grid = make_grid(band_limit, measure, ordering, options);
  std::filesystem::create_directories(directory_);
  save_grid(grid, path);
  return grid;
}

std::filesystem::path default_cache_directory() {
  if (const char* env = std::getenv("OPTISPH_CACHE"); env != nullptr && *env != '\0') return env;
  return std::filesystem::current_path() / ".optisph-cache";
}

}  // namespace optisph
