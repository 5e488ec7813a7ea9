#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "optisph/sampling.hpp"

namespace optisph {

/// Text encoding of a grid: header line, L, measure, ordering, L permutation
/// indices, then `crc32 <hex>` over every preceding byte. Co-latitudes are
/// not stored; they are re-derived from (L, measure, permutation).
std::string serialize_grid(const ColatitudeGrid& grid);
ColatitudeGrid parse_grid(std::string_view text);

void save_grid(const ColatitudeGrid& grid, const std::filesystem::path& destination);
ColatitudeGrid load_grid(const std::filesystem::path& source);

/// On-disk cache of grids keyed by (L, measure, ordering). Condition-minimized
/// grids are expensive to build, so each one is optimized once and reloaded.
class GridCache {
 public:
  explicit GridCache(std::filesystem::path directory);

  ColatitudeGrid get(int band_limit, Measure measure, Ordering ordering,
                     const OptimizeOptions& options = {});
  std::filesystem::path path_for(int band_limit, Measure measure, Ordering ordering) const;
  const std::filesystem::path& directory() const noexcept { return directory_; }

 private:
  std::filesystem::path directory_;
};

/// $OPTISPH_CACHE if set, otherwise ./.optisph-cache.
std::filesystem::path default_cache_directory();

}  // namespace optisph
