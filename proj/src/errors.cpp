#include "optisph/errors.hpp"

#include <omp.h>

#include "optisph/execution.hpp"

namespace optisph {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidBandLimit: return "invalid-band-limit";
    case Errc::InvalidInput: return "invalid-input";
    case Errc::OutOfRange: return "out-of-range";
    case Errc::Numeric: return "numeric";
    case Errc::IllConditionedGrid: return "ill-conditioned-grid";
    case Errc::IllConditionedSolve: return "ill-conditioned-solve";
    case Errc::SingularSystem: return "singular-system";
    case Errc::BandLimitMismatch: return "band-limit-mismatch";
    case Errc::AliasingRisk: return "aliasing-risk";
    case Errc::SizeGuard: return "size-guard";
    case Errc::MalformedFile: return "malformed-file";
    case Errc::VersionMismatch: return "version-mismatch";
    case Errc::ChecksumMismatch: return "checksum-mismatch";
  }
  return "unknown";
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace optisph
