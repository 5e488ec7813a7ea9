#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace optisph {

enum class Errc {
  InvalidBandLimit,
  InvalidInput,
  OutOfRange,
  Numeric,
  IllConditionedGrid,
  IllConditionedSolve,
  SingularSystem,
  BandLimitMismatch,
  AliasingRisk,
  SizeGuard,
  MalformedFile,
  VersionMismatch,
  ChecksumMismatch,
};

const char* to_string(Errc code) noexcept;

/// Library-wide exception. `order` and `kappa` are filled for the
/// conditioning failures and left at their defaults otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, int order = -1,
        double kappa = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), code_(code), order_(order), kappa_(kappa) {}

  Errc code() const noexcept { return code_; }
  int order() const noexcept { return order_; }
  double kappa() const noexcept { return kappa_; }

 private:
  Errc code_;
  int order_;
  double kappa_;
};

}  // namespace optisph
