#pragma once

namespace optisph {

/// Selects the OpenMP kernels or the single-threaded reference path.
/// Both produce bit-identical results: parallel loops only split
/// independent work items and never reduce across threads.
enum class Execution { Serial, Parallel };

int max_threads() noexcept;

}  // namespace optisph
