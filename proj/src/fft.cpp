#include "optisph/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "optisph/errors.hpp"

namespace optisph::fft {
namespace {

// fftw_plan creation is not thread-safe; execution with the new-array
// interface is. Plans are created once per (length, sign, in-place) and kept for the
// life of the process.
class PlanCache {
 public:
  fftw_plan get(int n, int sign, bool in_place) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(n, sign, in_place);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* src = fftw_alloc_complex(static_cast<std::size_t>(n));
    auto* dst = in_place ? src : fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!in_place) fftw_free(dst);
    fftw_free(src);
    if (plan == nullptr) throw Error(Errc::Numeric, "fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
  if (in.size() != out.size()) throw Error(Errc::InvalidInput, "fft: length mismatch");
  const int n = static_cast<int>(in.size());
  if (n == 0) return;
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  fftw_plan plan = cache().get(n, sign, in.data() == out.data());
  // FFTW's interface is not const-correct; the input is only read.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  execute(in, out, FFTW_FORWARD);
}

void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  execute(in, out, FFTW_BACKWARD);
}

}  // namespace optisph::fft
