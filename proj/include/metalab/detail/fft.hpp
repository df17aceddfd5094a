// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_DETAIL_FFT_HPP_
#define METALAB_DETAIL_FFT_HPP_

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <tuple>
#include <span>
#include <utility>
#include <vector>

#include "metalab/errors.hpp"

namespace metalab::detail {

using cplx = std::complex<double>;

enum class FftSign : int { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

// Plans are created once per (shape, sign, alignment) under a lock and
// executed through the new-array interface, which FFTW documents as
// thread-safe. Buffers with the alignment of fftw_malloc get the SIMD plan;
// any other buffer falls back to an unaligned plan.
class FftPlanCache {
 public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& dims, FftSign sign, bool aligned) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dims, static_cast<int>(sign), aligned);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    auto* buf = fftw_alloc_complex(total);
    if (buf == nullptr) throw InternalError("fftw_alloc_complex failed");
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, static_cast<int>(sign),
                                   FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED));
    fftw_free(buf);
    if (plan == nullptr) throw InternalError("fftw_plan_dft failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

  FftPlanCache(const FftPlanCache&) = delete;
  FftPlanCache& operator=(const FftPlanCache&) = delete;

 private:
  FftPlanCache() = default;
  ~FftPlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<std::vector<int>, int, bool>, fftw_plan> plans_;
};

/// Unnormalized in-place DFT over a row-major array with the given shape.
/// Forward uses exp(-2 pi i k m / N).
inline void fft_inplace(std::span<cplx> data, const std::vector<int>& dims,
                        FftSign sign = FftSign::Forward) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size()) throw DimensionError("fft_inplace: shape/size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = FftPlanCache::instance().get(dims, sign, fftw_alignment_of(reinterpret_cast<double*>(buf)) == 0);
  fftw_execute_dft(plan, buf, buf);
}

inline void fft_inplace(std::span<cplx> data, FftSign sign = FftSign::Forward) {
  fft_inplace(data, {static_cast<int>(data.size())}, sign);
}

}  // namespace metalab::detail

#endif  // METALAB_DETAIL_FFT_HPP_
