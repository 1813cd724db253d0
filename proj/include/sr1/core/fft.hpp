#pragma once

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <span>
#include <utility>

#include "sr1/core/matrix.hpp"

namespace sr1 {

//
// Unitary DFT (scale 1/sqrt(M) in both directions) on top of FFTW.
//
//   forward:  x_hat[f] = M^{-1/2} sum_j x[j] exp(-2 pi i f j / M)
//   inverse:  x[j]     = M^{-1/2} sum_f x_hat[f] exp(+2 pi i f j / M)
//
// Plans are created once per (length, direction) with FFTW_ESTIMATE, which
// gives the same plan, hence the same rounding, on every run. Planning is
// serialized; executing a plan on fresh arrays is thread-safe in FFTW.
//
namespace detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void unitary_dft_inplace(std::span<Complex> x, int sign) {
  if (x.empty()) return;
  fftw_plan p = PlanCache::instance().get(x.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(p, ptr, ptr);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& z : x) z *= scale;
}

}  // namespace detail

inline void fft_inplace(std::span<Complex> x) { detail::unitary_dft_inplace(x, FFTW_FORWARD); }
inline void ifft_inplace(std::span<Complex> x) { detail::unitary_dft_inplace(x, FFTW_BACKWARD); }

inline ComplexVector fft(std::span<const Complex> x) {
  ComplexVector out(x.begin(), x.end());
  fft_inplace(out);
  return out;
}

inline ComplexVector ifft(std::span<const Complex> x) {
  ComplexVector out(x.begin(), x.end());
  ifft_inplace(out);
  return out;
}

/// Column-wise unitary DFT. Preserves the Frobenius norm and every singular value.
inline ComplexMatrix fft_columns(ComplexMatrix a) {
  for (std::size_t k = 0; k < a.cols(); ++k) fft_inplace(a.col(k));
  return a;
}

/// Inverse of fft_columns.
inline ComplexMatrix ifft_columns(ComplexMatrix a) {
  for (std::size_t k = 0; k < a.cols(); ++k) ifft_inplace(a.col(k));
  return a;
}

}  // namespace sr1
