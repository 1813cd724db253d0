#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "sr1/core/matrix.hpp"

namespace sr1 {

//
// One circular row shift per column, stored reduced modulo the row count M.
//
class ShiftVector {
 public:
  ShiftVector() = default;

  ShiftVector(std::size_t modulus, std::size_t n) : modulus_(modulus), shifts_(n, 0) {
    if (modulus == 0) throw Error(ErrorCode::DimensionMismatch, "shift modulus must be positive");
  }

  // Arbitrary integers, canonicalized into {0, ..., M-1}.
  ShiftVector(std::size_t modulus, std::span<const std::int64_t> raw)
      : ShiftVector(modulus, raw.size()) {
    for (std::size_t k = 0; k < raw.size(); ++k) shifts_[k] = reduce(raw[k]);
  }

  ShiftVector(std::size_t modulus, std::initializer_list<std::int64_t> raw)
      : ShiftVector(modulus, std::span<const std::int64_t>(raw.begin(), raw.size())) {}

  std::size_t modulus() const noexcept { return modulus_; }
  std::size_t size() const noexcept { return shifts_.size(); }

  std::size_t operator[](std::size_t k) const noexcept { return shifts_[k]; }
  void set(std::size_t k, std::int64_t s) { shifts_[k] = reduce(s); }

  std::span<const std::size_t> values() const noexcept { return shifts_; }

  bool is_zero() const noexcept {
    for (auto s : shifts_)
      if (s != 0) return false;
    return true;
  }

  std::size_t distinct_count() const {
    std::vector<bool> seen(modulus_, false);
    std::size_t count = 0;
    for (auto s : shifts_)
      if (!seen[s]) {
        seen[s] = true;
        ++count;
      }
    return count;
  }

  std::size_t reduce(std::int64_t s) const noexcept {
    const auto m = static_cast<std::int64_t>(modulus_);
    return static_cast<std::size_t>(((s % m) + m) % m);
  }

  friend bool operator==(const ShiftVector&, const ShiftVector&) = default;

 private:
  std::size_t modulus_ = 1;
  std::vector<std::size_t> shifts_;
};

// out[(j + s) mod M] = x[j]
inline void circular_shift(std::span<const Complex> x, std::size_t s, std::span<Complex> out) {
  const std::size_t m = x.size();
  s %= m;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t d = j + s;
    out[d >= m ? d - m : d] = x[j];
  }
}

inline ComplexVector circular_shift(std::span<const Complex> x, std::int64_t s) {
  ComplexVector out(x.size());
  const auto m = static_cast<std::int64_t>(x.size());
  circular_shift(x, static_cast<std::size_t>(((s % m) + m) % m), out);
  return out;
}

/// S_lambda A: column k circularly forward-shifted by lambda_k. Pure permutation.
inline ComplexMatrix shift_columns(const ComplexMatrix& a, const ShiftVector& lambda) {
  detail::require_dims(lambda.size() == a.cols(), "shift vector length must equal cols");
  detail::require_dims(lambda.modulus() == a.rows(), "shift modulus must equal rows");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.cols(); ++k) circular_shift(a.col(k), lambda[k], out.col(k));
  return out;
}

/// (-lambda) mod M
inline ShiftVector inverse_shift(const ShiftVector& lambda) {
  ShiftVector out(lambda.modulus(), lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k)
    out.set(k, -static_cast<std::int64_t>(lambda[k]));
  return out;
}

/// S_{-lambda} A
inline ComplexMatrix unshift_columns(const ComplexMatrix& a, const ShiftVector& lambda) {
  return shift_columns(a, inverse_shift(lambda));
}

/// (lambda + other) mod M, so that S_lambda S_other = S_{lambda + other}.
inline ShiftVector compose_shifts(const ShiftVector& lambda, const ShiftVector& other) {
  detail::require_dims(lambda.size() == other.size(), "compose_shifts length mismatch");
  detail::require_dims(lambda.modulus() == other.modulus(), "compose_shifts modulus mismatch");
  ShiftVector out(lambda.modulus(), lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k)
    out.set(k, static_cast<std::int64_t>(lambda[k] + other[k]));
  return out;
}

namespace detail {

// roots[m] = exp(-2 pi i m / M)
inline ComplexVector unit_roots(std::size_t m) {
  ComplexVector roots(m);
  for (std::size_t j = 0; j < m; ++j)
    roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
  return roots;
}

// multiply a spectrum by the phase ramp of a circular shift by s
inline void apply_phase_ramp(std::span<Complex> spectrum, std::size_t s,
                             std::span<const Complex> roots) {
  const std::size_t m = spectrum.size();
  std::size_t idx = 0;
  for (std::size_t j = 0; j < m; ++j) {
    spectrum[j] *= roots[idx];
    idx += s;
    if (idx >= m) idx %= m;
  }
}

}  // namespace detail

/// P_lambda[j, k] = exp(-2 pi i j lambda_k / M); F(S_lambda A) = F(A) .* P_lambda.
inline ComplexMatrix phase_matrix(const ShiftVector& lambda) {
  const std::size_t m = lambda.modulus();
  const auto roots = detail::unit_roots(m);
  ComplexMatrix p(m, lambda.size(), Complex{1.0, 0.0});
  for (std::size_t k = 0; k < lambda.size(); ++k) detail::apply_phase_ramp(p.col(k), lambda[k], roots);
  return p;
}

/// Shift in the Fourier domain: A_hat .* P_lambda.
inline ComplexMatrix apply_shift_fourier(ComplexMatrix a_hat, const ShiftVector& lambda) {
  detail::require_dims(lambda.size() == a_hat.cols(), "shift vector length must equal cols");
  detail::require_dims(lambda.modulus() == a_hat.rows(), "shift modulus must equal rows");
  const auto roots = detail::unit_roots(a_hat.rows());
  for (std::size_t k = 0; k < a_hat.cols(); ++k)
    detail::apply_phase_ramp(a_hat.col(k), lambda[k], roots);
  return a_hat;
}

}  // namespace sr1
