#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "sr1/core/error.hpp"

namespace sr1 {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

//
// Dense M x N complex matrix stored column-major, so every column is a
// contiguous span. Columns are the unit of work for shifts and FFTs.
//
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0)
      throw Error(ErrorCode::DimensionMismatch, "matrix dimensions must be positive");
  }

  static ComplexMatrix from_columns(const std::vector<ComplexVector>& cols) {
    if (cols.empty()) throw Error(ErrorCode::DimensionMismatch, "no columns");
    ComplexMatrix out(cols.front().size(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      detail::require_dims(cols[k].size() == out.rows(), "ragged columns");
      std::copy(cols[k].begin(), cols[k].end(), out.col(k).begin());
    }
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t i, std::size_t k) noexcept { return data_[i + k * rows_]; }
  const Complex& operator()(std::size_t i, std::size_t k) const noexcept {
    return data_[i + k * rows_];
  }

  std::span<Complex> col(std::size_t k) noexcept { return {data_.data() + k * rows_, rows_}; }
  std::span<const Complex> col(std::size_t k) const noexcept {
    return {data_.data() + k * rows_, rows_};
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  bool same_shape(const ComplexMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    detail::require_dims(same_shape(rhs), "matrix sum shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    detail::require_dims(same_shape(rhs), "matrix difference shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

// <x, y> = x^* y
inline Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double frobenius_norm(const ComplexMatrix& a) { return norm2(a.data()); }

inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

inline bool is_all_finite(const ComplexMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

inline bool is_real(const ComplexMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](const Complex& z) { return z.imag() == 0.0; });
}

// Entrywise modulus, kept complex so it can be fed to the same kernels.
inline ComplexMatrix abs(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = std::abs(a.data()[i]);
  return out;
}

inline ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_dims(a.same_shape(b), "hadamard shape mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

// y = A x
inline ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  detail::require_dims(x.size() == a.cols(), "matvec: x length must equal cols");
  ComplexVector y(a.rows());
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Complex xk = x[k];
    const auto c = a.col(k);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += c[i] * xk;
  }
  return y;
}

// y = A^* x
inline ComplexVector adjoint_matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  detail::require_dims(x.size() == a.rows(), "adjoint_matvec: x length must equal rows");
  ComplexVector y(a.cols());
  for (std::size_t k = 0; k < a.cols(); ++k) y[k] = dot(a.col(k), x);
  return y;
}

// sigma * u v^*
inline ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v,
                           double sigma = 1.0) {
  ComplexMatrix out(u.size(), v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex w = sigma * std::conj(v[k]);
    auto c = out.col(k);
    for (std::size_t i = 0; i < u.size(); ++i) c[i] = u[i] * w;
  }
  return out;
}

inline void normalize(std::span<Complex> x) {
  const double n = norm2(x);
  if (n > 0.0)
    for (auto& z : x) z /= n;
}

}  // namespace sr1
