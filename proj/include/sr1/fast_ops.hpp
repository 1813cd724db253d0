#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <vector>

#include "sr1/core/fft.hpp"
#include "sr1/decomposer.hpp"

//
// Products with shifted rank-1 matrices through the factorization
// S_lambda(sigma u v^*) = U V, where U is the circulant matrix of u and V has
// one nonzero per column (sigma conj(v_j) in row lambda_j). V x collapses to a
// length-M activation t, and U t is a circular convolution done with FFTs, so
// one product costs O(M log M + N) instead of O(M N).
//
namespace sr1 {

// t[s] = sum over j with lambda_j = s of sigma conj(v_j) x_j
struct SparseActivation {
  ComplexVector weights;
};

inline SparseActivation activation(const Component& c, std::span<const Complex> x) {
  detail::require_dims(x.size() == c.v.size(), "x length must equal cols");
  SparseActivation t{ComplexVector(c.u.size())};
  for (std::size_t j = 0; j < x.size(); ++j) t.weights[c.lambda[j]] += c.sigma * std::conj(c.v[j]) * x[j];
  return t;
}

namespace detail {

inline void accumulate_convolution(std::span<const Complex> u_hat, const SparseActivation& t,
                                   std::span<Complex> spectrum) {
  const ComplexVector t_hat = fft(t.weights);
  const double scale = std::sqrt(static_cast<double>(t_hat.size()));
  for (std::size_t f = 0; f < t_hat.size(); ++f) spectrum[f] += scale * u_hat[f] * t_hat[f];
}

// out_j += sigma v_j <S~^{lambda_j} u, y>, given y_hat
inline void accumulate_adjoint(const Component& c, std::span<const Complex> u_hat,
                               std::span<const Complex> y_hat, std::span<Complex> out) {
  const std::size_t m = u_hat.size();
  ComplexVector r(m);
  for (std::size_t f = 0; f < m; ++f) r[f] = std::conj(u_hat[f]) * y_hat[f];
  ifft_inplace(r);
  const double scale = std::sqrt(static_cast<double>(m));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += c.sigma * c.v[j] * scale * r[c.lambda[j]];
}

}  // namespace detail

/// S_lambda(sigma u v^*) x in O(M log M + N).
inline ComplexVector component_matvec(const Component& c, std::span<const Complex> x) {
  ComplexVector spectrum(c.u.size());
  detail::accumulate_convolution(fft(c.u), activation(c, x), spectrum);
  ifft_inplace(spectrum);
  return spectrum;
}

/// (S_lambda(sigma u v^*))^* y in O(M log M + N).
inline ComplexVector component_rmatvec(const Component& c, std::span<const Complex> y) {
  detail::require_dims(y.size() == c.u.size(), "y length must equal rows");
  ComplexVector out(c.v.size());
  detail::accumulate_adjoint(c, fft(c.u), fft(y), out);
  return out;
}

//
// Reusable operator for a whole decomposition: the spectra of all u are
// computed once, and every product accumulates in the Fourier domain so a
// call costs L forward FFTs plus one inverse.
//
class ShiftedLowRankOperator {
 public:
  explicit ShiftedLowRankOperator(const Decomposition& d) : d_(d) {
    u_hat_.reserve(d.components.size());
    for (const auto& c : d.components) u_hat_.push_back(fft(c.u));
  }

  std::size_t rows() const noexcept { return d_.rows; }
  std::size_t cols() const noexcept { return d_.cols; }

  ComplexVector apply(std::span<const Complex> x) const {
    detail::require_dims(x.size() == d_.cols, "x length must equal cols");
    ComplexVector spectrum(d_.rows);
    for (std::size_t l = 0; l < u_hat_.size(); ++l)
      detail::accumulate_convolution(u_hat_[l], activation(d_.components[l], x), spectrum);
    ifft_inplace(spectrum);
    return spectrum;
  }

  ComplexVector apply_adjoint(std::span<const Complex> y) const {
    detail::require_dims(y.size() == d_.rows, "y length must equal rows");
    ComplexVector out(d_.cols);
    const ComplexVector y_hat = fft(y);
    for (std::size_t l = 0; l < u_hat_.size(); ++l)
      detail::accumulate_adjoint(d_.components[l], u_hat_[l], y_hat, out);
    return out;
  }

 private:
  const Decomposition& d_;
  std::vector<ComplexVector> u_hat_;
};

inline ComplexVector decomposition_matvec(const Decomposition& d, std::span<const Complex> x) {
  return ShiftedLowRankOperator(d).apply(x);
}

inline ComplexVector decomposition_rmatvec(const Decomposition& d, std::span<const Complex> y) {
  return ShiftedLowRankOperator(d).apply_adjoint(y);
}

/// Embed every component into P = next power of two >= M rows by zero-padding u.
/// This is a different operator: shifts now wrap at P, not M.
inline Decomposition pad_rows_pow2(const Decomposition& d) {
  const std::size_t p = std::bit_ceil(d.rows);
  Decomposition out;
  out.rows = p;
  out.cols = d.cols;
  out.residual_history = d.residual_history;
  for (const auto& c : d.components) {
    Component e;
    e.sigma = c.sigma;
    e.u = c.u;
    e.u.resize(p);
    e.v = c.v;
    e.lambda = ShiftVector(p, c.lambda.size());
    for (std::size_t j = 0; j < c.lambda.size(); ++j) e.lambda.set(j, static_cast<std::int64_t>(c.lambda[j]));
    out.components.push_back(std::move(e));
  }
  return out;
}

}  // namespace sr1
