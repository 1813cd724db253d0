#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "sr1/core/fft.hpp"
#include "sr1/core/matrix.hpp"

//
// Exact single-column move test for the spectral-norm objective.
//
// The correlation criterion of the local search only looks along the current
// left singular vector u, so it can stop while some move still raises
// |X|_2 through another direction. Here X is the current (unshifted) data,
// G = X^* X with eigenpairs (mu_i, q_i), and a move replaces column x_k by
// x' = S~^{-s} x_k, i.e. G' = G + e_k g^* + g e_k^* with
//
//   g_j = <x_j, x' - x_k>   (j != k),   g_k = 0.
//
// For t > mu_max, R = (t - G)^{-1} is positive definite and by the
// Haynsworth inertia formula lambda_max(G') > t iff the 2x2 matrix
// [[0,1],[1,0]] - [e_k g]^* R [e_k g] is negative definite, i.e.
//
//   R_kk * g^* R g > |1 - (R g)_k|^2.
//
// In the eigenbasis every term is a sum over i of (numerator)/(t - mu_i), and
// the q_i^* g for all shifts s are cross-correlations of y_i = X q_i with x_k.
// Bisection on t then gives lambda_max(G') for the candidates that pass.
//
namespace sr1::detail {

struct CertifiedMove {
  double gain = 0.0;  // relative increase of |X|_2^2
  std::size_t column = 0;
  std::size_t shift = 0;
};

class MoveCertifier {
 public:
  // xh: column spectra of the current data; eps: relative gain threshold
  MoveCertifier(const ComplexMatrix& xh, double eps) : xh_(xh), eps_(eps) {
    const std::size_t n = xh.cols(), m = xh.rows();
    Eigen::MatrixXcd g(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const Complex v = dot(xh.col(j), xh.col(k));
        g(j, k) = v;
        g(k, j) = std::conj(v);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    // descending, scaled so that mu_0 = 1
    mu_max_ = es.eigenvalues()(n - 1);
    mu_.resize(n);
    q_ = Eigen::MatrixXcd(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      mu_[i] = es.eigenvalues()(n - 1 - i) / mu_max_;
      q_.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    // spectra of y_i = X q_i
    yh_.assign(n, ComplexVector(m));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Complex w = q_(j, i);
        if (w == Complex{}) continue;
        const auto col = xh.col(j);
        for (std::size_t f = 0; f < m; ++f) yh_[i][f] += w * col[f];
      }
  }

  CertifiedMove best() const {
    CertifiedMove out;
    if (!(mu_max_ > 0.0)) return out;
    const std::size_t n = xh_.cols(), m = xh_.rows();
    std::vector<ComplexVector> z(n, ComplexVector(m));
    ComplexVector auto_corr(m), h(n);
    std::vector<double> a(n);

    for (std::size_t k = 0; k < n; ++k) {
      const auto xk = xh_.col(k);
      corr(xk, xk, auto_corr);
      for (std::size_t i = 0; i < n; ++i) corr(yh_[i], xk, z[i]);
      for (std::size_t i = 0; i < n; ++i) a[i] = std::norm(q_(k, i));

      for (std::size_t s = 1; s < m; ++s) {
        double g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          h[i] = (z[i][s] - z[i][0] - std::conj(q_(k, i)) * (auto_corr[s] - auto_corr[0])) / mu_max_;
          g2 += std::norm(h[i]);
        }
        if (g2 == 0.0) continue;
        const double t0 = 1.0 + eps_;
        if (criterion(k, h, a, t0) <= 0.0) continue;
        double lo = t0, hi = 1.0 + 2.0 * std::sqrt(g2) + eps_;
        for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (criterion(k, h, a, mid) > 0.0 ? lo : hi) = mid;
        }
        const double gain = lo - 1.0;
        if (gain > out.gain) out = {gain, k, s};
      }
    }
    return out;
  }

 private:
  static void corr(std::span<const Complex> wh, std::span<const Complex> xh, ComplexVector& r) {
    const double scale = std::sqrt(static_cast<double>(xh.size()));
    for (std::size_t f = 0; f < xh.size(); ++f) r[f] = std::conj(wh[f]) * xh[f];
    ifft_inplace(r);
    for (auto& v : r) v *= scale;
  }

  // Sign of R_kk g^*Rg - |1 - (Rg)_k|^2 at t, with the top eigenvalue's
  // 1/d^2 terms cancelled analytically and the result multiplied by d_0.
  double criterion(std::size_t k, const ComplexVector& h, const std::vector<double>& a, double t) const {
    const std::size_t n = h.size();
    const double d0 = t - mu_[0];
    double ar = 0.0, br = 0.0;
    Complex cr{};
    for (std::size_t i = 1; i < n; ++i) {
      const double d = t - mu_[i];
      ar += a[i] / d;
      br += std::norm(h[i]) / d;
      cr += q_(k, i) * h[i] / d;
    }
    const Complex c0 = q_(k, 0) * h[0];
    const Complex one_minus = Complex{1.0, 0.0} - cr;
    return a[0] * br + std::norm(h[0]) * ar + 2.0 * (std::conj(one_minus) * c0).real() +
           d0 * (ar * br - std::norm(one_minus));
  }

  const ComplexMatrix& xh_;
  double eps_;
  double mu_max_ = 0.0;
  std::vector<double> mu_;
  Eigen::MatrixXcd q_;
  std::vector<ComplexVector> yh_;
};

}  // namespace sr1::detail
