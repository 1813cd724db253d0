#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "sr1/decomposer.hpp"

namespace sr1::bench {

enum class Method { Sr1, TruncatedSvd };

inline const char* to_string(Method m) { return m == Method::Sr1 ? "sr1" : "truncatedSVD"; }

struct StorageReport {
  Method method = Method::Sr1;
  std::size_t term_count = 0;
  double cost_doubles = 0.0;
  double rel_error = 0.0;
};

/// Doubles needed to store term_count terms; shift vectors count as 0.5 N.
inline double storage_cost(Method method, std::size_t rows, std::size_t cols, std::size_t term_count) {
  const double m = static_cast<double>(rows), n = static_cast<double>(cols);
  const double per_term = method == Method::Sr1 ? m + n + 0.5 * n : m + n;
  return per_term * static_cast<double>(term_count);
}

/// Largest SVD term count whose storage does not exceed the given budget.
inline std::size_t svd_terms_for_budget(std::size_t rows, std::size_t cols, double budget) {
  return static_cast<std::size_t>(std::floor(budget / static_cast<double>(rows + cols) + 1e-12));
}

/// Greedy rank-L approximation by deflating leading singular triples; all lambda = 0.
inline Decomposition truncated_svd(const ComplexMatrix& a, std::size_t terms, const PowerOptions& opts = {}) {
  if (terms > std::min(a.rows(), a.cols()))
    throw Error(ErrorCode::InvalidSpec, "term count exceeds min(M, N)");
  const double total = frobenius_norm(a);
  if (total == 0.0) throw Error(ErrorCode::ZeroMatrix, "input matrix is zero");

  Decomposition d;
  d.rows = a.rows();
  d.cols = a.cols();
  d.real_input = is_real(a);
  d.residual_history.push_back(total);
  ComplexMatrix r = a;
  const ShiftVector zero(a.rows(), a.cols());
  for (std::size_t l = 0; l < terms; ++l) {
    if (frobenius_norm(r) <= 1e-14 * total) break;
    auto t = leading_singular_triple(r, std::nullopt, opts);
    Component c = canonicalize_component(t.sigma, std::move(t.u), std::move(t.v), zero);
    r -= component_matrix(c);
    d.residual_history.push_back(frobenius_norm(r));
    d.components.push_back(std::move(c));
  }
  return d;
}

struct BruteForceResult {
  ShiftVector lambda;
  double value = 0.0;
};

/// Exhaustive maximization of |S_{-lambda} A|_2 over lambda with lambda_0 = 0.
inline BruteForceResult brute_force_shift_search(const ComplexMatrix& a, const PowerOptions& opts = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  double count = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    count *= static_cast<double>(m);
    if (count > 1e6) throw Error(ErrorCode::TooLarge, "M^(N-1) exceeds 1e6 candidates");
  }
  if (frobenius_norm(a) == 0.0) throw Error(ErrorCode::ZeroMatrix, "input matrix is zero");

  ShiftVector lambda(m, n);
  BruteForceResult best{lambda, -1.0};
  ComplexMatrix x = a;
  for (;;) {
    for (std::size_t k = 1; k < n; ++k)
      circular_shift(a.col(k), (m - lambda[k]) % m, x.col(k));
    const double value = leading_singular_triple(x, std::nullopt, opts).sigma;
    if (value > best.value) best = {lambda, value};
    // odometer over columns 1..N-1
    std::size_t k = 1;
    for (; k < n; ++k) {
      if (lambda[k] + 1 < m) {
        lambda.set(k, static_cast<std::int64_t>(lambda[k] + 1));
        break;
      }
      lambda.set(k, 0);
    }
    if (k == n) break;
  }
  return best;
}

}  // namespace sr1::bench
