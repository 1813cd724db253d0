#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sr1/core/matrix.hpp"

namespace sr1 {

struct PowerOptions {
  double tol = 1e-10;
  int max_iterations = 1000;
  std::uint64_t seed = 0;
};

struct SingularTriple {
  double sigma = 0.0;
  ComplexVector u;  // unit, length M
  ComplexVector v;  // unit, length N
  int iterations = 0;
  bool converged = false;
  // sigma estimate after every iteration; non-decreasing
  std::vector<double> history;
};

namespace detail {

// Largest-norm column (first on ties), nudged by a small seeded vector so the
// start is never exactly orthogonal to the dominant left singular vector.
inline ComplexVector default_start(const ComplexMatrix& a, std::uint64_t seed) {
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double n = norm2(a.col(k));
    if (n > best_norm) {
      best_norm = n;
      best = k;
    }
  }
  ComplexVector u(a.col(best).begin(), a.col(best).end());
  normalize(u);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector nudge(a.rows());
  for (auto& z : nudge) z = {g(rng), g(rng)};
  normalize(nudge);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += 1e-2 * nudge[i];
  normalize(u);
  return u;
}

}  // namespace detail

//
// Leading singular triple (sigma, u, v) of A by alternating power iteration
//
//   v <- A^* u / |A^* u|,   u <- A v / |A v|,   sigma = |A v|
//
// Stops once |A^* u - sigma v| <= tol * sigma; A v = sigma u holds by
// construction. A warm start (e.g. the singular vector of a matrix that differs
// in one column) typically converges in a handful of iterations. If the cap is
// hit, the last (best) iterate is returned with converged == false.
//
inline SingularTriple leading_singular_triple(const ComplexMatrix& a,
                                              std::optional<std::span<const Complex>> warm_start = {},
                                              const PowerOptions& opts = {}) {
  if (frobenius_norm(a) == 0.0) throw Error(ErrorCode::ZeroMatrix, "leading_singular_triple on zero matrix");

  ComplexVector u;
  if (warm_start) {
    detail::require_dims(warm_start->size() == a.rows(), "warm start length must equal rows");
    u.assign(warm_start->begin(), warm_start->end());
    if (norm2(u) == 0.0) throw Error(ErrorCode::DegenerateInput, "warm start is zero");
    normalize(u);
  } else {
    u = detail::default_start(a, opts.seed);
  }

  SingularTriple out;
  ComplexVector v;
  double sigma = 0.0;
  bool restarted = false;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    ComplexVector w = adjoint_matvec(a, u);
    if (!v.empty()) {
      double r = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) r += std::norm(w[k] - sigma * v[k]);
      if (std::sqrt(r) <= opts.tol * sigma) {
        out.converged = true;
        break;
      }
    }
    double s = norm2(w);
    if (s == 0.0) {
      // start orthogonal to range(A); only possible for a warm start
      if (restarted) throw Error(ErrorCode::DegenerateInput, "power iteration stalled");
      restarted = true;
      u = detail::default_start(a, opts.seed);
      w = adjoint_matvec(a, u);
      s = norm2(w);
    }
    for (auto& z : w) z /= s;
    v = std::move(w);

    ComplexVector z = matvec(a, v);
    sigma = norm2(z);
    for (auto& c : z) c /= sigma;
    u = std::move(z);

    out.iterations = it;
    out.history.push_back(sigma);
  }

  out.sigma = sigma;
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

}  // namespace sr1
