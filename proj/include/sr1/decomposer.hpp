#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sr1/core/matrix.hpp"
#include "sr1/core/power_iteration.hpp"
#include "sr1/shift_estimator.hpp"
#include "sr1/shift_ops.hpp"
#include "sr1/solver_config.hpp"

namespace sr1 {

//
// One shifted rank-1 term sigma * S_lambda(u v^*) in canonical form:
// |u| = |v| = 1, lambda_0 = 0, largest-modulus entry of u real and >= 0.
//
struct Component {
  double sigma = 0.0;
  ComplexVector u;
  ComplexVector v;
  ShiftVector lambda;

  friend bool operator==(const Component&, const Component&) = default;
};

struct Decomposition {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Component> components;
  // |A|_F, then the residual norm after every extracted component
  std::vector<double> residual_history;

  // diagnostics, not serialized
  std::vector<std::vector<EstimatorTrace>> traces;
  bool real_input = false;
  double max_imag_discarded = 0.0;

  double relative_residual() const {
    if (residual_history.empty() || residual_history.front() == 0.0) return 0.0;
    return residual_history.back() / residual_history.front();
  }
};

/// Dense sigma * S_lambda(u v^*).
inline ComplexMatrix component_matrix(const Component& c) {
  return shift_columns(outer(c.u, c.v, c.sigma), c.lambda);
}

/// Resolve the scale, phase and global-shift ambiguity of sigma * S_lambda(u v^*).
inline Component canonicalize_component(double sigma, ComplexVector u, ComplexVector v,
                                        const ShiftVector& lambda) {
  detail::require_dims(lambda.size() == v.size() && lambda.modulus() == u.size(),
                       "component shapes disagree");
  const double nu = norm2(u), nv = norm2(v);
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::DegenerateInput, "zero singular vector");
  if (!std::isfinite(sigma)) throw Error(ErrorCode::DegenerateInput, "non-finite sigma");

  Component c;
  c.sigma = std::abs(sigma) * nu * nv;
  const double sign = sigma < 0.0 ? -1.0 : 1.0;

  // S_lambda(u v^*) = S_{lambda - m}(S~^m(u) v^*) with m = lambda_0
  const std::size_t m = lambda.size() > 0 ? lambda[0] : 0;
  c.u = circular_shift(u, static_cast<std::int64_t>(m));
  c.lambda = lambda;
  for (std::size_t k = 0; k < lambda.size(); ++k)
    c.lambda.set(k, static_cast<std::int64_t>(lambda[k]) - static_cast<std::int64_t>(m));

  for (auto& z : c.u) z *= sign / nu;
  c.v = std::move(v);
  for (auto& z : c.v) z /= nv;

  std::size_t peak = 0;
  for (std::size_t j = 1; j < c.u.size(); ++j)
    if (std::abs(c.u[j]) > std::abs(c.u[peak])) peak = j;
  const Complex rot = std::conj(detail::phase(c.u[peak]));
  for (auto& z : c.u) z *= rot;
  for (auto& z : c.v) z *= rot;
  c.u[peak] = std::abs(c.u[peak]);
  return c;
}

struct Extraction {
  Component component;
  ComplexMatrix residual;
  ShiftEstimate estimate;
  double max_imag_discarded = 0.0;
};

/// One greedy step: estimate lambda, take the leading singular pair of S_{-lambda} A, deflate.
inline Extraction extract_component(const ComplexMatrix& a, const SolverConfig& cfg = {},
                                    bool real_output = false) {
  Extraction out{.component = {}, .residual = a, .estimate = estimate_shifts(a, cfg)};
  const auto& lambda = out.estimate.lambda;
  auto t = leading_singular_triple(unshift_columns(a, lambda), std::nullopt, cfg.power());
  Component c = canonicalize_component(t.sigma, std::move(t.u), std::move(t.v), lambda);

  if (real_output) {
    for (auto* vec : {&c.u, &c.v})
      for (auto& z : *vec) {
        out.max_imag_discarded = std::max(out.max_imag_discarded, std::abs(z.imag()));
        z = z.real();
      }
    normalize(c.u);
    normalize(c.v);
  }

  // best coefficient for the (possibly projected) unit vectors; this makes
  // |A - sigma S(u v^*)|_F^2 = |A|_F^2 - sigma^2 hold for any unit u, v
  const ComplexMatrix aligned = unshift_columns(a, c.lambda);
  double sigma = dot(c.u, matvec(aligned, c.v)).real();
  if (sigma < 0.0) {
    sigma = -sigma;
    for (auto& z : c.v) z = -z;
  }
  c.sigma = sigma;

  out.residual -= component_matrix(c);
  out.component = std::move(c);
  return out;
}

/// Greedy shifted rank-1 decomposition: up to L extractions, early exit on the threshold.
inline Decomposition decompose(const ComplexMatrix& a, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!is_all_finite(a)) throw Error(ErrorCode::InvalidSpec, "input has non-finite entries");
  const double norm_a = frobenius_norm(a);
  if (norm_a == 0.0) throw Error(ErrorCode::ZeroMatrix, "decompose on zero matrix");

  Decomposition d;
  d.rows = a.rows();
  d.cols = a.cols();
  d.real_input = is_real(a);
  d.residual_history.push_back(norm_a);

  const std::size_t limit = cfg.max_components > 0 ? cfg.max_components : a.rows() * a.cols();
  ComplexMatrix residual = a;
  while (d.components.size() < limit) {
    if (d.residual_history.back() <= cfg.residual_threshold * norm_a) break;
    Extraction ex = extract_component(residual, cfg, d.real_input);
    if (ex.component.sigma < 1e-14 * norm_a) break;
    d.max_imag_discarded = std::max(d.max_imag_discarded, ex.max_imag_discarded);
    residual = std::move(ex.residual);
    d.components.push_back(std::move(ex.component));
    d.traces.push_back(std::move(ex.estimate.trace));
    d.residual_history.push_back(frobenius_norm(residual));
  }
  return d;
}

/// Dense sum of all components; the zero matrix for an empty decomposition.
inline ComplexMatrix reconstruct(const Decomposition& d) {
  ComplexMatrix out(d.rows, d.cols);
  for (const auto& c : d.components) out += component_matrix(c);
  return out;
}

}  // namespace sr1
