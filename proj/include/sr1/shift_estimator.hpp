#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "sr1/core/fft.hpp"
#include "sr1/core/matrix.hpp"
#include "sr1/core/power_iteration.hpp"
#include "sr1/local_certificate.hpp"
#include "sr1/shift_ops.hpp"
#include "sr1/solver_config.hpp"

//
// Approximate maximization of |S_{-lambda} A|_2 over integer shift vectors.
//
// Everything runs on the column spectra A_hat = F(A): a shift of column k is a
// phase ramp, and the correlation of the current left singular vector with
// every shifted column is one inverse FFT per column. The pipeline is
//
//   1. starting guess: per column, peak of the correlation between a^k and its
//      zero-phase version F^{-1}|a_hat^k|
//   2. amplitude-projected local search: like 3., but the singular vector's
//      magnitudes are replaced by those of the leading singular vector of
//      |A_hat| (the maximizer of the phase relaxation)
//   3. plain local search: move the single column whose shift gains the most
//      in |u^* S_{-lambda} A|^2 until no move gains anything
//
namespace sr1 {

enum class EstimatorStage { Input, StartGuess, GlobalStage, LocalStage };
enum class LocalMode { Plain, AmplitudeProjected };

inline const char* to_string(EstimatorStage s) {
  switch (s) {
    case EstimatorStage::Input: return "input";
    case EstimatorStage::StartGuess: return "startGuess";
    case EstimatorStage::GlobalStage: return "globalStage";
    case EstimatorStage::LocalStage: return "localStage";
  }
  return "?";
}

struct EstimatorTrace {
  EstimatorStage stage = EstimatorStage::Input;
  double objective = 0.0;   // |S_{-lambda} A|_2 after the stage
  double ratio = 0.0;       // objective / |(|A_hat|)|_2
  std::size_t iterations = 0;  // accepted moves
  bool cap_reached = false;
};

// B[s, k] = |<u, S~^{-s} a^k>|^2, column-major M x N
class CorrelationMatrix {
 public:
  CorrelationMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), b_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t s, std::size_t k) noexcept { return b_[s + k * rows_]; }
  double operator()(std::size_t s, std::size_t k) const noexcept { return b_[s + k * rows_]; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> b_;
};

namespace detail {

// r[s] = <w, S~^{-s} x> for all s, given the spectra of w and x
inline void cross_correlation(std::span<const Complex> w_hat, std::span<const Complex> x_hat,
                              std::span<Complex> r) {
  const double scale = std::sqrt(static_cast<double>(x_hat.size()));
  for (std::size_t f = 0; f < x_hat.size(); ++f) r[f] = std::conj(w_hat[f]) * x_hat[f];
  ifft_inplace(r);
  for (auto& z : r) z *= scale;
}

inline Complex phase(Complex z) {
  const double a = std::abs(z);
  return a == 0.0 ? Complex{1.0, 0.0} : z / a;
}

struct Move {
  double gain = 0.0;
  std::size_t column = 0;
  std::size_t shift = 0;
};

//
// Spectra of the currently unshifted data F(S_{-lambda} A) together with lambda
// and a warm-started left singular vector.
//
class FourierState {
 public:
  FourierState(const ComplexMatrix& a_hat, ShiftVector lambda, const SolverConfig& cfg)
      : a_hat_(a_hat), current_(a_hat), lambda_(std::move(lambda)),
        roots_(unit_roots(a_hat.rows())), power_(cfg.power()), scratch_(a_hat.rows()) {
    reset(lambda_);
  }

  const ComplexMatrix& current() const noexcept { return current_; }
  const ShiftVector& lambda() const noexcept { return lambda_; }
  const ComplexVector& u_hat() const noexcept { return u_hat_; }
  double sigma() const noexcept { return sigma_; }

  void reset(const ShiftVector& lambda) {
    lambda_ = lambda;
    for (std::size_t k = 0; k < current_.cols(); ++k) recompute_column(k);
  }

  // lambda_k <- lambda_k + s, i.e. shift column k of the current data by -s
  void move(std::size_t k, std::size_t s) {
    lambda_.set(k, static_cast<std::int64_t>(lambda_[k] + s));
    recompute_column(k);
  }

  double refresh() {
    std::optional<std::span<const Complex>> warm;
    if (!u_hat_.empty()) warm = std::span<const Complex>(u_hat_);
    auto t = leading_singular_triple(current_, warm, power_);
    sigma_ = t.sigma;
    u_hat_ = std::move(t.u);
    return sigma_;
  }

  // Best single-column move for the correlation vector w (spectrum), ties to
  // the smallest shift, then the smallest column.
  Move best_move(std::span<const Complex> w_hat) {
    Move best;
    const std::size_t m = current_.rows();
    for (std::size_t k = 0; k < current_.cols(); ++k) {
      cross_correlation(w_hat, current_.col(k), scratch_);
      const double base = std::norm(scratch_[0]);
      for (std::size_t s = 1; s < m; ++s) {
        const double gain = std::norm(scratch_[s]) - base;
        if (gain > best.gain || (gain == best.gain && gain > 0.0 && s < best.shift)) {
          best = {gain, k, s};
        }
      }
    }
    return best;
  }

 private:
  void recompute_column(std::size_t k) {
    auto src = a_hat_.col(k);
    auto dst = current_.col(k);
    std::copy(src.begin(), src.end(), dst.begin());
    const std::size_t m = a_hat_.rows();
    apply_phase_ramp(dst, (m - lambda_[k]) % m, roots_);
  }

  const ComplexMatrix& a_hat_;
  ComplexMatrix current_;
  ShiftVector lambda_;
  ComplexVector roots_;
  PowerOptions power_;
  ComplexVector u_hat_;
  double sigma_ = 0.0;
  ComplexVector scratch_;
};

inline EstimatorTrace run_local(FourierState& state, LocalMode mode,
                                std::span<const Complex> u_opt_abs, double energy,
                                const SolverConfig& cfg) {
  EstimatorTrace trace;
  trace.stage = mode == LocalMode::Plain ? EstimatorStage::LocalStage : EstimatorStage::GlobalStage;
  const std::size_t cap = cfg.local_move_cap_factor * state.current().cols();
  const double min_gain = cfg.improvement_tol * energy;
  ComplexVector w(state.current().rows());

  for (;;) {
    state.refresh();
    if (trace.iterations >= cap) {
      trace.cap_reached = true;
      break;
    }
    const auto& u = state.u_hat();
    if (mode == LocalMode::AmplitudeProjected) {
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = u_opt_abs[j] * phase(u[j]);
    } else {
      std::copy(u.begin(), u.end(), w.begin());
    }
    const Move mv = state.best_move(w);
    if (mv.gain > min_gain) {
      state.move(mv.column, mv.shift);
      ++trace.iterations;
      continue;
    }
    if (mode == LocalMode::AmplitudeProjected || !cfg.certify_local_max) break;

    const CertifiedMove cm = MoveCertifier(state.current(), cfg.certify_tol).best();
    if (cm.gain <= 0.0) break;
    const double before = state.sigma();
    state.move(cm.column, cm.shift);
    if (state.refresh() <= before) {
      // not a real gain at working precision: undo and stop
      state.move(cm.column, state.current().rows() - cm.shift);
      state.refresh();
      break;
    }
    ++trace.iterations;
  }
  trace.objective = state.sigma();
  return trace;
}

}  // namespace detail

/// B[s, k] = |<u, S~^{-s} a^k>|^2 from the spectra u_hat and A_hat.
inline CorrelationMatrix correlation_matrix(std::span<const Complex> u_hat, const ComplexMatrix& a_hat) {
  detail::require_dims(u_hat.size() == a_hat.rows(), "u_hat length must equal rows");
  if (norm2(u_hat) == 0.0) throw Error(ErrorCode::DegenerateInput, "correlation vector is zero");
  CorrelationMatrix b(a_hat.rows(), a_hat.cols());
  ComplexVector r(a_hat.rows());
  for (std::size_t k = 0; k < a_hat.cols(); ++k) {
    detail::cross_correlation(u_hat, a_hat.col(k), r);
    for (std::size_t s = 0; s < r.size(); ++s) b(s, k) = std::norm(r[s]);
  }
  return b;
}

struct UpperBound {
  double value = 0.0;
  ComplexVector u_opt_abs;  // |leading left singular vector of |A_hat||
};

/// |(|A_hat|)|_2, the maximum of |A_hat .* P|_2 over all unit-modulus P.
inline UpperBound upper_bound(const ComplexMatrix& a_hat, const PowerOptions& opts = {}) {
  auto t = leading_singular_triple(abs(a_hat), std::nullopt, opts);
  UpperBound ub{t.sigma, std::move(t.u)};
  for (auto& z : ub.u_opt_abs) z = std::abs(z);
  return ub;
}

/// Per-column peak of |F^{-1}(|A_hat| .* A_hat)|^2, ties to the smallest shift.
inline ShiftVector starting_guess(const ComplexMatrix& a_hat) {
  if (frobenius_norm(a_hat) == 0.0) throw Error(ErrorCode::ZeroMatrix, "starting_guess on zero matrix");
  const std::size_t m = a_hat.rows();
  ShiftVector lambda(m, a_hat.cols());
  ComplexVector w(m), r(m);
  for (std::size_t k = 0; k < a_hat.cols(); ++k) {
    const auto col = a_hat.col(k);
    for (std::size_t f = 0; f < m; ++f) w[f] = std::abs(col[f]);
    detail::cross_correlation(w, col, r);
    std::size_t best = 0;
    double best_val = std::norm(r[0]);
    for (std::size_t s = 1; s < m; ++s) {
      const double val = std::norm(r[s]);
      if (val > best_val) {
        best_val = val;
        best = s;
      }
    }
    lambda.set(k, static_cast<std::int64_t>(best));
  }
  return lambda;
}

struct LocalResult {
  ShiftVector lambda;
  EstimatorTrace trace;
};

/// Single-column local search from `lambda` on time-domain data `a`.
inline LocalResult local_optimize(const ComplexMatrix& a, ShiftVector lambda, LocalMode mode,
                                  const SolverConfig& cfg = {}) {
  const double energy = std::norm(frobenius_norm(a));
  if (energy == 0.0) throw Error(ErrorCode::ZeroMatrix, "local_optimize on zero matrix");
  detail::require_dims(lambda.size() == a.cols() && lambda.modulus() == a.rows(),
                       "shift vector does not match matrix");
  const ComplexMatrix a_hat = fft_columns(a);
  UpperBound ub = upper_bound(a_hat, cfg.power());
  detail::FourierState state(a_hat, std::move(lambda), cfg);
  auto trace = detail::run_local(state, mode, ub.u_opt_abs, energy, cfg);
  trace.ratio = trace.objective / ub.value;
  return {state.lambda(), trace};
}

struct ShiftEstimate {
  ShiftVector lambda;
  double objective = 0.0;            // |S_{-lambda} A|_2
  double unshifted_objective = 0.0;  // |A|_2
  double upper_bound = 0.0;          // |(|A_hat|)|_2
  bool guard_used = false;           // the pipeline fell below |A|_2 and was redone from zero
  std::vector<EstimatorTrace> trace;
};

/// Full pipeline; the result never does worse than lambda = 0.
inline ShiftEstimate estimate_shifts(const ComplexMatrix& a, const SolverConfig& cfg = {}) {
  const double energy = std::norm(frobenius_norm(a));
  if (energy == 0.0) throw Error(ErrorCode::ZeroMatrix, "estimate_shifts on zero matrix");

  const std::size_t m = a.rows();
  const ComplexMatrix a_hat = fft_columns(a);
  const UpperBound ub = upper_bound(a_hat, cfg.power());

  ShiftEstimate out;
  out.upper_bound = ub.value;
  const ShiftVector zero(m, a.cols());
  detail::FourierState state(a_hat, zero, cfg);

  auto record = [&](EstimatorTrace t) {
    t.ratio = t.objective / ub.value;
    out.trace.push_back(t);
  };

  out.unshifted_objective = state.refresh();
  record({EstimatorStage::Input, out.unshifted_objective, 0.0, 0, false});

  if (cfg.stages.start_guess) {
    state.reset(starting_guess(a_hat));
    record({EstimatorStage::StartGuess, state.refresh(), 0.0, 0, false});
  }
  if (cfg.stages.amplitude_projected)
    record(detail::run_local(state, LocalMode::AmplitudeProjected, ub.u_opt_abs, energy, cfg));
  if (cfg.stages.plain)
    record(detail::run_local(state, LocalMode::Plain, ub.u_opt_abs, energy, cfg));

  out.lambda = state.lambda();
  out.objective = state.sigma();

  if (out.objective < out.unshifted_objective) {
    out.guard_used = true;
    ShiftVector best = zero;
    double best_obj = out.unshifted_objective;
    if (cfg.stages.plain) {
      state.reset(zero);
      auto t = detail::run_local(state, LocalMode::Plain, ub.u_opt_abs, energy, cfg);
      if (t.objective >= best_obj) {
        best = state.lambda();
        best_obj = t.objective;
      }
      record(t);
    }
    out.lambda = best;
    out.objective = best_obj;
  }
  return out;
}

}  // namespace sr1
