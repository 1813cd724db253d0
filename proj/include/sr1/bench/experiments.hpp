#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "sr1/bench/baselines.hpp"
#include "sr1/bench/synth.hpp"
#include "sr1/decomposer.hpp"
#include "sr1/fast_ops.hpp"

namespace sr1::bench {

enum class Experiment { ErrorDecay, SvRatio, StorageCurve, RuntimeScaling, MatvecScaling, NoiseRecovery };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::ErrorDecay: return "errorDecay";
    case Experiment::SvRatio: return "svRatio";
    case Experiment::StorageCurve: return "storageCurve";
    case Experiment::RuntimeScaling: return "runtimeScaling";
    case Experiment::MatvecScaling: return "matvecScaling";
    case Experiment::NoiseRecovery: return "noiseRecovery";
  }
  return "?";
}

inline Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::ErrorDecay, Experiment::SvRatio, Experiment::StorageCurve, Experiment::RuntimeScaling,
                 Experiment::MatvecScaling, Experiment::NoiseRecovery})
    if (s == to_string(e)) return e;
  throw Error(ErrorCode::InvalidSpec, "unknown experiment '" + s + "'");
}

struct ExperimentParams {
  SynthKind kind = SynthKind::ShiftedRank1Sum;
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::size_t terms = 5;            // L used by the solver
  std::size_t true_components = 5;  // L used by the generator
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::optional<double> noise_psnr;
  std::optional<double> noise_relative;
  bool real_valued = false;
  // runtimeScaling / matvecScaling: values of M (N stays fixed for runtimeScaling, N = M for matvec)
  std::vector<std::size_t> sizes;
  std::vector<double> psnr_levels{20.0, 19.0, 18.0};
  std::size_t repeats = 5;  // timing repetitions, the minimum is reported
  SolverConfig solver;

  void validate() const {
    if (rows == 0 || cols == 0 || trials == 0 || repeats == 0)
      throw Error(ErrorCode::InvalidSpec, "experiment sizes must be positive");
    solver.validate();
  }
};

/// Defaults that reproduce each experiment at desk scale.
inline ExperimentParams default_params(Experiment e) {
  ExperimentParams p;
  switch (e) {
    case Experiment::ErrorDecay: break;
    case Experiment::SvRatio:
      p.kind = SynthKind::RandomOrthogonal;
      p.terms = 1;
      p.trials = 20;
      break;
    case Experiment::StorageCurve:
      p.kind = SynthKind::SeismicLike;
      p.rows = p.cols = 128;
      p.terms = 10;
      p.noise_relative = 0.01;
      p.real_valued = true;
      break;
    case Experiment::RuntimeScaling:
      p.kind = SynthKind::SeismicLike;
      p.cols = 128;
      p.terms = 3;
      p.true_components = 3;
      p.trials = 1;
      p.repeats = 1;
      p.sizes = {128, 256, 512, 1024, 2048};
      break;
    case Experiment::MatvecScaling:
      p.terms = 10;
      p.trials = 1;
      p.sizes = {1u << 10, 1u << 11, 1u << 12, 1u << 13, 1u << 14, 1u << 15, 1u << 16};
      break;
    case Experiment::NoiseRecovery:
      p.terms = 1;
      p.true_components = 1;
      p.trials = 20;
      break;
  }
  return p;
}

struct CsvRow {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t terms = 0;
  std::string metric;
  double value = 0.0;
};

inline constexpr const char* kCsvHeader = "experiment,seed,M,N,L_or_terms,metric_name,metric_value";

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  os << kCsvHeader << '\n';
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    os << r.experiment << ',' << r.seed << ',' << r.rows << ',' << r.cols << ',' << r.terms << ',' << r.metric
       << ',' << buf << '\n';
  }
}

/// Fraction of columns whose shift agrees with the truth after the best constant offset (mod M).
inline double column_match_fraction(const ShiftVector& got, const ShiftVector& truth) {
  sr1::detail::require_dims(got.size() == truth.size() && got.modulus() == truth.modulus(), "shift vectors differ");
  const std::size_t m = got.modulus();
  std::map<std::size_t, std::size_t> offsets;
  std::size_t best = 0;
  for (std::size_t k = 0; k < got.size(); ++k) best = std::max(best, ++offsets[(got[k] + m - truth[k]) % m]);
  return static_cast<double>(best) / static_cast<double>(got.size());
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  sr1::detail::require_dims(x.size() == y.size() && x.size() >= 2, "need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Accepted local-search moves in one estimator run.
inline std::size_t accepted_moves(const std::vector<EstimatorTrace>& trace) {
  std::size_t total = 0;
  for (const auto& t : trace) total += t.iterations;
  return total;
}

/// Random decomposition with Gaussian factors, for operator benchmarks.
inline Decomposition random_decomposition(std::size_t rows, std::size_t cols, std::size_t terms,
                                          std::uint64_t seed) {
  detail::Rng rng(seed);
  Decomposition d;
  d.rows = rows;
  d.cols = cols;
  for (std::size_t l = 0; l < terms; ++l) {
    Component c;
    c.sigma = 1.0 + rng.uniform();
    c.u = rng.unit_vector(rows, false);
    c.v = rng.unit_vector(cols, false);
    c.lambda = ShiftVector(rows, cols);
    for (std::size_t k = 0; k < cols; ++k) c.lambda.set(k, static_cast<std::int64_t>(rng.index(rows)));
    d.components.push_back(std::move(c));
  }
  return d;
}

namespace detail {

inline SynthSpec synth_for(const ExperimentParams& p, std::size_t rows, std::uint64_t seed) {
  SynthSpec s;
  s.kind = p.kind;
  s.rows = rows;
  s.cols = p.cols;
  s.components = p.true_components;
  s.noise_psnr = p.noise_psnr;
  s.noise_relative = p.noise_relative;
  s.seed = seed;
  s.real_valued = p.real_valued;
  return s;
}

template <class F>
double seconds(F&& f, std::size_t repeats) {
  double best = 1e300;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

inline double relative_error(const std::vector<double>& history, std::size_t terms) {
  const std::size_t i = std::min(terms, history.size() - 1);
  return history[i] / history.front();
}

}  // namespace detail

/// Run one experiment; rows are deterministic in params.seed except for timings.
inline std::vector<CsvRow> run_experiment(Experiment e, const ExperimentParams& p) {
  p.validate();
  const std::string name = to_string(e);
  std::vector<CsvRow> out;
  auto emit = [&](std::uint64_t seed, std::size_t m, std::size_t n, std::size_t terms, std::string metric,
                  double value) { out.push_back({name, seed, m, n, terms, std::move(metric), value}); };

  switch (e) {
    case Experiment::ErrorDecay: {
      for (std::size_t t = 0; t < p.trials; ++t) {
        const std::uint64_t seed = p.seed + t;
        const auto data = generate(detail::synth_for(p, p.rows, seed));
        SolverConfig cfg = p.solver;
        cfg.max_components = p.terms;
        const Decomposition d = decompose(data.a, cfg);
        const std::size_t svd_terms = std::min({p.terms, p.rows, p.cols});
        const Decomposition s = truncated_svd(data.a, svd_terms, cfg.power());
        for (std::size_t l = 1; l <= p.terms; ++l) {
          emit(seed, p.rows, p.cols, l, "sr1_rel_error", detail::relative_error(d.residual_history, l));
          if (l <= svd_terms) emit(seed, p.rows, p.cols, l, "svd_rel_error", detail::relative_error(s.residual_history, l));
        }
      }
      break;
    }
    case Experiment::SvRatio: {
      for (std::size_t t = 0; t < p.trials; ++t) {
        const std::uint64_t seed = p.seed + t;
        const auto data = generate(detail::synth_for(p, p.rows, seed));
        SolverConfig cfg = p.solver;
        cfg.max_components = p.terms;
        const Decomposition d = decompose(data.a, cfg);
        for (std::size_t l = 0; l < d.traces.size(); ++l) {
          for (const auto& tr : d.traces[l]) {
            emit(seed, p.rows, p.cols, l + 1, std::string("ratio_") + to_string(tr.stage), tr.ratio);
            if (tr.stage == EstimatorStage::GlobalStage || tr.stage == EstimatorStage::LocalStage)
              emit(seed, p.rows, p.cols, l + 1, std::string("moves_") + to_string(tr.stage),
                   static_cast<double>(tr.iterations));
          }
          emit(seed, p.rows, p.cols, l + 1, "moves_total", static_cast<double>(accepted_moves(d.traces[l])));
        }
      }
      break;
    }
    case Experiment::StorageCurve: {
      for (std::size_t t = 0; t < p.trials; ++t) {
        const std::uint64_t seed = p.seed + t;
        const auto data = generate(detail::synth_for(p, p.rows, seed));
        SolverConfig cfg = p.solver;
        cfg.max_components = p.terms;
        const Decomposition d = decompose(data.a, cfg);
        const std::size_t max_svd =
            std::min({svd_terms_for_budget(p.rows, p.cols, storage_cost(Method::Sr1, p.rows, p.cols, p.terms)),
                      p.rows, p.cols});
        const Decomposition s = truncated_svd(data.a, max_svd, cfg.power());
        for (std::size_t l = 1; l <= p.terms; ++l) {
          const double cost = storage_cost(Method::Sr1, p.rows, p.cols, l);
          const std::size_t k = std::min(svd_terms_for_budget(p.rows, p.cols, cost), max_svd);
          emit(seed, p.rows, p.cols, l, "sr1_cost", cost);
          emit(seed, p.rows, p.cols, l, "sr1_rel_error", detail::relative_error(d.residual_history, l));
          emit(seed, p.rows, p.cols, l, "svd_equal_storage_terms", static_cast<double>(k));
          emit(seed, p.rows, p.cols, l, "svd_equal_storage_cost", storage_cost(Method::TruncatedSvd, p.rows, p.cols, k));
          emit(seed, p.rows, p.cols, l, "svd_equal_storage_rel_error", detail::relative_error(s.residual_history, k));
        }
      }
      break;
    }
    case Experiment::RuntimeScaling: {
      for (std::size_t t = 0; t < p.trials; ++t) {
        const std::uint64_t seed = p.seed + t;
        for (std::size_t m : p.sizes) {
          const auto data = generate(detail::synth_for(p, m, seed));
          SolverConfig cfg = p.solver;
          cfg.max_components = p.terms;
          Decomposition d;
          const double sec = detail::seconds([&] { d = decompose(data.a, cfg); }, p.repeats);
          std::size_t moves = 0;
          for (const auto& tr : d.traces) moves += accepted_moves(tr);
          emit(seed, m, p.cols, p.terms, "seconds", sec);
          emit(seed, m, p.cols, p.terms, "moves_total", static_cast<double>(moves));
        }
      }
      break;
    }
    case Experiment::MatvecScaling: {
      for (std::size_t t = 0; t < p.trials; ++t) {
        const std::uint64_t seed = p.seed + t;
        for (std::size_t m : p.sizes) {
          const Decomposition d = random_decomposition(m, m, p.terms, seed);
          const ShiftedLowRankOperator op(d);
          detail::Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
          ComplexVector x(m);
          for (auto& z : x) z = rng.value(false);
          ComplexVector y;
          op.apply(x);  // plan warm-up
          const double sec = detail::seconds([&] { y = op.apply(x); }, p.repeats);
          emit(seed, m, m, p.terms, "seconds_fast", sec);
          if (static_cast<double>(m) * static_cast<double>(m) <= 1 << 24) {
            const ComplexMatrix dense = reconstruct(d);
            emit(seed, m, m, p.terms, "seconds_dense", detail::seconds([&] { y = matvec(dense, x); }, p.repeats));
          }
        }
      }
      break;
    }
    case Experiment::NoiseRecovery: {
      for (double level : p.psnr_levels) {
        for (std::size_t t = 0; t < p.trials; ++t) {
          const std::uint64_t seed = p.seed + t;
          SynthSpec spec = detail::synth_for(p, p.rows, seed);
          spec.components = 1;
          spec.noise_psnr = level;
          const auto data = generate(spec);
          if (!data.truth) throw Error(ErrorCode::InvalidSpec, "noiseRecovery needs a generator with ground truth");
          SolverConfig cfg = p.solver;
          cfg.max_components = 1;
          const Decomposition d = decompose(data.a, cfg);
          emit(seed, p.rows, p.cols, 1, "psnr_db", level);
          emit(seed, p.rows, p.cols, 1, "column_match_fraction",
               column_match_fraction(d.components.front().lambda, data.truth->components.front().lambda));
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace sr1::bench
