// Decompose a synthetic seismic gather into shifted rank-1 terms, compare with a
// truncated SVD of the same storage, and apply the result as a fast operator.

#include <cstdio>

#include "sr1/bench/experiments.hpp"
#include "sr1/fast_ops.hpp"

int main() {
  using namespace sr1;

  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::SeismicLike;
  spec.rows = 128;  // time samples
  spec.cols = 64;   // sensors
  spec.components = 3;
  spec.noise_relative = 0.01;
  spec.real_valued = true;
  spec.seed = 7;
  const auto data = bench::generate(spec);

  SolverConfig cfg;
  cfg.max_components = 3;
  const Decomposition d = decompose(data.a, cfg);

  std::printf("%-4s %-12s %-12s %-12s\n", "L", "sr1 error", "svd error", "svd terms");
  const std::size_t budget_terms =
      bench::svd_terms_for_budget(spec.rows, spec.cols, bench::storage_cost(bench::Method::Sr1, spec.rows, spec.cols, 3));
  const Decomposition svd = bench::truncated_svd(data.a, budget_terms);
  for (std::size_t l = 1; l <= d.components.size(); ++l) {
    const double cost = bench::storage_cost(bench::Method::Sr1, spec.rows, spec.cols, l);
    const std::size_t k = bench::svd_terms_for_budget(spec.rows, spec.cols, cost);
    std::printf("%-4zu %-12.4e %-12.4e %-12zu\n", l, d.residual_history[l] / d.residual_history[0],
                svd.residual_history[k] / svd.residual_history[0], k);
  }

  // arrival times of the strongest event against the generator's truth
  const auto& got = d.components.front().lambda;
  double best = 0.0;
  for (const auto& c : data.truth->components) best = std::max(best, bench::column_match_fraction(got, c.lambda));
  std::printf("first term matches a true moveout on %.0f%% of sensors\n", 100.0 * best);

  const ShiftedLowRankOperator op(d);
  ComplexVector x(spec.cols, 1.0 / std::sqrt(static_cast<double>(spec.cols)));
  const auto y = op.apply(x), dense = matvec(reconstruct(d), x);
  double diff = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) diff = std::max(diff, std::abs(y[i] - dense[i]));
  std::printf("fast matvec vs dense: max difference %.2e\n", diff);
}
