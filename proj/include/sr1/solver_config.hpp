#pragma once

#include <cstddef>
#include <cstdint>

#include "sr1/core/error.hpp"
#include "sr1/core/power_iteration.hpp"

namespace sr1 {

// Which stages of the shift estimator run; all on by default.
struct EstimatorStages {
  bool start_guess = true;
  bool amplitude_projected = true;
  bool plain = true;
};

struct SolverConfig {
  // L; 0 means "until the residual threshold is met"
  std::size_t max_components = 10;
  // stop once |residual|_F <= residual_threshold * |A|_F
  double residual_threshold = 0.0;
  double power_tol = 1e-10;
  int power_cap = 1000;
  // each local optimization stage accepts at most factor * N moves
  std::size_t local_move_cap_factor = 10;
  // a move is accepted only if it gains more than this times |A|_F^2
  double improvement_tol = 1e-12;
  // after the plain search stops, test every single-column move exactly and
  // keep going while one raises |S_{-lambda} A|_2^2 by more than certify_tol
  bool certify_local_max = true;
  double certify_tol = 1e-10;
  EstimatorStages stages;
  std::uint64_t seed = 0;

  PowerOptions power() const { return {power_tol, power_cap, seed}; }

  void validate() const {
    if (!(residual_threshold >= 0.0 && residual_threshold < 1.0))
      throw Error(ErrorCode::InvalidSpec, "residual threshold must lie in [0, 1)");
    if (max_components == 0 && residual_threshold <= 0.0)
      throw Error(ErrorCode::InvalidSpec, "need a component count or a positive threshold");
    if (!(power_tol > 0.0) || power_cap <= 0 || local_move_cap_factor == 0 || improvement_tol < 0.0 ||
        !(certify_tol > 0.0))
      throw Error(ErrorCode::InvalidSpec, "solver tolerances and caps must be positive");
  }
};

}  // namespace sr1
