#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sr1/bench/synth.hpp"
#include "sr1/decomposer.hpp"

using namespace sr1;

namespace {

ComplexVector unit(oracle::Random& rng, std::size_t n) {
  auto x = rng.vector(n);
  normalize(x);
  return x;
}

void expect_canonical(const Component& c) {
  EXPECT_NEAR(norm2(c.u), 1.0, 1e-12);
  EXPECT_NEAR(norm2(c.v), 1.0, 1e-12);
  EXPECT_GE(c.sigma, 0.0);
  if (c.lambda.size() > 0) {
    EXPECT_EQ(c.lambda[0], 0u);
  }
  std::size_t peak = 0;
  for (std::size_t j = 1; j < c.u.size(); ++j)
    if (std::abs(c.u[j]) > std::abs(c.u[peak])) peak = j;
  EXPECT_NEAR(c.u[peak].imag(), 0.0, 1e-12);
  EXPECT_GE(c.u[peak].real(), 0.0);
}

}  // namespace

TEST(Canonicalize, MovesFirstShiftToZero) {
  oracle::Random rng(1);
  const auto u = unit(rng, 8), v = unit(rng, 3);
  const Component c = canonicalize_component(1.0, u, v, ShiftVector(8, {3, 5, 4}));
  EXPECT_EQ(c.lambda, ShiftVector(8, {0, 2, 1}));
  // u cyclically shifted by 3, up to the global phase
  const auto shifted = circular_shift(u, 3);
  EXPECT_NEAR(std::abs(dot(shifted, c.u)), 1.0, 1e-12);
  expect_canonical(c);
}

TEST(Canonicalize, NegativeScaleFoldsIntoSigma) {
  oracle::Random rng(2);
  const auto u = unit(rng, 6), v = unit(rng, 4);
  const auto l = rng.shifts(6, 4);
  const Component a = canonicalize_component(1.0, u, v, l);
  ComplexVector u2 = u;
  for (auto& z : u2) z *= -2.0;
  const Component b = canonicalize_component(1.0, u2, v, l);
  EXPECT_NEAR(b.sigma, 2.0 * a.sigma, 1e-12);
  EXPECT_LT(oracle::max_diff(a.u, b.u), 1e-12);
  EXPECT_EQ(a.lambda, b.lambda);
  // the sign cannot vanish: it lands on v
  ComplexVector neg_v = a.v;
  for (auto& z : neg_v) z = -z;
  EXPECT_LT(oracle::max_diff(b.v, neg_v), 1e-12);
  expect_canonical(b);
}

TEST(Canonicalize, AmbiguityFamilyCollapses) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(100 + seed);
    const std::size_t m = 9, n = 5;
    const auto u = rng.vector(m), v = rng.vector(n);
    const auto l = rng.shifts(m, n);
    // S_l(u v^*) = S_{l - k}(S~^k(u) (alpha v)^*) / conj(alpha) for any k, alpha != 0
    const auto k = static_cast<std::int64_t>(rng.index(m));
    const Complex alpha = rng.value();
    ComplexVector u2 = circular_shift(u, k), v2 = v;
    for (auto& z : v2) z *= alpha;
    for (auto& z : u2) z /= std::conj(alpha);
    ShiftVector l2(m, n);
    for (std::size_t j = 0; j < n; ++j) l2.set(j, static_cast<std::int64_t>(l[j]) - k);
    ASSERT_LT(oracle::max_diff(shift_columns(outer(u, v), l), shift_columns(outer(u2, v2), l2)), 1e-12);

    const Component a = canonicalize_component(1.0, u, v, l), b = canonicalize_component(1.0, u2, v2, l2);
    EXPECT_NEAR(a.sigma, b.sigma, 1e-10 * a.sigma);
    EXPECT_LT(oracle::max_diff(a.u, b.u), 1e-10);
    EXPECT_LT(oracle::max_diff(a.v, b.v), 1e-10);
    EXPECT_EQ(a.lambda, b.lambda);
  }
}

TEST(Canonicalize, IdempotentAndShapePreserving) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(200 + seed);
    const auto u = rng.vector(7), v = rng.vector(4);
    const auto l = rng.shifts(7, 4);
    const Component c = canonicalize_component(1.7, u, v, l);
    expect_canonical(c);
    const Component d = canonicalize_component(c.sigma, c.u, c.v, c.lambda);
    EXPECT_NEAR(d.sigma, c.sigma, 1e-14 * c.sigma);
    EXPECT_LT(oracle::max_diff(c.u, d.u), 1e-14);
    EXPECT_LT(oracle::max_diff(c.v, d.v), 1e-14);
    EXPECT_EQ(c.lambda, d.lambda);
    EXPECT_LT(oracle::max_diff(component_matrix(c), shift_columns(outer(u, v, 1.7), l)), 1e-12 * 1.7 * norm2(u) * norm2(v));
  }
}

TEST(Canonicalize, DegenerateInputs) {
  const ComplexVector zero(3), one{1.0, 0.0, 0.0};
  try {
    canonicalize_component(1.0, zero, one, ShiftVector(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
  EXPECT_THROW(canonicalize_component(1.0, one, zero, ShiftVector(3, 3)), Error);
}

TEST(ExtractComponent, ExactShiftedRankOne) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::Random rng(300 + seed);
    const auto u = unit(rng, 16), v = unit(rng, 16);
    const auto a = shift_columns(outer(u, v, 2.0), rng.shifts(16, 16));
    const auto ex = extract_component(a);
    ok += std::abs(ex.component.sigma - 2.0) <= 1e-6 && frobenius_norm(ex.residual) <= 1e-6;
  }
  EXPECT_GE(ok, 95);
}

TEST(ExtractComponent, UnshiftedRankOneLeavesNothing) {
  oracle::Random rng(4);
  const auto a = outer(rng.vector(6), rng.vector(5));
  const auto ex = extract_component(a);
  EXPECT_NEAR(ex.component.sigma, oracle::spectral_norm(a), 1e-10 * ex.component.sigma);
  EXPECT_LE(frobenius_norm(ex.residual), 1e-10 * frobenius_norm(a));
  expect_canonical(ex.component);
}

TEST(ExtractComponent, EnergyIdentityOnOrthogonal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    bench::SynthSpec spec;
    spec.kind = bench::SynthKind::RandomOrthogonal;
    spec.rows = spec.cols = 4;
    spec.seed = seed;
    const auto a = bench::generate(spec).a;
    const auto ex = extract_component(a);
    const double lhs = std::norm(frobenius_norm(ex.residual)) + ex.component.sigma * ex.component.sigma;
    EXPECT_NEAR(lhs, std::norm(frobenius_norm(a)), 1e-9 * std::norm(frobenius_norm(a)));
  }
}

TEST(Decompose, StopsEarlyOnExactRankOne) {
  oracle::Random rng(5);
  const auto a = outer(rng.vector(8), rng.vector(6));
  SolverConfig cfg;
  cfg.max_components = 5;
  cfg.residual_threshold = 1e-10;
  const auto d = decompose(a, cfg);
  EXPECT_EQ(d.components.size(), 1u);
  EXPECT_EQ(d.residual_history.size(), 2u);
}

TEST(Decompose, ThresholdOnly) {
  oracle::Random rng(6);
  const auto a = rng.matrix(10, 8);
  SolverConfig cfg;
  cfg.max_components = 0;
  cfg.residual_threshold = 0.5;
  const auto d = decompose(a, cfg);
  EXPECT_LE(d.relative_residual(), 0.5);
  // it stopped at the first component that met the threshold
  const auto& h = d.residual_history;
  EXPECT_GT(h[h.size() - 2], 0.5 * h.front());
}

TEST(Decompose, Errors) {
  try {
    decompose(ComplexMatrix(4, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
  oracle::Random rng(7);
  SolverConfig bad;
  bad.max_components = 0;
  EXPECT_THROW(decompose(rng.matrix(3, 3), bad), Error);
  bad = {};
  bad.residual_threshold = 1.0;
  EXPECT_THROW(decompose(rng.matrix(3, 3), bad), Error);
  ComplexMatrix nan = rng.matrix(3, 3);
  nan(1, 1) = std::nan("");
  EXPECT_THROW(decompose(nan), Error);
}

TEST(DecomposeProperty, HistoryMonotoneAndEnergyDeflation) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    oracle::Random rng(400 + seed);
    const std::size_t m = 2 + rng.index(12), n = 1 + rng.index(10);
    const auto a = rng.index(2) ? rng.matrix(m, n) : rng.real_matrix(m, n);
    SolverConfig cfg;
    cfg.max_components = 6;
    const auto d = decompose(a, cfg);
    ASSERT_EQ(d.residual_history.size(), d.components.size() + 1);
    EXPECT_EQ(d.residual_history.front(), frobenius_norm(a));
    for (std::size_t l = 0; l < d.components.size(); ++l) {
      const double before = std::norm(d.residual_history[l]);
      const double after = std::norm(d.residual_history[l + 1]);
      const double s = d.components[l].sigma;
      EXPECT_LE(d.residual_history[l + 1], d.residual_history[l]);
      EXPECT_NEAR(after, before - s * s, 1e-9 * before);
      expect_canonical(d.components[l]);
    }
  }
}

TEST(DecomposeProperty, EachStepAtLeastPlainRankOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(500 + seed);
    const auto a = rng.matrix(7, 6);
    SolverConfig cfg;
    cfg.max_components = 4;
    const auto d = decompose(a, cfg);
    ComplexMatrix r = a;
    for (const auto& c : d.components) {
      EXPECT_GE(c.sigma, oracle::spectral_norm(r) - 1e-9 * frobenius_norm(r));
      r -= component_matrix(c);
    }
  }
}

TEST(DecomposeProperty, RealInputGivesRealFactors) {
  oracle::Random rng(8);
  const auto a = rng.real_matrix(12, 9);
  SolverConfig cfg;
  cfg.max_components = 3;
  const auto d = decompose(a, cfg);
  EXPECT_TRUE(d.real_input);
  for (const auto& c : d.components) {
    for (const auto& z : c.u) EXPECT_EQ(z.imag(), 0.0);
    for (const auto& z : c.v) EXPECT_EQ(z.imag(), 0.0);
  }
  EXPECT_GE(d.max_imag_discarded, 0.0);
  EXPECT_LT(d.max_imag_discarded, 1e-6);
  EXPECT_LT(std::abs(frobenius_norm(a - reconstruct(d)) - d.residual_history.back()), 1e-9 * frobenius_norm(a));
}

TEST(Reconstruct, EmptyAndSingle) {
  Decomposition d;
  d.rows = 3;
  d.cols = 2;
  EXPECT_EQ(reconstruct(d), ComplexMatrix(3, 2));
  oracle::Random rng(9);
  const auto u = unit(rng, 3), v = unit(rng, 2);
  d.components.push_back({2.5, u, v, ShiftVector(3, 2)});
  EXPECT_EQ(reconstruct(d), outer(u, v, 2.5));
}

TEST(Reconstruct, MatchesHistory) {
  oracle::Random rng(10);
  const auto a = rng.matrix(8, 8);
  SolverConfig cfg;
  cfg.max_components = 8;
  const auto d = decompose(a, cfg);
  const double r = frobenius_norm(a - reconstruct(d));
  EXPECT_NEAR(r, d.residual_history.back(), 1e-9 * frobenius_norm(a));
}

TEST(DecomposeKnownGap, ThreeSeparatedTermsRecovered) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    bench::SynthSpec spec;
    spec.rows = spec.cols = 32;
    spec.components = 3;
    spec.sigma_ratio = 4.0;
    spec.seed = 600 + seed;
    const auto data = bench::generate(spec);
    SolverConfig cfg;
    cfg.max_components = 3;
    ok += decompose(data.a, cfg).relative_residual() <= 1e-6;
  }
  EXPECT_GE(ok, 90);
}
