#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sr1/core/fft.hpp"
#include "sr1/core/power_iteration.hpp"

using namespace sr1;

TEST(ComplexMatrix, RejectsEmptyDimensions) {
  EXPECT_THROW(ComplexMatrix(0, 3), Error);
  EXPECT_THROW(ComplexMatrix(3, 0), Error);
}

TEST(ComplexMatrix, ShapeMismatchThrows) {
  ComplexMatrix a(2, 2), b(2, 3);
  try {
    a += b;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(FftColumns, ImpulseGivesFlatHalf) {
  ComplexMatrix a(4, 1);
  a(0, 0) = 1.0;
  const auto h = fft_columns(a);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(h(i, 0) - Complex{0.5, 0.0}), 0.0, 1e-15);
}

TEST(FftColumns, ZeroStaysZero) {
  const ComplexMatrix z(5, 3);
  EXPECT_EQ(fft_columns(z), z);
}

TEST(FftColumns, MatchesDirectDftAndParseval) {
  oracle::Random rng(1);
  const auto a = rng.matrix(8, 3);
  const auto h = fft_columns(a);
  EXPECT_NEAR(frobenius_norm(h), frobenius_norm(a), 1e-12 * frobenius_norm(a));
  for (std::size_t k = 0; k < 3; ++k) {
    const ComplexVector col(a.col(k).begin(), a.col(k).end());
    EXPECT_LT(oracle::max_diff(h.col(k), oracle::dft(col)), 1e-12);
  }
}

TEST(IfftColumns, RoundTrip) {
  oracle::Random rng(2);
  const auto a = rng.matrix(6, 2);
  EXPECT_LT(oracle::max_diff(ifft_columns(fft_columns(a)), a), 1e-12 * frobenius_norm(a));
}

TEST(IfftColumns, FlatGivesImpulse) {
  ComplexMatrix h(4, 1, Complex{0.5, 0.0});
  const auto a = ifft_columns(h);
  EXPECT_NEAR(std::abs(a(0, 0) - 1.0), 0.0, 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(a(i, 0)), 0.0, 1e-15);
}

TEST(IfftColumns, MatchesDirectInverseDft) {
  oracle::Random rng(3);
  const auto h = rng.matrix(16, 4);
  const auto a = ifft_columns(h);
  for (std::size_t k = 0; k < 4; ++k) {
    const ComplexVector col(h.col(k).begin(), h.col(k).end());
    EXPECT_LT(oracle::max_diff(a.col(k), oracle::dft(col, +1)), 1e-12);
  }
}

TEST(FftProperties, ParsevalAndSingularValuesPreserved) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(100 + seed);
    const auto a = rng.matrix(4, 4);
    const auto h = fft_columns(a);
    EXPECT_NEAR(frobenius_norm(h), frobenius_norm(a), 1e-12 * frobenius_norm(a));
    const auto sa = oracle::singular_values(a), sh = oracle::singular_values(h);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(sh(i), sa(i), 1e-8 * sa(0));
  }
}

TEST(FftProperties, OddAndPrimeLengths) {
  oracle::Random rng(4);
  for (std::size_t m : {1u, 3u, 7u, 12u, 31u}) {
    const auto x = rng.vector(m);
    EXPECT_LT(oracle::max_diff(fft(x), oracle::dft(x)), 1e-12 * (1.0 + norm2(x)));
  }
}

TEST(PowerIteration, ExactRankOne) {
  oracle::Random rng(5);
  auto u0 = rng.vector(6), v0 = rng.vector(4);
  normalize(u0);
  normalize(v0);
  const auto t = leading_singular_triple(outer(u0, v0));
  EXPECT_NEAR(t.sigma, 1.0, 1e-10);
  EXPECT_NEAR(std::abs(dot(t.u, u0)), 1.0, 1e-10);
  EXPECT_TRUE(t.converged);
}

TEST(PowerIteration, Diagonal) {
  ComplexMatrix a(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const auto t = leading_singular_triple(a);
  EXPECT_NEAR(t.sigma, 3.0, 1e-10);
  EXPECT_NEAR(std::abs(t.u[0]), 1.0, 1e-10);
}

TEST(PowerIteration, MatchesDenseSvd) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(200 + seed);
    const auto a = rng.matrix(5, 4);
    const auto t = leading_singular_triple(a);
    const double s = oracle::spectral_norm(a);
    EXPECT_NEAR(t.sigma, s, 1e-8 * s);
    EXPECT_NEAR(norm2(t.u), 1.0, 1e-12);
    EXPECT_NEAR(norm2(t.v), 1.0, 1e-12);
  }
}

TEST(PowerIteration, ResidualsWithinTolerance) {
  oracle::Random rng(6);
  const auto a = rng.matrix(12, 9);
  const auto t = leading_singular_triple(a);
  ASSERT_TRUE(t.converged);
  const auto av = matvec(a, t.v);
  const auto au = adjoint_matvec(a, t.u);
  double r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < av.size(); ++i) r1 += std::norm(av[i] - t.sigma * t.u[i]);
  for (std::size_t i = 0; i < au.size(); ++i) r2 += std::norm(au[i] - t.sigma * t.v[i]);
  EXPECT_LE(std::sqrt(r1), 1e-10 * t.sigma);
  EXPECT_LE(std::sqrt(r2), 1e-10 * t.sigma);
}

TEST(PowerIteration, ZeroMatrixThrows) {
  try {
    leading_singular_triple(ComplexMatrix(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
}

TEST(PowerIteration, ZeroWarmStartThrows) {
  oracle::Random rng(7);
  const ComplexVector zero(3);
  EXPECT_THROW(leading_singular_triple(rng.matrix(3, 3), zero), Error);
}

TEST(PowerIteration, CapReachedIsFlagged) {
  oracle::Random rng(8);
  PowerOptions opts;
  opts.max_iterations = 1;
  opts.tol = 1e-16;
  const auto t = leading_singular_triple(rng.matrix(10, 10), std::nullopt, opts);
  EXPECT_FALSE(t.converged);
  EXPECT_EQ(t.iterations, 1);
}

TEST(PowerIteration, Deterministic) {
  oracle::Random rng(9);
  const auto a = rng.matrix(7, 5);
  const auto t1 = leading_singular_triple(a), t2 = leading_singular_triple(a);
  EXPECT_EQ(t1.sigma, t2.sigma);
  EXPECT_EQ(t1.u, t2.u);
  EXPECT_EQ(t1.v, t2.v);
}

TEST(PowerIterationProperty, HistoryNonDecreasing) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    oracle::Random rng(300 + seed);
    const auto t = leading_singular_triple(rng.matrix(9, 7));
    for (std::size_t i = 1; i < t.history.size(); ++i)
      EXPECT_GE(t.history[i], t.history[i - 1] * (1.0 - 1e-14));
  }
}

TEST(PowerIterationProperty, WarmStartConvergesFast) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::Random rng(400 + seed);
    // spectrum with gap sigma1/sigma2 = 2
    const std::size_t m = 8, n = 6;
    auto q1 = rng.matrix(m, n), q2 = rng.matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qa(oracle::to_eigen(q1)), qb(oracle::to_eigen(q2));
    const Eigen::MatrixXcd ua = qa.householderQ() * Eigen::MatrixXcd::Identity(m, n);
    const Eigen::MatrixXcd vb = qb.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    Eigen::VectorXd s(n);
    for (std::size_t i = 0; i < n; ++i) s(i) = i == 0 ? 2.0 : 1.0 / (1.0 + i);
    const Eigen::MatrixXcd e = ua * s.asDiagonal() * vb.adjoint();
    ComplexMatrix a(m, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < m; ++i) a(i, k) = e(i, k);
    ComplexVector u1(m);
    for (std::size_t i = 0; i < m; ++i) u1[i] = ua(i, 0);
    const auto t = leading_singular_triple(a, u1);
    EXPECT_TRUE(t.converged);
    EXPECT_LE(t.iterations, 5);
    EXPECT_NEAR(t.sigma, 2.0, 1e-10);
  }
}

TEST(PowerIteration, WarmStartOrthogonalToRangeRestarts) {
  ComplexMatrix a(3, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const ComplexVector warm{0.0, 0.0, 1.0};
  const auto t = leading_singular_triple(a, warm);
  EXPECT_NEAR(t.sigma, 2.0, 1e-10);
}
