#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "sr1/decomposer.hpp"

namespace sr1::bench {

enum class SynthKind { ShiftedRank1Sum, RandomOrthogonal, SeismicLike, CartoonLike };

inline const char* to_string(SynthKind k) {
  switch (k) {
    case SynthKind::ShiftedRank1Sum: return "shiftedRank1Sum";
    case SynthKind::RandomOrthogonal: return "randomOrthogonal";
    case SynthKind::SeismicLike: return "seismicLike";
    case SynthKind::CartoonLike: return "cartoonLike";
  }
  return "?";
}

inline SynthKind parse_synth_kind(const std::string& s) {
  if (s == "shiftedRank1Sum") return SynthKind::ShiftedRank1Sum;
  if (s == "randomOrthogonal") return SynthKind::RandomOrthogonal;
  if (s == "seismicLike") return SynthKind::SeismicLike;
  if (s == "cartoonLike") return SynthKind::CartoonLike;
  throw Error(ErrorCode::InvalidSpec, "unknown synth kind '" + s + "'");
}

struct SynthSpec {
  SynthKind kind = SynthKind::ShiftedRank1Sum;
  std::size_t rows = 32;
  std::size_t cols = 32;
  std::size_t components = 1;  // L for sums / events
  std::optional<double> noise_psnr;      // dB, peak |A|^2 over mean squared noise
  std::optional<double> noise_relative;  // |E|_F = noise_relative * |A|_F
  std::uint64_t seed = 0;

  // shiftedRank1Sum: sigma_l = sigma_ratio^{-l}
  double sigma_ratio = 4.0;
  bool real_valued = false;
  // shiftedRank1Sum: |v_j| = 1 with random phase/sign instead of Gaussian v
  bool unit_intensity = false;
  // seismicLike: Ricker pulse scale in samples; 0 picks max(1.5, M/40)
  double ricker_width = 0.0;

  void validate() const {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidSpec, "dimensions must be positive");
    if (components == 0 && kind != SynthKind::RandomOrthogonal && kind != SynthKind::CartoonLike)
      throw Error(ErrorCode::InvalidSpec, "component count must be positive");
    if (noise_psnr && !std::isfinite(*noise_psnr)) throw Error(ErrorCode::InvalidSpec, "PSNR must be finite");
    if (noise_relative && !(*noise_relative >= 0.0 && std::isfinite(*noise_relative)))
      throw Error(ErrorCode::InvalidSpec, "relative noise must be finite and >= 0");
    if (!(sigma_ratio > 0.0)) throw Error(ErrorCode::InvalidSpec, "sigma ratio must be positive");
  }
};

struct SynthData {
  ComplexMatrix a;
  std::optional<Decomposition> truth;
  std::optional<ComplexMatrix> noise;  // what was added, if anything
};

inline double psnr(double peak_abs, double mean_squared_noise) {
  return 10.0 * std::log10(peak_abs * peak_abs / mean_squared_noise);
}

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double gauss() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  Complex value(bool real) { return real ? Complex{gauss(), 0.0} : Complex{gauss(), gauss()} / std::sqrt(2.0); }

  ComplexVector unit_vector(std::size_t n, bool real) {
    ComplexVector x(n);
    for (auto& z : x) z = value(real);
    normalize(x);
    return x;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

inline Decomposition truth_from(std::size_t m, std::size_t n, std::vector<Component> comps,
                                const ComplexMatrix& a) {
  Decomposition d;
  d.rows = m;
  d.cols = n;
  ComplexMatrix r = a;
  d.residual_history.push_back(frobenius_norm(r));
  for (auto& c : comps) {
    r -= component_matrix(c);
    d.residual_history.push_back(frobenius_norm(r));
    d.components.push_back(std::move(c));
  }
  return d;
}

inline SynthData shifted_rank1_sum(const SynthSpec& spec, Rng& rng) {
  const std::size_t m = spec.rows, n = spec.cols;
  std::vector<Component> comps;
  ComplexMatrix a(m, n);
  double sigma = 1.0;
  for (std::size_t l = 0; l < spec.components; ++l) {
    ComplexVector u = rng.unit_vector(m, spec.real_valued);
    ComplexVector v(n);
    if (spec.unit_intensity) {
      for (auto& z : v)
        z = spec.real_valued ? Complex{rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0}
                             : std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      normalize(v);
    } else {
      v = rng.unit_vector(n, spec.real_valued);
    }
    ShiftVector lambda(m, n);
    for (std::size_t k = 0; k < n; ++k) lambda.set(k, static_cast<std::int64_t>(rng.index(m)));
    Component c = canonicalize_component(sigma, std::move(u), std::move(v), lambda);
    a += component_matrix(c);
    comps.push_back(std::move(c));
    sigma /= spec.sigma_ratio;
  }
  return {a, truth_from(m, n, std::move(comps), a), std::nullopt};
}

// Orthonormal columns (M >= N) or rows (M < N) by modified Gram-Schmidt.
inline SynthData random_orthogonal(const SynthSpec& spec, Rng& rng) {
  const bool by_cols = spec.rows >= spec.cols;
  const std::size_t len = by_cols ? spec.rows : spec.cols;
  const std::size_t count = by_cols ? spec.cols : spec.rows;
  std::vector<ComplexVector> basis;
  while (basis.size() < count) {
    ComplexVector x(len);
    for (auto& z : x) z = rng.value(spec.real_valued);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const Complex p = dot(b, x);
        for (std::size_t i = 0; i < len; ++i) x[i] -= p * b[i];
      }
    if (norm2(x) < 1e-8) continue;
    normalize(x);
    basis.push_back(std::move(x));
  }
  ComplexMatrix a(spec.rows, spec.cols);
  for (std::size_t b = 0; b < count; ++b)
    for (std::size_t i = 0; i < len; ++i) {
      if (by_cols) a(i, b) = basis[b][i];
      else a(b, i) = std::conj(basis[b][i]);
    }
  return {a, std::nullopt, std::nullopt};
}

inline double ricker(double t, double width) {
  const double x = t / width;
  return (1.0 - x * x) * std::exp(-0.5 * x * x);
}

// Smooth trajectory: linear trend + curvature + a moving-average random walk.
inline std::vector<std::int64_t> smooth_trajectory(std::size_t m, std::size_t n, Rng& rng) {
  const double center = rng.uniform() * static_cast<double>(m);
  const double slope = (rng.uniform() - 0.5) * 0.6;
  const double curve = (rng.uniform() - 0.5) * 0.4 * static_cast<double>(m) / static_cast<double>(n * n);
  std::vector<double> walk(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) walk[j] = walk[j - 1] + 0.5 * rng.gauss();
  std::vector<std::int64_t> out(n);
  const std::size_t half = 3;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = (j > half ? j - half : 0); i <= std::min(n - 1, j + half); ++i, ++cnt) acc += walk[i];
    const double x = static_cast<double>(j) - 0.5 * static_cast<double>(n);
    out[j] = static_cast<std::int64_t>(std::lround(center + slope * x + curve * x * x + acc / static_cast<double>(cnt)));
  }
  return out;
}

inline SynthData seismic_like(const SynthSpec& spec, Rng& rng) {
  const std::size_t m = spec.rows, n = spec.cols;
  const double width = spec.ricker_width > 0.0 ? spec.ricker_width
                                               : std::max(1.5, static_cast<double>(m) / 40.0);
  std::vector<Component> comps;
  ComplexMatrix a(m, n);
  for (std::size_t l = 0; l < spec.components; ++l) {
    // pulse centered at row 0, wrapped circularly
    ComplexVector u(m);
    const double w = width * (0.8 + 0.4 * rng.uniform());
    for (std::size_t j = 0; j < m; ++j) {
      const double t = j <= m / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(m);
      u[j] = ricker(t, w);
    }
    const double amp = 0.5 + 0.5 * rng.uniform();
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    ComplexVector v(n);
    double phase = rng.uniform() * 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
      phase += 0.1 * rng.gauss();
      v[k] = sign * amp * (1.0 + 0.25 * std::sin(phase));
    }
    const auto traj = smooth_trajectory(m, n, rng);
    const ShiftVector lambda(m, traj);
    const double nu = norm2(u), nv = norm2(v);
    Component c = canonicalize_component(nu * nv, std::move(u), std::move(v), lambda);
    a += component_matrix(c);
    comps.push_back(std::move(c));
  }
  return {a, truth_from(m, n, std::move(comps), a), std::nullopt};
}

inline SynthData cartoon_like(const SynthSpec& spec, Rng& rng) {
  const std::size_t m = spec.rows, n = spec.cols;
  ComplexMatrix a(m, n, Complex{0.2, 0.0});
  const std::size_t shapes = spec.components > 0 ? spec.components : 6;
  for (std::size_t s = 0; s < shapes; ++s) {
    const double cy = rng.uniform() * m, cx = rng.uniform() * n;
    const double ry = (0.05 + 0.2 * rng.uniform()) * m, rx = (0.05 + 0.2 * rng.uniform()) * n;
    const double level = rng.uniform();
    const bool ellipse = rng.uniform() < 0.5;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < m; ++i) {
        const double dy = (static_cast<double>(i) - cy) / ry, dx = (static_cast<double>(k) - cx) / rx;
        const bool inside = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
        if (inside) a(i, k) = level;
      }
  }
  return {a, std::nullopt, std::nullopt};
}

inline void add_noise(SynthData& data, const SynthSpec& spec, Rng& rng) {
  if (!spec.noise_psnr && !spec.noise_relative) return;
  const bool real = is_real(data.a);
  ComplexMatrix e(data.a.rows(), data.a.cols());
  for (auto& z : e.data()) z = rng.value(real);
  const double count = static_cast<double>(e.size());
  // target squared Frobenius norm of the noise
  double target = 0.0;
  if (spec.noise_psnr) {
    const double peak = max_abs(data.a);
    target = count * peak * peak / std::pow(10.0, *spec.noise_psnr / 10.0);
  } else {
    target = std::norm(*spec.noise_relative * frobenius_norm(data.a));
  }
  const double current = std::norm(frobenius_norm(e));
  e *= std::sqrt(target / current);
  data.a += e;
  data.noise = std::move(e);
}

}  // namespace detail

/// Deterministic in spec.seed.
inline SynthData generate(const SynthSpec& spec) {
  spec.validate();
  detail::Rng rng(spec.seed);
  SynthData data;
  switch (spec.kind) {
    case SynthKind::ShiftedRank1Sum: data = detail::shifted_rank1_sum(spec, rng); break;
    case SynthKind::RandomOrthogonal: data = detail::random_orthogonal(spec, rng); break;
    case SynthKind::SeismicLike: data = detail::seismic_like(spec, rng); break;
    case SynthKind::CartoonLike: data = detail::cartoon_like(spec, rng); break;
  }
  detail::add_noise(data, spec, rng);
  return data;
}

}  // namespace sr1::bench
