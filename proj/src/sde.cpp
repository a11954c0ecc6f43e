// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shapediff/errors.hpp"

namespace shapediff {

TimeGrid TimeGrid::uniform(double t0, double t_end, int steps) {
  if (!(std::isfinite(t0) && std::isfinite(t_end))) {
    throw std::domain_error("time grid endpoints must be finite");
  }
  if (!(t_end > t0)) {
    throw std::domain_error("time grid requires t_end > t0 (dt must be positive)");
  }
  if (steps < 1) throw std::domain_error("time grid requires at least one step");
  return TimeGrid{t0, t_end, steps};
}

DriftSpec DriftSpec::constant(double c) {
  DriftSpec d;
  d.kind = Kind::constant;
  d.value = c;
  return d;
}

DriftSpec DriftSpec::linear(double slope) {
  DriftSpec d;
  d.kind = Kind::linear;
  d.value = slope;
  return d;
}

DriftSpec DriftSpec::ou(double rate, double mean) {
  if (!(rate > 0.0)) throw std::domain_error("ou drift requires rate > 0");
  DriftSpec d;
  d.kind = Kind::ou;
  d.rate = rate;
  d.mean = mean;
  return d;
}

double DriftSpec::operator()(double, double x) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value;
    case Kind::linear: return value * x;
    case Kind::ou: return rate * (mean - x);
  }
  return 0.0;
}

DiffusionSpec DiffusionSpec::constant(double sigma) {
  if (!(sigma >= 0.0)) throw std::domain_error("constant diffusion requires sigma >= 0");
  DiffusionSpec d;
  d.kind = Kind::constant;
  d.value = sigma;
  return d;
}

DiffusionSpec DiffusionSpec::linear(double slope) {
  DiffusionSpec d;
  d.kind = Kind::linear;
  d.value = slope;
  return d;
}

double DiffusionSpec::operator()(double, double x) const {
  switch (kind) {
    case Kind::constant: return value;
    case Kind::linear: return value * x;
  }
  return 0.0;
}

void validate_process(const ProcessSpec& spec) {
  if (!std::isfinite(spec.drift.value) || !std::isfinite(spec.drift.rate) ||
      !std::isfinite(spec.drift.mean) || !std::isfinite(spec.diffusion.value)) {
    throw std::domain_error("process parameters must be finite");
  }
  if (spec.drift.kind == DriftSpec::Kind::ou && !(spec.drift.rate > 0.0)) {
    throw std::domain_error("ou drift requires rate > 0");
  }
  if (spec.diffusion.kind == DiffusionSpec::Kind::constant && !(spec.diffusion.value >= 0.0)) {
    throw std::domain_error("constant diffusion requires sigma >= 0");
  }
  if (spec.hurst && !(*spec.hurst > 0.0 && *spec.hurst < 1.0)) {
    throw std::domain_error("hurst index must lie strictly in (0, 1)");
  }
}

IncrementMatrix brownian_increments(const TimeGrid& grid, int n_streams, SeedSpec seed) {
  if (n_streams < 1) throw std::domain_error("need at least one stream");
  TimeGrid::uniform(grid.t0, grid.t_end, grid.steps);  // re-validate
  IncrementMatrix out;
  out.times = grid;
  out.n_streams = n_streams;
  out.values.resize(static_cast<std::size_t>(n_streams) * grid.steps);
  const double sd = std::sqrt(grid.dt());
#pragma omp parallel for schedule(static)
  for (int s = 0; s < n_streams; ++s) {
    const std::uint64_t key = rng::derive_stream(seed, rng::kDomainPathMatrix, static_cast<std::uint64_t>(s));
    double* row = &out.values[static_cast<std::size_t>(s) * grid.steps];
    for (int k = 0; k < grid.steps; ++k) row[k] = sd * rng::normal_at(key, static_cast<std::uint64_t>(k));
  }
  return out;
}

void euler_maruyama_path(const ProcessSpec& spec, double x0, const TimeGrid& grid,
                         std::uint64_t stream_key, std::span<double> out) {
  const int K = grid.steps;
  const double dt = grid.dt();
  const double sd = std::sqrt(dt);
  double x = x0;
  out[0] = x;
  for (int k = 0; k < K; ++k) {
    const double t = grid.time(k);
    const double dw = sd * rng::normal_at(stream_key, static_cast<std::uint64_t>(k));
    x = x + spec.drift(t, x) * dt + spec.diffusion(t, x) * dw;
    if (!std::isfinite(x)) {
      throw integration_error("euler_maruyama: state became non-finite at step " + std::to_string(k + 1),
                              k + 1);
    }
    out[static_cast<std::size_t>(k) + 1] = x;
  }
}

PathMatrix euler_maruyama(const ProcessSpec& spec, std::span<const double> x0,
                          const TimeGrid& grid, SeedSpec seed) {
  validate_process(spec);
  if (spec.hurst) {
    throw std::invalid_argument("euler_maruyama integrates Brownian-driven specs; use fbm_paths for fractional noise");
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw std::domain_error("initial values must be finite");
  }
  TimeGrid::uniform(grid.t0, grid.t_end, grid.steps);
  PathMatrix out;
  out.times = grid;
  out.n_paths = static_cast<int>(x0.size());
  out.values.resize(x0.size() * (static_cast<std::size_t>(grid.steps) + 1));

  // Parallel over paths; a blow-up inside the loop is carried out afterwards
  // (exceptions may not cross an OpenMP region).
  int blowup_step = 0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(x0.size()); ++p) {
    const std::uint64_t key =
        rng::derive_stream(seed, rng::kDomainPathMatrix, static_cast<std::uint64_t>(p));
    try {
      euler_maruyama_path(spec, x0[static_cast<std::size_t>(p)], grid, key,
                          std::span<double>(&out.values[static_cast<std::size_t>(p) * (grid.steps + 1)],
                                            static_cast<std::size_t>(grid.steps) + 1));
    } catch (const integration_error& e) {
#pragma omp critical
      blowup_step = e.step();
    }
  }
  if (blowup_step > 0) {
    throw integration_error("euler_maruyama: state became non-finite at step " + std::to_string(blowup_step),
                            blowup_step);
  }
  return out;
}

std::vector<double> euler_maruyama_with_increments(const ProcessSpec& spec, double x0,
                                                   const TimeGrid& grid,
                                                   std::span<const double> increments) {
  validate_process(spec);
  if (static_cast<int>(increments.size()) != grid.steps) {
    throw std::invalid_argument("need exactly one increment per step");
  }
  std::vector<double> out(static_cast<std::size_t>(grid.steps) + 1);
  const double dt = grid.dt();
  double x = x0;
  out[0] = x;
  for (int k = 0; k < grid.steps; ++k) {
    const double t = grid.time(k);
    x = x + spec.drift(t, x) * dt + spec.diffusion(t, x) * increments[static_cast<std::size_t>(k)];
    if (!std::isfinite(x)) {
      throw integration_error("euler_maruyama: state became non-finite at step " + std::to_string(k + 1),
                              k + 1);
    }
    out[static_cast<std::size_t>(k) + 1] = x;
  }
  return out;
}

OuMoments ou_moments(double theta, double mu, double sigma, double x0, double t) {
  if (!(theta > 0.0)) throw std::domain_error("ou_moments requires theta > 0");
  OuMoments m;
  m.mean = mu + (x0 - mu) * std::exp(-theta * t);
  m.variance = sigma * sigma * (1.0 - std::exp(-2.0 * theta * t)) / (2.0 * theta);
  return m;
}

namespace detail {

double fgn_autocovariance(double hurst, std::int64_t lag) {
  const double k = static_cast<double>(lag < 0 ? -lag : lag);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

void fft_pow2(std::span<double> re, std::span<double> im, bool inverse) {
  const std::size_t n = re.size();
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  constexpr double kPi = 3.14159265358979323846264338327950288;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const double wr = std::cos(ang);
    const double wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0;
      double ci = 0.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::size_t a = i + j;
        const std::size_t b = i + j + len / 2;
        const double xr = re[b] * cr - im[b] * ci;
        const double xi = re[b] * ci + im[b] * cr;
        re[b] = re[a] - xr;
        im[b] = im[a] - xi;
        re[a] += xr;
        im[a] += xi;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    for (std::size_t i = 0; i < n; ++i) {
      re[i] /= static_cast<double>(n);
      im[i] /= static_cast<double>(n);
    }
  }
}

std::vector<double> fgn_circulant_eigenvalues(double hurst, int steps) {
  std::size_t m = 2;
  while (m < 2 * static_cast<std::size_t>(steps)) m <<= 1;
  std::vector<double> re(m, 0.0), im(m, 0.0);
  for (std::size_t j = 0; j <= m / 2; ++j) re[j] = fgn_autocovariance(hurst, static_cast<std::int64_t>(j));
  for (std::size_t j = m / 2 + 1; j < m; ++j) re[j] = re[m - j];
  fft_pow2(re, im, false);
  return re;  // imaginary parts vanish for a symmetric first row
}

}  // namespace detail

FbmSampler::FbmSampler(double hurst, const TimeGrid& grid, bool force_dense)
    : hurst_(hurst), grid_(grid) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("hurst index must lie strictly in (0, 1)");
  }
  TimeGrid::uniform(grid.t0, grid.t_end, grid.steps);
  const int K = grid.steps;

  std::vector<double> eig = detail::fgn_circulant_eigenvalues(hurst, K);
  double max_eig = 0.0;
  double min_eig = 0.0;
  for (double v : eig) {
    max_eig = std::max(max_eig, v);
    min_eig = std::min(min_eig, v);
  }
  if (!force_dense && min_eig > -1e-9 * max_eig) {
    m_ = eig.size();
    sqrt_eigen_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) {
      sqrt_eigen_[j] = std::sqrt(std::max(0.0, eig[j]) / static_cast<double>(m_));
    }
    return;
  }

  // Exact-covariance fallback: Cholesky factor of the K x K fGn covariance.
  dense_ = true;
  const std::size_t n = static_cast<std::size_t>(K);
  chol_.assign(n * n, 0.0);
  std::vector<double> cov(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov[i * n + j] = detail::fgn_autocovariance(hurst, static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = cov[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) throw std::runtime_error("fGn covariance is not positive definite");
        chol_[i * n + i] = std::sqrt(s);
      } else {
        chol_[i * n + j] = s / chol_[j * n + j];
      }
    }
  }
}

void FbmSampler::sample_path(std::uint64_t stream_key, std::span<double> out) const {
  const int K = grid_.steps;
  const double scale = std::pow(grid_.dt(), hurst_);  // self-similarity: unit-lag fGn -> dt spacing
  std::vector<double> fgn(static_cast<std::size_t>(K));

  if (!dense_) {
    // Davies-Harte synthesis: Hermitian-symmetric spectral amplitudes, one
    // FFT, real part holds the stationary samples.
    std::vector<double> re(m_, 0.0), im(m_, 0.0);
    const std::size_t half = m_ / 2;
    re[0] = sqrt_eigen_[0] * rng::normal_at(stream_key, 0);
    re[half] = sqrt_eigen_[half] * rng::normal_at(stream_key, 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 1; j < half; ++j) {
      const double a = rng::normal_at(stream_key, 2 * j);
      const double b = rng::normal_at(stream_key, 2 * j + 1);
      const double s = sqrt_eigen_[j] * inv_sqrt2;
      re[j] = s * a;
      im[j] = s * b;
      re[m_ - j] = s * a;
      im[m_ - j] = -s * b;
    }
    detail::fft_pow2(re, im, false);
    for (int k = 0; k < K; ++k) fgn[static_cast<std::size_t>(k)] = re[static_cast<std::size_t>(k)];
  } else {
    const std::size_t n = static_cast<std::size_t>(K);
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = rng::normal_at(stream_key, k);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k <= i; ++k) s += chol_[i * n + k] * z[k];
      fgn[i] = s;
    }
  }

  out[0] = 0.0;
  for (int k = 0; k < K; ++k) {
    out[static_cast<std::size_t>(k) + 1] = out[static_cast<std::size_t>(k)] + scale * fgn[static_cast<std::size_t>(k)];
  }
}

PathMatrix fbm_paths(double hurst, const TimeGrid& grid, int n_streams, SeedSpec seed) {
  if (n_streams < 1) throw std::domain_error("need at least one stream");
  FbmSampler sampler(hurst, grid);
  PathMatrix out;
  out.times = grid;
  out.n_paths = n_streams;
  out.values.resize(static_cast<std::size_t>(n_streams) * (grid.steps + 1));
#pragma omp parallel for schedule(static)
  for (int p = 0; p < n_streams; ++p) {
    const std::uint64_t key = rng::derive_stream(seed, rng::kDomainFbm, static_cast<std::uint64_t>(p));
    sampler.sample_path(key, std::span<double>(&out.values[static_cast<std::size_t>(p) * (grid.steps + 1)],
                                               static_cast<std::size_t>(grid.steps) + 1));
  }
  return out;
}

}  // namespace shapediff
