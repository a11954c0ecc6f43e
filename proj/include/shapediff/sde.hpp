// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shapediff/rng.hpp"

namespace shapediff {

/// Uniform time grid t_0 < t_1 < ... < t_K = T.
struct TimeGrid {
  double t0 = 0.0;
  double t_end = 1.0;
  int steps = 1;

  /// Validates T > t0 (so dt > 0) and steps >= 1.
  static TimeGrid uniform(double t0, double t_end, int steps);

  double dt() const { return (t_end - t0) / steps; }
  double time(int k) const { return t0 + (t_end - t0) * (static_cast<double>(k) / steps); }
};

struct DriftSpec {
  enum class Kind { zero, constant, linear, ou };
  Kind kind = Kind::zero;
  double value = 0.0;  // constant: b = value; linear: b = value * x
  double rate = 1.0;   // ou: b = rate * (mean - x), rate > 0
  double mean = 0.0;

  static DriftSpec zero() { return {}; }
  static DriftSpec constant(double c);
  static DriftSpec linear(double slope);
  static DriftSpec ou(double rate, double mean);

  double operator()(double t, double x) const;
};

struct DiffusionSpec {
  enum class Kind { constant, linear };
  Kind kind = Kind::constant;
  double value = 1.0;  // constant: sigma = value (>= 0); linear: sigma = value * x

  static DiffusionSpec constant(double sigma);
  static DiffusionSpec linear(double slope);

  double operator()(double t, double x) const;
};

/// Drift/diffusion description of the per-coefficient real-valued process.
/// All built-in tags are globally Lipschitz in x. An optional Hurst index
/// in (0,1) selects a fractional driving noise instead of Brownian motion.
struct ProcessSpec {
  DriftSpec drift;
  DiffusionSpec diffusion;
  std::optional<double> hurst;

  static ProcessSpec standard_brownian() {
    return {DriftSpec::zero(), DiffusionSpec::constant(1.0), std::nullopt};
  }
};

/// Throws std::domain_error on any out-of-range parameter.
void validate_process(const ProcessSpec& spec);

/// Simulated paths: values[p][k] = x at time t_k for path p, k = 0..steps.
struct PathMatrix {
  TimeGrid times;
  int n_paths = 0;
  std::vector<double> values;  // row-major, n_paths x (steps + 1)

  double at(int path, int k) const {
    return values[static_cast<std::size_t>(path) * (times.steps + 1) + k];
  }
};

/// Per-step Brownian increments: values[s][k] ~ N(0, dt), k = 0..steps-1.
struct IncrementMatrix {
  TimeGrid times;
  int n_streams = 0;
  std::vector<double> values;  // row-major, n_streams x steps

  double at(int stream, int k) const {
    return values[static_cast<std::size_t>(stream) * times.steps + k];
  }
};

/// Independent Gaussian increments with mean 0 and variance dt per step and
/// stream. Deterministic in (grid, seed); streams are keyed individually so
/// generation order and thread count cannot change the output.
IncrementMatrix brownian_increments(const TimeGrid& grid, int n_streams, SeedSpec seed);

/// Euler-Maruyama: x_{k+1} = x_k + b(t_k, x_k) dt + sigma(t_k, x_k) dW_k,
/// one path per initial value. Throws integration_error naming the step if
/// the state leaves the finite range.
PathMatrix euler_maruyama(const ProcessSpec& spec, std::span<const double> x0,
                          const TimeGrid& grid, SeedSpec seed);

/// Single path with an explicit noise stream key; `out` has steps+1 slots.
void euler_maruyama_path(const ProcessSpec& spec, double x0, const TimeGrid& grid,
                         std::uint64_t stream_key, std::span<double> out);

/// Single path driven by caller-supplied increments (one per step); used by
/// coupled-refinement convergence studies.
std::vector<double> euler_maruyama_with_increments(const ProcessSpec& spec, double x0,
                                                   const TimeGrid& grid,
                                                   std::span<const double> increments);

struct OuMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Closed-form Ornstein-Uhlenbeck marginals for dX = theta (mu - X) dt
/// + sigma dB: mean = mu + (x0 - mu) e^{-theta t},
/// variance = sigma^2 (1 - e^{-2 theta t}) / (2 theta). Requires theta > 0.
OuMoments ou_moments(double theta, double mu, double sigma, double x0, double t);

/// Fractional Gaussian noise sampler at the grid spacing, by circulant
/// embedding of the fGn autocovariance with an exact-covariance dense
/// factorisation fallback when the circulant has negative eigenvalues.
class FbmSampler {
 public:
  FbmSampler(double hurst, const TimeGrid& grid, bool force_dense = false);

  bool uses_dense_fallback() const { return dense_; }
  double hurst() const { return hurst_; }

  /// Zero-start fBm path at the grid times; `out` has steps+1 slots.
  /// Pure function of the stream key.
  void sample_path(std::uint64_t stream_key, std::span<double> out) const;

 private:
  double hurst_;
  TimeGrid grid_;
  bool dense_ = false;
  std::vector<double> sqrt_eigen_;  // circulant route: sqrt(lambda_j / m)
  std::size_t m_ = 0;               // circulant size (power of two)
  std::vector<double> chol_;        // dense route: lower-triangular factor
};

/// Zero-start fractional Brownian motion paths with Hurst index h in (0,1);
/// h = 0.5 coincides in law with standard Brownian motion.
PathMatrix fbm_paths(double hurst, const TimeGrid& grid, int n_streams, SeedSpec seed);

namespace detail {

/// Unit-spacing fGn autocovariance
/// gamma(k) = ((k+1)^{2h} - 2 k^{2h} + |k-1|^{2h}) / 2.
double fgn_autocovariance(double hurst, std::int64_t lag);

/// Eigenvalues of the circulant embedding used for `steps` samples.
std::vector<double> fgn_circulant_eigenvalues(double hurst, int steps);

/// In-place radix-2 FFT on interleaved complex data (size a power of two).
void fft_pow2(std::span<double> re, std::span<double> im, bool inverse);

}  // namespace detail
}  // namespace shapediff
