// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "shapediff/sde.hpp"
#include "shapediff/sh_core.hpp"
#include "shapediff/sobolev.hpp"
#include "shapediff/vec3.hpp"

namespace shapediff {

/// Q-Wiener weighting mode: the process definition uses sqrt(lambda_l); the
/// linear variant reproduces runs that scale the noise by lambda_l directly.
enum class ScaleMode { sqrt_lambda, linear_lambda };

std::string to_string(ScaleMode mode);
ScaleMode scale_mode_from_string(const std::string& s);

/// A shape in L2(S^2, R^3): one coefficient table per ambient coordinate,
/// all sharing the same band limit.
struct ShapeCoefficients {
  ShapeCoefficients() = default;
  explicit ShapeCoefficients(int band_limit)
      : channels{HarmonicCoefficients(band_limit), HarmonicCoefficients(band_limit),
                 HarmonicCoefficients(band_limit)} {}

  std::array<HarmonicCoefficients, 3> channels;  // x, y, z

  int band_limit() const { return channels[0].band_limit(); }

  friend bool operator==(const ShapeCoefficients&, const ShapeCoefficients&) = default;
};

struct TrajectoryProvenance {
  CovarianceSpectrum spectrum;
  std::optional<ProcessSpec> process;
  SeedSpec seed;
  ScaleMode scale = ScaleMode::sqrt_lambda;
};

/// Simulated coefficient trajectory. The source shape and the noise
/// perturbation are stored separately so that frame 0 reproduces the source
/// exactly, without floating-point cancellation.
struct ShapeTrajectory {
  TimeGrid times;
  ShapeCoefficients source;
  std::vector<ShapeCoefficients> noise;  // steps + 1 entries; noise[0] is all zeros
  TrajectoryProvenance provenance;

  int frame_count() const { return static_cast<int>(noise.size()); }
  const ShapeCoefficients& noise_frame(int k) const { return noise[static_cast<std::size_t>(k)]; }
  /// source + noise[k].
  ShapeCoefficients frame(int k) const;
};

/// Q-Wiener shape process: each coefficient (channel i, degree l, order m)
/// follows u0 + w_l B_t with w_l = sqrt(lambda_l) (or lambda_l under
/// ScaleMode::linear_lambda) and 3 (N+1)^2 independent Brownian motions,
/// keyed by (seed, channel, l, m).
ShapeTrajectory q_wiener_shape_process(const ShapeCoefficients& u0, const CovarianceSpectrum& spec,
                                       const TimeGrid& grid, SeedSpec seed,
                                       ScaleMode scale = ScaleMode::sqrt_lambda);

/// Generalisation with per-coefficient Ito processes started at zero:
/// frame_k = u0 + sqrt(lambda_l) x^{i,l,m}_{t_k}. With a standard Brownian
/// spec this coincides (bitwise, for equal seeds) with the Q-Wiener process
/// under sqrt scaling.
ShapeTrajectory ito_shape_process(const ShapeCoefficients& u0, const CovarianceSpectrum& spec,
                                  const ProcessSpec& proc, const TimeGrid& grid, SeedSpec seed);

/// Q-Wiener variant driven by independent fractional Brownian motions with
/// Hurst index h in (0, 1); h = 0.5 is equal in law to the Q-Wiener process.
ShapeTrajectory fractional_shape_process(const ShapeCoefficients& u0,
                                         const CovarianceSpectrum& spec, double hurst,
                                         const TimeGrid& grid, SeedSpec seed);

/// Evaluates every frame at the given angles and zips the three channels
/// into 3-D points: result[k][p] is frame k at points[p].
std::vector<std::vector<Vec3>> sample_frames(const ShapeTrajectory& traj,
                                             std::span<const SphericalPoint> points);

/// Spherical-harmonic decomposition of the unit sphere
/// (sin theta cos phi, sin theta sin phi, cos theta); all mass sits in
/// degree 1 with magnitude sqrt(4 pi / 3). Requires N >= 1.
ShapeCoefficients decompose_sphere(int band_limit);

}  // namespace shapediff
