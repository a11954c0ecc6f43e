// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/shape_process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shapediff/errors.hpp"

namespace shapediff {

namespace {

void check_band_limits(const ShapeCoefficients& u0, const CovarianceSpectrum& spec) {
  if (u0.band_limit() != spec.band_limit) {
    throw std::invalid_argument("band-limit mismatch: shape has N=" + std::to_string(u0.band_limit()) +
                                ", spectrum has N=" + std::to_string(spec.band_limit));
  }
}

std::vector<double> degree_weights(const CovarianceSpectrum& spec, ScaleMode scale) {
  std::vector<double> w(spec.lambdas.size());
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] = scale == ScaleMode::sqrt_lambda ? std::sqrt(spec.lambdas[l]) : spec.lambdas[l];
  }
  return w;
}

// Shared driver: one independent zero-start path per (channel, l, m), scaled
// by the per-degree weight. path_fn(key, out) must be a pure function of the
// stream key so the parallel schedule cannot affect the result.
template <typename PathFn>
ShapeTrajectory simulate_coefficients(const ShapeCoefficients& u0, const CovarianceSpectrum& spec,
                                      const TimeGrid& grid, SeedSpec seed, ScaleMode scale,
                                      TrajectoryProvenance prov, PathFn&& path_fn) {
  TimeGrid::uniform(grid.t0, grid.t_end, grid.steps);
  const int N = u0.band_limit();
  const int ncoef = (N + 1) * (N + 1);
  const int K = grid.steps;

  ShapeTrajectory traj;
  traj.times = grid;
  traj.source = u0;
  traj.noise.assign(static_cast<std::size_t>(K) + 1, ShapeCoefficients(N));
  traj.provenance = std::move(prov);

  const std::vector<double> weights = degree_weights(spec, scale);

  int blowup_step = 0;
#pragma omp parallel
  {
    std::vector<double> path(static_cast<std::size_t>(K) + 1);
#pragma omp for collapse(2) schedule(static)
    for (int ch = 0; ch < 3; ++ch) {
      for (int idx = 0; idx < ncoef; ++idx) {
        const int l = detail::degree_of_index(static_cast<std::size_t>(idx));
        const int m = idx - l * l - l;
        const std::uint64_t key =
            rng::derive_stream(seed, rng::kDomainCoefficient, static_cast<std::uint64_t>(ch),
                               static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(static_cast<std::int64_t>(m)));
        try {
          path_fn(key, std::span<double>(path));
        } catch (const integration_error& e) {
#pragma omp critical
          blowup_step = e.step();
          continue;
        }
        const double w = weights[static_cast<std::size_t>(l)];
        for (int k = 0; k <= K; ++k) {
          traj.noise[static_cast<std::size_t>(k)].channels[static_cast<std::size_t>(ch)]
              .values()[static_cast<std::size_t>(idx)] = w * path[static_cast<std::size_t>(k)];
        }
      }
    }
  }
  if (blowup_step > 0) {
    throw integration_error("shape process: coefficient path became non-finite at step " +
                                std::to_string(blowup_step),
                            blowup_step);
  }
  return traj;
}

}  // namespace

std::string to_string(ScaleMode mode) {
  return mode == ScaleMode::sqrt_lambda ? "sqrt" : "linear";
}

ScaleMode scale_mode_from_string(const std::string& s) {
  if (s == "sqrt") return ScaleMode::sqrt_lambda;
  if (s == "linear") return ScaleMode::linear_lambda;
  throw std::invalid_argument("unknown scale mode: " + s + " (expected sqrt|linear)");
}

ShapeCoefficients ShapeTrajectory::frame(int k) const {
  ShapeCoefficients f = source;
  const ShapeCoefficients& n = noise[static_cast<std::size_t>(k)];
  for (std::size_t ch = 0; ch < 3; ++ch) {
    auto dst = f.channels[ch].values();
    const auto src = n.channels[ch].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return f;
}

ShapeTrajectory q_wiener_shape_process(const ShapeCoefficients& u0, const CovarianceSpectrum& spec,
                                       const TimeGrid& grid, SeedSpec seed, ScaleMode scale) {
  check_band_limits(u0, spec);
  TrajectoryProvenance prov{spec, ProcessSpec::standard_brownian(), seed, scale};
  const ProcessSpec brownian = ProcessSpec::standard_brownian();
  return simulate_coefficients(u0, spec, grid, seed, scale, std::move(prov),
                               [&](std::uint64_t key, std::span<double> out) {
                                 euler_maruyama_path(brownian, 0.0, grid, key, out);
                               });
}

ShapeTrajectory ito_shape_process(const ShapeCoefficients& u0, const CovarianceSpectrum& spec,
                                  const ProcessSpec& proc, const TimeGrid& grid, SeedSpec seed) {
  check_band_limits(u0, spec);
  validate_process(proc);
  if (proc.hurst) {
    throw std::invalid_argument("ito_shape_process takes Brownian-driven specs; use fractional_shape_process");
  }
  TrajectoryProvenance prov{spec, proc, seed, ScaleMode::sqrt_lambda};
  return simulate_coefficients(u0, spec, grid, seed, ScaleMode::sqrt_lambda, std::move(prov),
                               [&](std::uint64_t key, std::span<double> out) {
                                 euler_maruyama_path(proc, 0.0, grid, key, out);
                               });
}

ShapeTrajectory fractional_shape_process(const ShapeCoefficients& u0,
                                         const CovarianceSpectrum& spec, double hurst,
                                         const TimeGrid& grid, SeedSpec seed) {
  check_band_limits(u0, spec);
  const FbmSampler sampler(hurst, grid);
  ProcessSpec tag = ProcessSpec::standard_brownian();
  tag.hurst = hurst;
  TrajectoryProvenance prov{spec, tag, seed, ScaleMode::sqrt_lambda};
  return simulate_coefficients(u0, spec, grid, seed, ScaleMode::sqrt_lambda, std::move(prov),
                               [&](std::uint64_t key, std::span<double> out) {
                                 sampler.sample_path(key, out);
                               });
}

std::vector<std::vector<Vec3>> sample_frames(const ShapeTrajectory& traj,
                                             std::span<const SphericalPoint> points) {
  const int N = traj.source.band_limit();
  const std::size_t ncoef = traj.source.channels[0].size();
  const std::vector<double> basis = sh_basis_matrix(N, points);
  const int K = traj.frame_count();

  std::vector<std::vector<Vec3>> frames(static_cast<std::size_t>(K));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < K; ++k) {
    const ShapeCoefficients f = traj.frame(k);
    std::vector<Vec3>& pts = frames[static_cast<std::size_t>(k)];
    pts.resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      const double* row = &basis[p * ncoef];
      Vec3 v;
      double ax = 0.0, ay = 0.0, az = 0.0;
      const auto cx = f.channels[0].values();
      const auto cy = f.channels[1].values();
      const auto cz = f.channels[2].values();
      for (std::size_t i = 0; i < ncoef; ++i) {
        ax += row[i] * cx[i];
        ay += row[i] * cy[i];
        az += row[i] * cz[i];
      }
      v.x = ax;
      v.y = ay;
      v.z = az;
      pts[p] = v;
    }
  }
  return frames;
}

ShapeCoefficients decompose_sphere(int band_limit) {
  if (band_limit < 1) {
    throw std::domain_error("decompose_sphere requires N >= 1 (the sphere is a degree-1 shape)");
  }
  const SphericalGrid grid = build_grid(band_limit);
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  std::vector<double> fx(grid.node_count()), fy(grid.node_count()), fz(grid.node_count());
  for (int i = 0; i < nt; ++i) {
    const double st = std::sin(grid.thetas[i]);
    const double ct = std::cos(grid.thetas[i]);
    for (int j = 0; j < np; ++j) {
      const std::size_t n = static_cast<std::size_t>(i) * np + j;
      fx[n] = st * std::cos(grid.phis[j]);
      fy[n] = st * std::sin(grid.phis[j]);
      fz[n] = ct;
    }
  }
  ShapeCoefficients out(band_limit);
  out.channels[0] = forward_sht(fx, grid, band_limit);
  out.channels[1] = forward_sht(fy, grid, band_limit);
  out.channels[2] = forward_sht(fz, grid, band_limit);
  return out;
}

}  // namespace shapediff
