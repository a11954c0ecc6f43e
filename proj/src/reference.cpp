// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/reference.hpp"

#include <stdexcept>

namespace shapediff::ref {

HarmonicCoefficients forward_sht(std::span<const double> samples, const SphericalGrid& grid,
                                 int band_limit) {
  if (samples.size() != grid.node_count()) {
    throw std::invalid_argument("forward_sht: sample count does not match grid");
  }
  HarmonicCoefficients out(band_limit);
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  for (int l = 0; l <= band_limit; ++l) {
    for (int m = -l; m <= l; ++m) {
      double acc = 0.0;
      for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
          acc += grid.weight(i, j) * samples[static_cast<std::size_t>(i) * np + j] *
                 eval_real_sh(l, m, grid.thetas[static_cast<std::size_t>(i)], grid.phis[static_cast<std::size_t>(j)]);
        }
      }
      out.at(l, m) = acc;
    }
  }
  return out;
}

std::vector<double> inverse_sht(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points) {
  const int N = coeffs.band_limit();
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double acc = 0.0;
    for (int l = 0; l <= N; ++l) {
      for (int m = -l; m <= l; ++m) {
        acc += coeffs.at(l, m) * eval_real_sh(l, m, points[p].theta, points[p].phi);
      }
    }
    out[p] = acc;
  }
  return out;
}

}  // namespace shapediff::ref
