// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shapediff/sh_core.hpp"

namespace shapediff::ref {

/// Serial, direct-summation transforms. These evaluate eval_real_sh term by
/// term with no precomputed tables and no threading; they are the
/// transparent counterparts the optimised kernels are tested and
/// benchmarked against.

HarmonicCoefficients forward_sht(std::span<const double> samples, const SphericalGrid& grid,
                                 int band_limit);

std::vector<double> inverse_sht(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points);

}  // namespace shapediff::ref
