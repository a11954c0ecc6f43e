// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapediff/sh_core.hpp"

namespace shapediff {

enum class SpectrumKind { identity, inv_linear, inv_quadratic, bessel, custom };

std::string to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(const std::string& s);

/// Per-degree covariance weights {lambda_l} of the diagonal operator Q.
/// Weights are stored per degree; flat-basis sums pick up the (2l+1)-fold
/// degeneracy factor.
struct CovarianceSpectrum {
  SpectrumKind kind = SpectrumKind::identity;
  int band_limit = 0;
  std::optional<double> nu;      // bessel order, set iff kind == bessel
  std::vector<double> lambdas;   // size band_limit + 1, all >= 0 and finite

  double lambda(int l) const { return lambdas[static_cast<std::size_t>(l)]; }
};

/// Built-in spectra: identity -> 1, inv_linear -> 1/(l+1),
/// inv_quadratic -> 1/(l+1)^2, bessel(nu) -> (1 + l(l+1))^-nu.
/// `nu` must be supplied iff kind == bessel.
CovarianceSpectrum make_spectrum(SpectrumKind kind, int band_limit,
                                 std::optional<double> nu = std::nullopt);

/// User-supplied weights; validated non-negative and finite.
CovarianceSpectrum custom_spectrum(std::vector<double> lambdas);

/// Truncated trace sum_{l<=N} (2l+1) lambda_l, counting the (2l+1)
/// degenerate orders per degree.
double truncated_trace(const CovarianceSpectrum& spec);

/// Truncated H^nu convergence diagnostic. Since all computation is
/// truncated, trace-class membership can only be flagged, not proven: the
/// report carries the partial sum, the ratio of the last two partial sums
/// and whether the final terms are still decaying.
struct ConvergenceMargin {
  double partial_sum = 0.0;     // sum_{l<=N} (2l+1) lambda_l (l+1)^(2 nu)
  double partial_ratio = 1.0;   // S_N / S_{N-1}
  double last_term = 0.0;
  bool terms_decaying = true;   // last term strictly below the previous one
};
ConvergenceMargin hnu_convergence_margin(const CovarianceSpectrum& spec, double nu);

/// H^nu norm sqrt( sum (1 + (l(l+1))^nu) c^2 ); at nu = 0 this is the plain
/// L2 coefficient norm (H^0 = L2, Parseval).
double sobolev_norm(const HarmonicCoefficients& coeffs, double nu);

/// Smoothing map into H^nu: c_{l,m} -> (l+1)^-nu c_{l,m}.
HarmonicCoefficients project_hnu(const HarmonicCoefficients& coeffs, double nu);

}  // namespace shapediff
