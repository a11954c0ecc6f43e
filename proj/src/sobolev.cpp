// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/sobolev.hpp"

#include <cmath>
#include <stdexcept>

namespace shapediff {

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::identity: return "identity";
    case SpectrumKind::inv_linear: return "inv_linear";
    case SpectrumKind::inv_quadratic: return "inv_quadratic";
    case SpectrumKind::bessel: return "bessel";
    case SpectrumKind::custom: return "custom";
  }
  return "unknown";
}

SpectrumKind spectrum_kind_from_string(const std::string& s) {
  if (s == "identity") return SpectrumKind::identity;
  if (s == "inv_linear") return SpectrumKind::inv_linear;
  if (s == "inv_quadratic") return SpectrumKind::inv_quadratic;
  if (s == "bessel") return SpectrumKind::bessel;
  if (s == "custom") return SpectrumKind::custom;
  throw std::invalid_argument("unknown spectrum kind: " + s);
}

CovarianceSpectrum make_spectrum(SpectrumKind kind, int band_limit, std::optional<double> nu) {
  if (band_limit < 0) throw std::domain_error("band limit must be >= 0");
  if (kind == SpectrumKind::custom) {
    throw std::invalid_argument("custom spectra are built with custom_spectrum()");
  }
  if (kind == SpectrumKind::bessel && !nu) {
    throw std::invalid_argument("bessel spectrum requires nu");
  }
  if (kind != SpectrumKind::bessel && nu) {
    throw std::invalid_argument("nu is only meaningful for the bessel kind");
  }
  CovarianceSpectrum spec;
  spec.kind = kind;
  spec.band_limit = band_limit;
  spec.nu = nu;
  spec.lambdas.resize(static_cast<std::size_t>(band_limit) + 1);
  for (int l = 0; l <= band_limit; ++l) {
    double v = 1.0;
    switch (kind) {
      case SpectrumKind::identity: v = 1.0; break;
      case SpectrumKind::inv_linear: v = 1.0 / (l + 1.0); break;
      case SpectrumKind::inv_quadratic: v = 1.0 / ((l + 1.0) * (l + 1.0)); break;
      case SpectrumKind::bessel: v = std::pow(1.0 + static_cast<double>(l) * (l + 1), -*nu); break;
      case SpectrumKind::custom: break;  // unreachable
    }
    spec.lambdas[static_cast<std::size_t>(l)] = v;
  }
  return spec;
}

CovarianceSpectrum custom_spectrum(std::vector<double> lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("custom spectrum needs at least one weight");
  for (double v : lambdas) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("spectrum weights must be finite and >= 0");
    }
  }
  CovarianceSpectrum spec;
  spec.kind = SpectrumKind::custom;
  spec.band_limit = static_cast<int>(lambdas.size()) - 1;
  spec.lambdas = std::move(lambdas);
  return spec;
}

double truncated_trace(const CovarianceSpectrum& spec) {
  double sum = 0.0;
  for (int l = 0; l <= spec.band_limit; ++l) sum += (2.0 * l + 1.0) * spec.lambda(l);
  return sum;
}

ConvergenceMargin hnu_convergence_margin(const CovarianceSpectrum& spec, double nu) {
  if (nu < 0.0) throw std::domain_error("nu must be >= 0");
  ConvergenceMargin report;
  double prev_sum = 0.0;
  double prev_term = 0.0;
  for (int l = 0; l <= spec.band_limit; ++l) {
    const double term = (2.0 * l + 1.0) * spec.lambda(l) * std::pow(l + 1.0, 2.0 * nu);
    prev_sum = report.partial_sum;
    report.partial_sum += term;
    if (l == spec.band_limit) {
      report.last_term = term;
      report.terms_decaying = spec.band_limit > 0 ? term < prev_term : term == 0.0;
      report.partial_ratio = prev_sum > 0.0 ? report.partial_sum / prev_sum : 1.0;
    }
    prev_term = term;
  }
  return report;
}

double sobolev_norm(const HarmonicCoefficients& coeffs, double nu) {
  if (nu < 0.0) throw std::domain_error("nu must be >= 0");
  const int N = coeffs.band_limit();
  double sum = 0.0;
  for (int l = 0; l <= N; ++l) {
    // H^0 is plain L2; for nu > 0 the degree-0 band contributes nothing to
    // the Laplacian part.
    const double factor = nu == 0.0 ? 1.0 : 1.0 + std::pow(static_cast<double>(l) * (l + 1), nu);
    for (int m = -l; m <= l; ++m) {
      const double c = coeffs.values()[HarmonicCoefficients::index(l, m)];
      sum += factor * c * c;
    }
  }
  return std::sqrt(sum);
}

HarmonicCoefficients project_hnu(const HarmonicCoefficients& coeffs, double nu) {
  if (nu < 0.0) throw std::domain_error("nu must be >= 0");
  const int N = coeffs.band_limit();
  HarmonicCoefficients out(N);
  for (int l = 0; l <= N; ++l) {
    const double scale = std::pow(l + 1.0, -nu);
    for (int m = -l; m <= l; ++m) {
      out.values()[HarmonicCoefficients::index(l, m)] =
          scale * coeffs.values()[HarmonicCoefficients::index(l, m)];
    }
  }
  return out;
}

}  // namespace shapediff
