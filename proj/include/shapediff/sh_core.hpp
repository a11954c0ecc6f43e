// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shapediff {

/// A point on the unit sphere: theta = colatitude in [0, pi],
/// phi = azimuth in [0, 2*pi).
struct SphericalPoint {
  double theta = 0.0;
  double phi = 0.0;
};

/// Tensor-product quadrature grid on the sphere: Gauss-Legendre nodes in
/// colatitude, uniform nodes in azimuth. Node weights sum to 4*pi and the
/// grid built for band limit N integrates products of harmonics up to
/// degree N exactly (to rounding).
struct SphericalGrid {
  std::vector<double> thetas;   // strictly increasing in (0, pi)
  std::vector<double> phis;    // uniform in [0, 2*pi)
  std::vector<double> weights;  // per (i, j) node, row-major over thetas

  int n_theta() const { return static_cast<int>(thetas.size()); }
  int n_phi() const { return static_cast<int>(phis.size()); }
  std::size_t node_count() const { return thetas.size() * phis.size(); }
  double weight(int i, int j) const { return weights[static_cast<std::size_t>(i) * phis.size() + j]; }
};

/// Band-limited table of real spherical harmonic coefficients c_{l,m},
/// 0 <= l <= N, |m| <= l; (N+1)^2 entries stored flat at index l*(l+1)+m.
class HarmonicCoefficients {
 public:
  HarmonicCoefficients() : HarmonicCoefficients(0) {}
  explicit HarmonicCoefficients(int band_limit);

  int band_limit() const { return band_limit_; }
  std::size_t size() const { return values_.size(); }

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l) * l + l + m; }

  /// Bounds-checked access; throws std::domain_error if |m| > l or l > N.
  double at(int l, int m) const;
  double& at(int l, int m);

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  friend bool operator==(const HarmonicCoefficients&, const HarmonicCoefficients&) = default;

 private:
  int band_limit_;
  std::vector<double> values_;
};

/// Associated Legendre polynomial P_l^m(x) with Condon-Shortley phase,
/// 0 <= m <= l, |x| <= 1, by stable three-term recurrence. Unnormalised:
/// magnitudes grow quickly with l (factorial scale for m close to l).
double assoc_legendre(int l, int m, double x);

/// Real orthonormal spherical harmonic Y_{l,m}(theta, phi): zonal for m = 0,
/// sqrt(2)-scaled cosine combination for m > 0 and sine combination for
/// m < 0, Condon-Shortley phase included.
double eval_real_sh(int l, int m, double theta, double phi);

/// Quadrature grid for band limit N: N+1 Gauss-Legendre colatitude nodes,
/// 2N+2 uniform azimuth nodes.
SphericalGrid build_grid(int band_limit);

/// Forward transform: c_{l,m} = sum over nodes of w * sample * Y_{l,m}.
/// `samples` holds one value per grid node, row-major over thetas.
/// Exact (to rounding) for samples of functions band-limited to N.
HarmonicCoefficients forward_sht(std::span<const double> samples, const SphericalGrid& grid,
                                 int band_limit);

/// Synthesis at arbitrary points: sum_{l<=N, |m|<=l} c_{l,m} Y_{l,m}.
std::vector<double> inverse_sht(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points);

/// Fractional Laplacian in the spectral domain:
/// c_{l,m} -> (l(l+1))^(nu/2) c_{l,m}. Identity at nu = 0; annihilates the
/// degree-0 band for nu > 0.
HarmonicCoefficients fractional_laplacian_apply(const HarmonicCoefficients& coeffs, double nu);

/// Dense synthesis matrix: one row per point, (N+1)^2 columns in flat
/// coefficient order. Row-times-coefficients reproduces inverse_sht exactly
/// (same summation order); build once when evaluating many frames at fixed
/// points.
std::vector<double> sh_basis_matrix(int band_limit, std::span<const SphericalPoint> points);

namespace detail {

/// Gauss-Legendre nodes (ascending in x) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Fully normalised associated Legendre values Pbar_l^m(x) (orthonormal over
/// the sphere, Condon-Shortley phase) for all 0 <= m <= l <= N, written to
/// `out` at triangular index l*(l+1)/2 + m.
void normalized_legendre_table(int band_limit, double x, std::span<double> out);

inline std::size_t legendre_table_size(int band_limit) {
  return static_cast<std::size_t>(band_limit + 1) * (band_limit + 2) / 2;
}
inline std::size_t legendre_index(int l, int m) {
  return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
}

/// Writes the (N+1)^2 basis values at one point into `row` (flat order).
void sh_basis_row(int band_limit, SphericalPoint p, std::span<double> row,
                  std::span<double> legendre_scratch);

/// Degree of flat coefficient index (inverse of l*(l+1)+m).
int degree_of_index(std::size_t idx);

}  // namespace detail
}  // namespace shapediff
