// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/sh_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shapediff {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kFourPi = 4.0 * kPi;

void check_order(int l, int m) {
  if (l < 0 || std::abs(m) > l) {
    throw std::domain_error("spherical harmonic order out of range: l=" + std::to_string(l) +
                            " m=" + std::to_string(m));
  }
}

}  // namespace

namespace detail {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n, seeded with the Chebyshev-like estimate.
  // Only the lower half is computed; the upper half is mirrored so the rule
  // is exactly symmetric.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // The seed above starts near +1; store ascending in x.
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = w;
    nodes[i] = -x;
    weights[i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void normalized_legendre_table(int band_limit, double x, std::span<double> out) {
  const int N = band_limit;
  const double sx = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));  // sin(theta)
  // Pbar_m^m, built up incrementally; Condon-Shortley sign carried along.
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int m = 0; m <= N; ++m) {
    out[legendre_index(m, m)] = pmm;
    if (m == N) break;
    const double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
    if (m + 1 <= N) out[legendre_index(m + 1, m)] = pmmp1;
    double pa = pmm;
    double pb = pmmp1;
    double oldfact = std::sqrt(2.0 * m + 3.0);
    for (int l = m + 2; l <= N; ++l) {
      const double fact = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double pl = (x * pb - pa / oldfact) * fact;
      out[legendre_index(l, m)] = pl;
      oldfact = fact;
      pa = pb;
      pb = pl;
    }
    pmm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sx;
  }
}

void sh_basis_row(int band_limit, SphericalPoint p, std::span<double> row,
                  std::span<double> legendre_scratch) {
  const int N = band_limit;
  normalized_legendre_table(N, std::cos(p.theta), legendre_scratch);
  const double sqrt2 = std::sqrt(2.0);
  // cos(m phi), sin(m phi) by the angle-addition recurrence.
  const double c1 = std::cos(p.phi);
  const double s1 = std::sin(p.phi);
  double cm = 1.0;
  double sm = 0.0;  // m = 0
  for (int m = 0; m <= N; ++m) {
    for (int l = m; l <= N; ++l) {
      const double plm = legendre_scratch[legendre_index(l, m)];
      if (m == 0) {
        row[HarmonicCoefficients::index(l, 0)] = plm;
      } else {
        row[HarmonicCoefficients::index(l, m)] = sqrt2 * plm * cm;
        row[HarmonicCoefficients::index(l, -m)] = sqrt2 * plm * sm;
      }
    }
    const double cn = cm * c1 - sm * s1;
    const double sn = sm * c1 + cm * s1;
    cm = cn;
    sm = sn;
  }
}

int degree_of_index(std::size_t idx) {
  int l = static_cast<int>(std::sqrt(static_cast<double>(idx)));
  while (static_cast<std::size_t>(l) * l > idx) --l;
  while (static_cast<std::size_t>(l + 1) * (l + 1) <= idx) ++l;
  return l;
}

}  // namespace detail

HarmonicCoefficients::HarmonicCoefficients(int band_limit) : band_limit_(band_limit) {
  if (band_limit < 0) throw std::domain_error("band limit must be >= 0");
  values_.assign(static_cast<std::size_t>(band_limit + 1) * (band_limit + 1), 0.0);
}

double HarmonicCoefficients::at(int l, int m) const {
  check_order(l, m);
  if (l > band_limit_) throw std::domain_error("degree exceeds band limit");
  return values_[index(l, m)];
}

double& HarmonicCoefficients::at(int l, int m) {
  check_order(l, m);
  if (l > band_limit_) throw std::domain_error("degree exceeds band limit");
  return values_[index(l, m)];
}

double assoc_legendre(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) {
    throw std::domain_error("assoc_legendre requires 0 <= m <= l");
  }
  if (!(std::abs(x) <= 1.0)) {
    throw std::domain_error("assoc_legendre requires |x| <= 1");
  }
  // P_m^m = (-1)^m (2m-1)!! (1-x^2)^(m/2), then upward in degree.
  double pmm = 1.0;
  if (m > 0) {
    const double sx = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= -fact * sx;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

double eval_real_sh(int l, int m, double theta, double phi) {
  check_order(l, m);
  const int am = std::abs(m);
  const double x = std::cos(theta);
  // Normalised Pbar_l^{|m|}(x) by the same recurrence as the table builder.
  const double sx = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int k = 0; k < am; ++k) {
    pmm *= -std::sqrt((2.0 * k + 3.0) / (2.0 * k + 2.0)) * sx;
  }
  double plm = pmm;
  if (l > am) {
    double pa = pmm;
    double pb = x * std::sqrt(2.0 * am + 3.0) * pmm;
    plm = pb;
    double oldfact = std::sqrt(2.0 * am + 3.0);
    for (int ll = am + 2; ll <= l; ++ll) {
      const double fact =
          std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(am) * am));
      plm = (x * pb - pa / oldfact) * fact;
      oldfact = fact;
      pa = pb;
      pb = plm;
    }
  }
  if (m == 0) return plm;
  const double sqrt2 = std::sqrt(2.0);
  if (m > 0) return sqrt2 * plm * std::cos(am * phi);
  return sqrt2 * plm * std::sin(am * phi);
}

SphericalGrid build_grid(int band_limit) {
  if (band_limit < 0) throw std::domain_error("band limit must be >= 0");
  const int n_theta = band_limit + 1;
  const int n_phi = 2 * band_limit + 2;

  std::vector<double> x, w;
  detail::gauss_legendre(n_theta, x, w);

  SphericalGrid grid;
  grid.thetas.resize(n_theta);
  grid.phis.resize(n_phi);
  grid.weights.resize(static_cast<std::size_t>(n_theta) * n_phi);
  // x ascending => theta = acos(x) descending; reverse for increasing thetas.
  for (int i = 0; i < n_theta; ++i) grid.thetas[i] = std::acos(x[n_theta - 1 - i]);
  const double wphi = 2.0 * kPi / n_phi;
  for (int j = 0; j < n_phi; ++j) grid.phis[j] = wphi * j;
  for (int i = 0; i < n_theta; ++i) {
    const double wi = w[n_theta - 1 - i] * wphi;
    for (int j = 0; j < n_phi; ++j) grid.weights[static_cast<std::size_t>(i) * n_phi + j] = wi;
  }
  return grid;
}

// Separated (semi-naive) forward transform: azimuth sums first, then the
// Legendre contraction. Each output coefficient is accumulated in a fixed
// serial order, so results are bitwise independent of the thread count.
HarmonicCoefficients forward_sht(std::span<const double> samples, const SphericalGrid& grid,
                                 int band_limit) {
  if (band_limit < 0) throw std::domain_error("band limit must be >= 0");
  if (samples.size() != grid.node_count()) {
    throw std::invalid_argument("forward_sht: sample count " + std::to_string(samples.size()) +
                                " does not match grid node count " +
                                std::to_string(grid.node_count()));
  }
  const int N = band_limit;
  const int nt = grid.n_theta();
  const int np = grid.n_phi();

  // Azimuth sums A_cos[i][m] = sum_j w_ij f_ij cos(m phi_j) (same with sin);
  // the full node weight is folded in here.
  std::vector<double> a_cos(static_cast<std::size_t>(nt) * (N + 1), 0.0);
  std::vector<double> a_sin(static_cast<std::size_t>(nt) * (N + 1), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nt; ++i) {
    double* rc = &a_cos[static_cast<std::size_t>(i) * (N + 1)];
    double* rs = &a_sin[static_cast<std::size_t>(i) * (N + 1)];
    for (int j = 0; j < np; ++j) {
      const double wf = grid.weights[static_cast<std::size_t>(i) * np + j] *
                        samples[static_cast<std::size_t>(i) * np + j];
      const double c1 = std::cos(grid.phis[j]);
      const double s1 = std::sin(grid.phis[j]);
      double cm = 1.0;
      double sm = 0.0;
      for (int m = 0; m <= N; ++m) {
        rc[m] += wf * cm;
        rs[m] += wf * sm;
        const double cn = cm * c1 - sm * s1;
        const double sn = sm * c1 + cm * s1;
        cm = cn;
        sm = sn;
      }
    }
  }

  // Normalised Legendre values at every colatitude node.
  const std::size_t tsize = detail::legendre_table_size(N);
  std::vector<double> ptab(static_cast<std::size_t>(nt) * tsize);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nt; ++i) {
    detail::normalized_legendre_table(N, std::cos(grid.thetas[i]),
                                      std::span<double>(&ptab[static_cast<std::size_t>(i) * tsize], tsize));
  }

  HarmonicCoefficients out(N);
  std::span<double> values = out.values();
  const double sqrt2 = std::sqrt(2.0);
  const int ncoef = (N + 1) * (N + 1);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < ncoef; ++idx) {
    const int l = detail::degree_of_index(static_cast<std::size_t>(idx));
    const int m = idx - l * l - l;
    const int am = std::abs(m);
    const std::size_t t = detail::legendre_index(l, am);
    double acc = 0.0;
    if (m == 0) {
      for (int i = 0; i < nt; ++i) acc += ptab[static_cast<std::size_t>(i) * tsize + t] * a_cos[static_cast<std::size_t>(i) * (N + 1)];
    } else if (m > 0) {
      for (int i = 0; i < nt; ++i)
        acc += ptab[static_cast<std::size_t>(i) * tsize + t] * a_cos[static_cast<std::size_t>(i) * (N + 1) + am];
      acc *= sqrt2;
    } else {
      for (int i = 0; i < nt; ++i)
        acc += ptab[static_cast<std::size_t>(i) * tsize + t] * a_sin[static_cast<std::size_t>(i) * (N + 1) + am];
      acc *= sqrt2;
    }
    values[static_cast<std::size_t>(idx)] = acc;
  }
  return out;
}

std::vector<double> inverse_sht(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points) {
  const int N = coeffs.band_limit();
  const std::size_t ncoef = coeffs.size();
  std::vector<double> out(points.size(), 0.0);
  const std::span<const double> c = coeffs.values();
  const std::size_t tsize = detail::legendre_table_size(N);
#pragma omp parallel
  {
    std::vector<double> row(ncoef);
    std::vector<double> scratch(tsize);
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(points.size()); ++p) {
      detail::sh_basis_row(N, points[p], row, scratch);
      double acc = 0.0;
      for (std::size_t k = 0; k < ncoef; ++k) acc += row[k] * c[k];
      out[static_cast<std::size_t>(p)] = acc;
    }
  }
  return out;
}

HarmonicCoefficients fractional_laplacian_apply(const HarmonicCoefficients& coeffs, double nu) {
  if (nu < 0.0) throw std::domain_error("fractional_laplacian_apply requires nu >= 0");
  const int N = coeffs.band_limit();
  HarmonicCoefficients out(N);
  for (int l = 0; l <= N; ++l) {
    const double scale = std::pow(static_cast<double>(l) * (l + 1), nu / 2.0);
    for (int m = -l; m <= l; ++m) {
      out.values()[HarmonicCoefficients::index(l, m)] =
          scale * coeffs.values()[HarmonicCoefficients::index(l, m)];
    }
  }
  return out;
}

std::vector<double> sh_basis_matrix(int band_limit, std::span<const SphericalPoint> points) {
  if (band_limit < 0) throw std::domain_error("band limit must be >= 0");
  const std::size_t ncoef = static_cast<std::size_t>(band_limit + 1) * (band_limit + 1);
  std::vector<double> mat(points.size() * ncoef);
  const std::size_t tsize = detail::legendre_table_size(band_limit);
#pragma omp parallel
  {
    std::vector<double> scratch(tsize);
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(points.size()); ++p) {
      detail::sh_basis_row(band_limit, points[p],
                           std::span<double>(&mat[static_cast<std::size_t>(p) * ncoef], ncoef), scratch);
    }
  }
  return mat;
}

}  // namespace shapediff
