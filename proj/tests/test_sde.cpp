// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "shapediff/errors.hpp"
#include "shapediff/sde.hpp"
#include "stat_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace shapediff;

TEST_CASE("time grid validation") {
  const TimeGrid g = TimeGrid::uniform(0.0, 1.0, 4);
  CHECK(g.dt() == doctest::Approx(0.25));
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(4) == 1.0);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 0.0, 4), std::domain_error);   // dt = 0 rejected
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.5, 4), std::domain_error);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), std::domain_error);
}

TEST_CASE("Brownian increments: variance, mean, determinism") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 0.01, 1);  // dt = 0.01
  const int n = 100000;
  const IncrementMatrix inc = brownian_increments(grid, n, SeedSpec{2024});
  std::vector<double> xs(inc.values.begin(), inc.values.end());
  const double var = statutil::sample_variance(xs);
  const double se_var = statutil::standard_error_of_variance(xs);
  CHECK(std::abs(var - 0.01) <= 3.0 * se_var);
  CHECK(std::abs(statutil::mean(xs)) <= 3.0 * statutil::standard_error_of_mean(xs));

  const IncrementMatrix again = brownian_increments(grid, n, SeedSpec{2024});
  CHECK(again.values == inc.values);
  const IncrementMatrix other = brownian_increments(grid, n, SeedSpec{2025});
  CHECK(other.values != inc.values);
  CHECK_THROWS_AS(brownian_increments(grid, 0, SeedSpec{1}), std::domain_error);
}

TEST_CASE("Euler-Maruyama degenerate cases") {
  SUBCASE("no drift, no diffusion: constant path") {
    ProcessSpec spec{DriftSpec::zero(), DiffusionSpec::constant(0.0), {}};
    const std::vector<double> x0 = {3.0};
    const PathMatrix pm = euler_maruyama(spec, x0, TimeGrid::uniform(0, 1, 16), SeedSpec{5});
    for (int k = 0; k <= 16; ++k) CHECK(pm.at(0, k) == 3.0);
  }

  SUBCASE("constant drift, zero diffusion is exact") {
    ProcessSpec spec{DriftSpec::constant(1.0), DiffusionSpec::constant(0.0), {}};
    const std::vector<double> x0 = {3.0};
    // binary-representable dt: bitwise exact
    for (int K : {1, 2, 4, 8, 64}) {
      const PathMatrix pm = euler_maruyama(spec, x0, TimeGrid::uniform(0, 1, K), SeedSpec{5});
      CHECK(pm.at(0, K) == 4.0);
    }
    // non-representable dt: exact up to accumulated rounding only
    for (int K : {3, 5, 100}) {
      const PathMatrix pm = euler_maruyama(spec, x0, TimeGrid::uniform(0, 1, K), SeedSpec{5});
      CHECK(pm.at(0, K) == doctest::Approx(4.0).epsilon(1e-14));
    }
  }

  SUBCASE("zero diffusion on linear drift reproduces forward Euler exactly") {
    ProcessSpec spec{DriftSpec::linear(-0.5), DiffusionSpec::constant(0.0), {}};
    const int K = 32;
    const TimeGrid grid = TimeGrid::uniform(0, 2, K);
    const PathMatrix pm = euler_maruyama(spec, std::vector<double>{1.5}, grid, SeedSpec{5});
    double x = 1.5;
    for (int k = 0; k < K; ++k) {
      x = x + (-0.5 * x) * grid.dt();
      CHECK(pm.at(0, k + 1) == x);
    }
  }

  SUBCASE("determinism and initial condition") {
    ProcessSpec spec{DriftSpec::ou(1.0, 0.5), DiffusionSpec::constant(0.3), {}};
    const std::vector<double> x0 = {0.0, 1.0, -2.0};
    const TimeGrid grid = TimeGrid::uniform(0, 1, 10);
    const PathMatrix a = euler_maruyama(spec, x0, grid, SeedSpec{77});
    const PathMatrix b = euler_maruyama(spec, x0, grid, SeedSpec{77});
    CHECK(a.values == b.values);
    for (int p = 0; p < 3; ++p) CHECK(a.at(p, 0) == x0[static_cast<std::size_t>(p)]);
  }

  SUBCASE("non-finite state raises an integration error naming the step") {
    // the path starts away from zero and the linear drift overflows quickly
    ProcessSpec spec{DriftSpec::linear(1e200), DiffusionSpec::constant(0.0), {}};
    try {
      euler_maruyama(spec, std::vector<double>{1e200}, TimeGrid::uniform(0, 1, 4), SeedSpec{1});
      FAIL("expected integration_error");
    } catch (const integration_error& e) {
      CHECK(e.step() >= 1);
      CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
    CHECK_THROWS_AS(euler_maruyama(spec, std::vector<double>{std::nan("")}, TimeGrid::uniform(0, 1, 4), SeedSpec{1}),
                    std::domain_error);
  }

  SUBCASE("fractional specs are rejected here") {
    ProcessSpec spec = ProcessSpec::standard_brownian();
    spec.hurst = 0.7;
    CHECK_THROWS_AS(euler_maruyama(spec, std::vector<double>{0.0}, TimeGrid::uniform(0, 1, 4), SeedSpec{1}),
                    std::invalid_argument);
  }
}

TEST_CASE("process spec validation") {
  CHECK_THROWS_AS(DriftSpec::ou(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(DriftSpec::ou(-1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(DiffusionSpec::constant(-0.1), std::domain_error);
  ProcessSpec bad = ProcessSpec::standard_brownian();
  bad.hurst = 1.0;
  CHECK_THROWS_AS(validate_process(bad), std::domain_error);
}

TEST_CASE("Ornstein-Uhlenbeck closed-form moments") {
  const OuMoments at0 = ou_moments(1.0, 0.0, 0.1, 1.0, 0.0);
  CHECK(at0.mean == doctest::Approx(1.0));
  CHECK(at0.variance == doctest::Approx(0.0));

  const OuMoments limit = ou_moments(1.0, 0.0, 0.1, 1.0, 100.0);
  CHECK(limit.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(limit.variance == doctest::Approx(0.005).epsilon(1e-12));

  const OuMoments nodiff = ou_moments(2.0, 0.3, 0.0, 1.0, 0.7);
  CHECK(nodiff.variance == 0.0);

  CHECK_THROWS_AS(ou_moments(0.0, 0.0, 0.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(ou_moments(-2.0, 0.0, 0.1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("OU empirical moments match ou_moments at three times") {
  const double theta = 1.0, mu = 0.0, sigma = 0.1, x0 = 1.0;
  ProcessSpec spec{DriftSpec::ou(theta, mu), DiffusionSpec::constant(sigma), {}};
  const int n = 10000, K = 2048;
  const TimeGrid grid = TimeGrid::uniform(0, 1, K);
  const PathMatrix pm = euler_maruyama(spec, std::vector<double>(n, x0), grid, SeedSpec{31415});
  for (const double t : {0.25, 0.5, 1.0}) {
    const int k = static_cast<int>(t * K);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) xs[static_cast<std::size_t>(p)] = pm.at(p, k);
    const OuMoments want = ou_moments(theta, mu, sigma, x0, t);
    CHECK(std::abs(statutil::mean(xs) - want.mean) <= 3.0 * statutil::standard_error_of_mean(xs));
    CHECK(std::abs(statutil::sample_variance(xs) - want.variance) <=
          3.0 * statutil::standard_error_of_variance(xs));
  }
}

TEST_CASE("strong self-convergence of Euler-Maruyama on the OU spec") {
  // Coupled refinement: coarse increments are sums of the fine ones. The
  // strong error is measured in the pathwise sup norm over the fine grid
  // (piecewise-linear coarse interpolant), the norm the scheme converges in
  // at rate ~ 1/2.
  ProcessSpec ou{DriftSpec::ou(1.0, 0.0), DiffusionSpec::constant(0.1), {}};
  const int KF = 1 << 12;
  const int n_paths = 60;
  const TimeGrid fine = TimeGrid::uniform(0, 1, KF);
  const std::vector<int> Ks = {1 << 6, 1 << 7, 1 << 8, 1 << 9, 1 << 10};
  std::vector<double> err(Ks.size(), 0.0);
  std::vector<double> dW(KF);
  for (int p = 0; p < n_paths; ++p) {
    const std::uint64_t key = rng::derive_stream(SeedSpec{808}, rng::kDomainPathMatrix, static_cast<std::uint64_t>(p));
    const double sd = std::sqrt(fine.dt());
    for (int k = 0; k < KF; ++k) dW[static_cast<std::size_t>(k)] = sd * rng::normal_at(key, static_cast<std::uint64_t>(k));
    const std::vector<double> ref = euler_maruyama_with_increments(ou, 1.0, fine, dW);
    for (std::size_t ki = 0; ki < Ks.size(); ++ki) {
      const int K = Ks[ki];
      const int ratio = KF / K;
      std::vector<double> cW(static_cast<std::size_t>(K), 0.0);
      for (int k = 0; k < K; ++k) {
        for (int r = 0; r < ratio; ++r) cW[static_cast<std::size_t>(k)] += dW[static_cast<std::size_t>(k * ratio + r)];
      }
      const std::vector<double> coarse =
          euler_maruyama_with_increments(ou, 1.0, TimeGrid::uniform(0, 1, K), cW);
      double sup = 0.0;
      for (int kf = 0; kf <= KF; ++kf) {
        const int kc = kf / ratio;
        const int rem = kf % ratio;
        const double interp =
            rem == 0 ? coarse[static_cast<std::size_t>(kc)]
                     : coarse[static_cast<std::size_t>(kc)] +
                           (coarse[static_cast<std::size_t>(kc) + 1] - coarse[static_cast<std::size_t>(kc)]) *
                               (static_cast<double>(rem) / ratio);
        sup = std::max(sup, std::abs(interp - ref[static_cast<std::size_t>(kf)]));
      }
      err[ki] += sup / n_paths;
    }
  }
  std::vector<double> logdt, logerr;
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    logdt.push_back(std::log(1.0 / Ks[i]));
    logerr.push_back(std::log(err[i]));
  }
  const double slope = statutil::regression_slope(logdt, logerr);
  CHECK(slope > 0.35);
  CHECK(slope < 0.65);
}

TEST_CASE("fractional Brownian motion") {
  const TimeGrid grid = TimeGrid::uniform(0, 1, 8);

  SUBCASE("h = 0.5 reduces to Brownian motion: Var[X_1] = 1") {
    const int n = 20000;
    const PathMatrix pm = fbm_paths(0.5, grid, n, SeedSpec{99});
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) xs[static_cast<std::size_t>(p)] = pm.at(p, 8);
    CHECK(std::abs(statutil::sample_variance(xs) - 1.0) <= 3.0 * statutil::standard_error_of_variance(xs));
  }

  SUBCASE("h = 0.7 covariance at (0.5, 1.0) is 0.5") {
    const int n = 20000;
    const PathMatrix pm = fbm_paths(0.7, grid, n, SeedSpec{123});
    std::vector<double> prod(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) prod[static_cast<std::size_t>(p)] = pm.at(p, 4) * pm.at(p, 8);
    // 0.5*(0.5^1.4 + 1 - 0.5^1.4) = 0.5: the two 0.5^{2h} terms cancel
    CHECK(std::abs(statutil::mean(prod) - 0.5) <= 3.0 * statutil::standard_error_of_mean(prod));
  }

  SUBCASE("lag-1 increment correlation sign (h > 1/2 positive, h < 1/2 negative)") {
    const int n = 20000;
    for (const double h : {0.7, 0.3}) {
      const PathMatrix pm = fbm_paths(h, grid, n, SeedSpec{7});
      std::vector<double> prod;
      prod.reserve(static_cast<std::size_t>(n) * 7);
      for (int p = 0; p < n; ++p) {
        for (int k = 0; k + 2 <= 8; ++k) {
          const double d1 = pm.at(p, k + 1) - pm.at(p, k);
          const double d2 = pm.at(p, k + 2) - pm.at(p, k + 1);
          prod.push_back(d1 * d2);
        }
      }
      const double z = statutil::mean(prod) / statutil::standard_error_of_mean(prod);
      if (h > 0.5) CHECK(z > 2.326);
      else CHECK(z < -2.326);
    }
  }

  SUBCASE("zero start, determinism, domain errors") {
    const PathMatrix a = fbm_paths(0.7, grid, 5, SeedSpec{42});
    const PathMatrix b = fbm_paths(0.7, grid, 5, SeedSpec{42});
    CHECK(a.values == b.values);
    for (int p = 0; p < 5; ++p) CHECK(a.at(p, 0) == 0.0);
    CHECK_THROWS_AS(fbm_paths(0.0, grid, 1, SeedSpec{1}), std::domain_error);
    CHECK_THROWS_AS(fbm_paths(1.0, grid, 1, SeedSpec{1}), std::domain_error);
  }

  SUBCASE("circulant embedding eigenvalues stay nonnegative across h") {
    for (const double h : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      const std::vector<double> eig = detail::fgn_circulant_eigenvalues(h, 64);
      double max_eig = 0.0, min_eig = 0.0;
      for (double v : eig) {
        max_eig = std::max(max_eig, v);
        min_eig = std::min(min_eig, v);
      }
      CHECK(min_eig > -1e-9 * max_eig);
      CHECK_FALSE(FbmSampler(h, TimeGrid::uniform(0, 1, 64)).uses_dense_fallback());
    }
  }

  SUBCASE("dense fallback reproduces the fGn law") {
    const FbmSampler dense(0.7, grid, /*force_dense=*/true);
    CHECK(dense.uses_dense_fallback());
    const int n = 20000;
    std::vector<double> prod(static_cast<std::size_t>(n));
    std::vector<double> path(9);
    for (int p = 0; p < n; ++p) {
      dense.sample_path(rng::derive_stream(SeedSpec{5}, rng::kDomainFbm, static_cast<std::uint64_t>(p)), path);
      prod[static_cast<std::size_t>(p)] = path[4] * path[8];
    }
    CHECK(std::abs(statutil::mean(prod) - 0.5) <= 3.0 * statutil::standard_error_of_mean(prod));
  }
}

TEST_CASE("moment bound: E[sup |X|^2] grows at most quadratically in x0") {
  const std::vector<ProcessSpec> specs = {
      {DriftSpec::zero(), DiffusionSpec::constant(0.5), {}},
      {DriftSpec::constant(0.5), DiffusionSpec::constant(0.5), {}},
      {DriftSpec::linear(0.5), DiffusionSpec::constant(0.5), {}},
      {DriftSpec::ou(1.0, 0.0), DiffusionSpec::constant(0.5), {}},
      {DriftSpec::zero(), DiffusionSpec::linear(0.5), {}},
  };
  const TimeGrid grid = TimeGrid::uniform(0, 1, 64);
  const int n = 2000;
  for (const ProcessSpec& spec : specs) {
    std::vector<double> log_x, log_e, ratios;
    for (const double x0 : {1.0, 2.0, 4.0, 8.0}) {
      const PathMatrix pm = euler_maruyama(spec, std::vector<double>(n, x0), grid, SeedSpec{17});
      double esup = 0.0;
      for (int p = 0; p < n; ++p) {
        double sup = 0.0;
        for (int k = 0; k <= 64; ++k) sup = std::max(sup, pm.at(p, k) * pm.at(p, k));
        esup += sup / n;
      }
      CHECK(std::isfinite(esup));
      log_x.push_back(std::log(x0));
      log_e.push_back(std::log(esup));
      ratios.push_back(esup / ((1.0 + x0) * (1.0 + x0)));
    }
    // at most quadratic growth in |x0| ...
    CHECK(statutil::regression_slope(log_x, log_e) < 2.2);
    // ... and the kappa_T-style ratio E[sup |X|^2] / (1 + |x0|)^2 does not
    // blow up between doublings of x0 (quadratic growth alone peaks at 16/9)
    for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] < 2.0 * ratios[i - 1]);
  }
}

#ifdef _OPENMP
TEST_CASE("SDE outputs are bitwise independent of the thread count") {
  const int saved = omp_get_max_threads();
  ProcessSpec spec{DriftSpec::ou(1.0, 0.0), DiffusionSpec::constant(0.2), {}};
  const TimeGrid grid = TimeGrid::uniform(0, 1, 32);
  const std::vector<double> x0(64, 1.0);

  omp_set_num_threads(1);
  const PathMatrix a = euler_maruyama(spec, x0, grid, SeedSpec{3});
  const PathMatrix fa = fbm_paths(0.3, grid, 64, SeedSpec{3});
  omp_set_num_threads(saved > 1 ? saved : 2);
  const PathMatrix b = euler_maruyama(spec, x0, grid, SeedSpec{3});
  const PathMatrix fb = fbm_paths(0.3, grid, 64, SeedSpec{3});
  omp_set_num_threads(saved);

  CHECK(a.values == b.values);
  CHECK(fa.values == fb.values);
}
#endif
