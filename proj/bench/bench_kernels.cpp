// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against the serial reference implementations and
// against themselves pinned to one thread. Not part of the test suite.

#include <chrono>
#include <functional>
#include <cstdio>
#include <random>
#include <vector>

#include "shapediff/reference.hpp"
#include "shapediff/sde.hpp"
#include "shapediff/shape_process.hpp"
#include "shapediff/sh_core.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace shapediff;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.2f ms %12.2f ms %8.2fx\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  const int threads = max_threads();
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %13s %15s %9s\n", "kernel", "serial", "parallel", "speedup");

  // transforms: serial direct reference vs the table-based OpenMP kernel
  {
    const int N = 32;
    const SphericalGrid g = build_grid(N);
    std::vector<SphericalPoint> pts;
    for (int i = 0; i < g.n_theta(); ++i) {
      for (int j = 0; j < g.n_phi(); ++j) pts.push_back({g.thetas[static_cast<std::size_t>(i)], g.phis[static_cast<std::size_t>(j)]});
    }
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    HarmonicCoefficients c(N);
    for (double& v : c.values()) v = dist(gen);
    const std::vector<double> samples = inverse_sht(c, pts);

    const double ref_fwd = time_ms([&] { (void)ref::forward_sht(samples, g, N); }, 1);
    const double fast_fwd = time_ms([&] { (void)forward_sht(samples, g, N); });
    row("forward_sht N=32 (vs ref)", ref_fwd, fast_fwd);

    const double ref_inv = time_ms([&] { (void)ref::inverse_sht(c, pts); }, 1);
    const double fast_inv = time_ms([&] { (void)inverse_sht(c, pts); });
    row("inverse_sht N=32 (vs ref)", ref_inv, fast_inv);

    set_threads(1);
    const double fwd_1 = time_ms([&] { (void)forward_sht(samples, g, N); });
    const double inv_1 = time_ms([&] { (void)inverse_sht(c, pts); });
    set_threads(threads);
    row("forward_sht N=32 (1 thr)", fwd_1, fast_fwd);
    row("inverse_sht N=32 (1 thr)", inv_1, fast_inv);
  }

  // path simulation: same kernel pinned to one thread vs all threads
  {
    ProcessSpec ou{DriftSpec::ou(1.0, 0.0), DiffusionSpec::constant(0.1), {}};
    const std::vector<double> x0(20000, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0, 1, 256);
    set_threads(1);
    const double em_1 = time_ms([&] { (void)euler_maruyama(ou, x0, grid, SeedSpec{1}); });
    set_threads(threads);
    const double em_n = time_ms([&] { (void)euler_maruyama(ou, x0, grid, SeedSpec{1}); });
    row("euler_maruyama 20k paths", em_1, em_n);

    set_threads(1);
    const double fbm_1 = time_ms([&] { (void)fbm_paths(0.7, grid, 5000, SeedSpec{1}); });
    set_threads(threads);
    const double fbm_n = time_ms([&] { (void)fbm_paths(0.7, grid, 5000, SeedSpec{1}); });
    row("fbm_paths 5k paths K=256", fbm_1, fbm_n);
  }

  // full shape process
  {
    const ShapeCoefficients u0 = decompose_sphere(25);
    const auto spec = make_spectrum(SpectrumKind::bessel, 25, 1.0);
    const TimeGrid grid = TimeGrid::uniform(0, 1, 128);
    set_threads(1);
    const double qw_1 = time_ms([&] { (void)q_wiener_shape_process(u0, spec, grid, SeedSpec{1}); });
    set_threads(threads);
    const double qw_n = time_ms([&] { (void)q_wiener_shape_process(u0, spec, grid, SeedSpec{1}); });
    row("q_wiener N=25 K=128", qw_1, qw_n);
  }
  return 0;
}
