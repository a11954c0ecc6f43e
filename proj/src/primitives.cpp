// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace shapediff {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TriangleMesh make_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  const double a = s;
  const double b = phi * s;
  TriangleMesh m;
  m.vertices = {
      {-a, b, 0},  {a, b, 0},  {-a, -b, 0}, {a, -b, 0}, {0, -a, b},  {0, a, b},
      {0, -a, -b}, {0, a, -b}, {b, 0, -a},  {b, 0, a},  {-b, 0, -a}, {-b, 0, a},
  };
  m.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
  };
  return m;
}

TriangleMesh make_uv_sphere(int n_rings, int n_phi) {
  if (n_rings < 1 || n_phi < 3) throw std::invalid_argument("uv sphere needs n_rings >= 1 and n_phi >= 3");
  TriangleMesh m;
  m.vertices.push_back({0, 0, 1});  // north pole
  for (int i = 1; i <= n_rings; ++i) {
    const double theta = kPi * i / (n_rings + 1);
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * j / n_phi;
      m.vertices.push_back({st * std::cos(phi), st * std::sin(phi), ct});
    }
  }
  m.vertices.push_back({0, 0, -1});  // south pole
  const int south = static_cast<int>(m.vertices.size()) - 1;
  auto ring = [&](int i, int j) { return 1 + i * n_phi + (j % n_phi); };

  for (int j = 0; j < n_phi; ++j) m.faces.push_back({0, ring(0, j), ring(0, j + 1)});
  for (int i = 0; i + 1 < n_rings; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const int a = ring(i, j), b = ring(i, j + 1);
      const int c = ring(i + 1, j), d = ring(i + 1, j + 1);
      m.faces.push_back({a, c, d});
      m.faces.push_back({a, d, b});
    }
  }
  for (int j = 0; j < n_phi; ++j) m.faces.push_back({south, ring(n_rings - 1, j + 1), ring(n_rings - 1, j)});
  return m;
}

TriangleMesh make_torus(double ring_radius, double tube_radius, int n_u, int n_v) {
  if (!(ring_radius > tube_radius && tube_radius > 0.0)) {
    throw std::invalid_argument("torus needs ring_radius > tube_radius > 0");
  }
  if (n_u < 3 || n_v < 3) throw std::invalid_argument("torus needs n_u >= 3 and n_v >= 3");
  TriangleMesh m;
  for (int i = 0; i < n_u; ++i) {
    const double u = 2.0 * kPi * i / n_u;
    for (int j = 0; j < n_v; ++j) {
      const double v = 2.0 * kPi * j / n_v;
      const double rho = ring_radius + tube_radius * std::cos(v);
      m.vertices.push_back({rho * std::cos(u), rho * std::sin(u), tube_radius * std::sin(v)});
    }
  }
  auto at = [&](int i, int j) { return (i % n_u) * n_v + (j % n_v); };
  for (int i = 0; i < n_u; ++i) {
    for (int j = 0; j < n_v; ++j) {
      const int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

}  // namespace shapediff
