// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shapediff/mesh.hpp"

namespace shapediff {

/// Regular icosahedron with unit-length vertices (12 vertices, 20 faces).
TriangleMesh make_icosahedron();

/// Lat-long unit sphere: `n_rings` interior colatitude rings of `n_phi`
/// vertices plus two poles.
TriangleMesh make_uv_sphere(int n_rings, int n_phi);

/// Torus around the z-axis: ring radius R, tube radius r, n_u x n_v quads
/// split into triangles. Samples include the inner and outer equators.
TriangleMesh make_torus(double ring_radius, double tube_radius, int n_u, int n_v);

}  // namespace shapediff
