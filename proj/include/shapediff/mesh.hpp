// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapediff/shape_process.hpp"
#include "shapediff/vec3.hpp"

namespace shapediff {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based vertex indices
};

/// Malformed mesh file; the message carries the path and 1-based line number.
class mesh_parse_error : public std::runtime_error {
 public:
  mesh_parse_error(const std::string& path, int line, const std::string& msg)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Checks index ranges, degenerate faces and finite coordinates.
void validate_mesh(const TriangleMesh& mesh);

/// Reads a triangulated ascii mesh: OBJ (v/f records, 1-based indices) or
/// ascii PLY (chosen by extension, .ply vs anything else).
TriangleMesh load_mesh(const std::filesystem::path& path);

/// Writes OBJ with 17 significant digits per coordinate; face order and
/// vertex order are preserved, so save-then-load is lossless.
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Per-vertex angles and radii of the radial projection about `center`.
struct SphericalParameterization {
  Vec3 center;
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> radius;
  /// Vertex pairs whose angles coincide within 1e-9 (expected for
  /// non-star-shaped inputs such as a torus; a warning, not an error).
  std::size_t duplicate_angle_pairs = 0;

  std::vector<SphericalPoint> points() const;
  Vec3 reconstruct(std::size_t v) const;
};

/// Radial projection of every vertex: theta = arccos((v-c)_z / r),
/// phi = atan2((v-c)_y, (v-c)_x) mapped to [0, 2pi). Default center is the
/// vertex centroid. Throws if a vertex coincides with the center.
SphericalParameterization radial_project(const TriangleMesh& mesh,
                                         std::optional<Vec3> center = std::nullopt);

/// Transfers the trajectory's noise onto the mesh: frame k moves vertex v by
/// the noise part of frame k evaluated at (theta_v, phi_v), per coordinate.
/// Frame 0 is a plain copy of the input; connectivity never changes.
std::vector<TriangleMesh> transfer_process(const TriangleMesh& mesh,
                                           const SphericalParameterization& param,
                                           const ShapeTrajectory& traj);

struct MeshStats {
  std::size_t n_vertices = 0;
  std::size_t n_faces = 0;
  Vec3 bbox_min;
  Vec3 bbox_max;
  double mean_edge_length = 0.0;
};

/// Summary used by the CLI `info` command; throws on an empty mesh.
MeshStats mesh_stats(const TriangleMesh& mesh);

}  // namespace shapediff
