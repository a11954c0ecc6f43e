// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "shapediff/errors.hpp"

namespace shapediff {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Leading integer of an OBJ face token ("7", "7/1", "7//3", "7/1/3").
int parse_obj_face_index(const std::string& token, const std::string& path, int line) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(token, &pos);
  } catch (const std::exception&) {
    throw mesh_parse_error(path, line, "malformed face index '" + token + "'");
  }
  if (pos != token.size() && token[pos] != '/') {
    throw mesh_parse_error(path, line, "malformed face index '" + token + "'");
  }
  if (value < 1) {
    throw mesh_parse_error(path, line, "face index " + std::to_string(value) +
                                           " is invalid (OBJ indices are 1-based)");
  }
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open mesh file: " + path.string());
  TriangleMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x >> v.y >> v.z)) {
        throw mesh_parse_error(path.string(), lineno, "vertex needs three coordinates");
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string t;
      while (ss >> t) tokens.push_back(t);
      if (tokens.size() != 3) {
        throw mesh_parse_error(path.string(), lineno,
                               "expected a triangular face, got " + std::to_string(tokens.size()) +
                                   " vertices");
      }
      std::array<int, 3> f{};
      for (int i = 0; i < 3; ++i) f[static_cast<std::size_t>(i)] = parse_obj_face_index(tokens[static_cast<std::size_t>(i)], path.string(), lineno) - 1;
      for (int i = 0; i < 3; ++i) {
        if (f[static_cast<std::size_t>(i)] >= static_cast<int>(mesh.vertices.size())) {
          throw mesh_parse_error(path.string(), lineno,
                                 "face index " + std::to_string(f[static_cast<std::size_t>(i)] + 1) + " out of range");
        }
      }
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
        throw mesh_parse_error(path.string(), lineno, "degenerate face (repeated vertex index)");
      }
      mesh.faces.push_back(f);
    }
    // other records (vn, vt, o, g, s, usemtl, ...) are ignored
  }
  return mesh;
}

TriangleMesh load_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open mesh file: " + path.string());
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) {
      throw mesh_parse_error(path.string(), lineno, "unexpected end of file");
    }
    ++lineno;
    strip_cr(line);
    return line;
  };

  if (next_line() != "ply") throw mesh_parse_error(path.string(), lineno, "missing 'ply' magic");
  std::size_t n_vertices = 0, n_faces = 0;
  bool ascii = false;
  while (true) {
    std::istringstream ss(next_line());
    std::string tag;
    ss >> tag;
    if (tag == "end_header") break;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = fmt == "ascii";
    } else if (tag == "element") {
      std::string what;
      std::size_t count = 0;
      ss >> what >> count;
      if (what == "vertex") n_vertices = count;
      if (what == "face") n_faces = count;
    }
    // property lines: the first three vertex properties are taken as x, y, z
  }
  if (!ascii) throw mesh_parse_error(path.string(), lineno, "only ascii PLY is supported");

  TriangleMesh mesh;
  mesh.vertices.reserve(n_vertices);
  for (std::size_t i = 0; i < n_vertices; ++i) {
    std::istringstream ss(next_line());
    Vec3 v;
    if (!(ss >> v.x >> v.y >> v.z)) {
      throw mesh_parse_error(path.string(), lineno, "vertex needs three coordinates");
    }
    mesh.vertices.push_back(v);
  }
  mesh.faces.reserve(n_faces);
  for (std::size_t i = 0; i < n_faces; ++i) {
    std::istringstream ss(next_line());
    std::size_t count = 0;
    if (!(ss >> count)) throw mesh_parse_error(path.string(), lineno, "malformed face record");
    if (count != 3) {
      throw mesh_parse_error(path.string(), lineno,
                             "expected a triangular face, got " + std::to_string(count) + " vertices");
    }
    std::array<int, 3> f{};
    if (!(ss >> f[0] >> f[1] >> f[2])) {
      throw mesh_parse_error(path.string(), lineno, "malformed face record");
    }
    for (int idx : f) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= mesh.vertices.size()) {
        throw mesh_parse_error(path.string(), lineno, "face index " + std::to_string(idx) + " out of range");
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw mesh_parse_error(path.string(), lineno, "degenerate face (repeated vertex index)");
    }
    mesh.faces.push_back(f);
  }
  return mesh;
}

}  // namespace

void validate_mesh(const TriangleMesh& mesh) {
  for (const Vec3& v : mesh.vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw std::invalid_argument("mesh has non-finite vertex coordinates");
    }
  }
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("face index out of range");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw std::invalid_argument("degenerate face (repeated vertex index)");
    }
  }
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  TriangleMesh mesh = path.extension() == ".ply" ? load_ply(path) : load_obj(path);
  validate_mesh(mesh);
  return mesh;
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write mesh file: " + path.string());
  for (const Vec3& v : mesh.vertices) {
    out << "v " << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z)
        << '\n';
  }
  for (const auto& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  if (!out) throw io_error("write failed: " + path.string());
}

std::vector<SphericalPoint> SphericalParameterization::points() const {
  std::vector<SphericalPoint> pts(theta.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {theta[i], phi[i]};
  return pts;
}

Vec3 SphericalParameterization::reconstruct(std::size_t v) const {
  const double st = std::sin(theta[v]);
  return center + radius[v] * Vec3{st * std::cos(phi[v]), st * std::sin(phi[v]), std::cos(theta[v])};
}

SphericalParameterization radial_project(const TriangleMesh& mesh, std::optional<Vec3> center) {
  if (mesh.vertices.empty()) throw std::invalid_argument("cannot project an empty mesh");
  validate_mesh(mesh);
  Vec3 c;
  if (center) {
    c = *center;
  } else {
    for (const Vec3& v : mesh.vertices) c += v;
    c *= 1.0 / static_cast<double>(mesh.vertices.size());
  }

  SphericalParameterization param;
  param.center = c;
  const std::size_t n = mesh.vertices.size();
  param.theta.resize(n);
  param.phi.resize(n);
  param.radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = mesh.vertices[i] - c;
    const double r = norm(d);
    if (r == 0.0) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " coincides with the projection center");
    }
    param.radius[i] = r;
    param.theta[i] = std::acos(std::clamp(d.z / r, -1.0, 1.0));
    double p = std::atan2(d.y, d.x);
    if (p < 0.0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
    param.phi[i] = p;
  }

  // Count vertex pairs sharing angles within 1e-9 (non-star-shaped inputs).
  constexpr double tol = 1e-9;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (param.theta[a] != param.theta[b]) return param.theta[a] < param.theta[b];
    return param.phi[a] < param.phi[b];
  });
  std::size_t dup = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = order[a];
      const std::size_t j = order[b];
      if (param.theta[j] - param.theta[i] > tol) break;
      double dphi = std::abs(param.phi[i] - param.phi[j]);
      dphi = std::min(dphi, kTwoPi - dphi);
      if (dphi <= tol) ++dup;
    }
  }
  param.duplicate_angle_pairs = dup;
  return param;
}

std::vector<TriangleMesh> transfer_process(const TriangleMesh& mesh,
                                           const SphericalParameterization& param,
                                           const ShapeTrajectory& traj) {
  if (param.theta.size() != mesh.vertices.size()) {
    throw std::invalid_argument("parameterization does not match the mesh vertex count");
  }
  const std::size_t nv = mesh.vertices.size();
  const std::size_t ncoef = traj.source.channels[0].size();
  const std::vector<SphericalPoint> pts = param.points();
  const std::vector<double> basis = sh_basis_matrix(traj.source.band_limit(), pts);
  const int frames = traj.frame_count();

  std::vector<TriangleMesh> out(static_cast<std::size_t>(frames));
  out[0] = mesh;  // frame 0 is byte-identical to the input
#pragma omp parallel for schedule(static)
  for (int k = 1; k < frames; ++k) {
    const ShapeCoefficients& noise = traj.noise_frame(k);
    const auto cx = noise.channels[0].values();
    const auto cy = noise.channels[1].values();
    const auto cz = noise.channels[2].values();
    TriangleMesh& frame = out[static_cast<std::size_t>(k)];
    frame.faces = mesh.faces;
    frame.vertices.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      const double* row = &basis[v * ncoef];
      double dx = 0.0, dy = 0.0, dz = 0.0;
      for (std::size_t i = 0; i < ncoef; ++i) {
        dx += row[i] * cx[i];
        dy += row[i] * cy[i];
        dz += row[i] * cz[i];
      }
      frame.vertices[v] = mesh.vertices[v] + Vec3{dx, dy, dz};
    }
  }
  return out;
}

MeshStats mesh_stats(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw std::invalid_argument("mesh_stats: empty mesh");
  validate_mesh(mesh);
  MeshStats s;
  s.n_vertices = mesh.vertices.size();
  s.n_faces = mesh.faces.size();
  s.bbox_min = s.bbox_max = mesh.vertices[0];
  for (const Vec3& v : mesh.vertices) {
    s.bbox_min.x = std::min(s.bbox_min.x, v.x);
    s.bbox_min.y = std::min(s.bbox_min.y, v.y);
    s.bbox_min.z = std::min(s.bbox_min.z, v.z);
    s.bbox_max.x = std::max(s.bbox_max.x, v.x);
    s.bbox_max.y = std::max(s.bbox_max.y, v.y);
    s.bbox_max.z = std::max(s.bbox_max.z, v.z);
  }
  std::set<std::pair<int, int>> edges;
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[static_cast<std::size_t>(e)];
      const int b = f[static_cast<std::size_t>((e + 1) % 3)];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  double total = 0.0;
  for (const auto& [a, b] : edges) {
    total += norm(mesh.vertices[static_cast<std::size_t>(a)] - mesh.vertices[static_cast<std::size_t>(b)]);
  }
  s.mean_edge_length = edges.empty() ? 0.0 : total / static_cast<double>(edges.size());
  return s;
}

}  // namespace shapediff
