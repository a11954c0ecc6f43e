// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shapediff/errors.hpp"
#include "shapediff/primitives.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shapediff::cli {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig::InputKind parse_input(const json& j, std::filesystem::path& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "sphere") return RunConfig::InputKind::sphere;
    throw config_error("unknown input preset: '" + s + "' (expected \"sphere\")");
  }
  if (j.is_object()) {
    if (j.contains("mesh")) {
      path = j["mesh"].get<std::string>();
      return RunConfig::InputKind::mesh;
    }
    if (j.contains("coefficients")) {
      path = j["coefficients"].get<std::string>();
      return RunConfig::InputKind::coefficients;
    }
  }
  throw config_error("input must be \"sphere\", {\"mesh\": path} or {\"coefficients\": path}");
}

json input_to_json(const RunConfig& cfg) {
  switch (cfg.input_kind) {
    case RunConfig::InputKind::sphere: return "sphere";
    case RunConfig::InputKind::mesh: return json{{"mesh", cfg.input_path.string()}};
    case RunConfig::InputKind::coefficients: return json{{"coefficients", cfg.input_path.string()}};
  }
  return {};
}

std::string process_kind_name(RunConfig::ProcessKind kind) {
  switch (kind) {
    case RunConfig::ProcessKind::q_wiener: return "q_wiener";
    case RunConfig::ProcessKind::ito: return "ito";
    case RunConfig::ProcessKind::fractional: return "fractional";
  }
  return "unknown";
}

SphericalPoint angles_of_unit_vector(const Vec3& v) {
  SphericalPoint p;
  p.theta = std::acos(std::clamp(v.z, -1.0, 1.0));
  double phi = std::atan2(v.y, v.x);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  p.phi = phi;
  return p;
}

void write_stats_csv(const ShapeTrajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write: " + path.string());
  out << "frame,t,l2_norm,h2_norm,max_coeff\n";
  for (int k = 0; k < traj.frame_count(); ++k) {
    const ShapeCoefficients f = traj.frame(k);
    double l2_sq = 0.0, h2_sq = 0.0, max_c = 0.0;
    for (const HarmonicCoefficients& ch : f.channels) {
      const double l2 = sobolev_norm(ch, 0.0);
      const double h2 = sobolev_norm(ch, 2.0);
      l2_sq += l2 * l2;
      h2_sq += h2 * h2;
      for (double c : ch.values()) max_c = std::max(max_c, std::abs(c));
    }
    out << k << ',' << fmt17(traj.times.time(k)) << ',' << fmt17(std::sqrt(l2_sq)) << ','
        << fmt17(std::sqrt(h2_sq)) << ',' << fmt17(max_c) << '\n';
  }
  if (!out) throw io_error("write failed: " + path.string());
}

std::filesystem::path frame_path(const std::filesystem::path& dir, int k, const char* ext) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%04d.%s", k, ext);
  return dir / name;
}

void apply_thread_cap_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("SHAPE_DIFFUSION_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) {
      omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_num_procs())));
    } else {
      std::cerr << "warning: ignoring invalid SHAPE_DIFFUSION_THREADS='" << env << "'\n";
    }
  }
#endif
}

// Radial resampling of a mesh onto grid nodes: nearest vertex by angular
// distance supplies the radius, the node direction supplies the angles.
ShapeCoefficients decompose_mesh(const TriangleMesh& mesh, int band_limit,
                                 std::optional<Vec3> center) {
  const SphericalParameterization param = radial_project(mesh, center);
  const SphericalGrid grid = build_grid(band_limit);
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  const std::size_t nv = mesh.vertices.size();

  std::vector<Vec3> dirs(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const double st = std::sin(param.theta[v]);
    dirs[v] = {st * std::cos(param.phi[v]), st * std::sin(param.phi[v]), std::cos(param.theta[v])};
  }

  std::vector<double> fx(grid.node_count()), fy(grid.node_count()), fz(grid.node_count());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nt; ++i) {
    const double st = std::sin(grid.thetas[static_cast<std::size_t>(i)]);
    const double ct = std::cos(grid.thetas[static_cast<std::size_t>(i)]);
    for (int j = 0; j < np; ++j) {
      const Vec3 dir{st * std::cos(grid.phis[static_cast<std::size_t>(j)]),
                     st * std::sin(grid.phis[static_cast<std::size_t>(j)]), ct};
      std::size_t best = 0;
      double best_dot = -2.0;
      for (std::size_t v = 0; v < nv; ++v) {
        const double d = dot(dir, dirs[v]);
        if (d > best_dot) {
          best_dot = d;
          best = v;
        }
      }
      const Vec3 pos = param.center + param.radius[best] * dir;
      const std::size_t node = static_cast<std::size_t>(i) * np + j;
      fx[node] = pos.x;
      fy[node] = pos.y;
      fz[node] = pos.z;
    }
  }
  ShapeCoefficients out(band_limit);
  out.channels[0] = forward_sht(fx, grid, band_limit);
  out.channels[1] = forward_sht(fy, grid, band_limit);
  out.channels[2] = forward_sht(fz, grid, band_limit);
  return out;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  const json& j = (doc.contains("config") && doc.contains("tool")) ? doc["config"] : doc;
  if (!j.is_object()) throw config_error("run config must be a JSON object");
  if (!j.contains("input")) throw config_error("run config needs an 'input'");

  RunConfig cfg;
  try {
    cfg.input_kind = parse_input(j["input"], cfg.input_path);

    // Spectrum first: the default band limit depends on its kind.
    json spec_json = j.value("spectrum", json{{"kind", "bessel"}, {"nu", 1.0}});
    const std::string kind_name = spec_json.value("kind", "bessel");
    int default_band = kind_name == "identity" ? 6 : 25;
    if (kind_name == "custom" && spec_json.contains("lambdas")) {
      default_band = static_cast<int>(spec_json["lambdas"].size()) - 1;
    }
    cfg.band_limit = j.value("band_limit", default_band);
    if (cfg.band_limit < 0) throw config_error("band_limit must be >= 0");
    cfg.spectrum = spectrum_from_json(spec_json, cfg.band_limit);
    if (cfg.spectrum.band_limit != cfg.band_limit) {
      throw config_error("spectrum band_limit disagrees with the run band_limit");
    }

    if (j.contains("process")) {
      const json& p = j["process"];
      const std::string kind = p.value("kind", "q_wiener");
      if (kind == "q_wiener") {
        cfg.process_kind = RunConfig::ProcessKind::q_wiener;
        cfg.process = ProcessSpec::standard_brownian();
      } else if (kind == "ito") {
        cfg.process_kind = RunConfig::ProcessKind::ito;
        cfg.process = process_from_json(p);
        if (cfg.process.hurst) {
          throw config_error("ito runs take Brownian noise; use the fractional kind for a hurst index");
        }
      } else if (kind == "fractional") {
        cfg.process_kind = RunConfig::ProcessKind::fractional;
        cfg.hurst = p.value("hurst", 0.5);
        if (!(cfg.hurst > 0.0 && cfg.hurst < 1.0)) {
          throw config_error("hurst index must lie strictly in (0, 1)");
        }
        cfg.process = ProcessSpec::standard_brownian();
        cfg.process.hurst = cfg.hurst;
      } else {
        throw config_error("unknown process kind: " + kind);
      }
    } else {
      cfg.process = ProcessSpec::standard_brownian();
    }

    if (j.contains("time")) {
      const json& t = j["time"];
      cfg.time = TimeGrid::uniform(t.value("t0", 0.0), t.value("T", 1.0), t.value("steps", 100));
    }
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
    cfg.scale = scale_mode_from_string(j.value("scale", "sqrt"));
    if (j.contains("output")) {
      const json& o = j["output"];
      cfg.out_dir = o.value("dir", std::string("out"));
      const std::string fmt = o.value("format", "obj");
      if (fmt == "obj") {
        cfg.format = RunConfig::Format::obj;
      } else if (fmt == "json") {
        cfg.format = RunConfig::Format::json_frames;
      } else {
        throw config_error("unknown output format: " + fmt + " (expected obj|json)");
      }
      if (o.contains("render")) {
        cfg.render_n_theta = o["render"].value("n_theta", cfg.render_n_theta);
        cfg.render_n_phi = o["render"].value("n_phi", cfg.render_n_phi);
        if (cfg.render_n_theta < 1 || cfg.render_n_phi < 3) {
          throw config_error("render grid needs n_theta >= 1 and n_phi >= 3");
        }
      }
    }
    if (j.contains("center") && !j["center"].is_null()) {
      const auto c = j["center"].get<std::vector<double>>();
      if (c.size() != 3) throw config_error("center must be [x, y, z]");
      cfg.center = Vec3{c[0], c[1], c[2]};
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }

  // Echo of the fully resolved configuration; a manifest carrying this block
  // reproduces the run exactly.
  cfg.resolved = json{
      {"input", input_to_json(cfg)},
      {"band_limit", cfg.band_limit},
      {"spectrum", spectrum_to_json(cfg.spectrum)},
      {"process",
       [&] {
         json p = process_to_json(cfg.process);
         p["kind"] = process_kind_name(cfg.process_kind);
         if (cfg.process_kind == RunConfig::ProcessKind::fractional) p["hurst"] = cfg.hurst;
         return p;
       }()},
      {"time", {{"t0", cfg.time.t0}, {"T", cfg.time.t_end}, {"steps", cfg.time.steps}}},
      {"seed", cfg.seed},
      {"scale", to_string(cfg.scale)},
      {"output",
       {{"dir", cfg.out_dir.string()},
        {"format", cfg.format == RunConfig::Format::obj ? "obj" : "json"},
        {"render", {{"n_theta", cfg.render_n_theta}, {"n_phi", cfg.render_n_phi}}}}},
  };
  if (cfg.center) cfg.resolved["center"] = {cfg.center->x, cfg.center->y, cfg.center->z};
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(load_json_file(path));
}

SimulateResult run_simulate(const RunConfig& cfg) {
  SimulateResult result;

  // Resolve the source shape.
  ShapeCoefficients u0;
  TriangleMesh mesh;
  SphericalParameterization param;
  const bool mesh_run = cfg.input_kind == RunConfig::InputKind::mesh;
  switch (cfg.input_kind) {
    case RunConfig::InputKind::sphere:
      if (cfg.band_limit < 1) throw config_error("sphere runs need band_limit >= 1");
      u0 = decompose_sphere(cfg.band_limit);
      break;
    case RunConfig::InputKind::mesh: {
      mesh = load_mesh(cfg.input_path);
      param = radial_project(mesh, cfg.center);
      result.duplicate_angle_pairs = param.duplicate_angle_pairs;
      if (param.duplicate_angle_pairs > 0) {
        std::cerr << "warning: " << param.duplicate_angle_pairs
                  << " vertex pairs share angular coordinates within 1e-9 "
                     "(non-star-shaped input); their displacements will coincide\n";
      }
      // Displacement semantics: the mesh itself is the source shape; only
      // the spectral noise is synthesised and added to the vertices.
      u0 = ShapeCoefficients(cfg.band_limit);
      break;
    }
    case RunConfig::InputKind::coefficients: {
      const ShapeCoefficients loaded = shape_coefficients_from_json(load_json_file(cfg.input_path));
      if (loaded.band_limit() != cfg.band_limit) {
        throw config_error("coefficient file band_limit " + std::to_string(loaded.band_limit()) +
                           " does not match run band_limit " + std::to_string(cfg.band_limit));
      }
      u0 = loaded;
      break;
    }
  }

  // Simulate the coefficient trajectory.
  const SeedSpec seed{cfg.seed};
  ShapeTrajectory traj;
  switch (cfg.process_kind) {
    case RunConfig::ProcessKind::q_wiener:
      traj = q_wiener_shape_process(u0, cfg.spectrum, cfg.time, seed, cfg.scale);
      break;
    case RunConfig::ProcessKind::ito:
      traj = ito_shape_process(u0, cfg.spectrum, cfg.process, cfg.time, seed);
      break;
    case RunConfig::ProcessKind::fractional:
      traj = fractional_shape_process(u0, cfg.spectrum, cfg.hurst, cfg.time, seed);
      break;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw io_error("cannot create output directory: " + cfg.out_dir.string());

  // Frames.
  const int frames = traj.frame_count();
  if (cfg.format == RunConfig::Format::json_frames) {
    for (int k = 0; k < frames; ++k) {
      save_json_file(shape_coefficients_to_json(traj.frame(k)), frame_path(cfg.out_dir, k, "json"));
    }
  } else if (mesh_run) {
    const std::vector<TriangleMesh> out_frames = transfer_process(mesh, param, traj);
    for (int k = 0; k < frames; ++k) {
      save_mesh(out_frames[static_cast<std::size_t>(k)], frame_path(cfg.out_dir, k, "obj"));
    }
  } else {
    const TriangleMesh render = make_uv_sphere(cfg.render_n_theta, cfg.render_n_phi);
    std::vector<SphericalPoint> points(render.vertices.size());
    for (std::size_t v = 0; v < render.vertices.size(); ++v) {
      points[v] = angles_of_unit_vector(render.vertices[v]);
    }
    const std::vector<std::vector<Vec3>> positions = sample_frames(traj, points);
    for (int k = 0; k < frames; ++k) {
      TriangleMesh frame;
      frame.vertices = positions[static_cast<std::size_t>(k)];
      frame.faces = render.faces;
      save_mesh(frame, frame_path(cfg.out_dir, k, "obj"));
    }
  }

  write_stats_csv(traj, cfg.out_dir / "stats.csv");

  json manifest{
      {"tool", kToolName},
      {"version", kToolVersion},
      {"seed", cfg.seed},
      {"times", [&] {
         json t = json::array();
         for (int k = 0; k < frames; ++k) t.push_back(traj.times.time(k));
         return t;
       }()},
      {"config", cfg.resolved},
  };
  if (mesh_run) manifest["warnings"] = {{"duplicate_angle_pairs", result.duplicate_angle_pairs}};
  save_json_file(manifest, cfg.out_dir / "manifest.json");

  result.out_dir = cfg.out_dir;
  result.frames_written = frames;
  return result;
}

namespace {

int run_decompose(const std::string& input, int band_limit, const std::filesystem::path& out_file) {
  ShapeCoefficients coeffs;
  if (input == "sphere") {
    coeffs = decompose_sphere(band_limit);
  } else {
    coeffs = decompose_mesh(load_mesh(input), band_limit, std::nullopt);
  }
  save_json_file(shape_coefficients_to_json(coeffs), out_file);
  std::cout << "wrote " << out_file.string() << " (band limit " << band_limit << ")\n";
  return 0;
}

int run_spectrum_check(const CovarianceSpectrum& spec, double check_nu) {
  std::cout << "spectrum: " << to_string(spec.kind) << ", band limit " << spec.band_limit;
  if (spec.nu) std::cout << ", nu " << *spec.nu;
  std::cout << '\n';
  std::cout << "truncated trace: " << fmt17(truncated_trace(spec)) << '\n';
  const ConvergenceMargin margin = hnu_convergence_margin(spec, check_nu);
  std::cout << "H^" << check_nu << " margin partial sum: " << fmt17(margin.partial_sum) << '\n';
  std::cout << "partial-sum ratio S_N/S_{N-1}: " << fmt17(margin.partial_ratio) << '\n';
  std::cout << "last term: " << fmt17(margin.last_term) << '\n';
  if (margin.terms_decaying) {
    std::cout << "terms decaying: yes (series plausibly convergent at truncation)\n";
  } else {
    std::cout << "terms not decaying: series looks divergent at nu=" << check_nu << '\n';
  }
  return 0;
}

int run_info(const std::filesystem::path& path) {
  const TriangleMesh mesh = load_mesh(path);
  const MeshStats s = mesh_stats(mesh);
  std::cout << "vertices: " << s.n_vertices << '\n';
  std::cout << "faces: " << s.n_faces << '\n';
  std::cout << "bbox min: " << fmt17(s.bbox_min.x) << ' ' << fmt17(s.bbox_min.y) << ' '
            << fmt17(s.bbox_min.z) << '\n';
  std::cout << "bbox max: " << fmt17(s.bbox_max.x) << ' ' << fmt17(s.bbox_max.y) << ' '
            << fmt17(s.bbox_max.z) << '\n';
  std::cout << "mean edge length: " << fmt17(s.mean_edge_length) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  apply_thread_cap_from_env();

  CLI::App app{"Stochastic shape evolution via spherical-harmonic coefficient processes"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a config and write frames + manifest + stats");
  std::string sim_config;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::string> sim_out;
  std::optional<std::string> sim_format;
  sim->add_option("--config", sim_config, "run config JSON (or a manifest.json)")->required();
  sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--out", sim_out, "override the output directory");
  sim->add_option("--format", sim_format, "override the output format (obj|json)");

  // decompose
  auto* dec = app.add_subcommand("decompose", "spherical-harmonic decomposition of a preset or mesh");
  std::string dec_input;
  int dec_band = 25;
  std::string dec_out = "coefficients.json";
  dec->add_option("input", dec_input, "'sphere' or a mesh path")->required();
  dec->add_option("--band-limit", dec_band, "truncation degree N");
  dec->add_option("--out", dec_out, "output coefficient JSON");

  // spectrum-check
  auto* chk = app.add_subcommand("spectrum-check", "trace and H^nu convergence diagnostics");
  std::string chk_config;
  std::string chk_kind = "identity";
  int chk_band = -1;
  std::optional<double> chk_bessel_nu;
  double chk_nu = 2.0;
  chk->add_option("--config", chk_config, "spectrum JSON file");
  chk->add_option("--kind", chk_kind, "identity|inv_linear|inv_quadratic|bessel");
  chk->add_option("--band-limit", chk_band, "truncation degree N");
  chk->add_option("--bessel-nu", chk_bessel_nu, "bessel order (required for --kind bessel)");
  chk->add_option("--nu", chk_nu, "Sobolev order for the convergence margin");

  // info
  auto* info = app.add_subcommand("info", "mesh summary");
  std::string info_input;
  info->add_option("input", info_input, "mesh path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      RunConfig cfg = load_run_config(sim_config);
      json j = cfg.resolved;
      if (sim_seed) j["seed"] = *sim_seed;
      if (sim_out) j["output"]["dir"] = *sim_out;
      if (sim_format) j["output"]["format"] = *sim_format;
      cfg = parse_run_config(j);
      const SimulateResult res = run_simulate(cfg);
      std::cout << "wrote " << res.frames_written << " frames to " << res.out_dir.string() << '\n';
      return 0;
    }
    if (dec->parsed()) {
      if (dec_band < 0) throw config_error("band limit must be >= 0");
      return run_decompose(dec_input, dec_band, dec_out);
    }
    if (chk->parsed()) {
      CovarianceSpectrum spec;
      if (!chk_config.empty()) {
        spec = spectrum_from_json(load_json_file(chk_config), chk_band >= 0 ? std::optional<int>(chk_band) : std::nullopt);
      } else {
        const SpectrumKind kind = spectrum_kind_from_string(chk_kind);
        const int band = chk_band >= 0 ? chk_band : (kind == SpectrumKind::identity ? 6 : 25);
        spec = make_spectrum(kind, band, chk_bessel_nu);
      }
      if (chk_nu < 0.0) throw config_error("nu must be >= 0");
      return run_spectrum_check(spec, chk_nu);
    }
    if (info->parsed()) return run_info(info_input);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const integration_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const mesh_parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace shapediff::cli
