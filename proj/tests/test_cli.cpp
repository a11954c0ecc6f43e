// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "shapediff/cli_app.hpp"
#include "shapediff/errors.hpp"
#include "shapediff/primitives.hpp"

using namespace shapediff;

namespace {

std::filesystem::path test_dir(const std::string& sub) {
  const auto dir = std::filesystem::temp_directory_path() / "shapediff_cli_tests" / sub;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_cli(std::initializer_list<std::string> args, std::string* captured_out = nullptr) {
  std::vector<std::string> storage{"shape_diffusion"};
  storage.insert(storage.end(), args);
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());
  std::ostringstream oss;
  std::streambuf* old = captured_out ? std::cout.rdbuf(oss.rdbuf()) : nullptr;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data());
  if (captured_out) {
    std::cout.rdbuf(old);
    *captured_out = oss.str();
  }
  return rc;
}

json base_sphere_config(const std::filesystem::path& out_dir) {
  return json{
      {"input", "sphere"},
      {"band_limit", 6},
      {"spectrum", {{"kind", "bessel"}, {"nu", 1.0}}},
      {"process", {{"kind", "q_wiener"}}},
      {"time", {{"t0", 0.0}, {"T", 1.0}, {"steps", 4}}},
      {"seed", 77},
      {"output", {{"dir", out_dir.string()}, {"format", "obj"}, {"render", {{"n_theta", 8}, {"n_phi", 16}}}}},
  };
}

}  // namespace

TEST_CASE("run config defaults") {
  SUBCASE("minimal sphere config") {
    const cli::RunConfig cfg = cli::parse_run_config(json{{"input", "sphere"}});
    CHECK(cfg.input_kind == cli::RunConfig::InputKind::sphere);
    CHECK(cfg.band_limit == 25);  // bessel default
    CHECK(cfg.spectrum.kind == SpectrumKind::bessel);
    CHECK(cfg.time.steps == 100);
    CHECK(cfg.seed == 0);
    CHECK(cfg.scale == ScaleMode::sqrt_lambda);
    CHECK(cfg.format == cli::RunConfig::Format::obj);
  }
  SUBCASE("identity spectrum defaults to N = 6") {
    const cli::RunConfig cfg =
        cli::parse_run_config(json{{"input", "sphere"}, {"spectrum", {{"kind", "identity"}}}});
    CHECK(cfg.band_limit == 6);
    CHECK(cfg.spectrum.lambdas.size() == 7);
  }
  SUBCASE("custom spectrum adopts its own band limit") {
    const cli::RunConfig cfg = cli::parse_run_config(
        json{{"input", "sphere"}, {"spectrum", {{"kind", "custom"}, {"lambdas", {1.0, 0.5, 0.25}}}}});
    CHECK(cfg.band_limit == 2);
    CHECK(cfg.spectrum.kind == SpectrumKind::custom);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(cli::parse_run_config(json{{"x", 1}}), config_error);
    CHECK_THROWS_AS(cli::parse_run_config(json{{"input", "cube"}}), config_error);
    CHECK_THROWS_AS(cli::parse_run_config(json{{"input", "sphere"}, {"band_limit", -2}}), config_error);
    CHECK_THROWS_AS(cli::parse_run_config(json{{"input", "sphere"}, {"scale", "cubic"}}), config_error);
    CHECK_THROWS_AS(
        cli::parse_run_config(json{{"input", "sphere"}, {"process", {{"kind", "fractional"}, {"hurst", 1.5}}}}),
        config_error);
    CHECK_THROWS_AS(
        cli::parse_run_config(json{{"input", "sphere"}, {"time", {{"t0", 1.0}, {"T", 1.0}, {"steps", 4}}}}),
        config_error);
  }
}

TEST_CASE("simulate: sphere preset with zero diffusion gives K+1 identical frames") {
  const auto dir = test_dir("still");
  json cfg = base_sphere_config(dir / "out");
  cfg["process"] = json{{"kind", "ito"},
                        {"drift", {{"kind", "zero"}}},
                        {"diffusion", {{"kind", "constant"}, {"sigma", 0.0}}}};
  const cli::SimulateResult res = cli::run_simulate(cli::parse_run_config(cfg));
  CHECK(res.frames_written == 5);
  const std::string frame0 = read_file(res.out_dir / "frame_0000.obj");
  CHECK_FALSE(frame0.empty());
  for (int k = 1; k <= 4; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.obj", k);
    CHECK(read_file(res.out_dir / name) == frame0);
  }
  CHECK(std::filesystem::exists(res.out_dir / "manifest.json"));
  CHECK(std::filesystem::exists(res.out_dir / "stats.csv"));
}

TEST_CASE("simulate: decaying spectrum at N=25 keeps the H^2 norm trend bounded") {
  const auto dir = test_dir("smooth");
  const json cfg{
      {"input", "sphere"},
      {"band_limit", 25},
      {"spectrum", {{"kind", "inv_quadratic"}}},
      {"process", {{"kind", "q_wiener"}}},
      {"time", {{"t0", 0.0}, {"T", 1.0}, {"steps", 8}}},
      {"seed", 2024},
      {"output", {{"dir", (dir / "out").string()}, {"format", "json"}}},
  };
  cli::run_simulate(cli::parse_run_config(cfg));

  // theoretical H^2 energy rate of the noise, 3 channels
  const auto spec = make_spectrum(SpectrumKind::inv_quadratic, 25);
  double rate = 0.0;
  for (int l = 0; l <= 25; ++l) {
    const double ll1 = static_cast<double>(l) * (l + 1);
    rate += (2.0 * l + 1.0) * spec.lambda(l) * (1.0 + ll1 * ll1);
  }
  rate *= 3.0;
  double h2_u0 = 0.0;
  {
    const ShapeCoefficients u0 = decompose_sphere(25);
    for (const auto& ch : u0.channels) {
      const double h2 = sobolev_norm(ch, 2.0);
      h2_u0 += h2 * h2;
    }
    h2_u0 = std::sqrt(h2_u0);
  }

  std::ifstream in(dir / "out" / "stats.csv");
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    double frame, t, l2, h2, maxc;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &frame, &t, &l2, &h2, &maxc) == 5);
    CHECK(std::isfinite(h2));
    // generous concentration bound around the sqrt(rate * t) noise scale
    CHECK(h2 <= h2_u0 + 6.0 * std::sqrt(rate * t) + 1.0);
    ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("simulate: rerunning the same config is bit-identical") {
  const auto dir = test_dir("rerun");
  const json cfg = base_sphere_config(dir / "out");
  cli::run_simulate(cli::parse_run_config(cfg));
  std::map<std::string, std::string> first;
  for (const auto& e : std::filesystem::directory_iterator(dir / "out")) {
    first[e.path().filename().string()] = read_file(e.path());
  }
  cli::run_simulate(cli::parse_run_config(cfg));
  for (const auto& e : std::filesystem::directory_iterator(dir / "out")) {
    CHECK(first.at(e.path().filename().string()) == read_file(e.path()));
  }
  CHECK(first.size() == 7);  // 5 frames + manifest + stats
}

TEST_CASE("simulate: manifest alone reproduces the run") {
  const auto dir = test_dir("manifest");
  json cfg = base_sphere_config(dir / "a");
  cli::run_simulate(cli::parse_run_config(cfg));
  const json manifest = load_json_file(dir / "a" / "manifest.json");
  CHECK(manifest["tool"] == cli::kToolName);
  CHECK(manifest["times"].size() == 5);

  cli::RunConfig from_manifest = cli::parse_run_config(manifest);
  json redirected = from_manifest.resolved;
  redirected["output"]["dir"] = (dir / "b").string();
  cli::run_simulate(cli::parse_run_config(redirected));
  for (int k = 0; k <= 4; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.obj", k);
    CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));
  }
  CHECK(read_file(dir / "a" / "stats.csv") == read_file(dir / "b" / "stats.csv"));
}

TEST_CASE("simulate: stats.csv has the fixed header and K+1 rows") {
  const auto dir = test_dir("stats");
  const json cfg = base_sphere_config(dir / "out");
  cli::run_simulate(cli::parse_run_config(cfg));
  std::ifstream in(dir / "out" / "stats.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "frame,t,l2_norm,h2_norm,max_coeff");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("simulate: JSON frame export round trips the initial shape") {
  const auto dir = test_dir("jsonfmt");
  json cfg = base_sphere_config(dir / "out");
  cfg["output"]["format"] = "json";
  cli::run_simulate(cli::parse_run_config(cfg));
  const ShapeCoefficients frame0 =
      shape_coefficients_from_json(load_json_file(dir / "out" / "frame_0000.json"));
  const ShapeCoefficients u0 = decompose_sphere(6);
  CHECK(frame0 == u0);
}

TEST_CASE("simulate: mesh input writes transferred meshes with frame-0 identity") {
  const auto dir = test_dir("meshrun");
  const auto mesh_path = dir / "torus.obj";
  save_mesh(make_torus(2.0, 0.8, 12, 6), mesh_path);
  json cfg = base_sphere_config(dir / "out");
  cfg["input"] = json{{"mesh", mesh_path.string()}};
  cfg["band_limit"] = 6;
  cfg["spectrum"] = json{{"kind", "identity"}};
  const cli::SimulateResult res = cli::run_simulate(cli::parse_run_config(cfg));
  CHECK(res.duplicate_angle_pairs > 0);
  CHECK(read_file(dir / "out" / "frame_0000.obj") == read_file(mesh_path));
}

TEST_CASE("cli exit codes") {
  const auto dir = test_dir("codes");

  SUBCASE("success") {
    const auto cfg_path = write_json(dir / "ok.json", base_sphere_config(dir / "ok_out"));
    std::string out;
    CHECK(run_cli({"simulate", "--config", cfg_path.string()}, &out) == 0);
    CHECK(out.find("wrote 5 frames") != std::string::npos);
  }
  SUBCASE("invalid config is exit 2") {
    const auto cfg_path = write_json(dir / "bad.json", json{{"input", "sphere"}, {"band_limit", -3}});
    CHECK(run_cli({"simulate", "--config", cfg_path.string()}) == 2);
  }
  SUBCASE("malformed JSON is exit 2") {
    const auto p = dir / "broken.json";
    std::ofstream(p) << "{ not json";
    CHECK(run_cli({"simulate", "--config", p.string()}) == 2);
  }
  SUBCASE("missing config file is exit 3") {
    CHECK(run_cli({"simulate", "--config", (dir / "missing.json").string()}) == 3);
  }
  SUBCASE("missing mesh input is exit 3") {
    json cfg = base_sphere_config(dir / "x_out");
    cfg["input"] = json{{"mesh", (dir / "missing.obj").string()}};
    const auto cfg_path = write_json(dir / "missing_mesh.json", cfg);
    CHECK(run_cli({"simulate", "--config", cfg_path.string()}) == 3);
  }
  SUBCASE("numeric blow-up is exit 4") {
    json cfg = base_sphere_config(dir / "blow_out");
    cfg["process"] = json{{"kind", "ito"},
                          {"drift", {{"kind", "linear"}, {"value", 1e200}}},
                          {"diffusion", {{"kind", "constant"}, {"sigma", 1e200}}}};
    const auto cfg_path = write_json(dir / "blow.json", cfg);
    CHECK(run_cli({"simulate", "--config", cfg_path.string()}) == 4);
  }
  SUBCASE("decompose with negative band limit is exit 2") {
    CHECK(run_cli({"decompose", "sphere", "--band-limit", "-1",
                   "--out", (dir / "c.json").string()}) == 2);
  }
}

TEST_CASE("decompose subcommand") {
  const auto dir = test_dir("decompose");

  SUBCASE("sphere preset at N = 1 has the three analytic entries") {
    const auto out = dir / "sphere.json";
    CHECK(run_cli({"decompose", "sphere", "--band-limit", "1", "--out", out.string()}, nullptr) == 0);
    const ShapeCoefficients c = shape_coefficients_from_json(load_json_file(out));
    CHECK(c.band_limit() == 1);
    int big = 0;
    for (const auto& ch : c.channels) {
      for (double v : ch.values()) {
        if (std::abs(v) > 1e-12) {
          ++big;
          CHECK(std::abs(v) == doctest::Approx(2.0466534).epsilon(1e-6));
        }
      }
    }
    CHECK(big == 3);
  }

  SUBCASE("decompose a round mesh and check the radial scale") {
    const auto mesh_path = dir / "sphere.obj";
    save_mesh(make_uv_sphere(24, 48), mesh_path);
    const auto out = dir / "mesh.json";
    CHECK(run_cli({"decompose", mesh_path.string(), "--band-limit", "2", "--out", out.string()}) == 0);
    const ShapeCoefficients c = shape_coefficients_from_json(load_json_file(out));
    // a unit-sphere mesh decomposes close to the analytic sphere table
    CHECK(std::abs(c.channels[2].at(1, 0)) == doctest::Approx(2.0466534).epsilon(0.02));
  }
}

TEST_CASE("spectrum-check subcommand output") {
  std::string out;
  CHECK(run_cli({"spectrum-check", "--kind", "identity", "--band-limit", "6"}, &out) == 0);
  CHECK(out.find("truncated trace: 49") != std::string::npos);

  out.clear();
  CHECK(run_cli({"spectrum-check", "--kind", "bessel", "--band-limit", "25", "--bessel-nu", "1",
                 "--nu", "2"},
                &out) == 0);
  CHECK(out.find("terms not decaying") != std::string::npos);

  out.clear();
  CHECK(run_cli({"spectrum-check", "--kind", "inv_quadratic", "--band-limit", "40", "--nu", "0"}, &out) == 0);
  CHECK(out.find("terms decaying: yes") != std::string::npos);

  SUBCASE("custom zero spectrum from a config file") {
    const auto dir = test_dir("speccheck");
    const auto cfg = write_json(dir / "zero.json", json{{"kind", "custom"}, {"lambdas", {0.0, 0.0, 0.0}}});
    out.clear();
    CHECK(run_cli({"spectrum-check", "--config", cfg.string()}, &out) == 0);
    CHECK(out.find("truncated trace: 0") != std::string::npos);
  }
}

TEST_CASE("info subcommand") {
  const auto dir = test_dir("info");
  const auto mesh_path = dir / "ico.obj";
  save_mesh(make_icosahedron(), mesh_path);
  std::string out;
  CHECK(run_cli({"info", mesh_path.string()}, &out) == 0);
  CHECK(out.find("vertices: 12") != std::string::npos);
  CHECK(out.find("faces: 20") != std::string::npos);
}

TEST_CASE("seed and output overrides") {
  const auto dir = test_dir("overrides");
  const auto cfg_path = write_json(dir / "cfg.json", base_sphere_config(dir / "ignored"));
  std::string out;
  CHECK(run_cli({"simulate", "--config", cfg_path.string(), "--seed", "123",
                 "--out", (dir / "a").string()},
                &out) == 0);
  const json manifest = load_json_file(dir / "a" / "manifest.json");
  CHECK(manifest["seed"] == 123);
  CHECK(manifest["config"]["output"]["dir"] == (dir / "a").string());
}
