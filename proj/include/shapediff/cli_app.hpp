// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "shapediff/mesh.hpp"
#include "shapediff/serialize.hpp"

namespace shapediff::cli {

inline constexpr const char* kToolName = "shape-diffusion";
inline constexpr const char* kToolVersion = "0.1.0";

/// Fully resolved simulation run. Every field has a default except the
/// input; resolve() validates and fills the gaps before any computation.
struct RunConfig {
  enum class InputKind { sphere, mesh, coefficients };
  enum class ProcessKind { q_wiener, ito, fractional };
  enum class Format { obj, json_frames };

  InputKind input_kind = InputKind::sphere;
  std::filesystem::path input_path;  // mesh / coefficients inputs
  int band_limit = 25;
  CovarianceSpectrum spectrum;
  ProcessKind process_kind = ProcessKind::q_wiener;
  ProcessSpec process;  // ito drift/diffusion; hurst for fractional runs
  double hurst = 0.5;
  TimeGrid time = TimeGrid{0.0, 1.0, 100};
  std::uint64_t seed = 0;
  ScaleMode scale = ScaleMode::sqrt_lambda;
  std::filesystem::path out_dir = "out";
  Format format = Format::obj;
  int render_n_theta = 47;  // interior rings of the render sphere
  int render_n_phi = 96;
  std::optional<Vec3> center;

  json resolved;  // echo of the fully resolved config (manifest payload)
};

/// Parses a run-config JSON document (or a manifest, which embeds one under
/// "config") and resolves all defaults. Throws config_error on bad input.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);

struct SimulateResult {
  std::filesystem::path out_dir;
  int frames_written = 0;
  std::size_t duplicate_angle_pairs = 0;
};

/// Runs the full pipeline: simulate, write frame files, manifest.json and
/// stats.csv into cfg.out_dir. Re-running the same resolved config is
/// bit-identical.
SimulateResult run_simulate(const RunConfig& cfg);

/// CLI entry point (subcommands simulate / decompose / spectrum-check /
/// info). Returns the process exit code: 0 ok, 2 invalid config, 3 I/O
/// failure, 4 numeric blow-up.
int run(int argc, const char* const* argv);

}  // namespace shapediff::cli
