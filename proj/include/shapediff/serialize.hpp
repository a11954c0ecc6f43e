// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include <json.hpp>

#include "shapediff/sde.hpp"
#include "shapediff/shape_process.hpp"
#include "shapediff/sh_core.hpp"
#include "shapediff/sobolev.hpp"

namespace shapediff {

using json = nlohmann::json;

// Coefficient tables:
//   {"band_limit": N, "channels": 1, "coeffs": [[l, m, value], ...]}
//   {"band_limit": N, "channels": 3, "coeffs": [[l, m, x, y, z], ...]}
json coefficients_to_json(const HarmonicCoefficients& coeffs);
HarmonicCoefficients coefficients_from_json(const json& j);
json shape_coefficients_to_json(const ShapeCoefficients& coeffs);
ShapeCoefficients shape_coefficients_from_json(const json& j);

// Spectra: {"kind": "...", "band_limit": N[, "nu": x][, "lambdas": [...]]}
json spectrum_to_json(const CovarianceSpectrum& spec);
CovarianceSpectrum spectrum_from_json(const json& j, std::optional<int> default_band_limit = std::nullopt);

// Processes: {"drift": {"kind": ...}, "diffusion": {"kind": ...}, "hurst": null|h}
json process_to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const json& j);

json load_json_file(const std::filesystem::path& path);
void save_json_file(const json& j, const std::filesystem::path& path);

}  // namespace shapediff
