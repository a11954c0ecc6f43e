// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/serialize.hpp"

#include <fstream>

#include "shapediff/errors.hpp"

namespace shapediff {

namespace {

int read_band_limit(const json& j) {
  if (!j.contains("band_limit") || !j["band_limit"].is_number_integer()) {
    throw std::invalid_argument("coefficient table needs an integer 'band_limit'");
  }
  const int N = j["band_limit"].get<int>();
  if (N < 0) throw std::invalid_argument("band_limit must be >= 0");
  return N;
}

void check_entry_indices(const json& entry, int N, int& l, int& m) {
  l = entry.at(0).get<int>();
  m = entry.at(1).get<int>();
  if (l < 0 || l > N || std::abs(m) > l) {
    throw std::invalid_argument("coefficient entry (" + std::to_string(l) + "," + std::to_string(m) +
                                ") outside the band limit");
  }
}

}  // namespace

json coefficients_to_json(const HarmonicCoefficients& coeffs) {
  json entries = json::array();
  const int N = coeffs.band_limit();
  for (int l = 0; l <= N; ++l) {
    for (int m = -l; m <= l; ++m) {
      entries.push_back(json::array({l, m, coeffs.at(l, m)}));
    }
  }
  return json{{"band_limit", N}, {"channels", 1}, {"coeffs", std::move(entries)}};
}

HarmonicCoefficients coefficients_from_json(const json& j) {
  const int N = read_band_limit(j);
  if (j.value("channels", 1) != 1) {
    throw std::invalid_argument("expected a single-channel coefficient table");
  }
  HarmonicCoefficients out(N);
  for (const json& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 3) {
      throw std::invalid_argument("coefficient entries must be [l, m, value]");
    }
    int l = 0, m = 0;
    check_entry_indices(entry, N, l, m);
    out.at(l, m) = entry.at(2).get<double>();
  }
  return out;
}

json shape_coefficients_to_json(const ShapeCoefficients& coeffs) {
  json entries = json::array();
  const int N = coeffs.band_limit();
  for (int l = 0; l <= N; ++l) {
    for (int m = -l; m <= l; ++m) {
      entries.push_back(json::array({l, m, coeffs.channels[0].at(l, m), coeffs.channels[1].at(l, m),
                                     coeffs.channels[2].at(l, m)}));
    }
  }
  return json{{"band_limit", N}, {"channels", 3}, {"coeffs", std::move(entries)}};
}

ShapeCoefficients shape_coefficients_from_json(const json& j) {
  const int N = read_band_limit(j);
  if (j.value("channels", 3) != 3) {
    throw std::invalid_argument("expected a 3-channel coefficient table");
  }
  ShapeCoefficients out(N);
  for (const json& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 5) {
      throw std::invalid_argument("shape coefficient entries must be [l, m, x, y, z]");
    }
    int l = 0, m = 0;
    check_entry_indices(entry, N, l, m);
    for (int c = 0; c < 3; ++c) {
      out.channels[static_cast<std::size_t>(c)].at(l, m) = entry.at(2 + c).get<double>();
    }
  }
  return out;
}

json spectrum_to_json(const CovarianceSpectrum& spec) {
  json j{{"kind", to_string(spec.kind)}, {"band_limit", spec.band_limit}};
  if (spec.nu) j["nu"] = *spec.nu;
  if (spec.kind == SpectrumKind::custom) j["lambdas"] = spec.lambdas;
  return j;
}

CovarianceSpectrum spectrum_from_json(const json& j, std::optional<int> default_band_limit) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("spectrum needs a 'kind' field");
  }
  const SpectrumKind kind = spectrum_kind_from_string(j["kind"].get<std::string>());
  if (kind == SpectrumKind::custom) {
    if (!j.contains("lambdas")) throw std::invalid_argument("custom spectrum needs 'lambdas'");
    return custom_spectrum(j["lambdas"].get<std::vector<double>>());
  }
  int N = 0;
  if (j.contains("band_limit")) {
    N = j["band_limit"].get<int>();
  } else if (default_band_limit) {
    N = *default_band_limit;
  } else {
    throw std::invalid_argument("spectrum needs a 'band_limit'");
  }
  std::optional<double> nu;
  if (j.contains("nu") && !j["nu"].is_null()) nu = j["nu"].get<double>();
  return make_spectrum(kind, N, nu);
}

json process_to_json(const ProcessSpec& spec) {
  json drift;
  switch (spec.drift.kind) {
    case DriftSpec::Kind::zero: drift = {{"kind", "zero"}}; break;
    case DriftSpec::Kind::constant: drift = {{"kind", "constant"}, {"value", spec.drift.value}}; break;
    case DriftSpec::Kind::linear: drift = {{"kind", "linear"}, {"value", spec.drift.value}}; break;
    case DriftSpec::Kind::ou:
      drift = {{"kind", "ou"}, {"rate", spec.drift.rate}, {"mean", spec.drift.mean}};
      break;
  }
  json diffusion;
  switch (spec.diffusion.kind) {
    case DiffusionSpec::Kind::constant:
      diffusion = {{"kind", "constant"}, {"sigma", spec.diffusion.value}};
      break;
    case DiffusionSpec::Kind::linear:
      diffusion = {{"kind", "linear"}, {"slope", spec.diffusion.value}};
      break;
  }
  json j{{"drift", drift}, {"diffusion", diffusion}};
  j["hurst"] = spec.hurst ? json(*spec.hurst) : json(nullptr);
  return j;
}

ProcessSpec process_from_json(const json& j) {
  ProcessSpec spec;
  if (j.contains("drift")) {
    const json& d = j["drift"];
    const std::string kind = d.value("kind", "zero");
    if (kind == "zero") {
      spec.drift = DriftSpec::zero();
    } else if (kind == "constant") {
      spec.drift = DriftSpec::constant(d.at("value").get<double>());
    } else if (kind == "linear") {
      spec.drift = DriftSpec::linear(d.at("value").get<double>());
    } else if (kind == "ou") {
      spec.drift = DriftSpec::ou(d.at("rate").get<double>(), d.value("mean", 0.0));
    } else {
      throw std::invalid_argument("unknown drift kind: " + kind);
    }
  }
  if (j.contains("diffusion")) {
    const json& d = j["diffusion"];
    const std::string kind = d.value("kind", "constant");
    if (kind == "constant") {
      spec.diffusion = DiffusionSpec::constant(d.value("sigma", 1.0));
    } else if (kind == "linear") {
      spec.diffusion = DiffusionSpec::linear(d.at("slope").get<double>());
    } else {
      throw std::invalid_argument("unknown diffusion kind: " + kind);
    }
  }
  if (j.contains("hurst") && !j["hurst"].is_null()) spec.hurst = j["hurst"].get<double>();
  validate_process(spec);
  return spec;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace shapediff
