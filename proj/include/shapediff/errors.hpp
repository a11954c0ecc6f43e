// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace shapediff {

/// Invalid or inconsistent run configuration (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File-system level failure: missing file, unwritable directory (CLI exit code 3).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric blow-up during SDE integration (CLI exit code 4).
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& msg, int step) : std::runtime_error(msg), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace shapediff
