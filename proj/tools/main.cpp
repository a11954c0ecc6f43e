// Copyright (c) 2026 the shape-diffusion developers.
// SPDX-License-Identifier: Apache-2.0
#include "shapediff/cli_app.hpp"

int main(int argc, char** argv) { return shapediff::cli::run(argc, argv); }
