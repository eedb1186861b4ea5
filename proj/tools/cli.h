// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace splitkq::cli {

enum ExitCode : int {
  kOk = 0,
  kCorrectnessFailure = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Entry point for the `splitkq` tool. Subcommands: pack, verify, gemm,
/// bench, model. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace splitkq::cli
