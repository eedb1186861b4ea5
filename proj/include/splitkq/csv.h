// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitkq/bench.h"

namespace splitkq::csv {

inline constexpr std::string_view kBenchHeader =
    "gpu_or_host,m,n,k,method,split_k,latency_us,tflops,speedup";

struct BenchRow {
  std::string gpu_or_host;
  bench::BenchRecord record;
  std::optional<double> speedup;
};

/// Writes header plus one row per record. Rows whose shape has exactly one
/// data-parallel and one split-k record carry the pair's split-k / DP ratio;
/// others leave speedup empty. TFLOPS and speedup use 4 significant digits.
void write_bench_csv(std::ostream& out, std::span<const bench::BenchRecord> records,
                     std::string_view gpu_or_host);

/// Strict parser for the format above; throws FormatError on any deviation.
std::vector<BenchRow> parse_bench_csv(std::istream& in);

}  // namespace splitkq::csv
