// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

// Published GPU measurements for the fused W4A16 split-k kernel, kept
// verbatim so ratios derived from them can be checked. None of these numbers
// are expected to reproduce on a CPU host.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace splitkq::fixtures {

struct FixtureRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double splitk_tflops = 0.0;
  double dp_tflops = 0.0;
};

struct PaperFixture {
  std::string_view gpu;  // a100-40, a100-80 or h100
  int id = 0;  // 1..6, m = 1 first
  std::size_t m = 0;
  std::array<FixtureRow, 6> rows;
};

/// Six tables: m = 1 (ids 1-3) and m = 16 (ids 4-6), each for
/// A100 40GB, A100 80GB and H100, n = k from 512 to 16384.
std::span<const PaperFixture> published_fixtures();

/// Profiler metrics for m = 16, n = k = 4096 on the A100, split-k vs data
/// parallel. Shared memory is reported in KB exactly as published.
struct KernelMetrics {
  double latency_us;
  double global_mem_throughput_gbs;
  std::size_t grid_size;
  std::size_t registers_per_thread;
  double shared_memory_kb;
  std::size_t block_limit_registers;
  std::size_t block_limit_smem;
  double achieved_occupancy;
  double sm_utilization_pct;
  // Warp scheduler statistics, documentation only.
  double active_warps;
  double eligible_warps;
  double issued_warps;
  double issued_ipc_active;
};

struct ProfilerCase {
  std::size_t m = 16;
  std::size_t n = 4096;
  std::size_t k = 4096;
  KernelMetrics split_k;
  KernelMetrics data_parallel;
};

const ProfilerCase& profiler_case();

/// Headline claims quoted alongside the tables.
struct ReportedClaims {
  double avg_speedup_h100 = 1.24;
  double avg_speedup_a100_40 = 1.14;
  double avg_speedup_a100_80 = 0.64;
  double avg_gain_a100_pct = 65.0;
  double avg_gain_h100_pct = 124.0;
  double peak_gain_pct = 295.0;
  std::size_t best_split_a100 = 4;
  std::size_t best_split_h100 = 8;
};

inline constexpr ReportedClaims kReportedClaims{};

struct CheckedRow {
  std::string_view gpu;
  int id = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double splitk_tflops = 0.0;
  double dp_tflops = 0.0;
  double speedup = 0.0;   // splitk / dp
  double gain_pct = 0.0;  // (speedup - 1) * 100
};

struct FixtureMean {
  std::string_view gpu;
  std::size_t m = 0;
  double mean_speedup = 0.0;
};

struct FixtureReport {
  std::vector<CheckedRow> rows;  // 36 rows in table order
  std::vector<FixtureMean> means;
  CheckedRow max_gain_row;
  // Row whose gain is closest to the quoted 295% peak, read as +295% and as
  // a 2.95x ratio.
  CheckedRow closest_to_peak_as_gain;
  CheckedRow closest_to_peak_as_ratio;
  bool peak_claim_supported = false;  // max gain >= 195%
  // TFLOPS implied by the profiler latency, for comparison with the table row
  // of the same shape.
  double profiler_implied_tflops = 0.0;
  double table_tflops_same_shape = 0.0;
  std::vector<std::string> notes;
};

/// Recomputes every ratio from the transcribed values. Throws FixtureError if
/// a table is missing, a row is incomplete, or a value is not positive.
FixtureReport validate_fixtures();

/// Same checks on caller-supplied fixtures.
FixtureReport validate_fixtures(std::span<const PaperFixture> fixtures);

}  // namespace splitkq::fixtures
