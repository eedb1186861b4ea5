// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

// Analytic GPU execution model: how a launch grid breaks into waves across
// the SMs, and how many blocks fit on one SM given their register and shared
// memory footprint.
//
// The wave model assumes every block takes the same time and blocks are
// dispatched in whole waves. Register allocation granularity is ignored, so
// register-bound limits are floor(regs_per_sm / (regs_per_thread * threads)).

#pragma once

#include <cstddef>
#include <iosfwd>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitkq/gemm.h"

namespace splitkq::execmodel {

struct HardwareProfile {
  std::string name;
  std::size_t sm_count = 0;
  std::size_t registers_per_sm = 0;  // 32-bit registers
  std::size_t shared_mem_per_sm = 0;  // bytes
  std::size_t max_blocks_per_sm = 0;
  double fp16_tflops = 0.0;
  double mem_bandwidth_gbs = 0.0;
  std::optional<double> l2_cache_mb;

  void validate() const;

  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

/// a100-40, a100-80 and h100.
const std::vector<HardwareProfile>& builtin_profiles();
std::optional<HardwareProfile> find_builtin(std::string_view name);

/// Parses a key=value profile ('#' starts a comment). Keys: name, sm_count,
/// registers_per_sm, shared_mem_per_sm, max_blocks_per_sm, fp16_tflops,
/// mem_bandwidth_gbs, and optionally l2_cache_mb.
HardwareProfile parse_profile(std::istream& in);
void write_profile(const HardwareProfile& hw, std::ostream& out);
HardwareProfile load_profile(const std::filesystem::path& path);

/// Looks `name` up among the built-ins, then as a file path, then as
/// <dir>/<name>.profile under $SPLITKQ_PROFILE_DIR. Throws ConfigError if
/// nothing matches.
HardwareProfile resolve_profile(std::string_view name);

struct BlockResources {
  std::size_t registers_per_thread = 0;
  std::size_t threads_per_block = 128;
  std::size_t shared_mem_per_block = 0;  // bytes

  void validate() const;
};

enum class LimitingFactor { kRegisters, kSharedMemory, kMaxBlocks };
std::string_view to_string(LimitingFactor factor);

struct OccupancyLimit {
  std::size_t blocks_per_sm = 0;
  LimitingFactor limited_by = LimitingFactor::kMaxBlocks;
  // Per-resource limits; nullopt when the block uses none of that resource.
  std::optional<std::size_t> register_limit;
  std::optional<std::size_t> shared_mem_limit;
  std::size_t hardware_limit = 0;
};

/// Resident blocks per SM. Ties go to registers, then shared memory. Throws
/// InfeasibleError when a single block does not fit on an SM.
OccupancyLimit occupancy_limit(const BlockResources& res,
                               const HardwareProfile& hw);

struct WaveReport {
  std::size_t grid = 0;
  std::size_t blocks_per_wave = 0;
  std::size_t full_waves = 0;
  std::size_t tail_blocks = 0;
  // Fraction of the last wave's slots in use; 1.0 when there is no tail.
  double tail_utilization = 1.0;
  std::size_t waves_total = 0;

  friend bool operator==(const WaveReport&, const WaveReport&) = default;
};

WaveReport wave_report(std::size_t grid, const HardwareProfile& hw,
                       std::size_t blocks_per_sm);

struct DecompositionReport {
  gemm::KernelConfig config;
  std::size_t grid = 0;
  std::size_t k_iterations = 0;
  std::size_t blocks_per_sm = 1;
  std::optional<OccupancyLimit> occupancy;
  WaveReport waves;
};

struct ComparisonReport {
  DecompositionReport data_parallel;
  DecompositionReport split_k;
  double grid_ratio = 1.0;  // split-k grid / data-parallel grid
  double tail_utilization_delta = 0.0;  // split-k minus data-parallel
  bool splitk_reduces_tail_waste = false;
};

/// Compares the two launches for an m x n x k problem. Without block
/// resources a decomposition is modeled with one resident block per SM;
/// with them, blocks_per_sm comes from occupancy_limit.
ComparisonReport compare_decompositions(
    std::size_t m, std::size_t n, std::size_t k,
    const gemm::KernelConfig& config_dp, const gemm::KernelConfig& config_splitk,
    const HardwareProfile& hw,
    const std::optional<BlockResources>& dp_resources = std::nullopt,
    const std::optional<BlockResources>& splitk_resources = std::nullopt);

}  // namespace splitkq::execmodel
