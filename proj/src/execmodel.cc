// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/execmodel.h"

#include <algorithm>
#include <string>

#include "splitkq/error.h"

namespace splitkq::execmodel {

namespace {

constexpr std::size_t kRegistersPerSm = 65536;
constexpr std::size_t kMaxThreadsPerBlock = 1024;

}  // namespace

void HardwareProfile::validate() const {
  if (name.empty()) throw ConfigError("hardware profile: empty name");
  if (sm_count == 0 || registers_per_sm == 0 || shared_mem_per_sm == 0 ||
      max_blocks_per_sm == 0) {
    throw ConfigError("hardware profile '" + name +
                      "': SM counts and capacities must be positive");
  }
  if (!(fp16_tflops > 0.0) || !(mem_bandwidth_gbs > 0.0)) {
    throw ConfigError("hardware profile '" + name +
                      "': throughput figures must be positive");
  }
  if (l2_cache_mb && !(*l2_cache_mb > 0.0)) {
    throw ConfigError("hardware profile '" + name + "': l2_cache_mb must be positive");
  }
}

const std::vector<HardwareProfile>& builtin_profiles() {
  // SM counts, FP16 tensor throughput, bandwidth and L2 as published for the
  // H100 80GB PCIe, A100 80GB SXM and A100 40GB PCIe. Shared memory is the
  // per-SM maximum configurable for thread blocks.
  static const std::vector<HardwareProfile> profiles = {
      {"a100-40", 108, kRegistersPerSm, 167936, 32, 312.0, 1500.0, 40.0},
      {"a100-80", 108, kRegistersPerSm, 167936, 32, 312.0, 2000.0, 40.0},
      {"h100", 132, kRegistersPerSm, 233472, 32, 1513.0, 2000.0, 50.0},
  };
  return profiles;
}

std::optional<HardwareProfile> find_builtin(std::string_view name) {
  for (const HardwareProfile& hw : builtin_profiles()) {
    if (hw.name == name) return hw;
  }
  return std::nullopt;
}

void BlockResources::validate() const {
  if (threads_per_block == 0 || threads_per_block > kMaxThreadsPerBlock) {
    throw ConfigError("block resources: threads_per_block must be in [1, 1024]");
  }
}

std::string_view to_string(LimitingFactor factor) {
  switch (factor) {
    case LimitingFactor::kRegisters:
      return "registers";
    case LimitingFactor::kSharedMemory:
      return "shared_memory";
    case LimitingFactor::kMaxBlocks:
      return "max_blocks";
  }
  return "unknown";
}

OccupancyLimit occupancy_limit(const BlockResources& res,
                               const HardwareProfile& hw) {
  res.validate();
  hw.validate();
  OccupancyLimit out;
  out.hardware_limit = hw.max_blocks_per_sm;

  const std::size_t regs_per_block = res.registers_per_thread * res.threads_per_block;
  if (regs_per_block > hw.registers_per_sm) {
    throw InfeasibleError("block needs " + std::to_string(regs_per_block) +
                          " registers but an SM has " +
                          std::to_string(hw.registers_per_sm));
  }
  if (res.shared_mem_per_block > hw.shared_mem_per_sm) {
    throw InfeasibleError("block needs " + std::to_string(res.shared_mem_per_block) +
                          " bytes of shared memory but an SM has " +
                          std::to_string(hw.shared_mem_per_sm));
  }
  if (regs_per_block > 0) out.register_limit = hw.registers_per_sm / regs_per_block;
  if (res.shared_mem_per_block > 0) {
    out.shared_mem_limit = hw.shared_mem_per_sm / res.shared_mem_per_block;
  }

  out.blocks_per_sm = out.hardware_limit;
  out.limited_by = LimitingFactor::kMaxBlocks;
  if (out.shared_mem_limit && *out.shared_mem_limit <= out.blocks_per_sm) {
    out.blocks_per_sm = *out.shared_mem_limit;
    out.limited_by = LimitingFactor::kSharedMemory;
  }
  if (out.register_limit && *out.register_limit <= out.blocks_per_sm) {
    out.blocks_per_sm = *out.register_limit;
    out.limited_by = LimitingFactor::kRegisters;
  }
  return out;
}

WaveReport wave_report(std::size_t grid, const HardwareProfile& hw,
                       std::size_t blocks_per_sm) {
  if (grid == 0) throw ConfigError("wave_report: grid must be >= 1");
  if (blocks_per_sm == 0) throw ConfigError("wave_report: blocks_per_sm must be >= 1");
  if (hw.sm_count == 0) throw ConfigError("wave_report: profile has no SMs");
  WaveReport r;
  r.grid = grid;
  r.blocks_per_wave = hw.sm_count * blocks_per_sm;
  r.full_waves = grid / r.blocks_per_wave;
  r.tail_blocks = grid % r.blocks_per_wave;
  r.tail_utilization =
      r.tail_blocks > 0
          ? static_cast<double>(r.tail_blocks) / static_cast<double>(r.blocks_per_wave)
          : 1.0;
  r.waves_total = r.full_waves + (r.tail_blocks > 0 ? 1 : 0);
  return r;
}

namespace {

DecompositionReport describe(std::size_t m, std::size_t n, std::size_t k,
                             const gemm::KernelConfig& config,
                             const HardwareProfile& hw,
                             const std::optional<BlockResources>& resources) {
  DecompositionReport d;
  d.config = config;
  d.grid = gemm::grid_size(m, n, config);
  d.k_iterations = gemm::k_iterations(k, config);
  if (resources) {
    d.occupancy = occupancy_limit(*resources, hw);
    d.blocks_per_sm = d.occupancy->blocks_per_sm;
  }
  d.waves = wave_report(d.grid, hw, d.blocks_per_sm);
  return d;
}

}  // namespace

ComparisonReport compare_decompositions(
    std::size_t m, std::size_t n, std::size_t k,
    const gemm::KernelConfig& config_dp, const gemm::KernelConfig& config_splitk,
    const HardwareProfile& hw, const std::optional<BlockResources>& dp_resources,
    const std::optional<BlockResources>& splitk_resources) {
  if (config_dp.split_k != 1) {
    throw ConfigError("compare_decompositions: data-parallel config needs split_k == 1");
  }
  if (m == 0 || n == 0 || k == 0) {
    throw DimensionError("compare_decompositions: dimensions must be positive");
  }
  hw.validate();
  ComparisonReport r;
  r.data_parallel = describe(m, n, k, config_dp, hw, dp_resources);
  r.split_k = describe(m, n, k, config_splitk, hw, splitk_resources);
  r.grid_ratio = static_cast<double>(r.split_k.grid) /
                 static_cast<double>(r.data_parallel.grid);
  r.tail_utilization_delta =
      r.split_k.waves.tail_utilization - r.data_parallel.waves.tail_utilization;
  r.splitk_reduces_tail_waste =
      r.split_k.waves.tail_utilization >= r.data_parallel.waves.tail_utilization;
  return r;
}

}  // namespace splitkq::execmodel
