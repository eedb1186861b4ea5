// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

// Fused dequantize + GEMM, C (m x n) = A (m x k) * dequant(B) (k x n).
//
// Both decompositions tile C into block_m x block_n output tiles and walk k
// in block_k steps, dequantizing each packed B tile on the fly.
//
//   data parallel  one task per output tile, covering all of k; the task is
//                  the only writer of its tile.
//   split-k        split_k tasks per output tile. Task (pid, pid_k) visits
//                  k tiles pid_k, pid_k + split_k, pid_k + 2 * split_k, ...
//                  and atomically adds its partial sum into the zeroed C.
//
// With split_k > 1 the order in which partials land in C depends on the
// schedule, so results agree with the oracle to rounding, not bitwise.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "splitkq/dense_matrix.h"
#include "splitkq/parallel.h"
#include "splitkq/quant.h"

namespace splitkq::gemm {

struct KernelConfig {
  std::size_t block_m = 16;
  std::size_t block_n = 32;
  std::size_t block_k = 64;
  std::size_t split_k = 4;
  unsigned workers = default_workers();

  /// Same tiles and workers with split_k = 1.
  KernelConfig data_parallel() const;

  /// Throws ConfigError when any field is zero.
  void validate() const;
};

/// One thread block's worth of work.
struct BlockTask {
  std::size_t pid = 0;
  std::size_t pid_k = 0;
  std::size_t offs_m = 0;
  std::size_t offs_n = 0;
  std::size_t offs_k = 0;

  friend bool operator==(const BlockTask&, const BlockTask&) = default;
};

/// Counters filled in by a fused run when requested through RunOptions.
struct GemmStats {
  std::size_t tasks = 0;
  std::size_t k_iterations = 0;
  // Number of B elements passed through dequantization (padding included).
  std::size_t dequantized_elements = 0;
  // Largest dequantized B buffer any task holds at once, in elements.
  std::size_t max_dequant_buffer = 0;
};

struct RunOptions {
  // Permutation of [0, grid_size) giving the order tasks are handed out.
  // Empty means natural order.
  std::span<const std::size_t> task_order = {};
  GemmStats* stats = nullptr;
};

inline constexpr std::size_t ceil_div(std::size_t a, std::size_t b) {
  return (a + b - 1) / b;
}

/// Reference product: double-precision accumulation in increasing k order,
/// single-threaded, rounded to float at the end.
DenseMatrix oracle_gemm(const DenseMatrix& a, const DenseMatrix& b);

/// Tile offsets for task (pid, pid_k); output tiles are ordered row-major.
BlockTask compute_offsets(std::size_t pid, std::size_t pid_k, std::size_t m,
                          std::size_t n, const KernelConfig& config);

/// Number of thread blocks: ceil(m / block_m) * ceil(n / block_n) * split_k.
std::size_t grid_size(std::size_t m, std::size_t n, const KernelConfig& config);

/// Iterations of each task's k loop: ceil(k / (block_k * split_k)).
std::size_t k_iterations(std::size_t k, const KernelConfig& config);

/// Data-parallel fused GEMM. Requires config.split_k == 1.
DenseMatrix dp_gemm(const DenseMatrix& a, const quant::PackedWeightMatrix& b,
                    const KernelConfig& config, const RunOptions& options = {});

/// Split-k fused GEMM with atomic accumulation into the output.
DenseMatrix splitk_gemm(const DenseMatrix& a, const quant::PackedWeightMatrix& b,
                        const KernelConfig& config,
                        const RunOptions& options = {});

}  // namespace splitkq::gemm
