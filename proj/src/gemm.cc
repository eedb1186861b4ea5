// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/gemm.h"

#include <algorithm>
#include <atomic>
#include <string>
#include <vector>

#include "splitkq/error.h"
#include "splitkq/parallel.h"

namespace splitkq::gemm {

KernelConfig KernelConfig::data_parallel() const {
  KernelConfig dp = *this;
  dp.split_k = 1;
  return dp;
}

void KernelConfig::validate() const {
  if (block_m == 0 || block_n == 0 || block_k == 0) {
    throw ConfigError("kernel config: block sizes must be positive");
  }
  if (split_k == 0) throw ConfigError("kernel config: split_k must be >= 1");
  if (workers == 0) throw ConfigError("kernel config: workers must be >= 1");
}

DenseMatrix oracle_gemm(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("oracle_gemm: inner dimensions differ (" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + ")");
  }
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  const std::size_t n = b.cols();
  DenseMatrix c(m, n);
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      const double av = a(i, t);
      const auto brow = b.row(t);
      for (std::size_t j = 0; j < n; ++j) {
        acc[j] += av * static_cast<double>(brow[j]);
      }
    }
    for (std::size_t j = 0; j < n; ++j) c(i, j) = static_cast<float>(acc[j]);
  }
  return c;
}

std::size_t grid_size(std::size_t m, std::size_t n, const KernelConfig& config) {
  config.validate();
  return ceil_div(m, config.block_m) * ceil_div(n, config.block_n) *
         config.split_k;
}

std::size_t k_iterations(std::size_t k, const KernelConfig& config) {
  config.validate();
  return ceil_div(k, config.block_k * config.split_k);
}

BlockTask compute_offsets(std::size_t pid, std::size_t pid_k, std::size_t m,
                          std::size_t n, const KernelConfig& config) {
  config.validate();
  const std::size_t tiles_n = ceil_div(n, config.block_n);
  const std::size_t tiles = ceil_div(m, config.block_m) * tiles_n;
  if (pid >= tiles) {
    throw ConfigError("compute_offsets: pid " + std::to_string(pid) +
                      " out of range [0, " + std::to_string(tiles) + ")");
  }
  if (pid_k >= config.split_k) {
    throw ConfigError("compute_offsets: pid_k " + std::to_string(pid_k) +
                      " out of range [0, " + std::to_string(config.split_k) +
                      ")");
  }
  BlockTask task;
  task.pid = pid;
  task.pid_k = pid_k;
  task.offs_m = (pid / tiles_n) * config.block_m;
  task.offs_n = (pid % tiles_n) * config.block_n;
  task.offs_k = pid_k * config.block_k;
  return task;
}

namespace {

enum class Epilogue { kExclusiveStore, kAtomicAdd };

// Per-worker tiles, reused across the tasks a worker runs.
struct Scratch {
  std::vector<float> a;    // block_m x block_k
  std::vector<float> b;    // block_k x block_n
  std::vector<float> acc;  // block_m x block_n
};

// A tile load with out-of-range elements masked to zero.
void load_a_tile(const DenseMatrix& a, std::size_t m0, std::size_t k0,
                 std::size_t block_m, std::size_t block_k, std::span<float> dst) {
  std::fill(dst.begin(), dst.end(), 0.0f);
  const std::size_t rows = m0 < a.rows() ? std::min(block_m, a.rows() - m0) : 0;
  const std::size_t cols = k0 < a.cols() ? std::min(block_k, a.cols() - k0) : 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const float* src = a.row(m0 + i).data() + k0;
    std::copy(src, src + cols, dst.data() + i * block_k);
  }
}

// acc += a_tile * b_tile over the first `rows` rows of the A tile.
void dot_accumulate(std::span<const float> a_tile, std::span<const float> b_tile,
                    std::span<float> acc, std::size_t rows, std::size_t block_k,
                    std::size_t block_n) {
  for (std::size_t i = 0; i < rows; ++i) {
    float* __restrict out = acc.data() + i * block_n;
    const float* arow = a_tile.data() + i * block_k;
    for (std::size_t t = 0; t < block_k; ++t) {
      const float av = arow[t];
      const float* __restrict brow = b_tile.data() + t * block_n;
      for (std::size_t j = 0; j < block_n; ++j) out[j] += av * brow[j];
    }
  }
}

DenseMatrix fused_gemm(const DenseMatrix& a, const quant::PackedWeightMatrix& b,
                       const KernelConfig& config, const RunOptions& options,
                       Epilogue epilogue, const char* name) {
  config.validate();
  if (a.cols() != b.k()) {
    throw DimensionError(std::string(name) + ": a.cols = " +
                         std::to_string(a.cols()) + " but b.k = " +
                         std::to_string(b.k()));
  }
  const std::size_t m = a.rows();
  const std::size_t n = b.n();
  const std::size_t k = b.k();
  const std::size_t bm = config.block_m;
  const std::size_t bn = config.block_n;
  const std::size_t bk = config.block_k;
  const std::size_t tiles = ceil_div(m, bm) * ceil_div(n, bn);
  const std::size_t tasks = tiles * config.split_k;
  const std::size_t iters = k_iterations(k, config);
  const std::size_t k_stride = bk * config.split_k;

  DenseMatrix c(m, n);  // zero-initialized: partial sums are added into it
  std::vector<Scratch> scratch(std::min<std::size_t>(config.workers, tasks));
  for (Scratch& s : scratch) {
    s.a.resize(bm * bk);
    s.b.resize(bk * bn);
    s.acc.resize(bm * bn);
  }
  std::atomic<std::size_t> k_iter_count{0};
  std::atomic<std::size_t> dequant_count{0};

  auto run_block = [&](unsigned worker, std::size_t linear) {
    // Grid axis 0 (pid) varies fastest, axis 1 is pid_k.
    const BlockTask task =
        compute_offsets(linear % tiles, linear / tiles, m, n, config);
    Scratch& s = scratch[worker];
    std::fill(s.acc.begin(), s.acc.end(), 0.0f);
    const std::size_t rows = std::min(bm, m - task.offs_m);
    const std::size_t cols = std::min(bn, n - task.offs_n);

    std::size_t k0 = task.offs_k;
    for (std::size_t it = 0; it < iters; ++it) {
      load_a_tile(a, task.offs_m, k0, bm, bk, s.a);
      quant::dequantize_tile(b, k0, bk, task.offs_n, bn, s.b, bn);
      dot_accumulate(s.a, s.b, s.acc, rows, bk, bn);
      k0 += k_stride;
    }
    if (options.stats != nullptr) {
      k_iter_count.fetch_add(iters, std::memory_order_relaxed);
      dequant_count.fetch_add(iters * bk * bn, std::memory_order_relaxed);
    }

    for (std::size_t i = 0; i < rows; ++i) {
      auto crow = c.row(task.offs_m + i).subspan(task.offs_n, cols);
      const float* acc_row = s.acc.data() + i * bn;
      if (epilogue == Epilogue::kAtomicAdd) {
        for (std::size_t j = 0; j < cols; ++j) {
          std::atomic_ref<float>(crow[j]).fetch_add(acc_row[j],
                                                    std::memory_order_relaxed);
        }
      } else {
        for (std::size_t j = 0; j < cols; ++j) crow[j] += acc_row[j];
      }
    }
  };

  run_tasks(tasks, config.workers, options.task_order, run_block);

  if (options.stats != nullptr) {
    options.stats->tasks = tasks;
    options.stats->k_iterations = k_iter_count.load();
    options.stats->dequantized_elements = dequant_count.load();
    options.stats->max_dequant_buffer = bk * bn;
  }
  return c;
}

}  // namespace

DenseMatrix dp_gemm(const DenseMatrix& a, const quant::PackedWeightMatrix& b,
                    const KernelConfig& config, const RunOptions& options) {
  if (config.split_k != 1) {
    throw ConfigError("dp_gemm: split_k must be 1, got " +
                      std::to_string(config.split_k));
  }
  return fused_gemm(a, b, config, options, Epilogue::kExclusiveStore, "dp_gemm");
}

DenseMatrix splitk_gemm(const DenseMatrix& a, const quant::PackedWeightMatrix& b,
                        const KernelConfig& config, const RunOptions& options) {
  return fused_gemm(a, b, config, options, Epilogue::kAtomicAdd, "splitk_gemm");
}

}  // namespace splitkq::gemm
