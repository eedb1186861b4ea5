// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "splitkq/gemm.h"

namespace splitkq::bench {

enum class Method { kDataParallel, kSplitK };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view text);

struct Shape {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;

  friend auto operator<=>(const Shape&, const Shape&) = default;
};

struct BenchRecord {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  Method method = Method::kSplitK;
  std::size_t split_k = 1;
  double median_latency = 0.0;  // seconds
  double tflops = 0.0;
  std::size_t reps = 0;

  Shape shape() const { return {m, n, k}; }
};

/// 2 * m * n * k / latency / 1e12.
double tflops(std::size_t m, std::size_t n, std::size_t k, double latency_s);

struct BenchOptions {
  std::size_t reps = 5;
  std::size_t warmup = 2;
  std::uint64_t seed = 42;
  std::size_t group_size = 128;  // clamped to k for small problems
};

/// m in {1, 16} crossed with n = k in {512, 1024, 2048, 4096}; `large` adds
/// 8192 and 16384.
std::vector<Shape> default_shapes(bool large = false);

/// Times dp_gemm and splitk_gemm once per shape (in that order). Inputs are
/// uniform in [-1, 1) from `options.seed`; B is quantized with
/// quantize_reference.
std::vector<BenchRecord> run_grid(std::span<const Shape> shapes,
                                  const gemm::KernelConfig& config,
                                  const BenchOptions& options = {});

struct SpeedupRow {
  Shape shape;
  double splitk_tflops = 0.0;
  double dp_tflops = 0.0;
  double speedup = 0.0;  // splitk_tflops / dp_tflops
};

struct SpeedupTable {
  std::vector<SpeedupRow> rows;  // sorted by shape
  double mean_speedup = 0.0;     // arithmetic mean of per-shape ratios
  double average_gain = 0.0;     // mean_speedup - 1
};

/// Pairs one data-parallel and one split-k record per shape. Throws
/// ConfigError when a shape lacks either method or has duplicates.
SpeedupTable speedup_table(std::span<const BenchRecord> records);

struct SweepPoint {
  BenchRecord record;
  float max_error = 0.0f;  // vs oracle_gemm(a, dequantize(b))
  float tolerance = 0.0f;
  bool correct = false;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::size_t best_split_k = 0;  // argmax tflops, first on ties
  bool all_correct = false;
};

/// Runs splitk_gemm at each split value with all other config fields fixed,
/// timing each point and checking its result against the oracle.
SweepReport sweep_splitk(const Shape& shape, std::span<const std::size_t> split_values,
                         const gemm::KernelConfig& config,
                         const BenchOptions& options = {});

/// Elementwise tolerance for fused results: 1e-3 * max(1, maxabs(result)).
float equivalence_tolerance(const DenseMatrix& result);

}  // namespace splitkq::bench
