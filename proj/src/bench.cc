// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/bench.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>

#include "splitkq/error.h"
#include "splitkq/quant.h"

namespace splitkq::bench {

namespace {

struct Problem {
  DenseMatrix a;
  quant::PackedWeightMatrix b;
};

Problem make_problem(const Shape& shape, const BenchOptions& options) {
  if (shape.m == 0 || shape.n == 0 || shape.k == 0) {
    throw DimensionError("bench: shape dimensions must be positive");
  }
  const std::size_t group = std::min(options.group_size, shape.k);
  DenseMatrix a = DenseMatrix::random(shape.m, shape.k, options.seed);
  DenseMatrix w = DenseMatrix::random(shape.k, shape.n, options.seed + 1);
  return {std::move(a), quant::quantize_reference(w, group)};
}

template <typename Fn>
double median_latency(Fn&& fn, const BenchOptions& options) {
  using Clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < options.warmup; ++i) fn();
  std::vector<double> samples;
  samples.reserve(options.reps);
  for (std::size_t i = 0; i < options.reps; ++i) {
    const auto start = Clock::now();
    fn();
    samples.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  const double median = samples.size() % 2 == 1
                            ? samples[mid]
                            : 0.5 * (samples[mid - 1] + samples[mid]);
  // A timer tick of zero would make TFLOPS infinite.
  return std::max(median, 1e-9);
}

BenchRecord make_record(const Shape& shape, Method method, std::size_t split_k,
                        double latency, std::size_t reps) {
  BenchRecord r;
  r.m = shape.m;
  r.n = shape.n;
  r.k = shape.k;
  r.method = method;
  r.split_k = split_k;
  r.median_latency = latency;
  r.tflops = tflops(shape.m, shape.n, shape.k, latency);
  r.reps = reps;
  return r;
}

void check_options(const BenchOptions& options) {
  if (options.reps == 0) throw ConfigError("bench: reps must be >= 1");
  if (options.group_size == 0) throw ConfigError("bench: group_size must be >= 1");
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::kDataParallel ? "data_parallel" : "split_k";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "data_parallel") return Method::kDataParallel;
  if (text == "split_k") return Method::kSplitK;
  return std::nullopt;
}

double tflops(std::size_t m, std::size_t n, std::size_t k, double latency_s) {
  return 2.0 * static_cast<double>(m) * static_cast<double>(n) *
         static_cast<double>(k) / latency_s / 1e12;
}

float equivalence_tolerance(const DenseMatrix& result) {
  return 1e-3f * std::max(1.0f, result.max_abs());
}

std::vector<Shape> default_shapes(bool large) {
  std::vector<std::size_t> sizes = {512, 1024, 2048, 4096};
  if (large) {
    sizes.push_back(8192);
    sizes.push_back(16384);
  }
  std::vector<Shape> shapes;
  for (std::size_t m : {1u, 16u}) {
    for (std::size_t nk : sizes) shapes.push_back({m, nk, nk});
  }
  return shapes;
}

std::vector<BenchRecord> run_grid(std::span<const Shape> shapes,
                                  const gemm::KernelConfig& config,
                                  const BenchOptions& options) {
  if (shapes.empty()) throw ConfigError("run_grid: no shapes given");
  check_options(options);
  config.validate();
  const gemm::KernelConfig dp_config = config.data_parallel();

  std::vector<BenchRecord> records;
  records.reserve(2 * shapes.size());
  for (const Shape& shape : shapes) {
    const Problem p = make_problem(shape, options);
    const double dp_latency =
        median_latency([&] { (void)gemm::dp_gemm(p.a, p.b, dp_config); }, options);
    records.push_back(make_record(shape, Method::kDataParallel, 1, dp_latency,
                                  options.reps));
    const double sk_latency =
        median_latency([&] { (void)gemm::splitk_gemm(p.a, p.b, config); }, options);
    records.push_back(make_record(shape, Method::kSplitK, config.split_k,
                                  sk_latency, options.reps));
  }
  return records;
}

SpeedupTable speedup_table(std::span<const BenchRecord> records) {
  struct Pair {
    const BenchRecord* dp = nullptr;
    const BenchRecord* sk = nullptr;
  };
  std::map<Shape, Pair> pairs;
  for (const BenchRecord& r : records) {
    Pair& p = pairs[r.shape()];
    const BenchRecord*& slot = r.method == Method::kDataParallel ? p.dp : p.sk;
    if (slot != nullptr) {
      throw ConfigError("speedup_table: duplicate " + std::string(to_string(r.method)) +
                        " record for m=" + std::to_string(r.m) + " n=" +
                        std::to_string(r.n) + " k=" + std::to_string(r.k));
    }
    slot = &r;
  }

  SpeedupTable table;
  for (const auto& [shape, pair] : pairs) {
    if (pair.dp == nullptr || pair.sk == nullptr) {
      throw ConfigError("speedup_table: missing " +
                        std::string(pair.dp == nullptr ? "data_parallel" : "split_k") +
                        " record for m=" + std::to_string(shape.m) + " n=" +
                        std::to_string(shape.n) + " k=" + std::to_string(shape.k));
    }
    table.rows.push_back({shape, pair.sk->tflops, pair.dp->tflops,
                          pair.sk->tflops / pair.dp->tflops});
  }
  if (!table.rows.empty()) {
    double sum = 0.0;
    for (const SpeedupRow& row : table.rows) sum += row.speedup;
    table.mean_speedup = sum / static_cast<double>(table.rows.size());
    table.average_gain = table.mean_speedup - 1.0;
  }
  return table;
}

SweepReport sweep_splitk(const Shape& shape, std::span<const std::size_t> split_values,
                         const gemm::KernelConfig& config,
                         const BenchOptions& options) {
  if (split_values.empty()) throw ConfigError("sweep_splitk: no split values given");
  check_options(options);
  const Problem p = make_problem(shape, options);
  const DenseMatrix expected = gemm::oracle_gemm(p.a, quant::dequantize(p.b));

  SweepReport report;
  report.all_correct = true;
  double best_tflops = -1.0;
  for (std::size_t split : split_values) {
    if (split == 0) throw ConfigError("sweep_splitk: split values must be >= 1");
    gemm::KernelConfig point_config = config;
    point_config.split_k = split;
    point_config.validate();

    const DenseMatrix result = gemm::splitk_gemm(p.a, p.b, point_config);
    SweepPoint point;
    point.max_error = max_abs_diff(result, expected);
    point.tolerance = equivalence_tolerance(result);
    point.correct = point.max_error <= point.tolerance;
    report.all_correct = report.all_correct && point.correct;

    const double latency = median_latency(
        [&] { (void)gemm::splitk_gemm(p.a, p.b, point_config); }, options);
    point.record = make_record(shape, Method::kSplitK, split, latency, options.reps);
    if (point.record.tflops > best_tflops) {
      best_tflops = point.record.tflops;
      report.best_split_k = split;
    }
    report.points.push_back(point);
  }
  return report;
}

}  // namespace splitkq::bench
