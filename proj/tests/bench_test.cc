// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/bench.h"

#include <gtest/gtest.h>

#include <sstream>

#include "splitkq/csv.h"
#include "splitkq/error.h"

namespace splitkq::bench {
namespace {

BenchRecord record(std::size_t m, std::size_t nk, Method method, double latency) {
  BenchRecord r;
  r.m = m;
  r.n = nk;
  r.k = nk;
  r.method = method;
  r.split_k = method == Method::kSplitK ? 4 : 1;
  r.median_latency = latency;
  r.tflops = tflops(m, nk, nk, latency);
  r.reps = 5;
  return r;
}

gemm::KernelConfig small_config(std::size_t split) {
  gemm::KernelConfig c;
  c.split_k = split;
  c.workers = 2;
  return c;
}

TEST(Tflops, Formula) {
  EXPECT_DOUBLE_EQ(tflops(1, 512, 512, 1e-5), 2.0 * 512 * 512 / 1e-5 / 1e12);
  EXPECT_DOUBLE_EQ(tflops(16, 4096, 4096, 27.90e-6), 2.0 * 16 * 4096 * 4096 / 27.90e-6 / 1e12);
}

TEST(DefaultShapes, Grid) {
  const auto shapes = default_shapes();
  ASSERT_EQ(shapes.size(), 8u);
  EXPECT_EQ(shapes.front(), (Shape{1, 512, 512}));
  EXPECT_EQ(shapes.back(), (Shape{16, 4096, 4096}));
  EXPECT_EQ(default_shapes(true).size(), 12u);
}

TEST(RunGrid, OneRecordPerShapeAndMethod) {
  const std::vector<Shape> shapes = {{1, 64, 64}, {4, 128, 128}, {16, 64, 128}};
  BenchOptions options;
  options.reps = 3;
  options.warmup = 1;
  const auto records = run_grid(shapes, small_config(4), options);
  ASSERT_EQ(records.size(), 6u);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    EXPECT_EQ(records[2 * i].shape(), shapes[i]);
    EXPECT_EQ(records[2 * i].method, Method::kDataParallel);
    EXPECT_EQ(records[2 * i].split_k, 1u);
    EXPECT_EQ(records[2 * i + 1].method, Method::kSplitK);
    EXPECT_EQ(records[2 * i + 1].split_k, 4u);
  }
  for (const auto& r : records) {
    EXPECT_EQ(r.reps, 3u);
    EXPECT_GT(r.median_latency, 0.0);
    EXPECT_DOUBLE_EQ(r.tflops, tflops(r.m, r.n, r.k, r.median_latency));
  }
}

TEST(RunGrid, Errors) {
  EXPECT_THROW(run_grid({}, small_config(4)), ConfigError);
  const std::vector<Shape> shapes = {{1, 64, 64}};
  BenchOptions zero_reps;
  zero_reps.reps = 0;
  EXPECT_THROW(run_grid(shapes, small_config(4), zero_reps), ConfigError);
  const std::vector<Shape> bad = {{1, 64, 60}};
  EXPECT_THROW(run_grid(bad, small_config(4)), DimensionError);
}

TEST(RunGrid, DegenerateSplitTimesLikeDataParallel) {
  // Same work on both paths; allow 20% timing noise. Retried because a busy
  // host can disturb one sample set.
  const std::vector<Shape> shapes = {{16, 1024, 1024}};
  BenchOptions options;
  options.reps = 9;
  options.warmup = 2;
  double ratio = 0.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto records = run_grid(shapes, small_config(1), options);
    ratio = records[1].tflops / records[0].tflops;
    if (ratio > 0.8 && ratio < 1.2) break;
  }
  EXPECT_GT(ratio, 0.8);
  EXPECT_LT(ratio, 1.2);
}

TEST(SpeedupTable, PublishedRatios) {
  // Pairs built from published TFLOPS: the ratio is latency-independent.
  auto pair_from_tflops = [](std::size_t m, std::size_t nk, double sk, double dp) {
    BenchRecord a = record(m, nk, Method::kSplitK, 1.0);
    BenchRecord b = record(m, nk, Method::kDataParallel, 1.0);
    a.tflops = sk;
    b.tflops = dp;
    return std::vector<BenchRecord>{a, b};
  };
  auto h100_m1 = pair_from_tflops(1, 4096, 2.25, 1.36);
  EXPECT_NEAR(speedup_table(h100_m1).rows[0].speedup, 1.654, 5e-4);
  auto h100_m16 = pair_from_tflops(16, 1024, 1.4, 0.2);
  EXPECT_NEAR(speedup_table(h100_m16).rows[0].speedup, 7.0, 1e-9);
}

TEST(SpeedupTable, EqualTflopsAndAverage) {
  std::vector<BenchRecord> records = {
      record(1, 512, Method::kDataParallel, 2e-3), record(1, 512, Method::kSplitK, 2e-3),
      record(1, 1024, Method::kDataParallel, 4e-3), record(1, 1024, Method::kSplitK, 1e-3)};
  const SpeedupTable t = speedup_table(records);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(t.rows[0].speedup, 1.0);
  EXPECT_DOUBLE_EQ(t.rows[1].speedup, 4.0);
  EXPECT_DOUBLE_EQ(t.mean_speedup, 2.5);
  EXPECT_DOUBLE_EQ(t.average_gain, 1.5);
}

TEST(SpeedupTable, ScaleInvariant) {
  std::vector<BenchRecord> records;
  double latency = 1.3e-4;
  for (std::size_t nk : {512u, 1024u, 2048u}) {
    records.push_back(record(16, nk, Method::kDataParallel, latency));
    records.push_back(record(16, nk, Method::kSplitK, latency * 0.61));
    latency *= 3.7;
  }
  const SpeedupTable base = speedup_table(records);
  for (double scale : {0.001, 0.5, 7.0, 1e4}) {
    std::vector<BenchRecord> scaled = records;
    for (auto& r : scaled) {
      r.median_latency *= scale;
      r.tflops = tflops(r.m, r.n, r.k, r.median_latency);
    }
    const SpeedupTable t = speedup_table(scaled);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      EXPECT_NEAR(t.rows[i].speedup, base.rows[i].speedup, 1e-12);
    }
  }
}

TEST(SpeedupTable, PairingErrors) {
  std::vector<BenchRecord> missing = {record(1, 512, Method::kDataParallel, 1e-3)};
  EXPECT_THROW(speedup_table(missing), ConfigError);
  std::vector<BenchRecord> dup = {record(1, 512, Method::kDataParallel, 1e-3),
                                  record(1, 512, Method::kSplitK, 1e-3),
                                  record(1, 512, Method::kSplitK, 2e-3)};
  EXPECT_THROW(speedup_table(dup), ConfigError);
}

TEST(Sweep, SingleValue) {
  const std::vector<std::size_t> splits = {1};
  BenchOptions options;
  options.reps = 1;
  options.warmup = 0;
  const auto report = sweep_splitk({4, 128, 128}, splits, small_config(4), options);
  ASSERT_EQ(report.points.size(), 1u);
  EXPECT_EQ(report.best_split_k, 1u);
  EXPECT_TRUE(report.all_correct);
}

TEST(Sweep, EveryPointRevalidated) {
  const std::vector<std::size_t> splits = {1, 2, 4, 8, 16};
  BenchOptions options;
  options.reps = 1;
  options.warmup = 0;
  const auto report = sweep_splitk({16, 256, 256}, splits, small_config(4), options);
  ASSERT_EQ(report.points.size(), 5u);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    EXPECT_EQ(report.points[i].record.split_k, splits[i]);
    EXPECT_TRUE(report.points[i].correct);
    EXPECT_LE(report.points[i].max_error, report.points[i].tolerance);
  }
  EXPECT_TRUE(report.all_correct);
  EXPECT_NE(std::find(splits.begin(), splits.end(), report.best_split_k), splits.end());
}

TEST(Sweep, Errors) {
  const std::vector<std::size_t> none;
  EXPECT_THROW(sweep_splitk({1, 64, 64}, none, small_config(4)), ConfigError);
  const std::vector<std::size_t> zero = {0};
  EXPECT_THROW(sweep_splitk({1, 64, 64}, zero, small_config(4)), ConfigError);
}

TEST(Csv, WritesPairedSpeedupsAndParsesBack) {
  std::vector<BenchRecord> records = {
      record(1, 512, Method::kDataParallel, 2e-5), record(1, 512, Method::kSplitK, 1e-5),
      record(16, 512, Method::kSplitK, 3e-5)};
  std::stringstream ss;
  csv::write_bench_csv(ss, records, "host");
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), csv::kBenchHeader);
  EXPECT_NE(text.find("host,1,512,512,data_parallel,1,20.000,0.02621,2\n"), std::string::npos)
      << text;
  EXPECT_NE(text.find("host,16,512,512,split_k,4,30.000,0.2796,\n"), std::string::npos)
      << text;

  const auto rows = csv::parse_bench_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].speedup, 2.0);
  EXPECT_EQ(rows[1].speedup, 2.0);
  EXPECT_FALSE(rows[2].speedup.has_value());
  EXPECT_EQ(rows[1].record.method, Method::kSplitK);
  EXPECT_NEAR(rows[0].record.median_latency, 2e-5, 1e-12);
}

TEST(Csv, ParserRejectsMalformedInput) {
  std::istringstream bad_header("m,n,k\n");
  EXPECT_THROW(csv::parse_bench_csv(bad_header), FormatError);
  std::istringstream bad_method(std::string(csv::kBenchHeader) +
                                "\nhost,1,2,3,blocked,1,1.0,1.0,\n");
  EXPECT_THROW(csv::parse_bench_csv(bad_method), FormatError);
  std::istringstream short_row(std::string(csv::kBenchHeader) + "\nhost,1,2,3\n");
  EXPECT_THROW(csv::parse_bench_csv(short_row), FormatError);
  std::istringstream bad_number(std::string(csv::kBenchHeader) +
                                "\nhost,1,2,x,split_k,1,1.0,1.0,\n");
  EXPECT_THROW(csv::parse_bench_csv(bad_number), FormatError);
}

}  // namespace
}  // namespace splitkq::bench
