// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/fixtures.h"

#include <gtest/gtest.h>

#include <set>

#include "splitkq/error.h"

namespace splitkq::fixtures {
namespace {

const CheckedRow& find(const FixtureReport& r, std::string_view gpu, std::size_t m,
                       std::size_t nk) {
  for (const auto& row : r.rows) {
    if (row.gpu == gpu && row.m == m && row.n == nk) return row;
  }
  throw std::runtime_error("row not found");
}

TEST(Fixtures, Complete) {
  const auto fx = published_fixtures();
  ASSERT_EQ(fx.size(), 6u);
  std::set<std::pair<std::string_view, std::size_t>> seen;
  for (const auto& f : fx) {
    seen.insert({f.gpu, f.m});
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
      EXPECT_EQ(f.rows[i].n, 512u << i);
      EXPECT_EQ(f.rows[i].n, f.rows[i].k);
    }
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(validate_fixtures().rows.size(), 36u);
}

TEST(Fixtures, SpotValues) {
  const auto fx = published_fixtures();
  EXPECT_EQ(fx[0].rows[0].splitk_tflops, 0.01);
  EXPECT_EQ(fx[0].rows[0].dp_tflops, 0.07);
  EXPECT_EQ(fx[2].rows[3].splitk_tflops, 2.25);
  EXPECT_EQ(fx[2].rows[3].dp_tflops, 1.36);
  EXPECT_EQ(fx[4].rows[5].splitk_tflops, 20.0);
  EXPECT_EQ(fx[4].rows[5].dp_tflops, 15.3);
  EXPECT_EQ(fx[5].rows[1].splitk_tflops, 1.4);
  EXPECT_EQ(fx[5].rows[1].dp_tflops, 0.2);
}

TEST(Fixtures, RecomputedRatios) {
  const auto r = validate_fixtures();
  EXPECT_NEAR(find(r, "a100-40", 16, 512).gain_pct, 200.0, 1e-9);
  EXPECT_NEAR(find(r, "a100-80", 1, 512).speedup, 2.0, 1e-12);
  EXPECT_NEAR(find(r, "h100", 1, 4096).speedup, 1.654, 5e-4);
  EXPECT_NEAR(find(r, "h100", 16, 1024).speedup, 7.0, 0.01);
  EXPECT_NEAR(find(r, "a100-80", 1, 1024).gain_pct, 0.0, 1e-12);
}

TEST(Fixtures, MaxGainRowAndPeakReadings) {
  const auto r = validate_fixtures();
  EXPECT_EQ(r.max_gain_row.gpu, "h100");
  EXPECT_EQ(r.max_gain_row.m, 16u);
  EXPECT_EQ(r.max_gain_row.n, 1024u);
  EXPECT_TRUE(r.peak_claim_supported);
  // 1.85 / 0.62 = 2.98x is the only row near a 2.95x ratio.
  EXPECT_EQ(r.closest_to_peak_as_ratio.gpu, "h100");
  EXPECT_EQ(r.closest_to_peak_as_ratio.n, 2048u);
  EXPECT_EQ(r.closest_to_peak_as_ratio.m, 1u);
}

TEST(Fixtures, ProfilerCaseAndDiscrepancy) {
  const auto& pc = profiler_case();
  EXPECT_EQ(pc.split_k.grid_size, 512u);
  EXPECT_EQ(pc.data_parallel.grid_size, 128u);
  EXPECT_EQ(pc.split_k.block_limit_registers, 5u);
  EXPECT_EQ(pc.data_parallel.block_limit_registers, 3u);
  EXPECT_EQ(pc.split_k.block_limit_smem, 5u);
  EXPECT_EQ(pc.data_parallel.block_limit_smem, 2u);
  EXPECT_EQ(pc.split_k.latency_us, 27.90);

  const auto r = validate_fixtures();
  EXPECT_NEAR(r.profiler_implied_tflops, 19.24, 0.01);
  EXPECT_EQ(r.table_tflops_same_shape, 4.5);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Fixtures, MeansPerTable) {
  const auto r = validate_fixtures();
  ASSERT_EQ(r.means.size(), 6u);
  for (const auto& mean : r.means) EXPECT_GT(mean.mean_speedup, 0.0);
}

TEST(Fixtures, IntegrityFailures) {
  std::vector<PaperFixture> fx(published_fixtures().begin(), published_fixtures().end());
  std::vector<PaperFixture> five(fx.begin(), fx.begin() + 5);
  EXPECT_THROW(validate_fixtures(five), FixtureError);
  fx[3].rows[2].dp_tflops = 0.0;
  EXPECT_THROW(validate_fixtures(fx), FixtureError);
}

}  // namespace
}  // namespace splitkq::fixtures
