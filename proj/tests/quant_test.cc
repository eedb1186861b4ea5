// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/quant.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "splitkq/error.h"
#include "test_util.h"

namespace splitkq::quant {
namespace {

// Layout oracle: nibble t of a word holds the value at k index 8i + t.
std::uint32_t assemble_word(const std::array<std::uint8_t, 8>& column) {
  std::uint32_t word = 0;
  for (unsigned t = 0; t < 8; ++t) word += std::uint32_t{column[t]} * (1u << (4 * t));
  return word;
}

Int4Matrix column_matrix(const std::array<std::uint8_t, 8>& column) {
  return Int4Matrix(8, 1, std::vector<std::uint8_t>(column.begin(), column.end()));
}

TEST(Pack, NibbleOrderMatchesLayoutOracle) {
  const std::array<std::uint8_t, 8> column = {1, 2, 3, 4, 5, 6, 7, 8};
  ASSERT_EQ(assemble_word(column), 0x87654321u);
  const auto p = pack_int4(column_matrix(column), uniform_params(8, 1, 8, 1.0f, 0));
  ASSERT_EQ(p.words().size(), 1u);
  EXPECT_EQ(p.word(0, 0), 0x87654321u);
}

TEST(Pack, AllZero) {
  const auto p = pack_int4(Int4Matrix(8, 1), uniform_params(8, 1, 8, 1.0f, 0));
  EXPECT_EQ(p.word(0, 0), 0u);
}

TEST(Pack, RandomColumnsAgreeWithOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> nibble(0, 15);
  const std::size_t k = 32, n = 5;
  Int4Matrix q(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = static_cast<std::uint8_t>(nibble(rng));
  const auto p = pack_int4(q, uniform_params(k, n, 8, 1.0f, 0));
  for (std::size_t w = 0; w < k / 8; ++w) {
    for (std::size_t j = 0; j < n; ++j) {
      std::array<std::uint8_t, 8> column{};
      for (std::size_t t = 0; t < 8; ++t) column[t] = q(8 * w + t, j);
      EXPECT_EQ(p.word(w, j), assemble_word(column)) << "word " << w << ", col " << j;
    }
  }
}

TEST(Unpack, KnownWords) {
  const auto params = uniform_params(8, 2, 8, 1.0f, 0);
  const PackedWeightMatrix p(8, 2, {0x87654321u, 0xFFFFFFFFu}, params);
  const Int4Matrix q = unpack_int4(p);
  for (std::size_t t = 0; t < 8; ++t) {
    EXPECT_EQ(q(t, 0), t + 1);
    EXPECT_EQ(q(t, 1), 15);
  }
}

TEST(PackProperty, RoundTripOverRandomWords) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 8 * (1 + rng() % 4);
    const std::size_t n = 1 + rng() % 4;
    std::vector<std::uint32_t> words((k / 8) * n);
    for (auto& w : words) w = static_cast<std::uint32_t>(rng());
    const PackedWeightMatrix p(k, n, words, uniform_params(k, n, k, 1.0f, 0));
    const Int4Matrix q = unpack_int4(p);
    for (std::uint8_t v : q.values()) ASSERT_LE(v, 15);
    ASSERT_EQ(pack_int4(q, p.params()), p) << "trial " << trial;
  }
}

TEST(Pack, RejectsBadDimensionsAndValues) {
  EXPECT_THROW(pack_int4(Int4Matrix(12, 1), uniform_params(12, 1, 12, 1.0f, 0)),
               DimensionError);
  // Params sized for a different n.
  EXPECT_THROW(pack_int4(Int4Matrix(8, 2), uniform_params(8, 1, 8, 1.0f, 0)),
               DimensionError);
  EXPECT_THROW(Int4Matrix(8, 1, std::vector<std::uint8_t>{0, 1, 2, 16, 0, 0, 0, 0}),
               DomainError);
  Int4Matrix q(8, 1);
  q(3, 0) = 200;
  EXPECT_THROW(pack_int4(q, uniform_params(8, 1, 8, 1.0f, 0)), DomainError);
}

TEST(QuantParams, Validation) {
  QuantParams p = uniform_params(16, 2, 8, 0.5f, 3);
  EXPECT_NO_THROW(p.validate(16, 2));
  EXPECT_THROW(p.validate(24, 2), DimensionError);  // 3 groups expected
  EXPECT_THROW(p.validate(12, 2), DimensionError);  // 8 does not divide 12

  QuantParams bad_zero = p;
  bad_zero.zeros[1] = 16;
  EXPECT_THROW(bad_zero.validate(16, 2), DomainError);
  QuantParams bad_scale = p;
  bad_scale.scales[0] = 0.0f;
  EXPECT_THROW(bad_scale.validate(16, 2), DomainError);
  bad_scale.scales[0] = std::nanf("");
  EXPECT_THROW(bad_scale.validate(16, 2), DomainError);
  bad_scale.scales[0] = -1.0f;
  EXPECT_THROW(bad_scale.validate(16, 2), DomainError);
}

TEST(Dequantize, ShiftCancelsWhenQEqualsZero) {
  Int4Matrix q(16, 3);
  QuantParams params = uniform_params(16, 3, 8, 1.0f, 0);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 3; ++j) q(i, j) = static_cast<std::uint8_t>((i / 8 + 5 * j) % 16);
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t j = 0; j < 3; ++j) {
      params.zeros[g * 3 + j] = static_cast<std::uint8_t>((g + 5 * j) % 16);
      params.scales[g * 3 + j] = 0.37f + static_cast<float>(g + j);
    }
  }
  const DenseMatrix d = dequantize(pack_int4(q, params));
  EXPECT_EQ(d.max_abs(), 0.0f);
}

TEST(Dequantize, SingleElementArithmetic) {
  Int4Matrix q(8, 1);
  q(0, 0) = 3;
  const DenseMatrix d = dequantize(pack_int4(q, uniform_params(8, 1, 8, 2.0f, 1)));
  EXPECT_EQ(d(0, 0), 4.0f);
  EXPECT_EQ(d(1, 0), -2.0f);
}

TEST(Dequantize, AllFifteenWordOverScaleAndZeroGrid) {
  int combos = 0;
  for (int zi = 0; zi < 16; ++zi) {
    for (int si = 0; si < 16; ++si) {
      const float s = 0.125f * static_cast<float>(si + 1);
      const auto params = uniform_params(8, 1, 8, s, static_cast<std::uint8_t>(zi));
      const DenseMatrix d = dequantize(PackedWeightMatrix(8, 1, {0xFFFFFFFFu}, params));
      for (std::size_t t = 0; t < 8; ++t) {
        ASSERT_EQ(d(t, 0), s * static_cast<float>(15 - zi));
      }
      ++combos;
    }
  }
  EXPECT_EQ(combos, 256);
}

TEST(Dequantize, InvariantUnderRepack) {
  const auto p = testing::random_packed(64, 9, 16, 3);
  const auto repacked = pack_int4(unpack_int4(p), p.params());
  EXPECT_TRUE(bitwise_equal(dequantize(p), dequantize(repacked)));
}

TEST(DequantizeTile, MatchesFullDequantizeWithMasking) {
  const auto p = testing::random_packed(40, 13, 8, 11);
  const DenseMatrix full = dequantize(p);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k0 = rng() % 48;
    const std::size_t n0 = rng() % 16;
    const std::size_t kc = 1 + rng() % 20;
    const std::size_t nc = 1 + rng() % 20;
    std::vector<float> tile(kc * nc, 99.0f);
    dequantize_tile(p, k0, kc, n0, nc, tile, nc);
    for (std::size_t r = 0; r < kc; ++r) {
      for (std::size_t c = 0; c < nc; ++c) {
        const bool inside = k0 + r < p.k() && n0 + c < p.n();
        const float expected = inside ? full(k0 + r, n0 + c) : 0.0f;
        ASSERT_EQ(tile[r * nc + c], expected) << "trial " << trial;
      }
    }
  }
}

TEST(DequantizeTile, RejectsShortBuffer) {
  const auto p = testing::random_packed(8, 4, 8, 1);
  std::vector<float> tile(7);
  EXPECT_THROW(dequantize_tile(p, 0, 2, 0, 4, tile, 4), DimensionError);
}

TEST(QuantizeReference, ConstantZero) {
  const DenseMatrix w(16, 4);
  const auto p = quantize_reference(w, 8);
  const Int4Matrix q = unpack_int4(p);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(q(i, j), p.zero(i / 8, j));
  EXPECT_EQ(dequantize(p).max_abs(), 0.0f);
}

TEST(QuantizeReference, SymmetricEndpoints) {
  std::vector<float> values(8);
  for (std::size_t i = 0; i < 8; ++i) values[i] = i % 2 == 0 ? -1.0f : 1.0f;
  const auto p = quantize_reference(DenseMatrix(8, 1, values), 8);
  const float scale = p.scale(0, 0);
  EXPECT_FLOAT_EQ(scale, 2.0f / 15.0f);
  const DenseMatrix d = dequantize(p);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_LE(std::fabs(d(i, 0) - values[i]), scale / 2 * (1 + 1e-6f));
  }
}

TEST(QuantizeReference, ErrorWithinHalfScalePerGroup) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t k = 64 + 64 * (seed % 3);
    const std::size_t group = seed % 2 == 0 ? 32 : 64;
    const DenseMatrix w = DenseMatrix::random(k, 24, seed);
    const auto p = quantize_reference(w, group);
    const DenseMatrix d = dequantize(p);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) {
        const float bound = p.scale(i / group, j) / 2 * (1 + 1e-5f);
        ASSERT_LE(std::fabs(w(i, j) - d(i, j)), bound)
            << "seed " << seed << " at (" << i << ", " << j << ")";
      }
    }
  }
}

TEST(QuantizeReference, OneSidedRangesStayWithinBound) {
  // All-positive and all-negative groups: the range is widened to include 0.
  const DenseMatrix pos = DenseMatrix::random(16, 3, 9, 0.5f, 1.0f);
  const DenseMatrix neg = DenseMatrix::random(16, 3, 10, -1.0f, -0.5f);
  for (const DenseMatrix* w : {&pos, &neg}) {
    const auto p = quantize_reference(*w, 8);
    const DenseMatrix d = dequantize(p);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        EXPECT_LE(std::fabs((*w)(i, j) - d(i, j)), p.scale(i / 8, j) / 2 * (1 + 1e-5f));
  }
}

TEST(QuantizeReference, DimensionErrors) {
  EXPECT_THROW(quantize_reference(DenseMatrix(16, 2), 6), DimensionError);
  EXPECT_THROW(quantize_reference(DenseMatrix(12, 2), 4), DimensionError);
  EXPECT_THROW(quantize_reference(DenseMatrix(16, 2), 0), DimensionError);
}

}  // namespace
}  // namespace splitkq::quant
