// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "splitkq/quant.h"

namespace splitkq::testing {

// Random int4 matrix with random valid params.
inline quant::PackedWeightMatrix random_packed(std::size_t k, std::size_t n,
                                               std::size_t group_size,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nibble(0, 15);
  std::uniform_real_distribution<float> scale(0.01f, 0.2f);
  quant::Int4Matrix q(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) q(i, j) = static_cast<std::uint8_t>(nibble(rng));
  }
  quant::QuantParams params;
  params.group_size = group_size;
  for (std::size_t i = 0; i < (k / group_size) * n; ++i) {
    params.scales.push_back(scale(rng));
    params.zeros.push_back(static_cast<std::uint8_t>(nibble(rng)));
  }
  return quant::pack_int4(q, std::move(params));
}

// Packed matrix whose every element dequantizes to `value` (q = value,
// zero = 0, scale = 1). value must be in [0, 15].
inline quant::PackedWeightMatrix constant_packed(std::size_t k, std::size_t n,
                                                 std::uint8_t value) {
  quant::Int4Matrix q(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) q(i, j) = value;
  }
  return quant::pack_int4(q, quant::uniform_params(k, n, k, 1.0f, 0));
}

}  // namespace splitkq::testing
