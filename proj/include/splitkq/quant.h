// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

// GPTQ-style int4 weights: eight 4-bit values per 32-bit word, packed along k
// (the reduction dimension), with one (scale, zero) pair per group of
// `group_size` consecutive k indices and per column.
//
// Layout of word (i, j): bits [4t, 4t + 4) hold q(8i + t, j), so the lowest
// nibble carries the smallest k index.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "splitkq/dense_matrix.h"

namespace splitkq::quant {

inline constexpr std::size_t kBits = 4;
inline constexpr std::size_t kValuesPerWord = 32 / kBits;
inline constexpr std::uint32_t kMaxValue = (1u << kBits) - 1;
inline constexpr std::size_t kDefaultGroupSize = 128;

/// Unpacked unsigned 4-bit matrix, one byte per value.
class Int4Matrix {
 public:
  Int4Matrix(std::size_t rows, std::size_t cols);
  /// Throws DomainError if any value exceeds 15.
  Int4Matrix(std::size_t rows, std::size_t cols,
             std::vector<std::uint8_t> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  std::uint8_t operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  std::span<const std::uint8_t> values() const { return values_; }

  friend bool operator==(const Int4Matrix&, const Int4Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> values_;
};

/// Group-wise dequantization parameters. scales and zeros are row-major
/// (k / group_size) x n.
struct QuantParams {
  std::size_t group_size = kDefaultGroupSize;
  std::vector<float> scales;
  std::vector<std::uint8_t> zeros;

  /// Checks group_size | k, array shapes, zero <= 15 and scale finite > 0.
  void validate(std::size_t k, std::size_t n) const;

  friend bool operator==(const QuantParams&, const QuantParams&) = default;
};

/// Builds params with the same scale and zero for every group and column.
QuantParams uniform_params(std::size_t k, std::size_t n, std::size_t group_size,
                           float scale, std::uint8_t zero);

class PackedWeightMatrix {
 public:
  /// Validates that k % 8 == 0, words has (k / 8) * n entries and params fit.
  PackedWeightMatrix(std::size_t k, std::size_t n,
                     std::vector<std::uint32_t> words, QuantParams params);

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  std::size_t group_size() const { return params_.group_size; }
  std::size_t num_groups() const { return k_ / params_.group_size; }

  std::span<const std::uint32_t> words() const { return words_; }
  const QuantParams& params() const { return params_; }

  std::uint32_t word(std::size_t word_row, std::size_t col) const {
    return words_[word_row * n_ + col];
  }
  float scale(std::size_t group, std::size_t col) const {
    return params_.scales[group * n_ + col];
  }
  std::uint8_t zero(std::size_t group, std::size_t col) const {
    return params_.zeros[group * n_ + col];
  }

  friend bool operator==(const PackedWeightMatrix&,
                         const PackedWeightMatrix&) = default;

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<std::uint32_t> words_;
  QuantParams params_;
};

PackedWeightMatrix pack_int4(const Int4Matrix& q, QuantParams params);

Int4Matrix unpack_int4(const PackedWeightMatrix& p);

/// out(i, j) = scale(i / group_size, j) * (q(i, j) - zero(i / group_size, j)).
DenseMatrix dequantize(const PackedWeightMatrix& p);

/// Dequantizes the block of B starting at (k0, n0) into `out`, a row-major
/// tile with leading dimension `ld` and at least k_count rows. Positions
/// outside the matrix are written as zero, like a masked load.
void dequantize_tile(const PackedWeightMatrix& p, std::size_t k0,
                     std::size_t k_count, std::size_t n0, std::size_t n_count,
                     std::span<float> out, std::size_t ld);

/// Round-to-nearest asymmetric quantizer used to produce test and benchmark
/// weights. Per (group, column): the range [min, max] is widened to contain
/// zero, scale = max(1e-8, (max - min) / 15), zero = clamp(round(-min /
/// scale)), q = clamp(round(w / scale) + zero).
PackedWeightMatrix quantize_reference(const DenseMatrix& w,
                                      std::size_t group_size = kDefaultGroupSize);

}  // namespace splitkq::quant
