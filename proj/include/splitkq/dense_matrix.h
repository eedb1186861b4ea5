// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace splitkq {

/// Row-major single-precision matrix. Holds activations, dequantized weights
/// and GEMM outputs.
class DenseMatrix {
 public:
  /// Zero-filled rows x cols matrix. Both dimensions must be positive.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of `data`; throws if the size is wrong or any value is
  /// not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  static DenseMatrix identity(std::size_t n);

  /// Uniform values in [lo, hi) from a seeded mt19937_64.
  static DenseMatrix random(std::size_t rows, std::size_t cols,
                            std::uint64_t seed, float lo = -1.0f,
                            float hi = 1.0f);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  float& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<float> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  void fill(float value);

  /// Largest |x| over all elements (0 for an all-zero matrix).
  float max_abs() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<float> data_;
};

/// Largest elementwise |a - b|. Shapes must match.
float max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// True when every element has the same bit pattern in both matrices.
bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace splitkq
