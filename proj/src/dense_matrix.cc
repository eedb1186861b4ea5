// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/dense_matrix.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "splitkq/error.h"

namespace splitkq {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("DenseMatrix: dimensions must be positive");
  }
  data_.assign(rows * cols, 0.0f);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("DenseMatrix: dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw DimensionError("DenseMatrix: expected " +
                         std::to_string(rows * cols) + " elements, got " +
                         std::to_string(data_.size()));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) {
      throw DomainError("DenseMatrix: non-finite element");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0f;
  return m;
}

DenseMatrix DenseMatrix::random(std::size_t rows, std::size_t cols,
                                std::uint64_t seed, float lo, float hi) {
  DenseMatrix m(rows, cols);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : m.data_) v = dist(rng);
  return m;
}

void DenseMatrix::fill(float value) {
  std::fill(data_.begin(), data_.end(), value);
}

float DenseMatrix::max_abs() const {
  float best = 0.0f;
  for (float v : data_) best = std::max(best, std::fabs(v));
  return best;
}

float max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  float best = 0.0f;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    best = std::max(best, std::fabs(da[i] - db[i]));
  }
  return best;
}

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data().data(), b.data().data(),
                     a.size() * sizeof(float)) == 0;
}

}  // namespace splitkq
