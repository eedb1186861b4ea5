// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/quant.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitkq/error.h"

namespace splitkq::quant {

namespace {

void check_values(std::span<const std::uint8_t> values) {
  for (std::uint8_t v : values) {
    if (v > kMaxValue) {
      throw DomainError("int4 value " + std::to_string(v) +
                        " is outside [0, 15]");
    }
  }
}

}  // namespace

Int4Matrix::Int4Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0) {}

Int4Matrix::Int4Matrix(std::size_t rows, std::size_t cols,
                       std::vector<std::uint8_t> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw DimensionError("Int4Matrix: expected " + std::to_string(rows * cols) +
                         " values, got " + std::to_string(values_.size()));
  }
  check_values(values_);
}

void QuantParams::validate(std::size_t k, std::size_t n) const {
  if (group_size == 0 || k % group_size != 0) {
    throw DimensionError("group_size " + std::to_string(group_size) +
                         " must divide k = " + std::to_string(k));
  }
  const std::size_t expected = (k / group_size) * n;
  if (scales.size() != expected || zeros.size() != expected) {
    throw DimensionError("quant params: expected " + std::to_string(expected) +
                         " scales and zeros for k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) +
                         ", group_size=" + std::to_string(group_size));
  }
  check_values(zeros);
  for (float s : scales) {
    if (!std::isfinite(s) || s <= 0.0f) {
      throw DomainError("quant params: scales must be finite and positive");
    }
  }
}

QuantParams uniform_params(std::size_t k, std::size_t n, std::size_t group_size,
                           float scale, std::uint8_t zero) {
  if (group_size == 0 || k % group_size != 0) {
    throw DimensionError("group_size must divide k");
  }
  const std::size_t count = (k / group_size) * n;
  QuantParams params;
  params.group_size = group_size;
  params.scales.assign(count, scale);
  params.zeros.assign(count, zero);
  params.validate(k, n);
  return params;
}

PackedWeightMatrix::PackedWeightMatrix(std::size_t k, std::size_t n,
                                       std::vector<std::uint32_t> words,
                                       QuantParams params)
    : k_(k), n_(n), words_(std::move(words)), params_(std::move(params)) {
  if (k == 0 || n == 0) {
    throw DimensionError("packed weights: dimensions must be positive");
  }
  if (k % kValuesPerWord != 0) {
    throw DimensionError("packed weights: k = " + std::to_string(k) +
                         " is not a multiple of 8");
  }
  if (words_.size() != (k / kValuesPerWord) * n) {
    throw DimensionError("packed weights: expected " +
                         std::to_string((k / kValuesPerWord) * n) +
                         " words, got " + std::to_string(words_.size()));
  }
  params_.validate(k, n);
}

PackedWeightMatrix pack_int4(const Int4Matrix& q, QuantParams params) {
  const std::size_t k = q.rows();
  const std::size_t n = q.cols();
  if (k % kValuesPerWord != 0) {
    throw DimensionError("pack_int4: k = " + std::to_string(k) +
                         " is not a multiple of 8");
  }
  check_values(q.values());
  std::vector<std::uint32_t> words((k / kValuesPerWord) * n, 0u);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t word_row = i / kValuesPerWord;
    const unsigned shift = static_cast<unsigned>(kBits * (i % kValuesPerWord));
    for (std::size_t j = 0; j < n; ++j) {
      words[word_row * n + j] |= static_cast<std::uint32_t>(q(i, j)) << shift;
    }
  }
  return PackedWeightMatrix(k, n, std::move(words), std::move(params));
}

Int4Matrix unpack_int4(const PackedWeightMatrix& p) {
  Int4Matrix q(p.k(), p.n());
  for (std::size_t i = 0; i < p.k(); ++i) {
    const std::size_t word_row = i / kValuesPerWord;
    const unsigned shift = static_cast<unsigned>(kBits * (i % kValuesPerWord));
    for (std::size_t j = 0; j < p.n(); ++j) {
      q(i, j) = static_cast<std::uint8_t>((p.word(word_row, j) >> shift) &
                                          kMaxValue);
    }
  }
  return q;
}

DenseMatrix dequantize(const PackedWeightMatrix& p) {
  const Int4Matrix q = unpack_int4(p);
  DenseMatrix out(p.k(), p.n());
  for (std::size_t i = 0; i < p.k(); ++i) {
    const std::size_t g = i / p.group_size();
    for (std::size_t j = 0; j < p.n(); ++j) {
      const int centered = int{q(i, j)} - int{p.zero(g, j)};
      out(i, j) = p.scale(g, j) * static_cast<float>(centered);
    }
  }
  return out;
}

void dequantize_tile(const PackedWeightMatrix& p, std::size_t k0,
                     std::size_t k_count, std::size_t n0, std::size_t n_count,
                     std::span<float> out, std::size_t ld) {
  if (ld < n_count || out.size() < (k_count == 0 ? 0 : (k_count - 1) * ld + n_count)) {
    throw DimensionError("dequantize_tile: output tile too small");
  }
  const std::size_t n_valid = n0 >= p.n() ? 0 : std::min(n_count, p.n() - n0);
  const std::size_t n = p.n();
  const std::uint32_t* words = p.words().data();
  const float* scales = p.params().scales.data();
  const std::uint8_t* zeros = p.params().zeros.data();

  for (std::size_t r = 0; r < k_count; ++r) {
    float* dst = out.data() + r * ld;
    const std::size_t ki = k0 + r;
    if (ki >= p.k()) {
      std::fill(dst, dst + n_count, 0.0f);
      continue;
    }
    const std::uint32_t* word_row = words + (ki / kValuesPerWord) * n + n0;
    const unsigned shift = static_cast<unsigned>(kBits * (ki % kValuesPerWord));
    const std::size_t g = ki / p.group_size();
    const float* scale_row = scales + g * n + n0;
    const std::uint8_t* zero_row = zeros + g * n + n0;
    for (std::size_t c = 0; c < n_valid; ++c) {
      const int q = static_cast<int>((word_row[c] >> shift) & kMaxValue);
      dst[c] = scale_row[c] * static_cast<float>(q - int{zero_row[c]});
    }
    std::fill(dst + n_valid, dst + n_count, 0.0f);
  }
}

PackedWeightMatrix quantize_reference(const DenseMatrix& w,
                                      std::size_t group_size) {
  const std::size_t k = w.rows();
  const std::size_t n = w.cols();
  if (group_size == 0 || k % group_size != 0) {
    throw DimensionError("quantize_reference: group_size " +
                         std::to_string(group_size) + " must divide k = " +
                         std::to_string(k));
  }
  if (k % kValuesPerWord != 0) {
    throw DimensionError("quantize_reference: k = " + std::to_string(k) +
                         " is not a multiple of 8");
  }
  const std::size_t groups = k / group_size;
  QuantParams params;
  params.group_size = group_size;
  params.scales.resize(groups * n);
  params.zeros.resize(groups * n);
  Int4Matrix q(k, n);

  const float levels = static_cast<float>(kMaxValue);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t row0 = g * group_size;
    for (std::size_t j = 0; j < n; ++j) {
      float lo = 0.0f;
      float hi = 0.0f;
      for (std::size_t i = row0; i < row0 + group_size; ++i) {
        lo = std::min(lo, w(i, j));
        hi = std::max(hi, w(i, j));
      }
      const float scale = std::max((hi - lo) / levels, 1e-8f);
      const float zero = std::clamp(std::round(-lo / scale), 0.0f, levels);
      params.scales[g * n + j] = scale;
      params.zeros[g * n + j] = static_cast<std::uint8_t>(zero);
      for (std::size_t i = row0; i < row0 + group_size; ++i) {
        const float v = std::clamp(std::round(w(i, j) / scale) + zero, 0.0f, levels);
        q(i, j) = static_cast<std::uint8_t>(v);
      }
    }
  }
  return pack_int4(q, std::move(params));
}

}  // namespace splitkq::quant
