// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

// W4PK container, little-endian:
//
//   "W4PK"                 4 bytes magic
//   version                u16, currently 1
//   k, n, group_size       u32 each
//   scales                 (k / group_size) * n f32, row-major
//   zeros                  ceil(groups / 8) * n u32, row-major, 8 nibbles per
//                          word along the group axis, zero padded
//   weights                (k / 8) * n u32, row-major

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "splitkq/quant.h"

namespace splitkq::container {

inline constexpr char kMagic[4] = {'W', '4', 'P', 'K'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 2 + 3 * 4;

/// Exact byte size of a container holding a k x n matrix.
std::size_t encoded_size(std::size_t k, std::size_t n, std::size_t group_size);

void write(const quant::PackedWeightMatrix& p, std::ostream& out);

/// Throws FormatError on bad magic, unknown version, truncation or trailing
/// bytes, and the quant module's errors on inconsistent dimensions.
quant::PackedWeightMatrix read(std::istream& in);

/// File wrappers; I/O failures raise IoError.
void save(const quant::PackedWeightMatrix& p, const std::filesystem::path& path);
quant::PackedWeightMatrix load(const std::filesystem::path& path);

}  // namespace splitkq::container
