// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/container.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "splitkq/error.h"

namespace splitkq::container {

namespace {

std::size_t zero_word_rows(std::size_t groups) {
  return (groups + quant::kValuesPerWord - 1) / quant::kValuesPerWord;
}

class ByteWriter {
 public:
  void u16(std::uint16_t v) {
    bytes_.push_back(static_cast<char>(v & 0xFF));
    bytes_.push_back(static_cast<char>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(byte(0) | (byte(1) << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= byte(i) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void raw(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::uint32_t byte(std::size_t offset) const {
    return static_cast<unsigned char>(bytes_[pos_ + offset]);
  }
  void need(std::size_t n) const {
    if (remaining() < n) throw FormatError("bad container: truncated");
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t encoded_size(std::size_t k, std::size_t n, std::size_t group_size) {
  const std::size_t groups = k / group_size;
  return kHeaderBytes + groups * n * 4 + zero_word_rows(groups) * n * 4 +
         (k / quant::kValuesPerWord) * n * 4;
}

void write(const quant::PackedWeightMatrix& p, std::ostream& out) {
  constexpr auto kU32Max = std::numeric_limits<std::uint32_t>::max();
  if (p.k() > kU32Max || p.n() > kU32Max) {
    throw DimensionError("container: dimensions exceed 32 bits");
  }
  ByteWriter w;
  w.raw(kMagic, sizeof(kMagic));
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(p.k()));
  w.u32(static_cast<std::uint32_t>(p.n()));
  w.u32(static_cast<std::uint32_t>(p.group_size()));
  for (float s : p.params().scales) w.f32(s);

  const std::size_t groups = p.num_groups();
  for (std::size_t gw = 0; gw < zero_word_rows(groups); ++gw) {
    for (std::size_t j = 0; j < p.n(); ++j) {
      std::uint32_t word = 0;
      for (std::size_t t = 0; t < quant::kValuesPerWord; ++t) {
        const std::size_t g = gw * quant::kValuesPerWord + t;
        if (g < groups) {
          word |= static_cast<std::uint32_t>(p.zero(g, j)) << (quant::kBits * t);
        }
      }
      w.u32(word);
    }
  }
  for (std::uint32_t word : p.words()) w.u32(word);

  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("container: write failed");
}

quant::PackedWeightMatrix read(std::istream& in) {
  std::vector<char> bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("container: read failed");
  ByteReader r(std::move(bytes));

  char magic[4];
  if (r.remaining() < sizeof(magic)) throw FormatError("bad container: truncated");
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw FormatError("bad container: magic bytes are not W4PK");
  }
  const std::uint16_t version = r.u16();
  if (version != kVersion) {
    throw FormatError("bad container: unsupported version " +
                      std::to_string(version));
  }
  const std::size_t k = r.u32();
  const std::size_t n = r.u32();
  const std::size_t group_size = r.u32();
  if (k == 0 || n == 0 || group_size == 0 || k % group_size != 0 ||
      k % quant::kValuesPerWord != 0) {
    throw FormatError("bad container: inconsistent header k=" +
                      std::to_string(k) + " n=" + std::to_string(n) +
                      " group_size=" + std::to_string(group_size));
  }
  if (r.remaining() + kHeaderBytes != encoded_size(k, n, group_size)) {
    throw FormatError("bad container: payload size does not match header");
  }

  const std::size_t groups = k / group_size;
  quant::QuantParams params;
  params.group_size = group_size;
  params.scales.resize(groups * n);
  for (float& s : params.scales) s = r.f32();

  params.zeros.assign(groups * n, 0);
  for (std::size_t gw = 0; gw < zero_word_rows(groups); ++gw) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t word = r.u32();
      for (std::size_t t = 0; t < quant::kValuesPerWord; ++t) {
        const std::size_t g = gw * quant::kValuesPerWord + t;
        const auto nibble =
            static_cast<std::uint8_t>((word >> (quant::kBits * t)) & quant::kMaxValue);
        if (g < groups) {
          params.zeros[g * n + j] = nibble;
        } else if (nibble != 0) {
          throw FormatError("bad container: nonzero zero-point padding");
        }
      }
    }
  }

  std::vector<std::uint32_t> words((k / quant::kValuesPerWord) * n);
  for (std::uint32_t& word : words) word = r.u32();

  try {
    return quant::PackedWeightMatrix(k, n, std::move(words), std::move(params));
  } catch (const DomainError& e) {
    throw FormatError(std::string("bad container: ") + e.what());
  }
}

void save(const quant::PackedWeightMatrix& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(p, out);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

quant::PackedWeightMatrix load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read(in);
}

}  // namespace splitkq::container
