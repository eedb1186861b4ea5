// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "splitkq/csv.h"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "splitkq/error.h"

namespace splitkq::csv {

namespace {

std::string sig4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::size_t parse_uint(const std::string& s, int lineno, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("csv line " + std::to_string(lineno) + ": bad " + what +
                      " '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, int lineno, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw FormatError("csv line " + std::to_string(lineno) + ": bad " + what +
                      " '" + s + "'");
  }
  return v;
}

}  // namespace

void write_bench_csv(std::ostream& out, std::span<const bench::BenchRecord> records,
                     std::string_view gpu_or_host) {
  std::map<bench::Shape, std::pair<int, int>> counts;
  std::map<bench::Shape, std::pair<double, double>> tflops;  // dp, split-k
  for (const bench::BenchRecord& r : records) {
    auto& c = counts[r.shape()];
    auto& t = tflops[r.shape()];
    if (r.method == bench::Method::kDataParallel) {
      ++c.first;
      t.first = r.tflops;
    } else {
      ++c.second;
      t.second = r.tflops;
    }
  }

  out << kBenchHeader << '\n';
  for (const bench::BenchRecord& r : records) {
    char latency[64];
    std::snprintf(latency, sizeof(latency), "%.3f", r.median_latency * 1e6);
    out << gpu_or_host << ',' << r.m << ',' << r.n << ',' << r.k << ','
        << bench::to_string(r.method) << ',' << r.split_k << ',' << latency << ','
        << sig4(r.tflops) << ',';
    const auto& c = counts[r.shape()];
    if (c.first == 1 && c.second == 1) {
      const auto& t = tflops[r.shape()];
      out << sig4(t.second / t.first);
    }
    out << '\n';
  }
}

std::vector<BenchRow> parse_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kBenchHeader) {
    throw FormatError("csv: header does not match '" + std::string(kBenchHeader) + "'");
  }
  std::vector<BenchRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = split_fields(line);
    if (f.size() != 9) {
      throw FormatError("csv line " + std::to_string(lineno) + ": expected 9 fields, got " +
                        std::to_string(f.size()));
    }
    BenchRow row;
    row.gpu_or_host = f[0];
    if (row.gpu_or_host.empty()) {
      throw FormatError("csv line " + std::to_string(lineno) + ": empty gpu_or_host");
    }
    row.record.m = parse_uint(f[1], lineno, "m");
    row.record.n = parse_uint(f[2], lineno, "n");
    row.record.k = parse_uint(f[3], lineno, "k");
    const auto method = bench::parse_method(f[4]);
    if (!method) {
      throw FormatError("csv line " + std::to_string(lineno) + ": bad method '" + f[4] + "'");
    }
    row.record.method = *method;
    row.record.split_k = parse_uint(f[5], lineno, "split_k");
    row.record.median_latency = parse_double(f[6], lineno, "latency_us") * 1e-6;
    row.record.tflops = parse_double(f[7], lineno, "tflops");
    if (!f[8].empty()) row.speedup = parse_double(f[8], lineno, "speedup");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace splitkq::csv
