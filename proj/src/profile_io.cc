// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "splitkq/error.h"
#include "splitkq/execmodel.h"

namespace splitkq::execmodel {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw FormatError("profile: " + key + " expects an unsigned integer, got '" +
                      value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw FormatError("profile: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

}  // namespace

HardwareProfile parse_profile(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError("profile line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!kv.emplace(key, value).second) {
      throw FormatError("profile: duplicate key '" + key + "'");
    }
  }

  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(std::string("profile: missing key ") + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  HardwareProfile hw;
  hw.name = take("name");
  hw.sm_count = parse_count("sm_count", take("sm_count"));
  hw.registers_per_sm = parse_count("registers_per_sm", take("registers_per_sm"));
  hw.shared_mem_per_sm = parse_count("shared_mem_per_sm", take("shared_mem_per_sm"));
  hw.max_blocks_per_sm = parse_count("max_blocks_per_sm", take("max_blocks_per_sm"));
  hw.fp16_tflops = parse_real("fp16_tflops", take("fp16_tflops"));
  hw.mem_bandwidth_gbs = parse_real("mem_bandwidth_gbs", take("mem_bandwidth_gbs"));
  if (kv.contains("l2_cache_mb")) {
    hw.l2_cache_mb = parse_real("l2_cache_mb", take("l2_cache_mb"));
  }
  if (!kv.empty()) {
    throw FormatError("profile: unknown key '" + kv.begin()->first + "'");
  }
  try {
    hw.validate();
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
  return hw;
}

void write_profile(const HardwareProfile& hw, std::ostream& out) {
  out << "name=" << hw.name << '\n'
      << "sm_count=" << hw.sm_count << '\n'
      << "registers_per_sm=" << hw.registers_per_sm << '\n'
      << "shared_mem_per_sm=" << hw.shared_mem_per_sm << '\n'
      << "max_blocks_per_sm=" << hw.max_blocks_per_sm << '\n'
      << "fp16_tflops=" << hw.fp16_tflops << '\n'
      << "mem_bandwidth_gbs=" << hw.mem_bandwidth_gbs << '\n';
  if (hw.l2_cache_mb) out << "l2_cache_mb=" << *hw.l2_cache_mb << '\n';
}

HardwareProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile " + path.string());
  return parse_profile(in);
}

HardwareProfile resolve_profile(std::string_view name) {
  if (auto hw = find_builtin(name)) return *hw;
  const std::filesystem::path direct(name);
  std::error_code ec;
  if (std::filesystem::is_regular_file(direct, ec)) return load_profile(direct);
  if (const char* dir = std::getenv("SPLITKQ_PROFILE_DIR"); dir && *dir) {
    for (const auto& candidate :
         {std::filesystem::path(dir) / (std::string(name) + ".profile"),
          std::filesystem::path(dir) / std::string(name)}) {
      if (std::filesystem::is_regular_file(candidate, ec)) {
        return load_profile(candidate);
      }
    }
  }
  throw ConfigError("unknown profile '" + std::string(name) +
                    "' (built-ins: a100-40, a100-80, h100)");
}

}  // namespace splitkq::execmodel
