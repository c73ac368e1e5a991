/*
 * Copyright 2026 The xcorrsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xcorrsim/config.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include "xcorrsim/errors.hpp"

namespace xcorr {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad value for " + key + ": '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError("bad value for " + key + ": '" + text + "'");
}

}  // namespace

void SimConfig::validate() const {
  if (num_pes < 1) throw ConfigError("num_pes must be at least 1");
  if (cache_bytes < 64 || cache_bytes % 64 != 0) {
    throw ConfigError("cache_bytes must be a positive multiple of 64");
  }
  if (dram_latency_cycles < 1) throw ConfigError("dram_latency_cycles must be at least 1");
  if (!(clock_mhz > 0.0)) throw ConfigError("clock_mhz must be positive");
  if (!(tolerance_da >= 0.0)) throw ConfigError("tolerance_da must be non-negative");
  if (!(bin_width > 0.0)) throw ConfigError("bin_width must be positive");
}

void SimConfig::apply(const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "num_pes") {
      num_pes = parse_number<std::uint32_t>(key, value);
    } else if (key == "cache_bytes") {
      cache_bytes = parse_number<std::uint64_t>(key, value);
    } else if (key == "dram_latency_cycles") {
      dram_latency_cycles = parse_number<std::uint64_t>(key, value);
    } else if (key == "clock_mhz") {
      clock_mhz = parse_number<double>(key, value);
    } else if (key == "tolerance_da") {
      tolerance_da = parse_number<double>(key, value);
    } else if (key == "bin_width") {
      bin_width = parse_number<double>(key, value);
    } else if (key == "exclude_tau_zero") {
      exclude_tau_zero = parse_bool(key, value);
    } else if (key == "seed") {
      seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
  }
  return out;
}

}  // namespace xcorr
