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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace xcorr {

/// Architecture and run parameters for one simulation.
struct SimConfig {
  std::uint32_t num_pes = 16;
  std::uint64_t cache_bytes = 2048;
  std::uint64_t dram_latency_cycles = 1;
  double clock_mhz = 200.0;
  double tolerance_da = 50.0;
  double bin_width = 1.0;
  bool exclude_tau_zero = false;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;

  /// Applies "key = value" settings; unknown keys throw ConfigError.
  void apply(const std::map<std::string, std::string>& settings);
};

/// Parses a key-value file: "key = value" or "key value" per line, '#'
/// comments. Throws ConfigError on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace xcorr
