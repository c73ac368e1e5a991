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

#include "simd_internal.hpp"
#include "xcorrsim/half.hpp"

namespace xcorr::simd::detail {

int match16_scalar(const std::uint16_t* bins, std::uint16_t key) {
  for (int lane = 0; lane < static_cast<int>(kPacketLanes); ++lane) {
    if (bins[lane] == key) return lane;
  }
  return -1;
}

void window_sums_scalar(std::span<const float> in, std::size_t radius, bool skip_center,
                        std::span<float> out) {
  const std::size_t width = 2 * radius + 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    float acc = 0.0f;
    for (std::size_t t = 0; t < width; ++t) {
      if (skip_center && t == radius) continue;
      acc += in[k + t];
    }
    out[k] = acc;
  }
}

void halves_to_floats_scalar(std::span<const std::uint16_t> in, std::span<float> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = half_to_float(Half(in[i]));
}

void floats_to_halves_scalar(std::span<const float> in, std::span<std::uint16_t> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = half_from_float(in[i]).bits;
}

}  // namespace xcorr::simd::detail
