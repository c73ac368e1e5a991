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

// Compiled with -mavx2 -mf16c. Nothing here may run unless the dispatcher
// has confirmed both features on the host CPU.

#include <immintrin.h>

#include "simd_internal.hpp"

namespace xcorr::simd::detail {

int match16_avx2(const std::uint16_t* bins, std::uint16_t key) {
  const __m256i lanes = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bins));
  const __m256i eq = _mm256_cmpeq_epi16(lanes, _mm256_set1_epi16(static_cast<short>(key)));
  const auto mask = static_cast<unsigned>(_mm256_movemask_epi8(eq));
  if (mask == 0) return -1;
  return __builtin_ctz(mask) / 2;
}

void window_sums_avx2(std::span<const float> in, std::size_t radius, bool skip_center,
                      std::span<float> out) {
  // Eight outputs per vector; every lane adds its terms in the same ascending
  // order as the scalar loop, so results are bit-identical.
  const std::size_t width = 2 * radius + 1;
  const float* src = in.data();
  std::size_t k = 0;
  for (; k + 8 <= out.size(); k += 8) {
    __m256 acc = _mm256_setzero_ps();
    for (std::size_t t = 0; t < width; ++t) {
      if (skip_center && t == radius) continue;
      acc = _mm256_add_ps(acc, _mm256_loadu_ps(src + k + t));
    }
    _mm256_storeu_ps(out.data() + k, acc);
  }
  if (k < out.size()) {
    window_sums_scalar(in.subspan(k), radius, skip_center, out.subspan(k));
  }
}

void halves_to_floats_avx2(std::span<const std::uint16_t> in, std::span<float> out) {
  std::size_t i = 0;
  for (; i + 8 <= in.size(); i += 8) {
    const __m128i h = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in.data() + i));
    _mm256_storeu_ps(out.data() + i, _mm256_cvtph_ps(h));
  }
  if (i < in.size()) halves_to_floats_scalar(in.subspan(i), out.subspan(i));
}

void floats_to_halves_avx2(std::span<const float> in, std::span<std::uint16_t> out) {
  std::size_t i = 0;
  for (; i + 8 <= in.size(); i += 8) {
    const __m128i h = _mm256_cvtps_ph(_mm256_loadu_ps(in.data() + i), _MM_FROUND_TO_NEAREST_INT);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out.data() + i), h);
  }
  if (i < in.size()) floats_to_halves_scalar(in.subspan(i), out.subspan(i));
}

}  // namespace xcorr::simd::detail
