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

#include "xcorrsim/simd.hpp"

namespace xcorr::simd::detail {

int match16_scalar(const std::uint16_t* bins, std::uint16_t key);
void window_sums_scalar(std::span<const float> in, std::size_t radius, bool skip_center,
                        std::span<float> out);
void halves_to_floats_scalar(std::span<const std::uint16_t> in, std::span<float> out);
void floats_to_halves_scalar(std::span<const float> in, std::span<std::uint16_t> out);

#if defined(XCORRSIM_HAVE_AVX2)
int match16_avx2(const std::uint16_t* bins, std::uint16_t key);
void window_sums_avx2(std::span<const float> in, std::size_t radius, bool skip_center,
                      std::span<float> out);
void halves_to_floats_avx2(std::span<const std::uint16_t> in, std::span<float> out);
void floats_to_halves_avx2(std::span<const float> in, std::span<std::uint16_t> out);
#endif

}  // namespace xcorr::simd::detail
