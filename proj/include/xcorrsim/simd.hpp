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

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2/F16C variant. The variants are required to be bit-identical to the
// scalar reference; the dispatcher picks one once at startup.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace xcorr::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Number of lanes the ion-matching kernel compares per cycle.
inline constexpr std::size_t kPacketLanes = 16;

struct KernelTable {
  Isa isa;

  /// Index of the first lane in bins[0..16) equal to key, or -1.
  int (*match16)(const std::uint16_t* bins, std::uint16_t key);

  /// out[k] = sum over t in [0, 2*radius] of in[k + t], accumulated in float
  /// in ascending t. When skip_center is set, t == radius is left out.
  /// Requires in.size() >= out.size() + 2*radius.
  void (*window_sums)(std::span<const float> in, std::size_t radius, bool skip_center,
                      std::span<float> out);

  /// Widen binary16 bit patterns to float. Sizes must match.
  void (*halves_to_floats)(std::span<const std::uint16_t> in, std::span<float> out);

  /// Round floats to binary16 (nearest, ties to even). Sizes must match.
  /// NaN payloads are not preserved consistently across variants.
  void (*floats_to_halves)(std::span<const float> in, std::span<std::uint16_t> out);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels();

/// Best available table. Setting XCORRSIM_ISA=scalar in the environment
/// forces the scalar reference.
const KernelTable& kernels();

}  // namespace xcorr::simd
