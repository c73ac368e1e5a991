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

#include <bit>
#include <cstdint>

namespace xcorr {

/// IEEE 754 binary16 value, held as its raw bit pattern.
///
/// Spectrum intensities are stored and transferred in this format; all
/// arithmetic happens after widening to float.
struct Half {
  std::uint16_t bits = 0;

  constexpr Half() = default;
  constexpr explicit Half(std::uint16_t raw) : bits(raw) {}

  static constexpr Half from_bits(std::uint16_t raw) { return Half(raw); }

  constexpr bool is_zero() const { return (bits & 0x7FFFu) == 0; }
  constexpr bool is_finite() const { return (bits & 0x7C00u) != 0x7C00u; }

  friend constexpr bool operator==(Half a, Half b) { return a.bits == b.bits; }
};

/// Round to the nearest binary16 value, ties to even. Values at or beyond
/// 65520 in magnitude become infinity; NaN maps to the canonical quiet NaN.
Half half_from_double(double value);

/// Same rounding as half_from_double; float -> double is exact.
inline Half half_from_float(float value) { return half_from_double(static_cast<double>(value)); }

/// Exact widening of a binary16 pattern.
float half_to_float(Half h);

}  // namespace xcorr
