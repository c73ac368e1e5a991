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

#include "xcorrsim/half.hpp"

#include <cmath>

namespace xcorr {

Half half_from_double(double value) {
  const std::uint16_t sign = std::signbit(value) ? 0x8000u : 0u;
  const double mag = std::fabs(value);

  if (std::isnan(value)) return Half(static_cast<std::uint16_t>(sign | 0x7E00u));
  // 65504 is the largest finite half; the midpoint to 65536 rounds to even (inf).
  if (mag >= 65520.0) return Half(static_cast<std::uint16_t>(sign | 0x7C00u));

  // Subnormal range: integer multiples of 2^-24. A result of 1024 is the
  // smallest normal, which the bit layout encodes correctly as-is.
  if (mag < 0x1p-14) {
    const auto q = static_cast<std::uint16_t>(std::nearbyint(mag * 0x1p24));
    return Half(static_cast<std::uint16_t>(sign | q));
  }

  int exp = std::ilogb(mag);
  const double frac = std::scalbn(mag, -exp) - 1.0;  // [0, 1), exact
  auto q = static_cast<std::uint32_t>(std::nearbyint(frac * 1024.0));
  if (q == 1024) {
    q = 0;
    ++exp;
  }
  return Half(static_cast<std::uint16_t>(sign | ((exp + 15) << 10) | q));
}

float half_to_float(Half h) {
  const std::uint32_t exp = (h.bits >> 10) & 0x1Fu;
  const std::uint32_t mant = h.bits & 0x3FFu;
  const bool neg = (h.bits & 0x8000u) != 0;
  float mag;
  if (exp == 0) {
    mag = std::ldexp(static_cast<float>(mant), -24);
  } else if (exp == 31) {
    mag = mant == 0 ? INFINITY : NAN;
  } else {
    mag = std::ldexp(static_cast<float>(1024u + mant), static_cast<int>(exp) - 25);
  }
  return neg ? -mag : mag;
}

}  // namespace xcorr
