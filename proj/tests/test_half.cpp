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

#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "xcorrsim/half.hpp"
#include "xcorrsim/simd.hpp"

using namespace xcorr;

TEST_CASE("half: every pattern decodes to the field-built value") {
  for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
    const auto bits = static_cast<std::uint16_t>(b);
    const float got = half_to_float(Half(bits));
    const double want = oracle::half_value(bits);
    if (std::isnan(want)) {
      CHECK(std::isnan(got));
    } else {
      REQUIRE(static_cast<double>(got) == want);
      CHECK(std::signbit(got) == ((bits & 0x8000) != 0));
    }
  }
}

TEST_CASE("half: finite patterns survive a round trip") {
  for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
    const Half h(static_cast<std::uint16_t>(b));
    if (!h.is_finite()) continue;
    REQUIRE(half_from_float(half_to_float(h)).bits == h.bits);
  }
}

TEST_CASE("half: known encodings") {
  CHECK(half_from_double(1.0).bits == 0x3C00);
  CHECK(half_from_double(-2.0).bits == 0xC000);
  CHECK(half_from_double(65504.0).bits == 0x7BFF);
  CHECK(half_from_double(65519.99).bits == 0x7BFF);
  CHECK(half_from_double(65520.0).bits == 0x7C00);
  CHECK(half_from_double(-1e9).bits == 0xFC00);
  CHECK(half_from_double(std::ldexp(1.0, -24)).bits == 0x0001);
  CHECK(half_from_double(std::ldexp(1.0, -25)).bits == 0x0000);  // tie to even (zero)
  CHECK(half_from_double(std::ldexp(3.0, -25)).bits == 0x0002);  // tie to even (two)
  CHECK(half_from_double(2049.0).bits == 0x6800);                // 2048, tie to even
  CHECK(half_from_double(2051.0).bits == 0x6802);                // 2052, tie to even
  CHECK(half_from_double(std::nan("")).bits == 0x7E00);
  CHECK(half_from_double(-0.0).bits == 0x8000);
}

TEST_CASE("half: rounding matches the nearest-value search") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(-30.0, 17.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int i = 0; i < 200000; ++i) {
    const double x = (sign(rng) ? -1.0 : 1.0) * std::exp2(mag(rng));
    REQUIRE(half_from_double(x).bits == oracle::half_bits(x));
  }
  // Exact midpoints between neighbours.
  for (std::uint32_t b = 0; b < 0x7BFF; b += 3) {
    const double mid = (oracle::half_value(static_cast<std::uint16_t>(b)) +
                        oracle::half_value(static_cast<std::uint16_t>(b + 1))) / 2;
    REQUIRE(half_from_double(mid).bits == oracle::half_bits(mid));
    REQUIRE(half_from_double(-mid).bits == oracle::half_bits(-mid));
  }
}

TEST_CASE("half: float rounding agrees between kernel variants") {
  const simd::KernelTable& ref = simd::scalar_kernels();
  const simd::KernelTable* fast = simd::avx2_kernels();
  if (fast == nullptr) return;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> any;
  std::vector<float> in(4099);
  for (float& f : in) {
    std::uint32_t u = any(rng);
    std::memcpy(&f, &u, sizeof f);
    if (std::isnan(f)) f = 1.5f;
  }
  in[0] = 65520.0f;
  in[1] = -65519.0f;
  in[2] = std::ldexp(1.0f, -25);
  std::vector<std::uint16_t> a(in.size()), b(in.size());
  ref.floats_to_halves(in, a);
  fast->floats_to_halves(in, b);
  CHECK(a == b);
  for (std::size_t i = 0; i < in.size(); ++i) REQUIRE(a[i] == oracle::half_bits(in[i]));
}
