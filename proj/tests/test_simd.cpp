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

#include <bit>
#include <random>
#include <vector>

#include "doctest.h"
#include "xcorrsim/simd.hpp"

using namespace xcorr::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v{&scalar_kernels()};
  if (const KernelTable* a = avx2_kernels()) v.push_back(a);
  return v;
}

}  // namespace

TEST_CASE("simd: match16 returns the first equal lane") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> small(0, 40);
  for (const KernelTable* k : variants()) {
    CAPTURE(isa_name(k->isa));
    for (int trial = 0; trial < 20000; ++trial) {
      std::uint16_t bins[kPacketLanes];
      for (auto& b : bins) b = static_cast<std::uint16_t>(small(rng));
      const auto key = static_cast<std::uint16_t>(small(rng));
      int want = -1;
      for (int lane = 0; lane < static_cast<int>(kPacketLanes); ++lane) {
        if (bins[lane] == key) {
          want = lane;
          break;
        }
      }
      REQUIRE(k->match16(bins, key) == want);
    }
    std::uint16_t pad[kPacketLanes];
    for (auto& b : pad) b = 0xFFFF;
    CHECK(k->match16(pad, 0xFFFF) == 0);
    CHECK(k->match16(pad, 7) == -1);
  }
}

TEST_CASE("simd: window sums equal the ascending scalar loop") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> value(-3000, 3000);
  std::uniform_int_distribution<std::size_t> length(0, 300);
  for (const KernelTable* k : variants()) {
    CAPTURE(isa_name(k->isa));
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t radius = trial % 3 == 0 ? 75 : trial % 7;
      const bool skip = trial % 2 == 1;
      const std::size_t n = length(rng);
      std::vector<float> in(n + 2 * radius);
      for (float& f : in) f = static_cast<float>(value(rng)) / 7.0f;
      std::vector<float> out(n), want(n);
      for (std::size_t i = 0; i < n; ++i) {
        float s = 0.0f;
        for (std::size_t t = 0; t <= 2 * radius; ++t) {
          if (skip && t == radius) continue;
          s += in[i + t];
        }
        want[i] = s;
      }
      k->window_sums(in, radius, skip, out);
      REQUIRE(out == want);
    }
  }
}

TEST_CASE("simd: half widening agrees between variants") {
  std::vector<std::uint16_t> all(65536);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint16_t>(i);
  std::vector<float> ref(all.size());
  scalar_kernels().halves_to_floats(all, ref);
  for (const KernelTable* k : variants()) {
    std::vector<float> got(all.size());
    k->halves_to_floats(all, got);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (ref[i] != ref[i]) {
        REQUIRE(got[i] != got[i]);
      } else {
        REQUIRE(std::bit_cast<std::uint32_t>(got[i]) == std::bit_cast<std::uint32_t>(ref[i]));
      }
    }
  }
}

TEST_CASE("simd: dispatcher picks a usable table") {
  const KernelTable& k = kernels();
  CHECK(k.match16 != nullptr);
  CHECK(k.window_sums != nullptr);
  if (avx2_kernels() == nullptr) CHECK(k.isa == Isa::Scalar);
}
