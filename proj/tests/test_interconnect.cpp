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

#include <vector>

#include "arbiter_check.hpp"
#include "doctest.h"
#include "xcorrsim/errors.hpp"
#include "xcorrsim/interconnect.hpp"

using namespace xcorr;
using namespace xcorr::interconnect;

TEST_CASE("arbiter: single requester is granted at once") {
  Arbiter a(1);
  const bool req[] = {true};
  CHECK(a.step(req, false) == std::optional<std::size_t>(0));
  CHECK(a.wait_counters()[0] == 0);
}

TEST_CASE("arbiter: tie goes to the lowest id, loser moves up") {
  Arbiter a(2);
  const bool both[] = {true, true};
  CHECK(a.step(both, false) == std::optional<std::size_t>(0));
  CHECK(a.wait_counters()[0] == 0);
  CHECK(a.wait_counters()[1] == 1);
  CHECK(a.step(both, false) == std::optional<std::size_t>(1));
  CHECK(a.wait_counters()[0] == 1);
  CHECK(a.wait_counters()[1] == 0);
}

TEST_CASE("arbiter: largest counter wins") {
  Arbiter a(3);
  // Drive counters to {2, 5, 0}.
  const bool only1[] = {false, true, false};
  const bool zero_one[] = {true, true, false};
  for (int i = 0; i < 3; ++i) a.step(only1, true);
  for (int i = 0; i < 2; ++i) a.step(zero_one, true);
  REQUIRE(a.wait_counters()[0] == 2);
  REQUIRE(a.wait_counters()[1] == 5);
  REQUIRE(a.wait_counters()[2] == 0);
  const bool all[] = {true, true, true};
  CHECK(a.step(all, false) == std::optional<std::size_t>(1));
  CHECK(a.wait_counters()[0] == 3);
  CHECK(a.wait_counters()[1] == 0);
  CHECK(a.wait_counters()[2] == 1);
}

TEST_CASE("arbiter: busy bus grants nothing and ages every requester") {
  Arbiter a(3);
  const bool req[] = {true, false, true};
  CHECK_FALSE(a.step(req, true).has_value());
  CHECK(a.wait_counters()[0] == 1);
  CHECK(a.wait_counters()[1] == 0);
  CHECK(a.wait_counters()[2] == 1);
}

TEST_CASE("arbiter: randomized audit") {
  for (std::size_t masters : {1u, 2u, 5u, 16u, 31u}) {
    const auto v = arbiter_check::run(masters, 20000, 100 + masters, masters == 1 ? 0.9 : 0.2);
    CAPTURE(masters);
    CHECK(v.grants > 0);
    CHECK(v.mutual_exclusion == 0);
    CHECK(v.work_conservation == 0);
    CHECK(v.counter_soundness == 0);
    CHECK(v.longest_waiter == 0);
    CHECK(v.starvation == 0);
  }
}

TEST_CASE("dram: occupancy arithmetic and bounds") {
  CHECK(occupancy_cycles(64, 30) == 31);
  CHECK(occupancy_cycles(2048, 30) == 62);
  CHECK(occupancy_cycles(1, 30) == 31);
  CHECK(occupancy_cycles(65, 1) == 3);

  DramModel d(4096, 30);
  BusTransaction t{0, TxnKind::Read, 128, 64, 0, 0, 0};
  CHECK(d.dram_access(t, 10) == 41);
  CHECK(t.grant_cycle == 10);
  t.length_bytes = 2048;
  CHECK(d.dram_access(t, 0) == 62);
  t.length_bytes = 0;
  CHECK_THROWS_AS(d.dram_access(t, 0), OutOfBounds);
  t.address = 4000;
  t.length_bytes = 200;
  CHECK_THROWS_AS(d.dram_access(t, 0), OutOfBounds);
  CHECK_THROWS_AS(DramModel(64, 0), ConfigError);
}

TEST_CASE("memory system: reads deliver at completion, writes commit at completion") {
  MemorySystem mem(2, DramModel(1024, 4), true);
  mem.dram().host_view()[70] = 0xAB;
  mem.request(0, TxnKind::Write, 64, 8, 0, std::vector<std::uint8_t>(8, 0x11));
  mem.request(1, TxnKind::Read, 64, 64, 0);
  CHECK_THROWS_AS(mem.request(0, TxnKind::Read, 0, 64, 0), SimulationAbort);
  CHECK(mem.arbitrate(0) == std::optional<std::size_t>(0));
  CHECK(mem.owner() == std::optional<std::size_t>(0));
  CHECK(mem.dram().read(70, 1)[0] == 0xAB);
  for (std::uint64_t c = 1; c < 5; ++c) {
    CHECK_FALSE(mem.retire(c).has_value());
    CHECK_FALSE(mem.arbitrate(c).has_value());
  }
  const auto done = mem.retire(5);
  REQUIRE(done.has_value());
  CHECK(done->completion_cycle == 5);
  CHECK(mem.dram().read(70, 1)[0] == 0x11);
  CHECK(mem.arbitrate(5) == std::optional<std::size_t>(1));
  CHECK(mem.arbiter().wait_counters()[1] == 0);
  CHECK(mem.retire(10).has_value());
  CHECK(mem.bytes_transferred() == 72);
  CHECK(mem.transactions() == 2);
  CHECK(mem.trace().size() == 2);
}

TEST_CASE("cache_fill: window arithmetic") {
  SpectrumCache big(2048);
  CHECK(cache_fill(big, 1920, 0) == std::vector<FillRequest>{{0, 1920}});
  CHECK(cache_fill(big, 0, 0).empty());

  SpectrumCache small(1024);
  CHECK(cache_fill(small, 1920, 0) == std::vector<FillRequest>{{0, 1024}});
  CHECK(cache_fill(small, 1920, 1024) == std::vector<FillRequest>{{1024, 896}});
  CHECK_THROWS_AS(cache_fill(small, 1920, 100), ConfigError);

  CHECK_THROWS_AS(SpectrumCache(100), ConfigError);
  CHECK_THROWS_AS(SpectrumCache(0), ConfigError);
}

TEST_CASE("spectrum cache: windows are aligned and bounded") {
  SpectrumCache c(1024);
  c.assign(1920);
  CHECK(c.num_packets() == 30);
  CHECK_FALSE(c.resident(0));
  CHECK(c.window_for(3) == FillRequest{0, 1024});
  CHECK(c.window_for(16) == FillRequest{1024, 896});
  CHECK(c.window_for(29) == FillRequest{1024, 896});

  std::vector<std::uint8_t> stream(1920);
  for (std::size_t i = 0; i < stream.size(); ++i) stream[i] = static_cast<std::uint8_t>(i / 64);
  const FillRequest second = c.window_for(20);
  c.fill_complete(second, std::span(stream).subspan(second.offset, second.length));
  CHECK(c.resident(16));
  CHECK(c.resident(29));
  CHECK_FALSE(c.resident(15));
  CHECK(c.packet_bytes(20)[0] == 20);
  CHECK(c.window_length() <= c.capacity_bytes());
  CHECK(c.window_offset() % 64 == 0);
  CHECK_THROWS_AS(c.packet_bytes(3), SimulationAbort);

  c.assign(1920);
  CHECK_FALSE(c.resident(20));
}
