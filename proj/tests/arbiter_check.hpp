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

// Drives a MemorySystem with random requests and audits every arbitration.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "xcorrsim/interconnect.hpp"

namespace arbiter_check {

struct Violations {
  std::uint64_t mutual_exclusion = 0;
  std::uint64_t work_conservation = 0;
  std::uint64_t counter_soundness = 0;
  std::uint64_t longest_waiter = 0;
  std::uint64_t starvation = 0;
  std::uint64_t grants = 0;

  std::uint64_t total() const {
    return mutual_exclusion + work_conservation + counter_soundness + longest_waiter + starvation;
  }
};

inline Violations run(std::size_t masters, std::uint64_t cycles, std::uint64_t seed,
                      double request_rate = 0.3, std::uint64_t latency = 3) {
  using namespace xcorr::interconnect;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution wants(request_rate);
  std::uniform_int_distribution<std::uint64_t> length(1, 256);
  constexpr std::uint64_t kMemory = 1 << 16;
  std::uniform_int_distribution<std::uint64_t> address(0, kMemory - 256);
  const std::uint64_t max_txn = occupancy_cycles(256, latency);

  MemorySystem mem(masters, DramModel(kMemory, latency), true);
  std::vector<std::uint64_t> since(masters, 0);  // cycle the request line went up
  Violations v;

  for (std::uint64_t c = 0; c < cycles; ++c) {
    mem.retire(c);
    for (std::size_t m = 0; m < masters; ++m) {
      if (!mem.outstanding(m) && wants(rng)) {
        mem.request(m, TxnKind::Read, address(rng), length(rng), c);
        since[m] = c;
      }
    }
    const auto before = std::vector<std::uint64_t>(mem.arbiter().wait_counters().begin(),
                                                   mem.arbiter().wait_counters().end());
    const bool was_busy = mem.busy();
    const bool any = mem.any_pending();
    std::vector<bool> requesting(masters);
    for (std::size_t m = 0; m < masters; ++m) requesting[m] = mem.pending(m);

    const auto grant = mem.arbitrate(c);
    const auto after = mem.arbiter().wait_counters();

    if (grant) {
      ++v.grants;
      if (was_busy) ++v.mutual_exclusion;
      // Longest waiter wins, lowest id on ties.
      for (std::size_t m = 0; m < masters; ++m) {
        if (!requesting[m] || m == *grant) continue;
        if (before[m] > before[*grant] || (before[m] == before[*grant] && m < *grant)) {
          ++v.longest_waiter;
        }
      }
      if (c - since[*grant] > (masters - 1) * max_txn) ++v.starvation;
    } else if (!was_busy && any) {
      ++v.work_conservation;
    }
    for (std::size_t m = 0; m < masters; ++m) {
      const std::uint64_t want = mem.pending(m) ? c - since[m] + 1 : 0;
      if (after[m] != want) ++v.counter_soundness;
    }
  }

  // Recorded transactions never overlap on the bus.
  const auto trace = mem.trace();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].grant_cycle < trace[i - 1].completion_cycle) ++v.mutual_exclusion;
  }
  for (const BusTransaction& t : trace) {
    if (t.completion_cycle != t.grant_cycle + occupancy_cycles(t.length_bytes, latency)) {
      ++v.mutual_exclusion;
    }
  }
  return v;
}

}  // namespace arbiter_check
