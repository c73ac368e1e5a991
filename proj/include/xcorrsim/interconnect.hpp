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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace xcorr::interconnect {

/// Bytes moved per bus beat; also the on-chip packet size.
inline constexpr std::uint64_t kBeatBytes = 64;

enum class TxnKind : std::uint8_t { Read, Write };

/// One arbitrated DRAM burst.
struct BusTransaction {
  std::size_t pe_id = 0;
  TxnKind kind = TxnKind::Read;
  std::uint64_t address = 0;
  std::uint64_t length_bytes = 0;
  std::uint64_t issue_cycle = 0;       // request line raised
  std::uint64_t grant_cycle = 0;       // bus granted
  std::uint64_t completion_cycle = 0;  // data delivered / write committed; bus free again
};

/// Cycles a transaction holds the bus: latency plus one cycle per beat.
constexpr std::uint64_t occupancy_cycles(std::uint64_t length_bytes, std::uint64_t latency) {
  return latency + (length_bytes + kBeatBytes - 1) / kBeatBytes;
}

/// Flat byte-addressable DRAM behind a single shared bus.
class DramModel {
 public:
  DramModel(std::size_t size_bytes, std::uint64_t latency_cycles);

  std::uint64_t latency_cycles() const { return latency_; }
  std::size_t size() const { return bytes_.size(); }

  /// Throws OutOfBounds for zero length or a range past the end.
  void check_range(std::uint64_t address, std::uint64_t length) const;

  std::span<const std::uint8_t> read(std::uint64_t address, std::uint64_t length) const;
  void write(std::uint64_t address, std::span<const std::uint8_t> data);

  /// Host-side image loading; not a bus transaction.
  std::span<std::uint8_t> host_view() { return bytes_; }

  /// Starts txn at grant_cycle and returns its completion cycle
  /// (grant + latency + ceil(length / 64)).
  std::uint64_t dram_access(BusTransaction& txn, std::uint64_t grant_cycle) const;

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t latency_;
};

/// First-come first-serve arbiter built from per-master wait counters and a
/// find-max comparator tree.
///
/// Each cycle with the bus idle, the requesting master with the largest
/// counter wins (lowest id on ties) and its counter resets. Every requester
/// that is not granted, including all of them while the bus is busy, counts
/// up by one. Counters of masters that are not requesting read zero.
class Arbiter {
 public:
  explicit Arbiter(std::size_t num_masters) : counters_(num_masters, 0) {}

  std::optional<std::size_t> step(std::span<const bool> requests, bool bus_busy);

  std::span<const std::uint64_t> wait_counters() const { return counters_; }
  std::size_t num_masters() const { return counters_.size(); }

 private:
  std::vector<std::uint64_t> counters_;
};

/// The shared bus: one pending request slot per master, one transaction in
/// flight. Driven by the clock owner as retire -> (masters act) -> arbitrate.
class MemorySystem {
 public:
  MemorySystem(std::size_t num_masters, DramModel dram, bool record_trace = false);

  /// Raise a master's request line. At most one request or transaction per
  /// master may be outstanding.
  void request(std::size_t master, TxnKind kind, std::uint64_t address, std::uint64_t length,
               std::uint64_t cycle, std::vector<std::uint8_t> write_data = {});

  /// Completes the in-flight transaction if it finishes at this cycle. Write
  /// data is committed before returning.
  std::optional<BusTransaction> retire(std::uint64_t cycle);

  /// Grants the bus if idle. Returns the granted master, if any.
  std::optional<std::size_t> arbitrate(std::uint64_t cycle);

  bool busy() const { return in_flight_.has_value(); }
  std::optional<std::size_t> owner() const;
  bool pending(std::size_t master) const { return request_lines_[master]; }
  bool any_pending() const { return pending_count_ > 0; }
  bool outstanding(std::size_t master) const;

  const DramModel& dram() const { return dram_; }
  DramModel& dram() { return dram_; }
  const Arbiter& arbiter() const { return arbiter_; }
  std::span<const BusTransaction> trace() const { return trace_; }
  std::uint64_t bytes_transferred() const { return bytes_transferred_; }
  std::uint64_t transactions() const { return transactions_; }

 private:
  struct Pending {
    BusTransaction txn;
    std::vector<std::uint8_t> data;
  };

  DramModel dram_;
  Arbiter arbiter_;
  std::unique_ptr<bool[]> request_lines_;
  std::vector<Pending> slots_;
  std::size_t pending_count_ = 0;
  std::optional<Pending> in_flight_;
  bool record_trace_;
  std::vector<BusTransaction> trace_;
  std::uint64_t bytes_transferred_ = 0;
  std::uint64_t transactions_ = 0;
};

/// Burst needed to bring part of a spectrum stream on chip.
struct FillRequest {
  std::uint64_t offset = 0;  // byte offset within the spectrum stream
  std::uint64_t length = 0;

  friend bool operator==(const FillRequest&, const FillRequest&) = default;
};

/// Per-PE on-chip spectrum buffer: a software-managed, packet-aligned window
/// over the current spectrum's packet stream. Windows sit at multiples of the
/// capacity, so a spectrum that fits is loaded once and one that does not is
/// re-streamed window by window on every scoring pass.
class SpectrumCache {
 public:
  /// Throws ConfigError unless capacity is a positive multiple of 64.
  explicit SpectrumCache(std::uint64_t capacity_bytes);

  std::uint64_t capacity_bytes() const { return capacity_; }
  std::uint64_t capacity_packets() const { return capacity_ / kBeatBytes; }

  /// Switch to a new spectrum stream of the given (packet-padded) size.
  void assign(std::uint64_t spectrum_bytes);
  std::uint64_t spectrum_bytes() const { return spectrum_bytes_; }
  std::uint64_t num_packets() const { return spectrum_bytes_ / kBeatBytes; }

  bool resident(std::uint64_t packet) const;

  /// The window containing packet. Length is min(capacity, remaining bytes).
  FillRequest window_for(std::uint64_t packet) const;

  /// Record a completed fill; bytes are the packed stream slice.
  void fill_complete(const FillRequest& fill, std::span<const std::uint8_t> bytes);

  /// Packed bytes of a resident packet.
  std::span<const std::uint8_t> packet_bytes(std::uint64_t packet) const;

  std::uint64_t window_offset() const { return window_.offset; }
  std::uint64_t window_length() const { return window_.length; }

 private:
  std::uint64_t capacity_;
  std::uint64_t spectrum_bytes_ = 0;
  FillRequest window_;
  bool valid_ = false;
  std::vector<std::uint8_t> data_;
};

/// The single burst that loads the window starting at window_start:
/// min(capacity, spectrum_bytes - window_start) bytes. Empty when nothing
/// remains. Throws ConfigError if window_start is not packet-aligned.
std::vector<FillRequest> cache_fill(const SpectrumCache& cache, std::uint64_t spectrum_bytes,
                                    std::uint64_t window_start);

}  // namespace xcorr::interconnect
