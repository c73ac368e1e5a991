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

#include "xcorrsim/interconnect.hpp"

#include <algorithm>
#include <string>

#include "xcorrsim/errors.hpp"

namespace xcorr::interconnect {

DramModel::DramModel(std::size_t size_bytes, std::uint64_t latency_cycles)
    : bytes_(size_bytes, 0), latency_(latency_cycles) {
  if (latency_cycles < 1) throw ConfigError("dram_latency_cycles must be >= 1");
}

void DramModel::check_range(std::uint64_t address, std::uint64_t length) const {
  if (length == 0) throw OutOfBounds("zero-length DRAM transaction");
  if (address > bytes_.size() || length > bytes_.size() - address) {
    throw OutOfBounds("DRAM access [" + std::to_string(address) + ", +" + std::to_string(length) +
                      ") outside " + std::to_string(bytes_.size()) + " bytes");
  }
}

std::span<const std::uint8_t> DramModel::read(std::uint64_t address, std::uint64_t length) const {
  check_range(address, length);
  return std::span<const std::uint8_t>(bytes_).subspan(address, length);
}

void DramModel::write(std::uint64_t address, std::span<const std::uint8_t> data) {
  check_range(address, data.size());
  std::copy(data.begin(), data.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(address));
}

std::uint64_t DramModel::dram_access(BusTransaction& txn, std::uint64_t grant_cycle) const {
  check_range(txn.address, txn.length_bytes);
  txn.grant_cycle = grant_cycle;
  txn.completion_cycle = grant_cycle + occupancy_cycles(txn.length_bytes, latency_);
  return txn.completion_cycle;
}

std::optional<std::size_t> Arbiter::step(std::span<const bool> requests, bool bus_busy) {
  std::optional<std::size_t> grant;
  if (!bus_busy) {
    for (std::size_t m = 0; m < counters_.size(); ++m) {
      if (!requests[m]) continue;
      if (!grant || counters_[m] > counters_[*grant]) grant = m;
    }
  }
  for (std::size_t m = 0; m < counters_.size(); ++m) {
    if (!requests[m] || (grant && *grant == m)) {
      counters_[m] = 0;
    } else {
      ++counters_[m];
    }
  }
  return grant;
}

MemorySystem::MemorySystem(std::size_t num_masters, DramModel dram, bool record_trace)
    : dram_(std::move(dram)),
      arbiter_(num_masters),
      request_lines_(new bool[num_masters]()),
      slots_(num_masters),
      record_trace_(record_trace) {}

void MemorySystem::request(std::size_t master, TxnKind kind, std::uint64_t address,
                           std::uint64_t length, std::uint64_t cycle,
                           std::vector<std::uint8_t> write_data) {
  if (outstanding(master)) {
    throw SimulationAbort("master " + std::to_string(master) +
                          " issued a second outstanding request");
  }
  if (kind == TxnKind::Write && write_data.size() != length) {
    throw SimulationAbort("write payload does not match transaction length");
  }
  dram_.check_range(address, length);
  Pending& slot = slots_[master];
  slot.txn = BusTransaction{master, kind, address, length, cycle, 0, 0};
  slot.data = std::move(write_data);
  request_lines_[master] = true;
  ++pending_count_;
}

std::optional<BusTransaction> MemorySystem::retire(std::uint64_t cycle) {
  if (!in_flight_ || in_flight_->txn.completion_cycle != cycle) return std::nullopt;
  Pending done = std::move(*in_flight_);
  in_flight_.reset();
  if (done.txn.kind == TxnKind::Write) dram_.write(done.txn.address, done.data);
  if (record_trace_) trace_.push_back(done.txn);
  return done.txn;
}

std::optional<std::size_t> MemorySystem::arbitrate(std::uint64_t cycle) {
  const std::optional<std::size_t> grant =
      arbiter_.step(std::span<const bool>(request_lines_.get(), slots_.size()), busy());
  if (!grant) return std::nullopt;
  Pending& slot = slots_[*grant];
  dram_.dram_access(slot.txn, cycle);
  bytes_transferred_ += slot.txn.length_bytes;
  ++transactions_;
  in_flight_ = std::move(slot);
  request_lines_[*grant] = false;
  --pending_count_;
  return grant;
}

std::optional<std::size_t> MemorySystem::owner() const {
  if (!in_flight_) return std::nullopt;
  return in_flight_->txn.pe_id;
}

bool MemorySystem::outstanding(std::size_t master) const {
  return request_lines_[master] || (in_flight_ && in_flight_->txn.pe_id == master);
}

SpectrumCache::SpectrumCache(std::uint64_t capacity_bytes) : capacity_(capacity_bytes) {
  if (capacity_bytes < kBeatBytes || capacity_bytes % kBeatBytes != 0) {
    throw ConfigError("cache_bytes must be a positive multiple of 64, got " +
                      std::to_string(capacity_bytes));
  }
}

void SpectrumCache::assign(std::uint64_t spectrum_bytes) {
  if (spectrum_bytes % kBeatBytes != 0) {
    throw SimulationAbort("spectrum stream is not packet-aligned");
  }
  spectrum_bytes_ = spectrum_bytes;
  valid_ = false;
  window_ = {};
}

bool SpectrumCache::resident(std::uint64_t packet) const {
  const std::uint64_t offset = packet * kBeatBytes;
  return valid_ && offset >= window_.offset && offset < window_.offset + window_.length;
}

FillRequest SpectrumCache::window_for(std::uint64_t packet) const {
  const std::uint64_t start = (packet * kBeatBytes / capacity_) * capacity_;
  if (start >= spectrum_bytes_) return {start, 0};
  return {start, std::min(capacity_, spectrum_bytes_ - start)};
}

void SpectrumCache::fill_complete(const FillRequest& fill, std::span<const std::uint8_t> bytes) {
  if (fill.length > capacity_ || bytes.size() != fill.length ||
      fill.offset + fill.length > spectrum_bytes_) {
    throw SimulationAbort("cache fill does not match the requested window");
  }
  window_ = fill;
  data_.assign(bytes.begin(), bytes.end());
  valid_ = true;
}

std::span<const std::uint8_t> SpectrumCache::packet_bytes(std::uint64_t packet) const {
  if (!resident(packet)) throw SimulationAbort("kernel read a packet that is not resident");
  return std::span<const std::uint8_t>(data_).subspan(packet * kBeatBytes - window_.offset,
                                                      kBeatBytes);
}

std::vector<FillRequest> cache_fill(const SpectrumCache& cache, std::uint64_t spectrum_bytes,
                                    std::uint64_t window_start) {
  if (window_start % kBeatBytes != 0) throw ConfigError("window start must be packet-aligned");
  if (window_start >= spectrum_bytes) return {};
  return {FillRequest{window_start,
                      std::min(cache.capacity_bytes(), spectrum_bytes - window_start)}};
}

}  // namespace xcorr::interconnect
