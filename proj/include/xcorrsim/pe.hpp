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

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xcorrsim/interconnect.hpp"
#include "xcorrsim/peptides.hpp"
#include "xcorrsim/simd.hpp"
#include "xcorrsim/spectra.hpp"

namespace xcorr::pe {

using interconnect::kBeatBytes;

/// Bin index written into unused lanes at the tail of a packet stream.
inline constexpr std::uint16_t kPadBin = 0xFFFF;

/// 64-byte on-chip transfer unit: 16 (bin, intensity) entries.
struct Packet {
  std::array<std::uint16_t, simd::kPacketLanes> bins{};
  std::array<Half, simd::kPacketLanes> intensities{};

  static Packet decode(std::span<const std::uint8_t> bytes);
};

/// Bytes of a packed stream holding n CSR entries (whole packets).
constexpr std::uint64_t packet_stream_bytes(std::size_t entries) {
  return (entries + simd::kPacketLanes - 1) / simd::kPacketLanes * kBeatBytes;
}

/// CSR entries packed 16 per packet, tail lanes padded with (0xFFFF, +0).
std::vector<std::uint8_t> encode_packet_stream(std::span<const Bin> bins);

/// Peptide record: length byte, then up to 63 residue letters, zero padded.
std::array<std::uint8_t, kBeatBytes> encode_peptide_record(const Peptide& p);
/// Throws SimulationAbort on a malformed record.
std::string decode_peptide_record(std::span<const std::uint8_t> record);

/// Score record written back to DRAM: uint32 peptide index, float bits.
inline constexpr std::uint64_t kScoreRecordBytes = 8;
void encode_score_record(std::uint32_t peptide_index, float score, std::span<std::uint8_t> out);
std::pair<std::uint32_t, float> decode_score_record(std::span<const std::uint8_t> in);

/// Mass index entries are little-endian doubles, 8 per packet.
inline constexpr std::uint64_t kMassEntryBytes = 8;

/// Theoretical ions widened for the kernel.
struct IonList {
  std::vector<std::uint16_t> bins;
  std::vector<float> intensities;

  static IonList from(const TheoreticalSpectrum& t);
  std::size_t size() const { return bins.size(); }
};

/// Ion-matching kernel: one experimental packet held in 16 registers, one
/// theoretical ion compared against all of them per cycle.
struct KernelState {
  std::array<std::uint16_t, simd::kPacketLanes> bins{};
  std::array<float, simd::kPacketLanes> intensities{};
  int valid_lanes = 0;
  std::size_t ion = 0;
  std::uint64_t packet_counter = 0;
  float accumulator = 0.0f;

  void load(const Packet& packet, int valid, const simd::KernelTable& k);
  std::uint16_t max_resident_bin() const { return bins[static_cast<std::size_t>(valid_lanes) - 1]; }
};

enum class KernelEvent { Matched, Missed, NextPacket };

/// One kernel cycle. If the current ion lies past the last resident bin the
/// packet counter advances (the caller loads the next packet); otherwise the
/// ion is compared, accumulated on a hit, and the ion index advances.
/// Requires ion < ions.size() and a loaded packet.
KernelEvent kernel_step(KernelState& kernel, const IonList& ions, const simd::KernelTable& k);

/// Incremental binary search for one bound of the candidate range, driven one
/// DRAM probe at a time.
class BoundSearch {
 public:
  enum class Kind {
    Lower,  // first index whose mass is not below the window
    Upper,  // first index whose mass is above the window
  };

  BoundSearch() = default;
  BoundSearch(Kind kind, std::size_t lo, std::size_t hi, double precursor, double tolerance)
      : kind_(kind), lo_(lo), hi_(hi), precursor_(precursor), tolerance_(tolerance) {}

  bool done() const { return lo_ >= hi_; }
  std::size_t probe_index() const { return lo_ + (hi_ - lo_) / 2; }
  void observe(double mass_at_probe);
  std::size_t result() const { return lo_; }

 private:
  Kind kind_ = Kind::Lower;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  double precursor_ = 0.0;
  double tolerance_ = 0.0;
};

/// Address of the 64-byte packet holding mass_index[k].
constexpr std::uint64_t mass_probe_address(std::uint64_t mass_base, std::size_t k) {
  return mass_base + (k * kMassEntryBytes / kBeatBytes) * kBeatBytes;
}

/// Reads mass_index[k] out of its probe packet.
double mass_from_probe(std::span<const std::uint8_t> packet, std::size_t k);

struct SearchOutcome {
  CandidateRange range;
  std::size_t lower_probes = 0;
  std::size_t upper_probes = 0;
};

/// Both bounds found by probing the mass index in DRAM, one 64-byte read per
/// probe; the result equals find_candidates on the same masses.
SearchOutcome binary_search_sim(const interconnect::DramModel& dram, std::uint64_t mass_base,
                                std::size_t num_peptides, double precursor, double tolerance);

/// Host-programmed location and size of one preprocessed spectrum.
struct SpectrumDescriptor {
  std::uint64_t address = 0;
  std::uint64_t stream_bytes = 0;  // packet-padded
  std::uint32_t entries = 0;
  double precursor_mass = 0.0;
};

/// Parameters the host writes before starting the accelerator.
struct CoreRegisters {
  std::uint64_t mass_index_base = 0;
  std::uint64_t peptide_base = 0;
  std::uint64_t score_base = 0;
  std::uint64_t score_bytes = 0;
  std::uint32_t num_peptides = 0;
  double tolerance = 0.0;
  double bin_width = 1.0;
  std::vector<SpectrumDescriptor> spectra;
};

/// Where a finished spectrum's scores landed.
struct ScoreBlock {
  std::uint64_t address = 0;
  std::uint32_t count = 0;
  bool done = false;
};

/// State shared by all PEs: the spectrum work queue, the score output cursor
/// and the completion table. PEs touch it in id order within a cycle.
struct ControlState {
  std::size_t next_spectrum = 0;
  std::uint64_t score_cursor = 0;
  std::vector<ScoreBlock> completions;
};

struct PeCycles {
  std::uint64_t compute = 0;
  std::uint64_t io = 0;
  std::uint64_t wait = 0;
  std::uint64_t idle = 0;

  std::uint64_t total() const { return compute + io + wait + idle; }
  friend bool operator==(const PeCycles&, const PeCycles&) = default;
};

struct PeCounters {
  std::uint64_t spectra = 0;
  std::uint64_t pairs = 0;
  std::uint64_t fills = 0;
  std::uint64_t probes = 0;
  std::uint64_t peptide_fetches = 0;
  std::uint64_t prefetches = 0;  // fetches issued while a candidate was being processed
  std::uint64_t writebacks = 0;

  friend bool operator==(const PeCounters&, const PeCounters&) = default;
};

enum class Phase {
  Idle,
  FetchSpectrum,
  Search,
  FetchPeptide,
  GenerateIons,
  Score,
  Writeback,
  Done,
};

std::string_view phase_name(Phase p);

struct PhaseEvent {
  std::uint64_t cycle = 0;
  Phase phase = Phase::Idle;
};

/// One processing element: controller FSM, binary search, two-entry peptide
/// FIFO with prefetch, ion generator and ion-matching kernel.
///
/// The clock owner calls on_complete() for the PE's finished transaction (if
/// any), then step() once per cycle. Within a cycle the PE may chain several
/// zero-cost phase transitions but performs at most one timed action: one
/// generated ion, one kernel compare, one packet load, one score store, or
/// waiting on its outstanding bus transaction. Peptide prefetch requests ride
/// alongside compute cycles.
class ProcessingElement {
 public:
  ProcessingElement(std::size_t id, const CoreRegisters& regs, ControlState& control,
                    std::uint64_t cache_bytes, const simd::KernelTable& kernels);

  void on_complete(const interconnect::BusTransaction& txn,
                   const interconnect::DramModel& dram);
  void step(std::uint64_t cycle, interconnect::MemorySystem& mem);

  std::size_t id() const { return id_; }
  Phase phase() const { return phase_; }
  bool done() const { return phase_ == Phase::Done; }
  bool computed_this_cycle() const { return computed_; }

  PeCycles& cycles() { return cycles_; }
  const PeCycles& cycles() const { return cycles_; }
  const PeCounters& counters() const { return counters_; }

  std::size_t fifo_depth() const { return fifo_.size(); }
  CandidateRange candidate_range() const { return range_; }
  std::size_t candidate_cursor() const { return cursor_; }

  void record_phases(bool on) { record_phases_ = on; }
  std::span<const PhaseEvent> phase_log() const { return phase_log_; }

  /// Accumulator values as stored into the local score buffer, per spectrum.
  struct LocalScore {
    std::size_t spectrum = 0;
    std::uint32_t peptide_index = 0;
    float score = 0.0f;
  };
  void record_scores(bool on) { record_scores_ = on; }
  std::span<const LocalScore> score_log() const { return score_log_; }

 private:
  enum class Pending { None, SpectrumFill, Probe, Peptide, Writeback };
  enum class ScoreStage { Load, Compare, Store };

  void enter(Phase p, std::uint64_t cycle);
  void issue(interconnect::MemorySystem& mem, Pending what, interconnect::TxnKind kind,
             std::uint64_t address, std::uint64_t length, std::uint64_t cycle,
             std::vector<std::uint8_t> data = {});
  bool request_fill(interconnect::MemorySystem& mem, std::uint64_t packet, std::uint64_t cycle);
  void maybe_prefetch(interconnect::MemorySystem& mem, std::uint64_t cycle);
  void load_packet(std::uint64_t packet);
  int valid_lanes(std::uint64_t packet) const;
  void begin_candidate();
  void finish_spectrum();

  std::size_t id_;
  const CoreRegisters& regs_;
  ControlState& control_;
  const simd::KernelTable& kernels_;
  interconnect::SpectrumCache cache_;

  Phase phase_ = Phase::Idle;
  bool computed_ = false;
  Pending pending_ = Pending::None;
  interconnect::FillRequest pending_fill_;

  std::size_t spectrum_ = 0;
  const SpectrumDescriptor* desc_ = nullptr;

  BoundSearch lower_;
  BoundSearch upper_;
  bool lower_done_ = false;
  std::size_t probe_index_ = 0;

  CandidateRange range_;
  std::size_t cursor_ = 0;      // candidate being processed
  std::size_t next_fetch_ = 0;  // next candidate record to request
  std::deque<std::string> fifo_;

  IonList ions_;
  std::size_t gen_remaining_ = 0;
  ScoreStage stage_ = ScoreStage::Load;
  bool registers_valid_ = false;
  KernelState kernel_;

  std::vector<std::uint8_t> score_buffer_;
  std::uint32_t score_count_ = 0;
  bool writeback_issued_ = false;
  bool writeback_done_ = false;
  std::uint64_t writeback_address_ = 0;

  PeCycles cycles_;
  PeCounters counters_;
  bool record_phases_ = false;
  std::vector<PhaseEvent> phase_log_;
  bool record_scores_ = false;
  std::vector<LocalScore> score_log_;
};

}  // namespace xcorr::pe
