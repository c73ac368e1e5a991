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

#include "xcorrsim/pe.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "xcorrsim/errors.hpp"

namespace xcorr::pe {

using interconnect::BusTransaction;
using interconnect::MemorySystem;
using interconnect::TxnKind;

Packet Packet::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kBeatBytes) throw SimulationAbort("packet is not 64 bytes");
  Packet p;
  for (std::size_t lane = 0; lane < simd::kPacketLanes; ++lane) {
    const std::uint8_t* e = bytes.data() + 4 * lane;
    p.bins[lane] = static_cast<std::uint16_t>(e[0] | (e[1] << 8));
    p.intensities[lane] = Half(static_cast<std::uint16_t>(e[2] | (e[3] << 8)));
  }
  return p;
}

std::vector<std::uint8_t> encode_packet_stream(std::span<const Bin> bins) {
  std::vector<std::uint8_t> bytes = encode_csr(bins);
  bytes.reserve(packet_stream_bytes(bins.size()));
  while (bytes.size() % kBeatBytes != 0) {
    bytes.push_back(kPadBin & 0xFF);
    bytes.push_back(kPadBin >> 8);
    bytes.push_back(0);
    bytes.push_back(0);
  }
  return bytes;
}

std::array<std::uint8_t, kBeatBytes> encode_peptide_record(const Peptide& p) {
  if (p.sequence.empty() || p.sequence.size() > kMaxPeptideLength) {
    throw InvalidResidue("peptide does not fit a 64-byte record: " + p.sequence);
  }
  std::array<std::uint8_t, kBeatBytes> rec{};
  rec[0] = static_cast<std::uint8_t>(p.sequence.size());
  std::memcpy(rec.data() + 1, p.sequence.data(), p.sequence.size());
  return rec;
}

std::string decode_peptide_record(std::span<const std::uint8_t> record) {
  if (record.size() != kBeatBytes) throw SimulationAbort("peptide record is not 64 bytes");
  const std::size_t len = record[0];
  if (len == 0 || len > kMaxPeptideLength) {
    throw SimulationAbort("peptide record has invalid length " + std::to_string(len));
  }
  return std::string(reinterpret_cast<const char*>(record.data() + 1), len);
}

void encode_score_record(std::uint32_t peptide_index, float score, std::span<std::uint8_t> out) {
  const auto bits = std::bit_cast<std::uint32_t>(score);
  for (int b = 0; b < 4; ++b) {
    out[b] = static_cast<std::uint8_t>(peptide_index >> (8 * b));
    out[4 + b] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
}

std::pair<std::uint32_t, float> decode_score_record(std::span<const std::uint8_t> in) {
  std::uint32_t index = 0;
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) {
    index |= static_cast<std::uint32_t>(in[b]) << (8 * b);
    bits |= static_cast<std::uint32_t>(in[4 + b]) << (8 * b);
  }
  return {index, std::bit_cast<float>(bits)};
}

IonList IonList::from(const TheoreticalSpectrum& t) {
  IonList out;
  out.bins.reserve(t.ions.size());
  out.intensities.reserve(t.ions.size());
  for (const Bin& b : t.ions) {
    out.bins.push_back(b.index);
    out.intensities.push_back(half_to_float(b.intensity));
  }
  return out;
}

void KernelState::load(const Packet& packet, int valid, const simd::KernelTable& k) {
  bins = packet.bins;
  std::array<std::uint16_t, simd::kPacketLanes> raw{};
  for (std::size_t lane = 0; lane < simd::kPacketLanes; ++lane) {
    raw[lane] = packet.intensities[lane].bits;
  }
  k.halves_to_floats(raw, intensities);
  valid_lanes = valid;
}

KernelEvent kernel_step(KernelState& kernel, const IonList& ions, const simd::KernelTable& k) {
  const std::uint16_t bin = ions.bins[kernel.ion];
  if (bin > kernel.max_resident_bin()) {
    ++kernel.packet_counter;
    return KernelEvent::NextPacket;
  }
  const int lane = k.match16(kernel.bins.data(), bin);
  const float x = ions.intensities[kernel.ion];
  ++kernel.ion;
  if (lane < 0 || lane >= kernel.valid_lanes) return KernelEvent::Missed;
  kernel.accumulator += x * kernel.intensities[static_cast<std::size_t>(lane)];
  return KernelEvent::Matched;
}

void BoundSearch::observe(double mass_at_probe) {
  const std::size_t mid = probe_index();
  const bool go_right = kind_ == Kind::Lower
                            ? below_window(mass_at_probe, precursor_, tolerance_)
                            : !above_window(mass_at_probe, precursor_, tolerance_);
  if (go_right) {
    lo_ = mid + 1;
  } else {
    hi_ = mid;
  }
}

double mass_from_probe(std::span<const std::uint8_t> packet, std::size_t k) {
  const std::size_t offset = (k * kMassEntryBytes) % kBeatBytes;
  std::uint64_t bits = 0;
  for (std::size_t b = 0; b < kMassEntryBytes; ++b) {
    bits |= static_cast<std::uint64_t>(packet[offset + b]) << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

SearchOutcome binary_search_sim(const interconnect::DramModel& dram, std::uint64_t mass_base,
                                std::size_t num_peptides, double precursor, double tolerance) {
  SearchOutcome out;
  auto run = [&](BoundSearch s, std::size_t& probes) {
    while (!s.done()) {
      const std::size_t k = s.probe_index();
      s.observe(mass_from_probe(dram.read(mass_probe_address(mass_base, k), kBeatBytes), k));
      ++probes;
    }
    return s.result();
  };
  const std::size_t lo =
      run(BoundSearch(BoundSearch::Kind::Lower, 0, num_peptides, precursor, tolerance),
          out.lower_probes);
  const std::size_t hi =
      run(BoundSearch(BoundSearch::Kind::Upper, lo, num_peptides, precursor, tolerance),
          out.upper_probes);
  out.range = {lo, hi};
  return out;
}

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Idle: return "IDLE";
    case Phase::FetchSpectrum: return "FETCH_SPECTRUM";
    case Phase::Search: return "SEARCH";
    case Phase::FetchPeptide: return "FETCH_PEPTIDE";
    case Phase::GenerateIons: return "GENERATE_IONS";
    case Phase::Score: return "SCORE";
    case Phase::Writeback: return "WRITEBACK";
    case Phase::Done: return "DONE";
  }
  return "?";
}

ProcessingElement::ProcessingElement(std::size_t id, const CoreRegisters& regs,
                                     ControlState& control, std::uint64_t cache_bytes,
                                     const simd::KernelTable& kernels)
    : id_(id), regs_(regs), control_(control), kernels_(kernels), cache_(cache_bytes) {}

void ProcessingElement::enter(Phase p, std::uint64_t cycle) {
  phase_ = p;
  if (record_phases_) phase_log_.push_back({cycle, p});
}

void ProcessingElement::issue(MemorySystem& mem, Pending what, TxnKind kind,
                              std::uint64_t address, std::uint64_t length, std::uint64_t cycle,
                              std::vector<std::uint8_t> data) {
  mem.request(id_, kind, address, length, cycle, std::move(data));
  pending_ = what;
}

bool ProcessingElement::request_fill(MemorySystem& mem, std::uint64_t packet,
                                     std::uint64_t cycle) {
  if (pending_ != Pending::None) return false;
  pending_fill_ = cache_.window_for(packet);
  issue(mem, Pending::SpectrumFill, TxnKind::Read, desc_->address + pending_fill_.offset,
        pending_fill_.length, cycle);
  ++counters_.fills;
  return true;
}

void ProcessingElement::maybe_prefetch(MemorySystem& mem, std::uint64_t cycle) {
  const bool busy_with_candidate = phase_ == Phase::GenerateIons || phase_ == Phase::Score ||
                                   phase_ == Phase::FetchPeptide;
  if (!busy_with_candidate || pending_ != Pending::None || next_fetch_ >= range_.hi ||
      fifo_.size() >= 2) {
    return;
  }
  issue(mem, Pending::Peptide, TxnKind::Read, regs_.peptide_base + next_fetch_ * kBeatBytes,
        kBeatBytes, cycle);
  ++next_fetch_;
  ++counters_.peptide_fetches;
  ++counters_.prefetches;
}

int ProcessingElement::valid_lanes(std::uint64_t packet) const {
  const std::uint64_t first = packet * simd::kPacketLanes;
  return static_cast<int>(std::min<std::uint64_t>(simd::kPacketLanes, desc_->entries - first));
}

void ProcessingElement::load_packet(std::uint64_t packet) {
  kernel_.load(Packet::decode(cache_.packet_bytes(packet)), valid_lanes(packet), kernels_);
  registers_valid_ = true;
}

void ProcessingElement::begin_candidate() {
  Peptide p;
  try {
    p = Peptide::from_sequence(fifo_.front());
  } catch (const Error& e) {
    throw SimulationAbort("PE " + std::to_string(id_) + " fetched a corrupt peptide: " + e.what());
  }
  ions_ = IonList::from(generate_ions(p, regs_.bin_width));
  gen_remaining_ = raw_fragment_count(p);
}

void ProcessingElement::finish_spectrum() {
  ScoreBlock& block = control_.completions[spectrum_];
  block.address = writeback_address_;
  block.count = score_count_;
  block.done = true;
  score_buffer_.clear();
  score_count_ = 0;
  writeback_issued_ = false;
  writeback_done_ = false;
  writeback_address_ = 0;
}

void ProcessingElement::on_complete(const BusTransaction& txn,
                                    const interconnect::DramModel& dram) {
  switch (pending_) {
    case Pending::SpectrumFill:
      cache_.fill_complete(pending_fill_, dram.read(txn.address, txn.length_bytes));
      break;
    case Pending::Probe: {
      const double m = mass_from_probe(dram.read(txn.address, txn.length_bytes), probe_index_);
      (lower_done_ ? upper_ : lower_).observe(m);
      break;
    }
    case Pending::Peptide:
      fifo_.push_back(decode_peptide_record(dram.read(txn.address, txn.length_bytes)));
      break;
    case Pending::Writeback:
      writeback_done_ = true;
      break;
    case Pending::None:
      throw SimulationAbort("PE " + std::to_string(id_) + " received an unexpected completion");
  }
  pending_ = Pending::None;
}

void ProcessingElement::step(std::uint64_t cycle, MemorySystem& mem) {
  computed_ = false;
  // Zero-cost transitions chain within the cycle; every branch that returns
  // has either done one timed action or is waiting on the bus.
  for (int hops = 0; hops < 16; ++hops) {
    switch (phase_) {
      case Phase::Idle: {
        if (control_.next_spectrum >= regs_.spectra.size()) {
          enter(Phase::Done, cycle);
          return;
        }
        spectrum_ = control_.next_spectrum++;
        desc_ = &regs_.spectra[spectrum_];
        cache_.assign(desc_->stream_bytes);
        range_ = {};
        ++counters_.spectra;
        enter(Phase::FetchSpectrum, cycle);
        continue;
      }

      case Phase::FetchSpectrum: {
        if (desc_->stream_bytes == 0 || cache_.resident(0)) {
          lower_ = BoundSearch(BoundSearch::Kind::Lower, 0, regs_.num_peptides,
                               desc_->precursor_mass, regs_.tolerance);
          lower_done_ = false;
          enter(Phase::Search, cycle);
          continue;
        }
        request_fill(mem, 0, cycle);
        return;
      }

      case Phase::Search: {
        if (pending_ == Pending::Probe) return;
        BoundSearch& s = lower_done_ ? upper_ : lower_;
        if (!s.done()) {
          probe_index_ = s.probe_index();
          issue(mem, Pending::Probe, TxnKind::Read,
                mass_probe_address(regs_.mass_index_base, probe_index_), kBeatBytes, cycle);
          ++counters_.probes;
          return;
        }
        if (!lower_done_) {
          lower_done_ = true;
          upper_ = BoundSearch(BoundSearch::Kind::Upper, lower_.result(), regs_.num_peptides,
                               desc_->precursor_mass, regs_.tolerance);
          continue;
        }
        range_ = {lower_.result(), upper_.result()};
        cursor_ = next_fetch_ = range_.lo;
        enter(range_.empty() ? Phase::Writeback : Phase::FetchPeptide, cycle);
        continue;
      }

      case Phase::FetchPeptide: {
        if (!fifo_.empty()) {
          begin_candidate();
          enter(Phase::GenerateIons, cycle);
          continue;
        }
        if (pending_ == Pending::None) {
          issue(mem, Pending::Peptide, TxnKind::Read,
                regs_.peptide_base + next_fetch_ * kBeatBytes, kBeatBytes, cycle);
          ++next_fetch_;
          ++counters_.peptide_fetches;
        }
        return;
      }

      case Phase::GenerateIons: {
        if (gen_remaining_ > 0) {
          --gen_remaining_;
          computed_ = true;
          maybe_prefetch(mem, cycle);
          return;
        }
        kernel_ = KernelState{};
        registers_valid_ = false;
        stage_ = ScoreStage::Load;
        enter(Phase::Score, cycle);
        continue;
      }

      case Phase::Score: {
        const std::uint64_t packets = cache_.num_packets();
        if (stage_ != ScoreStage::Store &&
            (kernel_.ion >= ions_.size() || kernel_.packet_counter >= packets)) {
          stage_ = ScoreStage::Store;
        }
        if (stage_ == ScoreStage::Store) {
          const std::size_t at = score_buffer_.size();
          score_buffer_.resize(at + kScoreRecordBytes);
          encode_score_record(static_cast<std::uint32_t>(cursor_), kernel_.accumulator,
                              std::span<std::uint8_t>(score_buffer_).subspan(at));
          if (record_scores_) {
            score_log_.push_back(
                {spectrum_, static_cast<std::uint32_t>(cursor_), kernel_.accumulator});
          }
          ++score_count_;
          ++counters_.pairs;
          computed_ = true;
          fifo_.pop_front();
          ++cursor_;
          if (cursor_ >= range_.hi) {
            enter(Phase::Writeback, cycle);
          } else if (!fifo_.empty()) {
            begin_candidate();
            enter(Phase::GenerateIons, cycle);
          } else {
            enter(Phase::FetchPeptide, cycle);
          }
          maybe_prefetch(mem, cycle);
          return;
        }
        if (!registers_valid_) {
          const std::uint64_t pc = kernel_.packet_counter;
          if (!cache_.resident(pc)) {
            request_fill(mem, pc, cycle);  // no-op while a prefetch is outstanding
            return;
          }
          load_packet(pc);
          stage_ = ScoreStage::Compare;
          computed_ = true;
          maybe_prefetch(mem, cycle);
          return;
        }
        const KernelEvent ev = kernel_step(kernel_, ions_, kernels_);
        computed_ = true;
        if (ev == KernelEvent::NextPacket) {
          // The counter increment is the load cycle when the next packet is
          // already on chip; otherwise the kernel stalls for a fill.
          const std::uint64_t pc = kernel_.packet_counter;
          if (pc < packets && cache_.resident(pc)) {
            load_packet(pc);
          } else {
            registers_valid_ = false;
          }
        }
        maybe_prefetch(mem, cycle);
        return;
      }

      case Phase::Writeback: {
        if (score_count_ == 0) {
          finish_spectrum();
          enter(Phase::Idle, cycle);
          continue;
        }
        if (writeback_done_) {
          finish_spectrum();
          enter(Phase::Idle, cycle);
          continue;
        }
        if (!writeback_issued_ && pending_ == Pending::None) {
          const std::uint64_t bytes = score_buffer_.size();
          if (control_.score_cursor + bytes > regs_.score_base + regs_.score_bytes) {
            throw SimulationAbort("score region overflow");
          }
          writeback_address_ = control_.score_cursor;
          control_.score_cursor += bytes;
          issue(mem, Pending::Writeback, TxnKind::Write, writeback_address_, bytes, cycle,
                score_buffer_);
          writeback_issued_ = true;
          ++counters_.writebacks;
        }
        return;
      }

      case Phase::Done:
        return;
    }
  }
  throw SimulationAbort("PE " + std::to_string(id_) + " controller did not settle");
}

}  // namespace xcorr::pe
