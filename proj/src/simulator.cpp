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

#include "xcorrsim/simulator.hpp"

#include <bit>
#include <numeric>

#include "xcorrsim/errors.hpp"

namespace xcorr {

using interconnect::kBeatBytes;

namespace {

std::uint64_t align_up(std::uint64_t v) { return (v + kBeatBytes - 1) / kBeatBytes * kBeatBytes; }

double average(const std::vector<pe::PeCycles>& per_pe, std::uint64_t pe::PeCycles::*field) {
  if (per_pe.empty()) return 0.0;
  std::uint64_t sum = 0;
  for (const pe::PeCycles& c : per_pe) sum += c.*field;
  return static_cast<double>(sum) / static_cast<double>(per_pe.size());
}

}  // namespace

double SimMetrics::avg_compute_s() const {
  return average(per_pe, &pe::PeCycles::compute) / (clock_mhz * 1e6);
}
double SimMetrics::avg_io_s() const { return average(per_pe, &pe::PeCycles::io) / (clock_mhz * 1e6); }
double SimMetrics::avg_wait_s() const {
  return average(per_pe, &pe::PeCycles::wait) / (clock_mhz * 1e6);
}

DramImage build_dram_image(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                           double tolerance, double bin_width) {
  DramImage img;
  pe::CoreRegisters& r = img.regs;
  r.num_peptides = static_cast<std::uint32_t>(db.size());
  r.tolerance = tolerance;
  r.bin_width = bin_width;

  std::uint64_t at = 0;
  r.mass_index_base = at;
  at = align_up(at + db.size() * pe::kMassEntryBytes);
  r.peptide_base = at;
  at += db.size() * kBeatBytes;

  std::vector<std::vector<std::uint8_t>> streams;
  streams.reserve(spectra.size());
  for (const PreprocessedSpectrum& s : spectra) {
    s.validate();
    streams.push_back(pe::encode_packet_stream(s.bins));
    r.spectra.push_back({at, streams.back().size(), static_cast<std::uint32_t>(s.bins.size()),
                         s.precursor_mass});
    at += streams.back().size();
  }

  // The host sizes the output buffer from the candidate count.
  r.score_base = at;
  r.score_bytes = count_pairs(db, spectra, tolerance) * pe::kScoreRecordBytes;
  at = align_up(at + r.score_bytes);

  img.bytes.assign(std::max<std::uint64_t>(at, kBeatBytes), 0);
  const std::span<const double> masses = db.mass_index();
  for (std::size_t k = 0; k < masses.size(); ++k) {
    const auto bits = std::bit_cast<std::uint64_t>(masses[k]);
    for (std::size_t b = 0; b < pe::kMassEntryBytes; ++b) {
      img.bytes[r.mass_index_base + k * pe::kMassEntryBytes + b] =
          static_cast<std::uint8_t>(bits >> (8 * b));
    }
  }
  for (std::size_t k = 0; k < db.size(); ++k) {
    const auto rec = pe::encode_peptide_record(db[k]);
    std::copy(rec.begin(), rec.end(), img.bytes.begin() + static_cast<std::ptrdiff_t>(r.peptide_base + k * kBeatBytes));
  }
  for (std::size_t s = 0; s < streams.size(); ++s) {
    std::copy(streams[s].begin(), streams[s].end(),
              img.bytes.begin() + static_cast<std::ptrdiff_t>(r.spectra[s].address));
  }
  return img;
}

SimResult simulate(const SimConfig& config, const PeptideDb& db,
                   std::span<const PreprocessedSpectrum> spectra, const SimOptions& options) {
  config.validate();
  const simd::KernelTable& kernels = options.kernels ? *options.kernels : simd::kernels();

  DramImage img = build_dram_image(db, spectra, config.tolerance_da, config.bin_width);
  interconnect::DramModel dram(img.bytes.size(), config.dram_latency_cycles);
  std::copy(img.bytes.begin(), img.bytes.end(), dram.host_view().begin());
  interconnect::MemorySystem mem(config.num_pes, std::move(dram), options.record_trace);

  pe::ControlState control;
  control.score_cursor = img.regs.score_base;
  control.completions.resize(spectra.size());

  std::vector<pe::ProcessingElement> pes;
  pes.reserve(config.num_pes);
  for (std::size_t id = 0; id < config.num_pes; ++id) {
    pes.emplace_back(id, img.regs, control, config.cache_bytes, kernels);
    pes.back().record_phases(options.record_phases);
    pes.back().record_scores(options.record_local_scores);
  }

  std::uint64_t cycle = 0;
  for (;; ++cycle) {
    if (auto done = mem.retire(cycle)) pes[done->pe_id].on_complete(*done, mem.dram());

    bool all_done = true;
    for (pe::ProcessingElement& p : pes) {
      p.step(cycle, mem);
      all_done = all_done && p.done();
    }
    if (all_done && !mem.busy() && !mem.any_pending()) break;

    mem.arbitrate(cycle);

    const std::optional<std::size_t> owner = mem.owner();
    for (pe::ProcessingElement& p : pes) {
      pe::PeCycles& c = p.cycles();
      if (p.computed_this_cycle()) {
        ++c.compute;
      } else if (owner && *owner == p.id()) {
        ++c.io;
      } else if (mem.pending(p.id())) {
        ++c.wait;
      } else {
        ++c.idle;
      }
    }
  }

  SimResult result;
  SimMetrics& m = result.metrics;
  m.clock_mhz = config.clock_mhz;
  m.total_cycles = cycle;
  m.total_dram_bytes = mem.bytes_transferred();
  m.transactions = mem.transactions();
  for (const pe::ProcessingElement& p : pes) {
    m.per_pe.push_back(p.cycles());
    m.fills_count += p.counters().fills;
    result.counters.push_back(p.counters());
    if (options.record_phases) {
      result.phases.emplace_back(p.phase_log().begin(), p.phase_log().end());
    }
    if (options.record_local_scores) {
      result.local_scores.insert(result.local_scores.end(), p.score_log().begin(),
                                 p.score_log().end());
    }
  }
  if (options.record_trace) result.trace.assign(mem.trace().begin(), mem.trace().end());

  // Read the results back the way the host would.
  const interconnect::DramModel& out = mem.dram();
  for (std::size_t s = 0; s < spectra.size(); ++s) {
    const pe::ScoreBlock& block = control.completions[s];
    if (!block.done) throw SimulationAbort("spectrum " + spectra[s].id + " never completed");
    if (block.count == 0) continue;
    const auto bytes = out.read(block.address, block.count * pe::kScoreRecordBytes);
    for (std::uint32_t k = 0; k < block.count; ++k) {
      const auto [index, score] =
          pe::decode_score_record(bytes.subspan(k * pe::kScoreRecordBytes, pe::kScoreRecordBytes));
      result.scores.scores.push_back({spectra[s].id, index, score});
    }
    result.scores.pair_count += block.count;
  }
  m.total_pairs = result.scores.pair_count;
  return result;
}

}  // namespace xcorr
