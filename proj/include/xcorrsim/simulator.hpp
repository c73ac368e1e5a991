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

#include <cstdint>
#include <span>
#include <vector>

#include "xcorrsim/config.hpp"
#include "xcorrsim/interconnect.hpp"
#include "xcorrsim/pe.hpp"
#include "xcorrsim/peptides.hpp"
#include "xcorrsim/scoring.hpp"
#include "xcorrsim/simd.hpp"
#include "xcorrsim/spectra.hpp"

namespace xcorr {

/// Cycle accounting for one run. Every PE cycle lands in exactly one bucket:
/// compute (ion generation or kernel active), io (the PE's own transaction
/// holds the bus), wait (request raised, not granted), idle otherwise.
struct SimMetrics {
  std::vector<pe::PeCycles> per_pe;
  std::uint64_t total_cycles = 0;
  std::uint64_t total_pairs = 0;
  std::uint64_t total_dram_bytes = 0;
  std::uint64_t fills_count = 0;
  std::uint64_t transactions = 0;
  double clock_mhz = 200.0;

  double seconds(std::uint64_t cycles) const {
    return static_cast<double>(cycles) / (clock_mhz * 1e6);
  }
  double total_seconds() const { return seconds(total_cycles); }
  double avg_compute_s() const;
  double avg_io_s() const;
  double avg_wait_s() const;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct SimOptions {
  bool record_trace = false;
  bool record_phases = false;
  bool record_local_scores = false;
  /// Kernel variant; nullptr selects simd::kernels().
  const simd::KernelTable* kernels = nullptr;
};

struct SimResult {
  SimMetrics metrics;
  /// Scores decoded from the DRAM score region, spectrum order then candidate.
  ScoreBatch scores;
  std::vector<interconnect::BusTransaction> trace;
  std::vector<std::vector<pe::PhaseEvent>> phases;
  std::vector<pe::ProcessingElement::LocalScore> local_scores;
  std::vector<pe::PeCounters> counters;
};

/// DRAM layout the host prepares: mass index, peptide records, packed
/// spectrum streams, score region; each 64-byte aligned.
struct DramImage {
  pe::CoreRegisters regs;
  std::vector<std::uint8_t> bytes;
};

DramImage build_dram_image(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                           double tolerance, double bin_width);

/// Runs the accelerator to completion on preprocessed spectra.
/// Throws ConfigError for invalid parameters and SimulationAbort if the
/// hardware model detects inconsistent state.
SimResult simulate(const SimConfig& config, const PeptideDb& db,
                   std::span<const PreprocessedSpectrum> spectra, const SimOptions& options = {});

}  // namespace xcorr
