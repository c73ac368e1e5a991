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
#include <iosfwd>
#include <string>
#include <vector>

#include "xcorrsim/config.hpp"
#include "xcorrsim/peptides.hpp"
#include "xcorrsim/scoring.hpp"
#include "xcorrsim/simulator.hpp"
#include "xcorrsim/spectra.hpp"

namespace xcorr {

struct WorkloadSpec {
  std::size_t num_spectra = 200;
  std::size_t num_peptides = 20000;
  std::size_t min_peptide_length = 8;
  std::size_t max_peptide_length = 24;
  /// Peaks occupy a contiguous run of bins whose width is drawn from this range.
  std::uint32_t min_span_bins = 130;
  std::uint32_t max_span_bins = 340;
  /// Expected fraction of bins inside the run that carry a peak.
  double peak_density = 0.3;
  /// Precursors are drawn from peptides in this mass range.
  double min_precursor_mass = 1000.0;
  double max_precursor_mass = 2600.0;
  /// Widest tolerance the workload is meant to be searched with. Peaks are
  /// kept below every candidate's largest fragment so scoring passes always
  /// walk the whole spectrum.
  double max_tolerance_da = 50.0;
  double bin_width = 1.0;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct Workload {
  std::vector<RawSpectrum> spectra;
  std::vector<Peptide> peptides;
};

Workload generate_workload(const WorkloadSpec& spec);

void write_workload(const Workload& w, const std::string& spectra_path,
                    const std::string& peptides_path);
Workload read_workload(const std::string& spectra_path, const std::string& peptides_path);

/// Host-side binning and preprocessing.
struct PreparedWorkload {
  PeptideDb db;
  std::vector<PreprocessedSpectrum> spectra;
};

PreparedWorkload prepare_workload(const Workload& w, double bin_width, bool exclude_tau_zero);

inline PreparedWorkload prepare_workload(const Workload& w, const SimConfig& c) {
  return prepare_workload(w, c.bin_width, c.exclude_tau_zero);
}

SimResult run_simulation(const SimConfig& config, const PreparedWorkload& w,
                         const SimOptions& options = {});

ScoreBatch run_oracle(const SimConfig& config, const PreparedWorkload& w);

struct SweepRow {
  SimConfig config;
  SimMetrics metrics;
  ScoreBatch scores;  // empty unless requested
};

/// Runs every cell, at most `threads` at a time. Rows come back in grid order.
std::vector<SweepRow> dse_sweep(const std::vector<SimConfig>& grid, const Workload& w,
                                unsigned threads = 0, bool keep_scores = false);

std::vector<SimConfig> make_grid(const SimConfig& base, const std::vector<std::uint32_t>& pes,
                                 const std::vector<std::uint64_t>& caches,
                                 const std::vector<double>& tolerances);

std::string csv_header();
std::string csv_row(const SimConfig& config, const SimMetrics& m);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace xcorr
