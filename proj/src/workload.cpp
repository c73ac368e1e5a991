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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "xcorrsim/errors.hpp"
#include "xcorrsim/harness.hpp"

namespace xcorr {

namespace {

constexpr std::string_view kResidueCodes = "ACDEFGHIKLMNPQRSTVWY";

// Heaviest residue (W). A candidate of mass m always has a y ion at or above
// m - kHeaviestResidue.
constexpr double kHeaviestResidue = 186.07931;

// First bin of the peak run; leaves room for the left half of the window.
constexpr std::uint32_t kFirstBin = 150;

}  // namespace

void WorkloadSpec::validate() const {
  if (min_peptide_length < 2 || max_peptide_length < min_peptide_length ||
      max_peptide_length > kMaxPeptideLength) {
    throw ConfigError("peptide length range must lie within [2, 63]");
  }
  if (min_span_bins < 1 || max_span_bins < min_span_bins) throw ConfigError("bad span range");
  if (!(peak_density > 0.0 && peak_density <= 1.0)) throw ConfigError("peak_density must be in (0, 1]");
  if (!(min_precursor_mass > 0.0 && max_precursor_mass >= min_precursor_mass)) {
    throw ConfigError("bad precursor mass range");
  }
  if (!(bin_width > 0.0) || !(max_tolerance_da >= 0.0)) throw ConfigError("bad bin width or tolerance");
  if (num_spectra > 0 && num_peptides == 0) throw ConfigError("spectra need at least one peptide");
}

Workload generate_workload(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  Workload w;

  std::uniform_int_distribution<std::size_t> length(spec.min_peptide_length, spec.max_peptide_length);
  std::uniform_int_distribution<std::size_t> residue(0, kResidueCodes.size() - 1);
  w.peptides.reserve(spec.num_peptides);
  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < spec.num_peptides; ++k) {
    std::string seq(length(rng), 'A');
    for (char& c : seq) c = kResidueCodes[residue(rng)];
    w.peptides.push_back(Peptide::from_sequence(std::move(seq)));
    const double m = w.peptides.back().monoisotopic_mass;
    if (m >= spec.min_precursor_mass && m <= spec.max_precursor_mass) sources.push_back(k);
  }
  if (spec.num_spectra > 0 && sources.empty()) {
    throw ConfigError("no peptide falls in the precursor mass range");
  }

  std::uniform_int_distribution<std::size_t> pick(0, sources.empty() ? 0 : sources.size() - 1);
  std::uniform_int_distribution<std::uint32_t> span(spec.min_span_bins, spec.max_span_bins);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  std::uniform_int_distribution<int> intensity(1, 1000);

  const int width = static_cast<int>(std::log10(std::max<std::size_t>(spec.num_spectra, 1))) + 1;
  w.spectra.reserve(spec.num_spectra);
  for (std::size_t s = 0; s < spec.num_spectra; ++s) {
    const Peptide& source = w.peptides[sources[pick(rng)]];
    RawSpectrum raw;
    char id[32];
    std::snprintf(id, sizeof id, "S%0*zu", width, s);
    raw.id = id;
    raw.precursor_mass = source.monoisotopic_mass;

    // Highest bin any preprocessed entry may occupy, with a few bins of slack.
    const double floor_mass = raw.precursor_mass - spec.max_tolerance_da - kHeaviestResidue;
    const auto top = static_cast<std::int64_t>(std::floor(floor_mass / spec.bin_width)) -
                     kWindowRadius - 5;
    std::uint32_t run = span(rng);
    if (top < static_cast<std::int64_t>(kFirstBin + run)) {
      throw ConfigError("precursor " + std::to_string(raw.precursor_mass) +
                        " too small for the requested peak span");
    }
    std::uniform_int_distribution<std::uint32_t> start_at(
        kFirstBin, static_cast<std::uint32_t>(top) - run);
    const std::uint32_t first = start_at(rng);
    const std::uint32_t last = first + run;

    std::vector<bool> occupied(run + 1, false);
    occupied.front() = occupied.back() = true;
    for (const Bin& ion : generate_ions(source, spec.bin_width).ions) {
      if (ion.index >= first && ion.index <= last) occupied[ion.index - first] = true;
    }
    for (std::uint32_t b = 1; b < run; ++b) {
      if (coin(rng) < spec.peak_density) occupied[b] = true;
    }
    for (std::uint32_t b = 0; b <= run; ++b) {
      if (!occupied[b]) continue;
      const double mz = (first + b + frac(rng)) * spec.bin_width;
      raw.peaks.push_back({mz, static_cast<double>(intensity(rng))});
    }
    w.spectra.push_back(std::move(raw));
  }
  return w;
}

void write_workload(const Workload& w, const std::string& spectra_path,
                    const std::string& peptides_path) {
  std::ofstream spectra(spectra_path, std::ios::binary);
  if (!spectra) throw ParseError("cannot write " + spectra_path);
  write_spectra(spectra, w.spectra);
  std::ofstream peptides(peptides_path, std::ios::binary);
  if (!peptides) throw ParseError("cannot write " + peptides_path);
  write_peptides(peptides, w.peptides);
}

Workload read_workload(const std::string& spectra_path, const std::string& peptides_path) {
  return {read_spectra_file(spectra_path), read_peptides_file(peptides_path)};
}

}  // namespace xcorr
