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

#include "xcorrsim/peptides.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "xcorrsim/errors.hpp"

namespace xcorr {

namespace {

constexpr std::array<double, 26> make_residue_table() {
  std::array<double, 26> t{};
  t['G' - 'A'] = 57.02146;
  t['A' - 'A'] = 71.03711;
  t['S' - 'A'] = 87.03203;
  t['P' - 'A'] = 97.05276;
  t['V' - 'A'] = 99.06841;
  t['T' - 'A'] = 101.04768;
  t['C' - 'A'] = 103.00919;
  t['L' - 'A'] = 113.08406;
  t['I' - 'A'] = 113.08406;
  t['N' - 'A'] = 114.04293;
  t['D' - 'A'] = 115.02694;
  t['Q' - 'A'] = 128.05858;
  t['K' - 'A'] = 128.09496;
  t['E' - 'A'] = 129.04259;
  t['M' - 'A'] = 131.04049;
  t['H' - 'A'] = 137.05891;
  t['F' - 'A'] = 147.06841;
  t['R' - 'A'] = 156.10111;
  t['Y' - 'A'] = 163.06333;
  t['W' - 'A'] = 186.07931;
  return t;
}

constexpr auto kResidues = make_residue_table();

}  // namespace

double residue_mass(char residue) {
  if (residue < 'A' || residue > 'Z' || kResidues[residue - 'A'] == 0.0) {
    throw InvalidResidue(std::string("unknown residue '") + residue + "'");
  }
  return kResidues[residue - 'A'];
}

double peptide_mass(std::string_view sequence) {
  if (sequence.empty()) throw InvalidResidue("empty peptide sequence");
  double m = 0.0;
  for (char c : sequence) m += residue_mass(c);
  return m + kWaterMass;
}

Peptide Peptide::from_sequence(std::string sequence) {
  if (sequence.size() > kMaxPeptideLength) {
    throw InvalidResidue("peptide longer than " + std::to_string(kMaxPeptideLength) +
                         " residues: " + sequence);
  }
  const double m = peptide_mass(sequence);
  return Peptide{std::move(sequence), m};
}

PeptideDb::PeptideDb(std::vector<Peptide> peptides) : peptides_(std::move(peptides)) {
  std::stable_sort(peptides_.begin(), peptides_.end(), [](const Peptide& a, const Peptide& b) {
    return a.monoisotopic_mass < b.monoisotopic_mass;
  });
  masses_.reserve(peptides_.size());
  for (const Peptide& p : peptides_) masses_.push_back(p.monoisotopic_mass);
}

CandidateRange find_candidates(std::span<const double> masses, double precursor_mass,
                               double tolerance) {
  const auto first = std::partition_point(masses.begin(), masses.end(), [&](double m) {
    return below_window(m, precursor_mass, tolerance);
  });
  const auto last = std::partition_point(first, masses.end(), [&](double m) {
    return !above_window(m, precursor_mass, tolerance);
  });
  return {static_cast<std::size_t>(first - masses.begin()),
          static_cast<std::size_t>(last - masses.begin())};
}

TheoreticalSpectrum generate_ions(const Peptide& peptide, double bin_width) {
  const std::string& seq = peptide.sequence;
  const std::size_t n = seq.size();
  std::vector<std::uint32_t> bins;
  bins.reserve(raw_fragment_count(peptide));

  auto emit = [&](double mz) {
    const double b = std::floor(mz / bin_width);
    if (b < static_cast<double>(kNumBins)) bins.push_back(static_cast<std::uint32_t>(b));
  };

  double prefix = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    prefix += residue_mass(seq[i]);
    emit(prefix + kProtonMass);
  }
  double suffix = 0.0;
  for (std::size_t i = n; i-- > 1;) {
    suffix += residue_mass(seq[i]);
    emit(suffix + kWaterMass + kProtonMass);
  }

  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());

  TheoreticalSpectrum out;
  out.ions.reserve(bins.size());
  const Half one = half_from_double(1.0);
  for (std::uint32_t b : bins) out.ions.push_back({static_cast<std::uint16_t>(b), one});
  return out;
}

std::vector<Peptide> read_peptides(std::istream& in) {
  std::vector<Peptide> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string seq;
    if (!(fields >> seq)) continue;
    Peptide p;
    try {
      p = Peptide::from_sequence(seq);
    } catch (const InvalidResidue& e) {
      throw InvalidResidue("peptides line " + std::to_string(lineno) + ": " + e.what());
    }
    double given = 0.0;
    if (fields >> given) {
      if (std::fabs(given - p.monoisotopic_mass) > 1e-4) {
        throw ParseError("peptides line " + std::to_string(lineno) + ": mass " +
                         std::to_string(given) + " disagrees with computed " +
                         std::to_string(p.monoisotopic_mass));
      }
    } else if (!fields.eof()) {
      throw ParseError("peptides line " + std::to_string(lineno) + ": malformed mass");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Peptide> read_peptides_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open peptide file " + path);
  return read_peptides(in);
}

void write_peptides(std::ostream& out, std::span<const Peptide> peptides) {
  char buf[32];
  for (const Peptide& p : peptides) {
    const auto res = std::to_chars(buf, buf + sizeof buf, p.monoisotopic_mass);
    out << p.sequence << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

}  // namespace xcorr
