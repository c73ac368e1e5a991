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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xcorrsim/spectra.hpp"

namespace xcorr {

inline constexpr double kWaterMass = 18.010565;
inline constexpr double kProtonMass = 1.007276;

/// Longest sequence that fits a 64-byte DRAM record (one length byte).
inline constexpr std::size_t kMaxPeptideLength = 63;

/// Monoisotopic residue mass of one of the 20 standard amino acids.
/// Throws InvalidResidue for any other letter.
double residue_mass(char residue);

/// Residues summed left to right in double, then water added.
double peptide_mass(std::string_view sequence);

struct Peptide {
  std::string sequence;
  double monoisotopic_mass = 0.0;

  /// Validates the sequence and computes its mass.
  static Peptide from_sequence(std::string sequence);
};

/// Candidate peptide indices [lo, hi).
struct CandidateRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t size() const { return hi - lo; }
  bool empty() const { return hi == lo; }
  friend bool operator==(const CandidateRange&, const CandidateRange&) = default;
};

/// Peptides sorted ascending by mass, with a parallel mass index.
class PeptideDb {
 public:
  PeptideDb() = default;

  /// Stable-sorts by mass, so equal masses keep their input order.
  explicit PeptideDb(std::vector<Peptide> peptides);

  std::size_t size() const { return peptides_.size(); }
  bool empty() const { return peptides_.empty(); }
  const Peptide& operator[](std::size_t k) const { return peptides_[k]; }
  std::span<const Peptide> peptides() const { return peptides_; }
  std::span<const double> mass_index() const { return masses_; }

 private:
  std::vector<Peptide> peptides_;
  std::vector<double> masses_;
};

// The two predicates below are monotone in mass because floating-point
// subtraction is monotone, so binary search over them returns exactly the
// entries with |mass - precursor| <= tolerance.

/// True while mass lies strictly below the tolerance window.
inline bool below_window(double mass, double precursor, double tolerance) {
  return (mass - precursor) < -tolerance;
}

/// True once mass lies strictly above the tolerance window.
inline bool above_window(double mass, double precursor, double tolerance) {
  return (mass - precursor) > tolerance;
}

CandidateRange find_candidates(std::span<const double> masses, double precursor_mass,
                               double tolerance);

inline CandidateRange find_candidates(const PeptideDb& db, double precursor_mass,
                                      double tolerance) {
  return find_candidates(db.mass_index(), precursor_mass, tolerance);
}

/// Unit-intensity fragment ions, binned, ascending, deduplicated.
struct TheoreticalSpectrum {
  std::vector<Bin> ions;
};

/// Number of fragment ions the generator produces before binning and
/// deduplication: one b and one y ion per cleavage site.
inline std::size_t raw_fragment_count(const Peptide& p) {
  return p.sequence.empty() ? 0 : 2 * (p.sequence.size() - 1);
}

/// Singly charged b ions (prefix + proton) and y ions (suffix + water + proton)
/// for every proper prefix and suffix. Prefix sums accumulate left to right,
/// suffix sums right to left. Ions past the last bin are dropped.
TheoreticalSpectrum generate_ions(const Peptide& peptide, double bin_width = 1.0);

/// One peptide per line: "<sequence>" or "<sequence> <mass>". A supplied mass
/// must agree with the computed one within 1e-4 Da.
std::vector<Peptide> read_peptides(std::istream& in);
std::vector<Peptide> read_peptides_file(const std::string& path);
void write_peptides(std::ostream& out, std::span<const Peptide> peptides);

}  // namespace xcorr
