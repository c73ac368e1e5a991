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
#include <span>
#include <string>
#include <vector>

#include "xcorrsim/half.hpp"

namespace xcorr {

/// Largest representable bin index plus one (m/z is stored as a 16-bit index).
inline constexpr std::uint32_t kNumBins = 65536;

/// Half-width of the background window subtracted by the cross-correlation.
inline constexpr int kWindowRadius = 75;

struct Peak {
  double mz = 0.0;
  double intensity = 0.0;
};

/// Peak list as read from disk. Peaks strictly ascending in m/z.
struct RawSpectrum {
  std::string id;
  double precursor_mass = 0.0;
  std::vector<Peak> peaks;

  /// Throws ParseError on a broken invariant.
  void validate() const;
};

struct Bin {
  std::uint16_t index = 0;
  Half intensity;

  friend bool operator==(const Bin&, const Bin&) = default;
};

/// Sparse spectrum in CSR form: strictly ascending bin indices, half intensities.
struct SparseSpectrum {
  std::string id;
  double precursor_mass = 0.0;
  std::vector<Bin> bins;

  /// 2 bytes of index plus 2 bytes of intensity per entry.
  std::size_t encoded_bytes() const { return 4 * bins.size(); }
  void validate() const;

  friend bool operator==(const SparseSpectrum&, const SparseSpectrum&) = default;
};

/// Binned experimental spectrum (non-negative intensities).
struct BinnedSpectrum : SparseSpectrum {};

/// Background-subtracted spectrum; intensities may be negative.
struct PreprocessedSpectrum : SparseSpectrum {};

/// Shape of the background window: 2*75+1 shifts including the zero shift
/// (divisor 151) by default, or the classic variant that leaves the zero
/// shift out (divisor 150).
struct BackgroundWindow {
  bool exclude_tau_zero = false;

  float divisor() const { return exclude_tau_zero ? 150.0f : 151.0f; }
};

/// floor(mz / bin_width) binning; colliding peaks keep the larger intensity.
/// Throws OverflowError if a bin index or an intensity does not fit.
BinnedSpectrum bin_spectrum(const RawSpectrum& raw, double bin_width = 1.0);

/// Y_P[i] = Y[i] - window(i) / divisor, where window(i) sums Y[i-75..i+75] in
/// ascending bin order in float (out-of-range bins read as zero). Each value is
/// rounded once to half precision; bins that round to zero are dropped.
PreprocessedSpectrum preprocess(const BinnedSpectrum& spectrum, BackgroundWindow window = {});

/// Little-endian stream of (uint16 index, binary16 intensity) entries.
std::vector<std::uint8_t> encode_csr(std::span<const Bin> bins);

/// Inverse of encode_csr. Throws ParseError if the length is not a multiple of 4.
std::vector<Bin> decode_csr(std::span<const std::uint8_t> bytes);

/// Text format: "S <id> <precursor_mass>", then "<mz> <intensity>" lines,
/// terminated by a blank line (or end of file).
std::vector<RawSpectrum> read_spectra(std::istream& in);
std::vector<RawSpectrum> read_spectra_file(const std::string& path);
void write_spectra(std::ostream& out, std::span<const RawSpectrum> spectra);

}  // namespace xcorr
