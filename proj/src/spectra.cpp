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

#include "xcorrsim/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "xcorrsim/errors.hpp"
#include "xcorrsim/simd.hpp"

namespace xcorr {

void RawSpectrum::validate() const {
  if (!(precursor_mass > 0.0) || !std::isfinite(precursor_mass)) {
    throw ParseError("spectrum " + id + ": precursor mass must be positive");
  }
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    if (!(peaks[k].intensity >= 0.0) || !std::isfinite(peaks[k].intensity)) {
      throw ParseError("spectrum " + id + ": negative or non-finite intensity");
    }
    if (!std::isfinite(peaks[k].mz) || peaks[k].mz < 0.0) {
      throw ParseError("spectrum " + id + ": invalid m/z");
    }
    if (k > 0 && !(peaks[k].mz > peaks[k - 1].mz)) {
      throw ParseError("spectrum " + id + ": peaks not strictly ascending in m/z");
    }
  }
}

void SparseSpectrum::validate() const {
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (!bins[k].intensity.is_finite()) {
      throw ParseError("spectrum " + id + ": non-finite intensity");
    }
    if (k > 0 && bins[k].index <= bins[k - 1].index) {
      throw ParseError("spectrum " + id + ": bins not strictly ascending");
    }
  }
}

BinnedSpectrum bin_spectrum(const RawSpectrum& raw, double bin_width) {
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  raw.validate();

  BinnedSpectrum out;
  out.id = raw.id;
  out.precursor_mass = raw.precursor_mass;
  out.bins.reserve(raw.peaks.size());

  double best = -1.0;
  std::int64_t current = -1;
  auto flush = [&] {
    if (current < 0) return;
    const Half h = half_from_double(best);
    if (!h.is_finite()) {
      throw OverflowError("spectrum " + raw.id + ": intensity exceeds half-precision range");
    }
    out.bins.push_back({static_cast<std::uint16_t>(current), h});
  };

  for (const Peak& p : raw.peaks) {
    const double b = std::floor(p.mz / bin_width);
    if (b >= static_cast<double>(kNumBins)) {
      throw OverflowError("spectrum " + raw.id + ": bin index exceeds 16 bits");
    }
    const auto bin = static_cast<std::int64_t>(b);
    if (bin != current) {
      flush();
      current = bin;
      best = p.intensity;
    } else {
      best = std::max(best, p.intensity);
    }
  }
  flush();
  return out;
}

namespace {

struct Interval {
  std::int64_t lo;
  std::int64_t hi;  // inclusive
};

// Bins whose background window touches a nonzero input; everything else is
// exactly zero after the transform.
std::vector<Interval> support_clusters(std::span<const Bin> bins) {
  std::vector<Interval> clusters;
  const std::int64_t last = kNumBins - 1;
  for (const Bin& b : bins) {
    if (b.intensity.is_zero()) continue;
    const Interval iv{std::max<std::int64_t>(0, b.index - kWindowRadius),
                      std::min<std::int64_t>(last, b.index + kWindowRadius)};
    if (!clusters.empty() && iv.lo <= clusters.back().hi + 1) {
      clusters.back().hi = std::max(clusters.back().hi, iv.hi);
    } else {
      clusters.push_back(iv);
    }
  }
  return clusters;
}

}  // namespace

PreprocessedSpectrum preprocess(const BinnedSpectrum& spectrum, BackgroundWindow window) {
  const simd::KernelTable& k = simd::kernels();
  PreprocessedSpectrum out;
  out.id = spectrum.id;
  out.precursor_mass = spectrum.precursor_mass;

  const float divisor = window.divisor();
  std::vector<float> dense;
  std::vector<float> sums;
  std::vector<float> values;
  std::vector<std::uint16_t> halves;

  std::size_t cursor = 0;  // first input bin not yet copied into a buffer
  for (const Interval& c : support_clusters(spectrum.bins)) {
    const std::int64_t base = c.lo - kWindowRadius;  // virtual bin of dense[0]
    const auto width = static_cast<std::size_t>(c.hi - c.lo + 1);
    dense.assign(width + 2 * kWindowRadius, 0.0f);
    while (cursor < spectrum.bins.size() && spectrum.bins[cursor].index < base) ++cursor;
    for (std::size_t j = cursor; j < spectrum.bins.size(); ++j) {
      const std::int64_t idx = spectrum.bins[j].index;
      if (idx > c.hi + kWindowRadius) break;
      dense[static_cast<std::size_t>(idx - base)] = half_to_float(spectrum.bins[j].intensity);
    }

    sums.resize(width);
    k.window_sums(dense, kWindowRadius, window.exclude_tau_zero, sums);

    values.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
      values[i] = dense[i + kWindowRadius] - sums[i] / divisor;
    }
    halves.resize(width);
    k.floats_to_halves(values, halves);

    for (std::size_t i = 0; i < width; ++i) {
      const Half h(halves[i]);
      if (h.is_zero()) continue;
      out.bins.push_back({static_cast<std::uint16_t>(c.lo + static_cast<std::int64_t>(i)), h});
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_csr(std::span<const Bin> bins) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(4 * bins.size());
  for (const Bin& b : bins) {
    bytes.push_back(static_cast<std::uint8_t>(b.index & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>(b.index >> 8));
    bytes.push_back(static_cast<std::uint8_t>(b.intensity.bits & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>(b.intensity.bits >> 8));
  }
  return bytes;
}

std::vector<Bin> decode_csr(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) throw ParseError("CSR stream length is not a multiple of 4");
  std::vector<Bin> bins(bytes.size() / 4);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const std::uint8_t* e = bytes.data() + 4 * k;
    bins[k].index = static_cast<std::uint16_t>(e[0] | (e[1] << 8));
    bins[k].intensity = Half(static_cast<std::uint16_t>(e[2] | (e[3] << 8)));
  }
  return bins;
}

}  // namespace xcorr
