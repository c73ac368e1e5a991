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

#include "xcorrsim/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

namespace xcorr {

float xcorr_direct(const TheoreticalSpectrum& theoretical, const BinnedSpectrum& experimental,
                   BackgroundWindow window) {
  std::vector<float> y(kNumBins, 0.0f);
  for (const Bin& b : experimental.bins) y[b.index] = half_to_float(b.intensity);

  auto y_at = [&](std::int64_t j) -> float {
    return (j < 0 || j >= static_cast<std::int64_t>(kNumBins)) ? 0.0f
                                                               : y[static_cast<std::size_t>(j)];
  };

  // Bins where X is zero contribute exact zeros to both sums.
  float dot = 0.0f;
  float background = 0.0f;
  for (const Bin& x : theoretical.ions) {
    const float xv = half_to_float(x.intensity);
    dot += xv * y[x.index];
  }
  for (const Bin& x : theoretical.ions) {
    const float xv = half_to_float(x.intensity);
    for (int tau = -kWindowRadius; tau <= kWindowRadius; ++tau) {
      if (tau == 0 && window.exclude_tau_zero) continue;
      background += xv * y_at(static_cast<std::int64_t>(x.index) - tau);
    }
  }
  return dot - background / window.divisor();
}

float xcorr_fast(const TheoreticalSpectrum& theoretical, const PreprocessedSpectrum& preprocessed) {
  float acc = 0.0f;
  auto x = theoretical.ions.begin();
  auto y = preprocessed.bins.begin();
  while (x != theoretical.ions.end() && y != preprocessed.bins.end()) {
    if (x->index < y->index) {
      ++x;
    } else if (y->index < x->index) {
      ++y;
    } else {
      acc += half_to_float(x->intensity) * half_to_float(y->intensity);
      ++x;
      ++y;
    }
  }
  return acc;
}

ScoreBatch score_all(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                     double tolerance, double bin_width) {
  ScoreBatch batch;
  for (const PreprocessedSpectrum& s : spectra) {
    const CandidateRange r = find_candidates(db, s.precursor_mass, tolerance);
    for (std::size_t k = r.lo; k < r.hi; ++k) {
      const TheoreticalSpectrum ions = generate_ions(db[k], bin_width);
      batch.scores.push_back({s.id, k, xcorr_fast(ions, s)});
    }
    batch.pair_count += r.size();
  }
  return batch;
}

std::uint64_t count_pairs(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                          double tolerance) {
  std::uint64_t total = 0;
  for (const PreprocessedSpectrum& s : spectra) {
    total += find_candidates(db, s.precursor_mass, tolerance).size();
  }
  return total;
}

void write_scores(std::ostream& out, const ScoreBatch& batch) {
  char buf[32];
  for (const XcorrScore& s : batch.scores) {
    const auto res = std::to_chars(buf, buf + sizeof buf, s.score);
    out << s.spectrum_id << ' ' << s.peptide_index << ' ' << std::string_view(buf, res.ptr - buf)
        << '\n';
  }
  out << "# pairs " << batch.pair_count << '\n';
}

ScoreBatch top_k_per_spectrum(const ScoreBatch& batch, std::size_t k) {
  ScoreBatch out;
  out.pair_count = batch.pair_count;
  std::size_t begin = 0;
  while (begin < batch.scores.size()) {
    std::size_t end = begin;
    while (end < batch.scores.size() &&
           batch.scores[end].spectrum_id == batch.scores[begin].spectrum_id) {
      ++end;
    }
    std::vector<std::size_t> order(end - begin);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = begin + i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return batch.scores[a].score > batch.scores[b].score;
    });
    if (order.size() > k) order.resize(k);
    std::sort(order.begin(), order.end());
    for (std::size_t i : order) out.scores.push_back(batch.scores[i]);
    begin = end;
  }
  return out;
}

}  // namespace xcorr
