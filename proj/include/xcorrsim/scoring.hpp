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

#include "xcorrsim/peptides.hpp"
#include "xcorrsim/spectra.hpp"

namespace xcorr {

struct XcorrScore {
  std::string spectrum_id;
  std::size_t peptide_index = 0;
  float score = 0.0f;
};

/// Cross-correlation evaluated straight from its definition on the dense
/// 65536-bin expansion of both spectra:
///
///   sum_i X[i]Y[i] - (1/151) * sum_i sum_{tau=-75..75} X[i]Y[i-tau]
///
/// Both sums accumulate in float, ascending i then ascending tau. Slow; used
/// only to check the preprocessed form.
float xcorr_direct(const TheoreticalSpectrum& theoretical, const BinnedSpectrum& experimental,
                   BackgroundWindow window = {});

/// Sparse dot product over shared bins, one float accumulator, ascending bin
/// order. The simulator's kernel accumulates in the same order, which is what
/// makes bit-exact comparison possible.
float xcorr_fast(const TheoreticalSpectrum& theoretical, const PreprocessedSpectrum& preprocessed);

struct ScoreBatch {
  std::vector<XcorrScore> scores;  // spectrum order, then candidate index
  std::uint64_t pair_count = 0;
};

/// Scores every spectrum against every peptide in its precursor window.
ScoreBatch score_all(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                     double tolerance, double bin_width = 1.0);

/// Sum of candidate-range widths: the number of dot products a search performs.
std::uint64_t count_pairs(const PeptideDb& db, std::span<const PreprocessedSpectrum> spectra,
                          double tolerance);

/// "<spectrum_id> <peptide_index> <score>" per line, then "# pairs <n>".
/// Scores print in shortest round-trip form.
void write_scores(std::ostream& out, const ScoreBatch& batch);

/// Keep at most k best-scoring entries per spectrum, preserving output order.
ScoreBatch top_k_per_spectrum(const ScoreBatch& batch, std::size_t k);

}  // namespace xcorr
