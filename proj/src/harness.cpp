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

#include <atomic>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "xcorrsim/harness.hpp"

namespace xcorr {

PreparedWorkload prepare_workload(const Workload& w, double bin_width, bool exclude_tau_zero) {
  PreparedWorkload out{PeptideDb(w.peptides), {}};
  out.spectra.reserve(w.spectra.size());
  const BackgroundWindow window{exclude_tau_zero};
  for (const RawSpectrum& raw : w.spectra) {
    out.spectra.push_back(preprocess(bin_spectrum(raw, bin_width), window));
  }
  return out;
}

SimResult run_simulation(const SimConfig& config, const PreparedWorkload& w,
                         const SimOptions& options) {
  return simulate(config, w.db, w.spectra, options);
}

ScoreBatch run_oracle(const SimConfig& config, const PreparedWorkload& w) {
  config.validate();
  return score_all(w.db, w.spectra, config.tolerance_da, config.bin_width);
}

std::vector<SweepRow> dse_sweep(const std::vector<SimConfig>& grid, const Workload& w,
                                unsigned threads, bool keep_scores) {
  for (const SimConfig& c : grid) c.validate();
  std::vector<SweepRow> rows(grid.size());
  if (grid.empty()) return rows;

  // Cells sharing a preprocessing setup share the prepared workload.
  std::vector<std::pair<std::pair<double, bool>, PreparedWorkload>> prepared;
  std::vector<std::size_t> which(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::pair<double, bool> key{grid[i].bin_width, grid[i].exclude_tau_zero};
    std::size_t k = 0;
    while (k < prepared.size() && prepared[k].first != key) ++k;
    if (k == prepared.size()) prepared.emplace_back(key, prepare_workload(w, key.first, key.second));
    which[i] = k;
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
      try {
        SimResult r = run_simulation(grid[i], prepared[which[i]].second);
        rows[i].config = grid[i];
        rows[i].metrics = std::move(r.metrics);
        if (keep_scores) rows[i].scores = std::move(r.scores);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SimConfig> make_grid(const SimConfig& base, const std::vector<std::uint32_t>& pes,
                                 const std::vector<std::uint64_t>& caches,
                                 const std::vector<double>& tolerances) {
  std::vector<SimConfig> grid;
  for (double tol : tolerances) {
    for (std::uint64_t cache : caches) {
      for (std::uint32_t n : pes) {
        SimConfig c = base;
        c.num_pes = n;
        c.cache_bytes = cache;
        c.tolerance_da = tol;
        grid.push_back(c);
      }
    }
  }
  return grid;
}

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "num_pes,cache_bytes,total_seconds,avg_compute_s,avg_io_s,avg_wait_s,total_pairs,"
         "dram_bytes,tolerance_da,total_cycles";
}

std::string csv_row(const SimConfig& c, const SimMetrics& m) {
  std::ostringstream row;
  row << c.num_pes << ',' << c.cache_bytes << ',' << exact(m.total_seconds()) << ','
      << exact(m.avg_compute_s()) << ',' << exact(m.avg_io_s()) << ',' << exact(m.avg_wait_s())
      << ',' << m.total_pairs << ',' << m.total_dram_bytes << ',' << exact(c.tolerance_da) << ','
      << m.total_cycles;
  return row.str();
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << csv_header() << '\n';
  for (const SweepRow& r : rows) out << csv_row(r.config, r.metrics) << '\n';
}

}  // namespace xcorr
