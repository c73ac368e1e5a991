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

// xcorrsim command line: workload generation, oracle scoring, simulation,
// design-space sweeps and simulator-vs-oracle verification.

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "xcorrsim/errors.hpp"
#include "xcorrsim/harness.hpp"
#include "xcorrsim/simd.hpp"

namespace {

using namespace xcorr;

constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

struct Inputs {
  std::string spectra;
  std::string peptides;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--spectra", in.spectra, "Spectra file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--peptides", in.peptides, "Peptide file")->required()->check(CLI::ExistingFile);
}

struct ConfigFlags {
  SimConfig config;
  std::string file;
};

void add_config(CLI::App* cmd, ConfigFlags& f) {
  SimConfig& c = f.config;
  cmd->add_option("--num_pes", c.num_pes, "Processing elements")->capture_default_str();
  cmd->add_option("--cache_bytes", c.cache_bytes, "Per-PE spectrum cache")->capture_default_str();
  cmd->add_option("--dram_latency_cycles", c.dram_latency_cycles, "Request-to-first-beat latency")
      ->capture_default_str();
  cmd->add_option("--clock_mhz", c.clock_mhz, "Clock used for seconds")->capture_default_str();
  cmd->add_option("--tolerance_da", c.tolerance_da, "Precursor tolerance (Da)")->capture_default_str();
  cmd->add_option("--bin_width", c.bin_width, "m/z bin width")->capture_default_str();
  cmd->add_flag("--exclude_tau_zero", c.exclude_tau_zero, "Leave the center bin out of the background");
  cmd->add_option("--seed", c.seed, "Seed")->capture_default_str();
  cmd->add_option("--config", f.file, "key = value file; overrides flags")->check(CLI::ExistingFile);
}

SimConfig resolve(const ConfigFlags& f) {
  SimConfig c = f.config;
  if (!f.file.empty()) c.apply(read_config_file(f.file));
  c.validate();
  return c;
}

void write_scores_to(const std::string& path, const ScoreBatch& batch) {
  if (path.empty() || path == "-") {
    write_scores(std::cout, batch);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  write_scores(out, batch);
}

/// Returns the number of mismatching records.
std::size_t compare(const ScoreBatch& sim, const ScoreBatch& oracle, std::ostream& log) {
  std::size_t bad = 0;
  if (sim.pair_count != oracle.pair_count || sim.scores.size() != oracle.scores.size()) {
    log << "pair count: simulator " << sim.pair_count << ", oracle " << oracle.pair_count << '\n';
    ++bad;
  }
  const std::size_t n = std::min(sim.scores.size(), oracle.scores.size());
  for (std::size_t i = 0; i < n; ++i) {
    const XcorrScore& a = sim.scores[i];
    const XcorrScore& b = oracle.scores[i];
    if (a.spectrum_id == b.spectrum_id && a.peptide_index == b.peptide_index &&
        std::bit_cast<std::uint32_t>(a.score) == std::bit_cast<std::uint32_t>(b.score)) {
      continue;
    }
    if (++bad <= 10) {
      log << "mismatch at record " << i << ": simulator " << a.spectrum_id << ' ' << a.peptide_index
          << ' ' << a.score << ", oracle " << b.spectrum_id << ' ' << b.peptide_index << ' '
          << b.score << '\n';
    }
  }
  return bad;
}

template <typename T>
std::vector<T> or_default(std::vector<T> v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator of a cross-correlation peptide scoring accelerator"};
  app.require_subcommand(1);
  bool show_isa = false;
  app.add_flag("--isa", show_isa, "Print the selected kernel variant to stderr");

  // gen
  WorkloadSpec wspec;
  std::string gen_spectra = "spectra.txt";
  std::string gen_peptides = "peptides.txt";
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic workload");
  gen->add_option("--num-spectra", wspec.num_spectra)->capture_default_str();
  gen->add_option("--num-peptides", wspec.num_peptides)->capture_default_str();
  gen->add_option("--min-length", wspec.min_peptide_length)->capture_default_str();
  gen->add_option("--max-length", wspec.max_peptide_length)->capture_default_str();
  gen->add_option("--min-span", wspec.min_span_bins, "Narrowest peak run (bins)")->capture_default_str();
  gen->add_option("--max-span", wspec.max_span_bins, "Widest peak run (bins)")->capture_default_str();
  gen->add_option("--peak-density", wspec.peak_density)->capture_default_str();
  gen->add_option("--min-precursor", wspec.min_precursor_mass)->capture_default_str();
  gen->add_option("--max-precursor", wspec.max_precursor_mass)->capture_default_str();
  gen->add_option("--max-tolerance", wspec.max_tolerance_da)->capture_default_str();
  gen->add_option("--bin_width", wspec.bin_width)->capture_default_str();
  gen->add_option("--seed", wspec.seed)->capture_default_str();
  gen->add_option("--spectra-out", gen_spectra)->capture_default_str();
  gen->add_option("--peptides-out", gen_peptides)->capture_default_str();

  // score
  Inputs score_in;
  ConfigFlags score_cfg;
  std::string score_out;
  std::size_t top = 0;
  CLI::App* score = app.add_subcommand("score", "Score every candidate pair in software");
  add_inputs(score, score_in);
  add_config(score, score_cfg);
  score->add_option("--out", score_out, "Score file (default stdout)");
  score->add_option("--top", top, "Keep the k best scores per spectrum (0 keeps all)");

  // sim
  Inputs sim_in;
  ConfigFlags sim_cfg;
  std::string sim_scores;
  std::string sim_metrics;
  CLI::App* sim = app.add_subcommand("sim", "Run one cycle-level simulation");
  add_inputs(sim, sim_in);
  add_config(sim, sim_cfg);
  sim->add_option("--scores-out", sim_scores, "Score file written by the simulated PEs");
  sim->add_option("--metrics-out", sim_metrics, "CSV metrics (default stdout)");

  // sweep
  Inputs sweep_in;
  ConfigFlags sweep_cfg;
  std::vector<std::uint32_t> pes;
  std::vector<std::uint64_t> caches;
  std::vector<double> tolerances;
  unsigned threads = 0;
  std::string sweep_out;
  std::string scores_dir;
  CLI::App* sweep = app.add_subcommand("sweep", "Design-space sweep, one CSV row per cell");
  add_inputs(sweep, sweep_in);
  add_config(sweep, sweep_cfg);
  sweep->add_option("--pes", pes, "PE counts (default 1 2 4 8 16)")->delimiter(',');
  sweep->add_option("--caches", caches, "Cache sizes (default 512 1024 2048 4096)")->delimiter(',');
  sweep->add_option("--tolerances", tolerances, "Tolerances (default: --tolerance_da)")->delimiter(',');
  sweep->add_option("--threads", threads, "Concurrent cells (0 = hardware)");
  sweep->add_option("--out", sweep_out, "CSV file (default stdout)");
  sweep->add_option("--scores-dir", scores_dir, "Write each cell's score file here");

  // verify
  Inputs verify_in;
  ConfigFlags verify_cfg;
  CLI::App* verify = app.add_subcommand("verify", "Check simulator scores against the oracle bit for bit");
  add_inputs(verify, verify_in);
  add_config(verify, verify_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (show_isa) std::cerr << "kernels: " << simd::isa_name(simd::kernels().isa) << '\n';

  try {
    if (*gen) {
      write_workload(generate_workload(wspec), gen_spectra, gen_peptides);
      return 0;
    }
    if (*score) {
      const SimConfig c = resolve(score_cfg);
      const PreparedWorkload w =
          prepare_workload(read_workload(score_in.spectra, score_in.peptides), c);
      ScoreBatch batch = run_oracle(c, w);
      if (top > 0) batch = top_k_per_spectrum(batch, top);
      write_scores_to(score_out, batch);
      return 0;
    }
    if (*sim) {
      const SimConfig c = resolve(sim_cfg);
      const PreparedWorkload w = prepare_workload(read_workload(sim_in.spectra, sim_in.peptides), c);
      const SimResult r = run_simulation(c, w);
      if (!sim_scores.empty()) write_scores_to(sim_scores, r.scores);
      std::ofstream file;
      if (!sim_metrics.empty()) {
        file.open(sim_metrics, std::ios::binary);
        if (!file) throw ParseError("cannot write " + sim_metrics);
      }
      std::ostream& out = sim_metrics.empty() ? std::cout : file;
      out << csv_header() << '\n' << csv_row(c, r.metrics) << '\n';
      return 0;
    }
    if (*sweep) {
      const SimConfig base = resolve(sweep_cfg);
      const auto grid = make_grid(base, or_default(pes, {1, 2, 4, 8, 16}),
                                  or_default(caches, {512, 1024, 2048, 4096}),
                                  or_default(tolerances, {base.tolerance_da}));
      const Workload w = read_workload(sweep_in.spectra, sweep_in.peptides);
      const auto rows = dse_sweep(grid, w, threads, !scores_dir.empty());
      std::ofstream file;
      if (!sweep_out.empty()) {
        file.open(sweep_out, std::ios::binary);
        if (!file) throw ParseError("cannot write " + sweep_out);
      }
      write_csv(sweep_out.empty() ? std::cout : file, rows);
      if (!scores_dir.empty()) {
        std::filesystem::create_directories(scores_dir);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          char name[96];
          std::snprintf(name, sizeof name, "cell%03zu_pes%u_cache%llu.scores", i,
                        rows[i].config.num_pes,
                        static_cast<unsigned long long>(rows[i].config.cache_bytes));
          write_scores_to((std::filesystem::path(scores_dir) / name).string(), rows[i].scores);
        }
      }
      return 0;
    }
    if (*verify) {
      const SimConfig c = resolve(verify_cfg);
      const PreparedWorkload w =
          prepare_workload(read_workload(verify_in.spectra, verify_in.peptides), c);
      const ScoreBatch oracle = run_oracle(c, w);
      const SimResult r = run_simulation(c, w);
      const std::size_t bad = compare(r.scores, oracle, std::cerr);
      std::cout << (bad == 0 ? "OK" : "MISMATCH") << ": " << r.scores.pair_count
                << " simulator scores, " << oracle.pair_count << " oracle scores, " << bad
                << " mismatches\n";
      return bad == 0 ? 0 : kExitMismatch;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
