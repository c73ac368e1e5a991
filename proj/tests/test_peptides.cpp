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

#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "xcorrsim/errors.hpp"
#include "xcorrsim/peptides.hpp"

using namespace xcorr;

TEST_CASE("peptide_mass: hand sums") {
  CHECK(peptide_mass("G") == doctest::Approx(75.032025).epsilon(1e-12));
  CHECK(peptide_mass("AG") == doctest::Approx(146.069135).epsilon(1e-12));
  CHECK(peptide_mass("G") == 57.02146 + 18.010565);
  CHECK_THROWS_AS(peptide_mass(""), InvalidResidue);
  CHECK_THROWS_AS(peptide_mass("AXG"), InvalidResidue);
  CHECK_THROWS_AS(peptide_mass("ag"), InvalidResidue);
}

TEST_CASE("peptide_mass: prepending a residue adds its mass") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const std::string s = oracle::random_sequence(rng, 1, 40);
    const std::string x = oracle::random_sequence(rng, 1, 1);
    CHECK(peptide_mass(x + s) - peptide_mass(s) == doctest::Approx(residue_mass(x[0])).epsilon(1e-12));
  }
}

TEST_CASE("peptide: length limit of the DRAM record") {
  CHECK(Peptide::from_sequence(std::string(kMaxPeptideLength, 'G')).sequence.size() == 63);
  CHECK_THROWS_AS(Peptide::from_sequence(std::string(kMaxPeptideLength + 1, 'G')), InvalidResidue);
}

TEST_CASE("find_candidates: small examples") {
  const std::vector<double> m{100, 200, 300};
  CHECK(find_candidates(m, 200, 1.5) == CandidateRange{1, 2});
  CHECK(find_candidates(m, 500, 1.5) == CandidateRange{3, 3});
  CHECK(find_candidates(m, 200, 150) == CandidateRange{0, 3});
  CHECK(find_candidates(m, 200, 100) == CandidateRange{0, 3});
  CHECK(find_candidates(m, 150, 0) == CandidateRange{1, 1});
  CHECK(find_candidates(std::vector<double>{}, 150, 10).empty());
}

TEST_CASE("find_candidates: binary search equals the linear scan") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = trial == 0 ? 100000 : static_cast<std::size_t>(u(rng) * 3000);
    std::vector<double> masses(n);
    for (double& m : masses) m = 500.0 + std::round(u(rng) * 400.0) / (trial % 3 == 0 ? 1.0 : 8.0);
    std::sort(masses.begin(), masses.end());
    for (int q = 0; q < (trial == 0 ? 100 : 1000); ++q) {
      const double p = 450.0 + u(rng) * 500.0;
      const double tol = q % 5 == 0 ? 0.0 : u(rng) * 60.0;
      REQUIRE(find_candidates(masses, p, tol) == oracle::linear_candidates(masses, p, tol));
    }
    if (!masses.empty()) {
      const double exact = masses[masses.size() / 2];
      CHECK(find_candidates(masses, exact, 0.0) == oracle::linear_candidates(masses, exact, 0.0));
    }
  }
}

TEST_CASE("PeptideDb: sorted, parallel index, range independent of tie order") {
  std::vector<Peptide> ps;
  for (const char* s : {"GA", "AG", "WW", "G", "GAG", "AGG"}) ps.push_back(Peptide::from_sequence(s));
  const PeptideDb db(ps);
  for (std::size_t k = 0; k < db.size(); ++k) {
    CHECK(db.mass_index()[k] == db[k].monoisotopic_mass);
    if (k > 0) CHECK(db[k - 1].monoisotopic_mass <= db[k].monoisotopic_mass);
  }
  std::reverse(ps.begin(), ps.end());
  const PeptideDb flipped(ps);
  for (double p : {75.0, 146.069135, 203.0}) {
    CHECK(find_candidates(db, p, 0.5) == find_candidates(flipped, p, 0.5));
  }
}

TEST_CASE("generate_ions: hand-computed b and y ions") {
  const auto ag = generate_ions(Peptide::from_sequence("AG"));
  REQUIRE(ag.ions.size() == 2);
  CHECK(ag.ions[0].index == 72);
  CHECK(ag.ions[1].index == 76);
  CHECK(half_to_float(ag.ions[0].intensity) == 1.0f);
  CHECK(generate_ions(Peptide::from_sequence("G")).ions.empty());

  // AGA: b1 = 72.04, b2 = 129.07; y1 = 90.05, y2 = 147.08.
  const auto aga = generate_ions(Peptide::from_sequence("AGA"));
  std::vector<std::uint16_t> idx;
  for (const Bin& b : aga.ions) idx.push_back(b.index);
  CHECK(idx == std::vector<std::uint16_t>{72, 90, 129, 147});

  const auto gg = generate_ions(Peptide::from_sequence("GG"));
  REQUIRE(gg.ions.size() == 2);
  CHECK(gg.ions[0].index == 58);
  CHECK(gg.ions[1].index == 76);
}

TEST_CASE("generate_ions: ascending, bounded, matches a direct fragment list") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const Peptide p = Peptide::from_sequence(oracle::random_sequence(rng, 1, 63));
    const double width = i % 2 ? 1.0 : 0.5;
    std::vector<std::uint16_t> want;
    for (std::size_t cut = 1; cut < p.sequence.size(); ++cut) {
      double b = 0.0;
      for (std::size_t k = 0; k < cut; ++k) b += residue_mass(p.sequence[k]);
      double y = 0.0;
      for (std::size_t k = p.sequence.size(); k-- > cut;) y += residue_mass(p.sequence[k]);
      want.push_back(static_cast<std::uint16_t>(std::floor((b + kProtonMass) / width)));
      want.push_back(static_cast<std::uint16_t>(std::floor((y + kWaterMass + kProtonMass) / width)));
    }
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    const auto t = generate_ions(p, width);
    CHECK(t.ions.size() <= raw_fragment_count(p));
    std::vector<std::uint16_t> got;
    for (const Bin& b : t.ions) got.push_back(b.index);
    REQUIRE(got == want);
  }
}

TEST_CASE("peptide file: plain and mass-annotated lines") {
  std::istringstream in("PEPTIDE\nAG 146.069135\n\nG\n");
  const auto ps = read_peptides(in);
  REQUIRE(ps.size() == 3);
  CHECK(ps[1].sequence == "AG");
  std::istringstream bad("AG 146.2\n");
  CHECK_THROWS_AS(read_peptides(bad), ParseError);
  std::istringstream letters("AZG\n");
  CHECK_THROWS_AS(read_peptides(letters), InvalidResidue);

  std::ostringstream out;
  write_peptides(out, ps);
  std::istringstream back(out.str());
  const auto again = read_peptides(back);
  REQUIRE(again.size() == 3);
  CHECK(again[0].monoisotopic_mass == ps[0].monoisotopic_mass);
}
