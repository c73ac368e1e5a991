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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "xcorrsim/errors.hpp"
#include "xcorrsim/spectra.hpp"

namespace xcorr {

std::vector<RawSpectrum> read_spectra(std::istream& in) {
  std::vector<RawSpectrum> spectra;
  std::string line;
  std::size_t lineno = 0;
  bool open = false;

  auto fail = [&](const std::string& what) {
    throw ParseError("spectra line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      open = false;
      continue;
    }
    std::istringstream fields(line);
    if (!open) {
      std::string tag;
      RawSpectrum s;
      if (!(fields >> tag >> s.id >> s.precursor_mass) || tag != "S") {
        fail("expected 'S <id> <precursor_mass>'");
      }
      spectra.push_back(std::move(s));
      open = true;
      continue;
    }
    Peak p;
    if (!(fields >> p.mz >> p.intensity)) fail("expected '<mz> <intensity>'");
    std::string extra;
    if (fields >> extra) fail("trailing fields");
    spectra.back().peaks.push_back(p);
  }
  for (const RawSpectrum& s : spectra) s.validate();
  return spectra;
}

std::vector<RawSpectrum> read_spectra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spectra file " + path);
  return read_spectra(in);
}

namespace {

// Shortest representation that reads back to the same double.
std::string_view shortest(double v, char (&buf)[32]) {
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, static_cast<std::size_t>(res.ptr - buf)};
}

}  // namespace

void write_spectra(std::ostream& out, std::span<const RawSpectrum> spectra) {
  char a[32];
  char b[32];
  for (const RawSpectrum& s : spectra) {
    out << "S " << s.id << ' ' << shortest(s.precursor_mass, a) << '\n';
    for (const Peak& p : s.peaks) {
      out << shortest(p.mz, a) << ' ' << shortest(p.intensity, b) << '\n';
    }
    out << '\n';
  }
}

}  // namespace xcorr
