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

#include <stdexcept>
#include <string>

namespace xcorr {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value does not fit its fixed-width storage (bin index or half intensity).
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Peptide sequence contains a letter outside the 20 standard residues, or is empty.
class InvalidResidue : public Error {
 public:
  using Error::Error;
};

/// DRAM access outside the backing store, or a zero-length transaction.
class OutOfBounds : public Error {
 public:
  using Error::Error;
};

/// Invalid architecture or run parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or domain-type invariant violation.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The simulated hardware observed inconsistent DRAM contents.
class SimulationAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace xcorr
