// Copyright 2026 The npcodes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace npcodes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// A state or operator leaks measurable weight into the top Fock levels.
class TruncationInsufficient : public Error {
 public:
  TruncationInsufficient(const std::string& what, double tail_mass)
      : Error(what + " (tail mass " + format_sci(tail_mass) + ")"),
        tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class PhaseUncertaintyUndefined : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  ReconstructionError(const std::string& what, double residual)
      : Error(what + " (residual " + format_sci(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class QuadratureUnresolved : public Error {
 public:
  QuadratureUnresolved(const std::string& what, std::size_t suggested_points)
      : Error(what + " (try at least " + std::to_string(suggested_points) +
              " phase points)"),
        suggested_points_(suggested_points) {}
  std::size_t suggested_points() const { return suggested_points_; }

 private:
  std::size_t suggested_points_;
};

class NotCompletelyPositive : public Error {
 public:
  using Error::Error;
};

class DegenerateShift : public Error {
 public:
  using Error::Error;
};

class WindowError : public Error {
 public:
  using Error::Error;
};

class DecoderConstructionError : public Error {
 public:
  using Error::Error;
};

class ResourceGuard : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class SpacingTooLarge : public Error {
 public:
  using Error::Error;
};

class SeriesTruncationError : public Error {
 public:
  using Error::Error;
};

class OptimizationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace npcodes
