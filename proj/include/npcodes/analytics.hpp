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

// Closed-form loss and dephasing estimates and the Fock-encoding baseline.

#include <cmath>
#include <numbers>

#include "npcodes/errors.hpp"

namespace npcodes {

struct EstimateInputs {
  double nbar = 0.0;
  double Gamma = 0.0;
  int d_N = 1;
  int s = 1;
  double kappa_t = 0.0;
};

namespace detail {

inline double bitflip_term(double x, int order) {
  if (x == 0.0) return 0.0;
  return 2.0 * std::exp(order * std::log(x) - x - std::lgamma(order + 1.0));
}

}  // namespace detail

/// Loss-induced logical error rate, summing shifts l*d_N for l = 1..l_max.
/// The first dropped term must stay below 1e-3 of the kept sum.
inline double bitflip_estimate(double nbar, double Gamma, int d_N, int l_max = 3) {
  if (!(nbar > 0.0) || !(Gamma >= 0.0 && Gamma < 1.0) || d_N < 1 || l_max < 1) {
    throw InvalidDimension("bitflip_estimate: invalid inputs");
  }
  const double x = nbar * Gamma;
  if (x >= d_N) throw SeriesTruncationError("bitflip_estimate: nbar*Gamma >= d_N");
  double sum = 0.0;
  for (int l = 1; l <= l_max; ++l) sum += detail::bitflip_term(x, l * d_N);
  const double tail = detail::bitflip_term(x, (l_max + 1) * d_N);
  if (sum > 0.0 && tail > 1e-3 * sum) {
    throw SeriesTruncationError("bitflip_estimate: dropped term " + format_sci(tail) +
                                " exceeds 1e-3 of the kept sum");
  }
  return sum;
}

inline double bitflip_estimate(const EstimateInputs& in, int l_max = 3) {
  return bitflip_estimate(in.nbar, in.Gamma, in.d_N, l_max);
}

/// Dephasing floor for rotation order s, valid for kappa_t << 1.
inline double dephasing_lower_bound(int s, double kappa_t) {
  if (s < 1 || !(kappa_t > 0.0)) throw InvalidDimension("dephasing_lower_bound: invalid inputs");
  constexpr double pi = std::numbers::pi;
  const double v = 8.0 * s * s * kappa_t;
  return std::sqrt(pi * v) / (pi * pi) * std::exp(-pi * pi / v);
}

/// Entanglement fidelity of the bare |0>,|1> encoding under loss and dephasing.
inline double breakeven_baseline(double gamma_t, double kappa_t) {
  if (!(gamma_t >= 0.0) || !(kappa_t >= 0.0)) {
    throw InvalidDimension("breakeven_baseline: rates must be non-negative");
  }
  const double keep = std::exp(-gamma_t);
  return 0.25 * (1.0 + keep + 2.0 * std::sqrt(keep) * std::exp(-kappa_t / 2.0));
}

}  // namespace npcodes
