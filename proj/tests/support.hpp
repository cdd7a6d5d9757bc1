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

#include <random>

#include "npcodes/fock.hpp"

namespace npcodes::testing {

/// Random normalized vector supported on Fock levels [lo, hi].
inline CVector random_vector(int dim, int lo, int hi, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v = CVector::Zero(dim);
  for (int n = lo; n <= hi; ++n) v(n) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline CMatrix random_density(int dim, std::mt19937_64& rng, int rank = 3) {
  CMatrix rho = CMatrix::Zero(dim, dim);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int k = 0; k < rank; ++k) {
    const CVector v = random_vector(dim, 0, dim - 1, rng);
    rho += u(rng) * v * v.adjoint();
  }
  return rho / rho.trace().real();
}

inline CVector coherent_amplitudes(cplx alpha, int dim) {
  CVector v(dim);
  cplx term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    v(n) = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Smallest |v - c w| over global phases c.
inline double phase_aligned_distance(const CVector& v, const CVector& w) {
  const cplx ov = w.dot(v);
  const cplx c = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx{1.0, 0.0};
  return (v - c * w).norm();
}

}  // namespace npcodes::testing
