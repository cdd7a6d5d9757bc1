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

// Truncated Fock-space linear algebra: ladder and number-phase (NP)
// displacement operators, Gaussian unitaries, the canonical phase POVM and
// quadrature Wigner data.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "npcodes/errors.hpp"

namespace npcodes {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Physical states must keep less than this weight in the top Fock levels.
inline constexpr double kTailTolerance = 1e-9;
inline constexpr int kTailLevels = 5;

struct FockState {
  CVector amps;

  FockState() = default;
  explicit FockState(CVector a) : amps(std::move(a)) {}

  static FockState basis(int dim, int n) {
    if (dim < 1 || n < 0 || n >= dim) {
      throw InvalidDimension("basis state |" + std::to_string(n) +
                             "> outside truncation " + std::to_string(dim));
    }
    CVector v = CVector::Zero(dim);
    v(n) = 1.0;
    return FockState(std::move(v));
  }

  int dim() const { return static_cast<int>(amps.size()); }
  double norm() const { return amps.norm(); }

  /// Probability weight in the top `levels` Fock levels.
  double tail_mass(int levels = kTailLevels) const {
    const int n = std::min(levels, dim());
    return amps.tail(n).squaredNorm();
  }

  FockState normalized() const {
    const double nrm = norm();
    if (nrm == 0.0) throw NormalizationError("cannot normalize a zero state");
    return FockState(amps / nrm);
  }

  void require_normalized(double tol = 1e-10) const {
    const double n2 = amps.squaredNorm();
    if (std::abs(n2 - 1.0) > tol) {
      throw NormalizationError("state is not normalized: |psi|^2 = " +
                               std::to_string(n2));
    }
  }

  void require_tail(double tol = kTailTolerance) const {
    const double tail = tail_mass();
    if (tail > tol) {
      throw TruncationInsufficient(
          "state reaches the truncation edge at dim " + std::to_string(dim()),
          tail);
    }
  }

  cplx inner(const FockState& other) const { return amps.dot(other.amps); }
};

struct FockOperator {
  CMatrix mat;

  FockOperator() = default;
  explicit FockOperator(CMatrix m) : mat(std::move(m)) {}

  static FockOperator identity(int dim) {
    return FockOperator(CMatrix::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(mat.rows()); }
  FockOperator adjoint() const { return FockOperator(mat.adjoint()); }
  double max_abs() const { return mat.cwiseAbs().maxCoeff(); }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    return FockOperator(a.mat * b.mat);
  }
  friend FockState operator*(const FockOperator& a, const FockState& v) {
    return FockState(a.mat * v.amps);
  }
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    return FockOperator(a.mat + b.mat);
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    return FockOperator(a.mat - b.mat);
  }
  friend FockOperator operator*(cplx c, const FockOperator& a) {
    return FockOperator(c * a.mat);
  }
};

/// Displacement vector (l, phi) in number-phase space.
struct NPVector {
  int l = 0;
  double phi = 0.0;

  /// Same vector with phi reduced to (-pi, pi].
  NPVector canonical() const {
    double p = std::remainder(phi, 2.0 * kPi);
    if (p <= -kPi) p += 2.0 * kPi;
    return {l, p};
  }

  friend NPVector operator+(NPVector a, NPVector b) {
    return {a.l + b.l, a.phi + b.phi};
  }
  friend NPVector operator*(int k, NPVector a) { return {k * a.l, k * a.phi}; }
};

/// Oriented area n x n' = l phi' - phi l'.
inline double cross(const NPVector& a, const NPVector& b) {
  return a.l * b.phi - a.phi * b.l;
}

/// Uniform grid on [0, 2pi).
class PhaseGrid {
 public:
  explicit PhaseGrid(int n_points) : n_(n_points) {
    if (n_points < 1) throw InvalidDimension("phase grid needs points");
  }
  int size() const { return n_; }
  double spacing() const { return 2.0 * kPi / n_; }
  double point(int j) const { return spacing() * j; }
  std::vector<double> points() const {
    std::vector<double> out(n_);
    for (int j = 0; j < n_; ++j) out[j] = point(j);
    return out;
  }

 private:
  int n_;
};

inline void require_dim(int dim, int min_dim = 2) {
  if (dim < min_dim) {
    throw InvalidDimension("Fock truncation " + std::to_string(dim) +
                           " below minimum " + std::to_string(min_dim));
  }
}

/// Fock ladder shift Sigma_l = sum_n |n><n+l| (negative l raises).
inline FockOperator fock_shift(int l, int dim) {
  require_dim(dim, 1);
  if (std::abs(l) >= dim) {
    throw InvalidDimension("shift " + std::to_string(l) +
                           " does not fit truncation " + std::to_string(dim));
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const int col = n + l;
    if (col >= 0 && col < dim) m(n, col) = 1.0;
  }
  return FockOperator(std::move(m));
}

/// R(phi) = exp(i n phi).
inline FockOperator rotation(double phi, int dim) {
  require_dim(dim, 1);
  CVector d(dim);
  for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, n * phi);
  return FockOperator(d.asDiagonal().toDenseMatrix());
}

struct LadderOperators {
  int dim = 0;
  FockOperator a;
  FockOperator a_dag;
  FockOperator n;

  FockOperator sigma(int l) const { return fock_shift(l, dim); }
};

inline LadderOperators ladder_operators(int dim) {
  require_dim(dim);
  LadderOperators ops;
  ops.dim = dim;
  CMatrix a = CMatrix::Zero(dim, dim);
  CMatrix n = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    n(k, k) = static_cast<double>(k);
    if (k + 1 < dim) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  }
  ops.a = FockOperator(a);
  ops.a_dag = FockOperator(a.adjoint());
  ops.n = FockOperator(n);
  return ops;
}

/// Dense matrix exponential (Pade scaling and squaring).
inline CMatrix expm(const CMatrix& generator) { return generator.exp(); }

/// D(alpha) S(r) with S(r) = exp[(r* a^2 - r a^dag^2) / 2].
///
/// The generators are exponentiated on a padded truncation and cropped, so
/// low-lying matrix elements are free of cutoff artifacts. Throws
/// TruncationInsufficient when the displaced-squeezed vacuum puts more than
/// `tail_tol` in the top Fock levels of `dim`.
inline FockOperator gaussian_unitary(cplx alpha, cplx r, int dim,
                                     double tail_tol = 1e-10) {
  require_dim(dim, 1);
  if (alpha == cplx{} && r == cplx{}) return FockOperator::identity(dim);
  const int padded = dim + std::max(24, dim / 2);
  const LadderOperators ops = ladder_operators(padded);
  const CMatrix& a = ops.a.mat;
  const CMatrix& ad = ops.a_dag.mat;
  CMatrix u = CMatrix::Identity(padded, padded);
  if (r != cplx{}) {
    u = expm(0.5 * (std::conj(r) * a * a - r * ad * ad));
  }
  if (alpha != cplx{}) {
    u = expm(alpha * ad - std::conj(alpha) * a) * u;
  }
  FockOperator out(u.topLeftCorner(dim, dim));
  const double tail = FockState(out.mat.col(0)).tail_mass();
  if (tail > tail_tol) {
    throw TruncationInsufficient("Gaussian state does not fit truncation " +
                                     std::to_string(dim),
                                 tail);
  }
  return out;
}

/// NP displacement D(l, phi) = exp(i l phi / 2) R(phi) Sigma_l.
inline FockOperator np_displace(const NPVector& v, int dim) {
  require_dim(dim, 1);
  if (std::abs(v.l) >= dim) {
    throw InvalidDimension("NP shift " + std::to_string(v.l) +
                           " does not fit truncation " + std::to_string(dim));
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  const cplx prefactor = std::polar(1.0, 0.5 * v.l * v.phi);
  for (int n = 0; n < dim; ++n) {
    const int col = n + v.l;
    if (col >= 0 && col < dim) m(n, col) = prefactor * std::polar(1.0, n * v.phi);
  }
  return FockOperator(std::move(m));
}

/// Sampled weights Tr(D^dag(l, phi) E) on an integer shift window and a
/// phase grid.
struct NPWeights {
  int l_min = 0;
  int l_max = 0;
  PhaseGrid grid{1};
  CMatrix values;  // row: l - l_min, column: grid index

  cplx at(int l, int j) const { return values(l - l_min, j); }
};

inline NPWeights np_decompose(const FockOperator& op, int l_min, int l_max,
                              const PhaseGrid& grid) {
  const int dim = op.dim();
  if (l_max < l_min) throw InvalidDimension("empty shift window");
  NPWeights w{l_min, l_max, grid, CMatrix::Zero(l_max - l_min + 1, grid.size())};
  for (int l = l_min; l <= l_max; ++l) {
    for (int j = 0; j < grid.size(); ++j) {
      const double phi = grid.point(j);
      cplx acc{};
      for (int n = 0; n < dim; ++n) {
        const int col = n + l;
        if (col < 0 || col >= dim) continue;
        acc += std::polar(1.0, -n * phi) * op.mat(n, col);
      }
      w.values(l - l_min, j) = std::polar(1.0, -0.5 * l * phi) * acc;
    }
  }
  return w;
}

/// Trapezoid quadrature of sum_l int dphi/(2pi) w(l, phi) D(l, phi).
inline FockOperator np_reconstruct(const NPWeights& w, int dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  const double weight = w.grid.spacing() / (2.0 * kPi);
  for (int l = w.l_min; l <= w.l_max; ++l) {
    if (std::abs(l) >= dim) continue;
    for (int j = 0; j < w.grid.size(); ++j) {
      const cplx c = w.at(l, j) * weight;
      if (c == cplx{}) continue;
      out += c * np_displace({l, w.grid.point(j)}, dim).mat;
    }
  }
  return FockOperator(std::move(out));
}

/// Decomposes `op` and verifies the reconstruction; a shift window or grid
/// that cannot represent the operator raises ReconstructionError.
inline NPWeights np_expand(const FockOperator& op, int l_min, int l_max,
                           const PhaseGrid& grid, double tol = 1e-6) {
  NPWeights w = np_decompose(op, l_min, l_max, grid);
  const double residual = (np_reconstruct(w, op.dim()) - op).max_abs();
  if (residual > tol) {
    throw ReconstructionError("NP expansion does not reproduce the operator",
                              residual);
  }
  return w;
}

inline constexpr int kMinPovmPoints = 256;

/// Canonical phase distribution |<e_X|psi>|^2, |e_X> = (2pi)^(-1/2) sum e^{inX}|n>.
inline std::vector<double> phase_povm_weights(const FockState& state,
                                              const PhaseGrid& grid) {
  state.require_normalized(1e-8);
  if (grid.size() < kMinPovmPoints || grid.size() < state.dim()) {
    throw InvalidDimension("phase grid too coarse for POVM integration");
  }
  std::vector<double> density(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    cplx acc{};
    for (int n = 0; n < state.dim(); ++n) {
      acc += std::polar(1.0, -n * x) * state.amps(n);
    }
    density[j] = std::norm(acc) / (2.0 * kPi);
  }
  return density;
}

/// Quadrature Wigner function with x = (a + a^dag)/sqrt 2, normalized to
/// integrate to one. Rows follow `xs`, columns follow `ps`.
inline RMatrix wigner_xp(const FockState& state, const std::vector<double>& xs,
                         const std::vector<double>& ps) {
  state.require_normalized(1e-8);
  const int dim = state.dim();
  const CMatrix rho = state.amps * state.amps.adjoint();
  RMatrix out(xs.size(), ps.size());
  std::vector<cplx> wl(dim);
  for (std::size_t ix = 0; ix < xs.size(); ++ix) {
    for (std::size_t ip = 0; ip < ps.size(); ++ip) {
      // Iterative Laguerre recursion over <m|D(A) Pi D^dag(A)|n>.
      const cplx A = cplx(xs[ix], ps[ip]) / std::sqrt(2.0);
      wl[0] = std::exp(-2.0 * std::norm(A)) / kPi;
      double w = std::real(rho(0, 0) * wl[0]);
      for (int n = 1; n < dim; ++n) {
        wl[n] = 2.0 * A * wl[n - 1] / std::sqrt(static_cast<double>(n));
        w += 2.0 * std::real(rho(0, n) * wl[n]);
      }
      for (int m = 1; m < dim; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx temp = wl[m];
        wl[m] = (2.0 * std::conj(A) * temp - sm * wl[m - 1]) / sm;
        w += std::real(rho(m, m) * wl[m]);
        for (int n = m + 1; n < dim; ++n) {
          const cplx next =
              (2.0 * A * wl[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
          temp = wl[n];
          wl[n] = next;
          w += 2.0 * std::real(rho(m, n) * wl[n]);
        }
      }
      out(ix, ip) = w;
    }
  }
  return out;
}

}  // namespace npcodes
