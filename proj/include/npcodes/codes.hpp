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

// Generalized number-phase lattice codes in the (s, f) gauge: amplitude
// families, codewords, logical operators, lattice geometry, the interface
// gate, the vortex relation and Knill-Laflamme diagnostics.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "npcodes/fock.hpp"

namespace npcodes {

/// Exact reduced fraction p/q with q >= 1.
struct Fraction {
  int p = 0;
  int q = 1;

  Fraction() = default;
  Fraction(int num, int den) : p(num), q(den) {
    if (den == 0) throw InvalidDimension("fraction with zero denominator");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    const int g = std::gcd(std::abs(p), q);
    if (p == 0) {
      q = 1;
    } else if (g > 1) {
      p /= g;
      q /= g;
    }
  }

  double value() const { return static_cast<double>(p) / q; }
  bool is_zero() const { return p == 0; }

  friend Fraction operator-(Fraction a, Fraction b) {
    return Fraction(a.p * b.q - b.p * a.q, a.q * b.q);
  }
  friend Fraction operator-(Fraction a) { return Fraction(-a.p, a.q); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

struct BinomialAmplitude {
  int K = 1;
};

struct GaussianAmplitude {
  cplx alpha{};
  cplx r{};
};

using AmplitudeSpec = std::variant<BinomialAmplitude, GaussianAmplitude>;

/// Mean of n over the displaced-squeezed vacuum |alpha, r>.
inline double gaussian_mean_number(cplx alpha, cplx r) {
  const double sh = std::sinh(std::abs(r));
  return std::norm(alpha) + sh * sh;
}

struct CodeParams {
  int s = 1;
  Fraction f{};
  AmplitudeSpec amplitude = BinomialAmplitude{1};
  int dim = 0;

  int d_N() const { return f.q * s; }
  double d_phi() const { return kPi / s; }

  void validate() const {
    if (s < 1) throw InvalidDimension("rotation order s must be positive");
    if (std::abs(f.p) >= f.q) {
      throw InvalidDimension("gauge shear f must satisfy |f| < 1");
    }
    if (const auto* b = std::get_if<BinomialAmplitude>(&amplitude)) {
      if (b->K < 1) throw InvalidDimension("binomial K must be positive");
    }
    require_dim(dim);
  }
};

/// Short label of the lattice family: binomial, rnp, onp, dnp or np.
inline std::string code_type(const CodeParams& c) {
  if (c.f.is_zero()) {
    return std::holds_alternative<BinomialAmplitude>(c.amplitude) ? "binomial"
                                                                  : "rnp";
  }
  if (c.s == 1) return "onp";
  if (c.f == Fraction(1, 2)) return "dnp";
  return "np";
}

/// Fock amplitudes theta_n for n in [0, n_levels). Gaussian amplitudes are
/// renormalized on the truncation; the first nonzero amplitude is made real
/// positive.
inline CVector code_amplitudes(const AmplitudeSpec& spec, int n_levels,
                               double tail_tol = kTailTolerance) {
  CVector theta;
  if (const auto* b = std::get_if<BinomialAmplitude>(&spec)) {
    if (n_levels < b->K + 1) {
      throw TruncationInsufficient("binomial amplitudes need " +
                                       std::to_string(b->K + 1) + " levels",
                                   1.0);
    }
    theta = CVector::Zero(b->K + 1);
    double c = 1.0;  // C(K, n)
    for (int n = 0; n <= b->K; ++n) {
      theta(n) = std::sqrt(c / std::pow(2.0, b->K));
      c = c * (b->K - n) / (n + 1);
    }
  } else {
    const auto& g = std::get<GaussianAmplitude>(spec);
    theta = gaussian_unitary(g.alpha, g.r, n_levels, tail_tol).mat.col(0);
    theta /= theta.norm();
  }
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    if (std::abs(theta(n)) > 0.0) {
      theta *= std::polar(1.0, -std::arg(theta(n)));
      break;
    }
  }
  return theta;
}

/// Smallest truncation (a multiple of 8) that holds the code with the
/// configured tail tolerance and respects dim >= nbar + 8 sqrt(nbar) + 20.
inline int auto_dim(int s, const AmplitudeSpec& spec,
                    double tail_tol = kTailTolerance) {
  int levels = 0;
  double nbar_theta = 0.0;
  if (const auto* b = std::get_if<BinomialAmplitude>(&spec)) {
    levels = b->K + 1;
    nbar_theta = 0.5 * b->K;
  } else {
    const auto& g = std::get<GaussianAmplitude>(spec);
    nbar_theta = gaussian_mean_number(g.alpha, g.r);
    const double spread =
        std::sqrt(nbar_theta + 1.0) * std::exp(std::abs(g.r));
    levels = static_cast<int>(std::ceil(nbar_theta + 7.0 * spread + 10.0));
    for (int attempt = 0;; ++attempt) {
      try {
        code_amplitudes(spec, levels, tail_tol);
        break;
      } catch (const TruncationInsufficient&) {
        if (attempt > 40) throw;
        levels += 8;
      }
    }
  }
  const double nbar = s * nbar_theta;
  int dim = std::max(s * (levels - 1) + 1 + kTailLevels,
                     static_cast<int>(std::ceil(nbar + 8.0 * std::sqrt(nbar) + 20.0)));
  return (dim + 7) / 8 * 8;
}

inline CodeParams make_code(int s, Fraction f, AmplitudeSpec amplitude,
                            int dim = 0) {
  CodeParams c{s, f, amplitude, dim};
  if (c.dim <= 0) c.dim = auto_dim(s, amplitude);
  c.validate();
  return c;
}

/// exp(-i pi (p/q) k / (2 s^2)) evaluated from integers, reducing the
/// numerator modulo its period before the single floating conversion.
inline cplx quadratic_phase(Fraction f, int s, std::int64_t k) {
  const std::int64_t period = 4LL * f.q * s * s;
  std::int64_t num = (static_cast<std::int64_t>(f.p) * (k % period)) % period;
  if (num < 0) num += period;
  return std::polar(1.0, -kPi * static_cast<double>(num) / (2.0 * f.q * s * s));
}

/// U_s(df) = exp(-i df pi n^2 / (2 s^2)), diagonal.
inline FockOperator interface_gate(int s, Fraction delta_f, int dim) {
  require_dim(dim);
  CVector d(dim);
  for (int n = 0; n < dim; ++n) {
    d(n) = quadratic_phase(delta_f, s, static_cast<std::int64_t>(n) * n);
  }
  return FockOperator(d.asDiagonal().toDenseMatrix());
}

inline CVector interface_diagonal(int s, Fraction delta_f, int dim) {
  CVector d(dim);
  for (int n = 0; n < dim; ++n) {
    d(n) = quadratic_phase(delta_f, s, static_cast<std::int64_t>(n) * n);
  }
  return d;
}

struct LogicalBasis {
  CodeParams params;
  CVector theta;
  FockState plus;
  FockState minus;
  FockState zero;  // (|+> + |->)/sqrt 2
  FockState one;   // (|+> - |->)/sqrt 2

  /// Orthonormal logical frame: zero and one rescaled to unit norm.
  std::pair<FockState, FockState> frame() const {
    return {zero.normalized(), one.normalized()};
  }
};

/// |+/-> = U_s(f) sum_n (+/-1)^n theta_n |s n>.
inline LogicalBasis build_codewords(const CodeParams& params) {
  params.validate();
  const int s = params.s;
  const int dim = params.dim;
  const int levels = (dim - 1) / s + 1;
  CVector theta = code_amplitudes(params.amplitude, levels);
  if (s * (theta.size() - 1) >= dim) {
    throw TruncationInsufficient("codewords exceed truncation " +
                                     std::to_string(dim),
                                 1.0);
  }
  const CVector phase = interface_diagonal(s, params.f, dim);
  CVector plus = CVector::Zero(dim);
  CVector minus = CVector::Zero(dim);
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    const Eigen::Index k = s * n;
    plus(k) = phase(k) * theta(n);
    minus(k) = (n % 2 == 0 ? 1.0 : -1.0) * phase(k) * theta(n);
  }
  LogicalBasis basis;
  basis.params = params;
  basis.theta = theta;
  basis.plus = FockState(plus).normalized();
  basis.minus = FockState(minus).normalized();
  basis.plus.require_tail();
  basis.minus.require_tail();
  basis.zero = FockState((basis.plus.amps + basis.minus.amps) / std::sqrt(2.0));
  basis.one = FockState((basis.plus.amps - basis.minus.amps) / std::sqrt(2.0));
  return basis;
}

struct CodeMetrics {
  double nbar = 0.0;
  double delta_phi = 0.0;
  int d_N = 0;
  double d_phi = 0.0;
  double overlap = 0.0;
};

/// Holevo phase uncertainty |sum theta_n* theta_{n+1}|^-2 - 1.
inline double holevo_phase_uncertainty(const CVector& theta) {
  cplx acc{};
  for (Eigen::Index n = 0; n + 1 < theta.size(); ++n) {
    acc += std::conj(theta(n)) * theta(n + 1);
  }
  if (std::abs(acc) < 1e-15) {
    throw PhaseUncertaintyUndefined(
        "neighbouring Fock amplitudes do not overlap; phase uncertainty "
        "diverges");
  }
  return 1.0 / std::norm(acc) - 1.0;
}

inline CodeMetrics code_metrics(const LogicalBasis& basis) {
  CodeMetrics m;
  const auto& theta = basis.theta;
  double mean = 0.0;
  for (Eigen::Index n = 0; n < theta.size(); ++n) mean += n * std::norm(theta(n));
  m.nbar = basis.params.s * mean;
  m.delta_phi = holevo_phase_uncertainty(theta);
  m.d_N = basis.params.d_N();
  m.d_phi = basis.params.d_phi();
  m.overlap = std::abs(basis.plus.inner(basis.minus));
  return m;
}

inline CodeMetrics code_metrics(const CodeParams& params) {
  return code_metrics(build_codewords(params));
}

inline NPVector pauli_x_vector(const CodeParams& c) {
  return {c.s, kPi * c.f.value() / c.s};
}
inline NPVector pauli_z_vector(const CodeParams& c) { return {0, kPi / c.s}; }

struct LogicalOperators {
  FockOperator X_bar;
  FockOperator Z_bar;
  FockOperator S_x;
  FockOperator S_z;
};

inline LogicalOperators logical_operators(const CodeParams& c) {
  const NPVector nx = pauli_x_vector(c);
  const NPVector nz = pauli_z_vector(c);
  return {np_displace(nx, c.dim), np_displace(nz, c.dim),
          np_displace(2 * nx, c.dim), np_displace(2 * nz, c.dim)};
}

struct PauliPairCheck {
  double area = 0.0;
  bool valid = false;
};

inline PauliPairCheck check_pauli_pair(const NPVector& nx, const NPVector& nz) {
  const double area = std::abs(cross(nx, nz));
  return {area, std::abs(area - kPi) < 1e-12};
}

struct LatticePoint {
  double n = 0.0;
  double p = 0.0;
};

/// Codespace lattice r n*_x + t n_z + n_0 with n*_x = (s, -f pi/s),
/// n_z = (0, pi/s); phases folded into [0, 2pi), number coordinate <= n_max.
inline std::vector<LatticePoint> lattice_points(int s, Fraction f, double nu_x,
                                                double nu_z, int n_max) {
  if (s < 1) throw InvalidDimension("rotation order s must be positive");
  std::vector<LatticePoint> out;
  const double fv = f.value();
  for (int r = 0;; ++r) {
    const double n = s * (r + nu_x);
    if (n > n_max + 1e-12) break;
    std::vector<double> phases;
    for (int t = 0; t < 2 * s; ++t) {
      double p = -(r + nu_x) * fv * kPi / s + (t + nu_z) * kPi / s;
      p = std::fmod(p, 2.0 * kPi);
      if (p < 0) p += 2.0 * kPi;
      if (p >= 2.0 * kPi - 1e-12) p = 0.0;
      phases.push_back(p);
    }
    std::sort(phases.begin(), phases.end());
    for (double p : phases) out.push_back({n, p});
  }
  return out;
}

struct VortexCheck {
  double residual = 0.0;
  cplx phase{1.0, 0.0};       // aligned global phase
  cplx predicted_phase{1.0, 0.0};
  double angle = 0.0;          // rotation angle applied to the relabelled state
};

/// Compares Sigma_l psi with R(sign * l f pi / s^2) psi~_l, where psi~_l is
/// psi with |s n> relabelled to |s n - l> before the lattice phase.
inline VortexCheck vortex_check(const CodeParams& params, int l,
                                const FockState& psi, int sign = -1) {
  const int dim = params.dim;
  if (psi.dim() != dim) throw InvalidDimension("state/code truncation mismatch");
  const CVector u = interface_diagonal(params.s, params.f, dim);
  const FockOperator shift = fock_shift(l, dim);
  const CVector lhs = shift.mat * psi.amps;
  if (lhs.norm() < 1e-12) {
    throw DegenerateShift("shift by " + std::to_string(l) +
                          " annihilates the logical state");
  }
  const CVector rnp = u.conjugate().cwiseProduct(psi.amps);
  const CVector relabel = u.cwiseProduct(shift.mat * rnp);
  VortexCheck out;
  out.angle = sign * l * params.f.value() * kPi / (params.s * params.s);
  const CVector rhs = rotation(out.angle, dim).mat * relabel;
  const cplx ov = rhs.dot(lhs);
  out.phase = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx{1.0, 0.0};
  out.residual = (lhs - out.phase * rhs).norm();
  out.predicted_phase = quadratic_phase(params.f, params.s,
                                        static_cast<std::int64_t>(l) * l);
  return out;
}

/// Sign of the vortex rotation, resolved numerically on a shifted codeword.
inline int vortex_sign(const LogicalBasis& basis) {
  if (basis.params.f.is_zero()) return -1;
  const int l = 1;
  const double minus = vortex_check(basis.params, l, basis.plus, -1).residual;
  const double plus = vortex_check(basis.params, l, basis.plus, +1).residual;
  return minus <= plus ? -1 : +1;
}

struct KLMatrix {
  CMatrix matrix;  // index 2 j + mu
  double cost = 0.0;
};

/// M_[j mu],[k nu] = <mu|E_j^dag E_k|nu> over the orthonormal logical frame.
inline KLMatrix kl_matrix(const LogicalBasis& basis,
                          const std::vector<FockOperator>& errors) {
  const auto [zero, one] = basis.frame();
  const int J = static_cast<int>(errors.size());
  std::vector<CVector> images;
  images.reserve(2 * J);
  for (const auto& e : errors) {
    if (e.dim() != basis.params.dim) {
      throw InvalidDimension("error operator/code truncation mismatch");
    }
    images.push_back(e.mat * zero.amps);
    images.push_back(e.mat * one.amps);
  }
  KLMatrix out;
  out.matrix = CMatrix(2 * J, 2 * J);
  for (int a = 0; a < 2 * J; ++a) {
    for (int b = 0; b < 2 * J; ++b) out.matrix(a, b) = images[a].dot(images[b]);
  }
  double cost = 0.0;
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < J; ++k) {
      cost += std::norm(out.matrix(2 * j, 2 * k + 1));
      cost += std::norm(out.matrix(2 * j + 1, 2 * k));
      cost += std::norm(out.matrix(2 * j, 2 * k) - out.matrix(2 * j + 1, 2 * k + 1));
    }
  }
  out.cost = cost;
  return out;
}

inline KLMatrix kl_matrix(const CodeParams& params,
                          const std::vector<FockOperator>& errors) {
  return kl_matrix(build_codewords(params), errors);
}

}  // namespace npcodes
