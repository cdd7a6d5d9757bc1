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

// Teleportation-based QEC cycle: modular number parity, interface gate,
// controlled phase with a fresh ancilla code, binned canonical phase
// measurement, syndrome decoding and logical recovery.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npcodes/codes.hpp"
#include "npcodes/noise.hpp"

namespace npcodes {

enum class ParityMode { IdealProjective, CircuitSim };

struct QECConfig {
  int G = 0;
  int L = -1;  // negative: d_N - 1 - G
  int phase_points = 4096;
  std::optional<CodeParams> ancilla;
  ParityMode parity_mode = ParityMode::IdealProjective;
  double parity_alpha = 4.0;
  int parity_dim = 0;  // 0: smallest truncation holding the parity probe
  bool decoder_sign_flip = false;  // fault injection for harness tests
};

inline constexpr int kMaxModeDim = 64;
inline constexpr int kMaxJointDim = 4096;

struct Window {
  int G = 0;
  int L = 0;
  int m_min = 0;
  int m_max = 0;
};

inline int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int positive_mod(std::int64_t a, std::int64_t b) {
  return static_cast<int>(((a % b) + b) % b);
}

inline Window resolve_window(const CodeParams& code, const QECConfig& cfg) {
  const int dn = code.d_N();
  const int L = cfg.L < 0 ? dn - 1 - cfg.G : cfg.L;
  if (cfg.G < 0 || L < 0 || cfg.G + L != dn - 1) {
    throw WindowError("error window needs G + L = d_N - 1 = " +
                      std::to_string(dn - 1) + ", got G = " +
                      std::to_string(cfg.G) + ", L = " + std::to_string(L));
  }
  const int top = floor_div(L, code.s);
  return {cfg.G, L, top - code.f.q + 1, top};
}

/// P_{s,k} = sum_n |n s - k><n s - k|, k in [0, s).
inline std::vector<FockOperator> modular_parity_projectors(int s, int dim) {
  if (s < 1) throw InvalidDimension("rotation order s must be positive");
  require_dim(dim, 1);
  std::vector<FockOperator> out;
  for (int k = 0; k < s; ++k) {
    CMatrix p = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
      if (positive_mod(-n, s) == k) p(n, n) = 1.0;
    }
    out.emplace_back(std::move(p));
  }
  return out;
}

/// exp(-i pi n1 n2 / (s1 s2)) on the product space, index n1 * dim2 + n2.
inline CVector controlled_phase_diagonal(int s1, int s2, int dim1, int dim2) {
  if (dim1 > kMaxModeDim || dim2 > kMaxModeDim || dim1 * dim2 > kMaxJointDim) {
    throw ResourceGuard("two-mode space " + std::to_string(dim1) + "x" +
                        std::to_string(dim2) + " exceeds the dense limit");
  }
  const std::int64_t period = 2LL * s1 * s2;
  CVector d(dim1 * dim2);
  for (int a = 0; a < dim1; ++a) {
    for (int b = 0; b < dim2; ++b) {
      const int r = positive_mod(static_cast<std::int64_t>(a) * b, period);
      d(a * dim2 + b) = std::polar(1.0, -kPi * r / (s1 * s2));
    }
  }
  return d;
}

inline FockOperator controlled_phase(int s1, int s2, std::pair<int, int> dims) {
  return FockOperator(
      controlled_phase_diagonal(s1, s2, dims.first, dims.second).asDiagonal().toDenseMatrix());
}

struct Candidate {
  double angle = 0.0;  // folded into [0, 2 pi / s)
  int i = 0;
  int m = 0;
};

/// Nearest-candidate decoding of the teleportation phase outcome for one
/// parity sector. The phase pattern repeats with period 2 pi / s.
struct DecisionRegions {
  int k = 0;
  double period = 2.0 * kPi;
  std::vector<Candidate> candidates;  // sorted by angle

  double distance(double x, double c) const {
    double d = std::fmod(std::abs(x - c), period);
    return std::min(d, period - d);
  }

  /// Index of the decoded candidate; ties go to smaller |m|, then i = 0.
  int decode(double x) const {
    int best = 0;
    double best_d = distance(x, candidates[0].angle);
    for (int c = 1; c < static_cast<int>(candidates.size()); ++c) {
      const double d = distance(x, candidates[c].angle);
      const auto& cb = candidates[best];
      const auto& cc = candidates[c];
      if (d < best_d - 1e-12 ||
          (std::abs(d - best_d) <= 1e-12 &&
           std::make_pair(std::abs(cc.m), cc.i) < std::make_pair(std::abs(cb.m), cb.i))) {
        best = c;
        best_d = d;
      }
    }
    return best;
  }

  /// Midpoints between circularly adjacent candidates.
  std::vector<double> boundaries() const {
    std::vector<double> out;
    const int n = static_cast<int>(candidates.size());
    for (int c = 0; c < n; ++c) {
      const double a = candidates[c].angle;
      double b = candidates[(c + 1) % n].angle;
      if (c + 1 == n) b += period;
      out.push_back(std::fmod(0.5 * (a + b), period));
    }
    return out;
  }
};

inline double fold(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0) y += period;
  if (y >= period) y -= period;
  return y;
}

/// Candidates theta_{i,m} = i pi/s + sigma m f pi/s + sigma f k pi/s^2.
inline DecisionRegions decision_regions(const CodeParams& code, const QECConfig& cfg,
                                        int k = 0, int sigma = -1) {
  const Window w = resolve_window(code, cfg);
  if (k < 0 || k >= code.s) throw WindowError("parity outside [0, s)");
  if (cfg.decoder_sign_flip) sigma = -sigma;
  const int s = code.s;
  DecisionRegions r;
  r.k = k;
  r.period = 2.0 * kPi / s;
  // Angles in units of pi / (2 q s^2) to keep the collision test exact.
  const std::int64_t unit_period = 4LL * code.f.q * s;
  std::vector<std::int64_t> keys;
  for (int m = w.m_min; m <= w.m_max; ++m) {
    for (int i = 0; i <= 1; ++i) {
      const std::int64_t num = 2LL * i * code.f.q * s +
                               2LL * sigma * m * code.f.p * s +
                               2LL * sigma * code.f.p * k;
      const std::int64_t key = positive_mod(num, unit_period);
      for (auto other : keys) {
        if (other == key) {
          throw DecoderConstructionError("decision candidates collide for (i, m) = (" +
                                         std::to_string(i) + ", " + std::to_string(m) + ")");
        }
      }
      keys.push_back(key);
      const double angle = fold(kPi * static_cast<double>(num) / (2.0 * code.f.q * s * s),
                                r.period);
      r.candidates.push_back({angle, i, m});
    }
  }
  std::sort(r.candidates.begin(), r.candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.angle < b.angle; });
  return r;
}

struct SyndromeOutcome {
  int k = 0;
  int i = 0;
  int m = 0;
  double probability = 0.0;  // averaged over the logical inputs |0>, |1>
  std::array<double, 2> per_input{};

  int shift(int s) const { return s * m + k; }
};

struct LogicalChannel {
  // Column mu * 2 + nu holds E(|mu><nu|) flattened as row a * 2 + b.
  Eigen::Matrix4cd process = Eigen::Matrix4cd::Zero();
  double leakage = 0.0;
  std::array<double, 2> input_weight{};  // total branch weight per input
  std::array<double, 2> leakage_per_input{};
  std::vector<SyndromeOutcome> syndromes;
  std::vector<std::string> warnings;

  Eigen::Matrix2cd output(int mu, int nu) const {
    Eigen::Matrix2cd out;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) out(a, b) = process(a * 2 + b, mu * 2 + nu);
    }
    return out;
  }

  const SyndromeOutcome* dominant() const {
    const SyndromeOutcome* best = nullptr;
    for (const auto& o : syndromes) {
      if (!best || o.probability > best->probability) best = &o;
    }
    return best;
  }
};

/// F = (1/4) sum_{mu nu} <mu| E(|mu><nu|) |nu>; leakage is not renormalized.
inline double channel_fidelity(const LogicalChannel& lc) {
  cplx acc{};
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) acc += lc.process(mu * 2 + nu, mu * 2 + nu);
  }
  return 0.25 * acc.real();
}

/// Builds a channel from 2x2 Kraus operators on the logical qubit.
inline LogicalChannel logical_channel_from_kraus(const std::vector<Eigen::Matrix2cd>& ks) {
  LogicalChannel lc;
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      Eigen::Matrix2cd in = Eigen::Matrix2cd::Zero();
      in(mu, nu) = 1.0;
      Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
      for (const auto& k : ks) out += k * in * k.adjoint();
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) lc.process(a * 2 + b, mu * 2 + nu) = out(a, b);
      }
    }
  }
  lc.input_weight = {1.0, 1.0};
  return lc;
}

/// Smallest eigenvalue of the Choi matrix of the logical block.
inline double logical_choi_min_eigenvalue(const LogicalChannel& lc) {
  Eigen::Matrix4cd choi;
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          choi(mu * 2 + a, nu * 2 + b) = lc.process(a * 2 + b, mu * 2 + nu);
        }
      }
    }
  }
  const Eigen::Matrix4cd h = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  return es.eigenvalues().minCoeff();
}

struct CorrectableShift {
  int l = 0;
  double phi_max = 0.0;  // open bound |phi_e| < phi_max
};

struct CorrectableSet {
  std::vector<CorrectableShift> shifts;
  double rotation_only_max = 0.0;  // pure rotations |phi_e| < d_phi / 2
};

inline CorrectableSet correctable_set(const CodeParams& code, int G, int L) {
  const int dn = code.d_N();
  if (G < 0 || L < 0 || G + L != dn - 1) {
    throw WindowError("error window needs G + L = d_N - 1 = " + std::to_string(dn - 1));
  }
  CorrectableSet out;
  for (int l = -G; l <= L; ++l) out.shifts.push_back({l, kPi / (2.0 * dn)});
  out.rotation_only_max = 0.5 * code.d_phi();
  return out;
}

/// Coherent probe amplitudes <e_X| R(2 pi kappa / s) |alpha> on a grid.
inline CMatrix parity_probe_amplitudes(int s, double alpha, int anc_dim, const PhaseGrid& grid) {
  CVector coh(anc_dim);
  double term = std::exp(-0.5 * alpha * alpha);
  for (int n = 0; n < anc_dim; ++n) {
    coh(n) = term;
    term *= alpha / std::sqrt(n + 1.0);
  }
  CMatrix c(grid.size(), s);
  for (int kappa = 0; kappa < s; ++kappa) {
    for (int j = 0; j < grid.size(); ++j) {
      const double x = grid.point(j) - 2.0 * kPi * kappa / s;
      cplx acc{};
      for (int n = 0; n < anc_dim; ++n) acc += std::polar(1.0, -n * x) * coh(n);
      c(j, kappa) = acc / std::sqrt(2.0 * kPi);
    }
  }
  return c;
}

/// Weight of grid point x in the parity sector centred on 2 pi k' / s; a
/// point on a sector edge is shared equally.
inline double sector_weight(double x, int s, int kp) {
  const double w = 2.0 * kPi / s;
  const double rel = fold(x - kp * w + 0.5 * w, 2.0 * kPi);
  if (std::abs(rel) < 1e-12 || std::abs(rel - w) < 1e-12 ||
      std::abs(rel - 2.0 * kPi) < 1e-12) {
    return 0.5;
  }
  return rel < w ? 1.0 : 0.0;
}

inline int parity_probe_dim(double alpha) {
  int dim = 8;
  for (;; ++dim) {
    if (dim > kMaxModeDim) {
      throw ResourceGuard("parity probe amplitude " + format_sci(alpha) +
                          " needs more than " + std::to_string(kMaxModeDim) + " levels");
    }
    double term = std::exp(-0.5 * alpha * alpha);
    double tail = 0.0;
    for (int n = 0; n < dim; ++n) {
      if (n >= dim - kTailLevels) tail += term * term;
      term *= alpha / std::sqrt(n + 1.0);
    }
    if (tail < 1e-12) return dim;
  }
}

/// Literal two-mode simulation of the doubled controlled phase acting on
/// |n s - k> (x) |alpha>, read out by a binned canonical phase measurement
/// of the probe. Row k: injected parity, column k': decoded parity.
inline RMatrix parity_circuit_validation(const CodeParams& code, double alpha_anc,
                                         std::pair<int, int> dims, int phase_points = 1024) {
  const int s = code.s;
  const auto [dd, da] = dims;
  if (!(alpha_anc > 0.0)) throw InvalidDimension("probe amplitude must be positive");
  if (s == 1) return RMatrix::Ones(1, 1);
  const CVector cz = controlled_phase_diagonal(s, 1, dd, da);
  const CVector cz2 = cz.cwiseProduct(cz);
  CVector coh(da);
  double term = std::exp(-0.5 * alpha_anc * alpha_anc);
  for (int n = 0; n < da; ++n) {
    coh(n) = term;
    term *= alpha_anc / std::sqrt(n + 1.0);
  }
  coh /= coh.norm();
  const PhaseGrid grid(std::max(phase_points, da));
  RMatrix conf = RMatrix::Zero(s, s);
  for (int k = 0; k < s; ++k) {
    const int n_data = s - k;
    if (n_data >= dd) throw InvalidDimension("data truncation too small for parity test");
    CVector joint = CVector::Zero(dd * da);
    for (int b = 0; b < da; ++b) joint(n_data * da + b) = coh(b);
    joint = cz2.cwiseProduct(joint);
    const CVector anc = joint.segment(n_data * da, da);
    const auto dens = phase_povm_weights(FockState(anc), grid);
    for (int j = 0; j < grid.size(); ++j) {
      for (int kp = 0; kp < s; ++kp) {
        conf(k, kp) += dens[j] * grid.spacing() * sector_weight(grid.point(j), s, kp);
      }
    }
  }
  return conf;
}

/// Parity-measurement Kraus operators for one outcome k': diagonal over the
/// residues kappa = (-n mod s).
struct ParityKraus {
  int outcome = 0;
  CVector residue_amp;  // length s
};

inline std::vector<ParityKraus> parity_measurement_kraus(int s, double alpha, int anc_dim,
                                                         int phase_points) {
  if (s == 1) return {{0, CVector::Ones(1)}};
  const PhaseGrid grid(std::max(phase_points, anc_dim));
  const CMatrix c = parity_probe_amplitudes(s, alpha, anc_dim, grid);
  std::vector<ParityKraus> out;
  for (int kp = 0; kp < s; ++kp) {
    CMatrix gram = CMatrix::Zero(s, s);
    for (int j = 0; j < grid.size(); ++j) {
      const double w = sector_weight(grid.point(j), s, kp) * grid.spacing();
      if (w == 0.0) continue;
      gram += w * c.row(j).transpose() * c.row(j).conjugate();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (gram + gram.adjoint()));
    for (int e = 0; e < s; ++e) {
      const double lam = es.eigenvalues()(e);
      if (lam <= 1e-14) continue;
      out.push_back({kp, std::sqrt(lam) * es.eigenvectors().col(e)});
    }
  }
  return out;
}

namespace detail {

/// Per-grid-point region assignment with boundary points shared equally.
struct RegionWeights {
  std::vector<std::array<int, 2>> index;
  std::vector<std::array<double, 2>> weight;
};

inline RegionWeights assign_regions(const DecisionRegions& r, const PhaseGrid& grid) {
  RegionWeights out;
  out.index.resize(grid.size());
  out.weight.resize(grid.size());
  const int nc = static_cast<int>(r.candidates.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    int best = -1, second = -1;
    double bd = 1e300, sd = 1e300;
    for (int c = 0; c < nc; ++c) {
      const double d = r.distance(x, r.candidates[c].angle);
      if (d < bd) {
        second = best;
        sd = bd;
        best = c;
        bd = d;
      } else if (d < sd) {
        second = c;
        sd = d;
      }
    }
    if (second >= 0 && sd - bd < 1e-12) {
      out.index[j] = {best, second};
      out.weight[j] = {0.5, 0.5};
    } else {
      out.index[j] = {best, best};
      out.weight[j] = {1.0, 0.0};
    }
  }
  return out;
}

inline Eigen::Matrix2cd recovery_unitary(int i, int m) {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd H;
  H << h, h, h, -h;
  Eigen::Matrix2cd X;
  X << 0, 1, 1, 0;
  Eigen::Matrix2cd Z;
  Z << 1, 0, 0, -1;
  Eigen::Matrix2cd u = H;
  if (i == 1) u = u * X;
  if (m % 2 != 0) u = u * Z;
  return u;
}

}  // namespace detail

/// Runs the QEC cycle on every Kraus branch of `noise`.
///
/// Each branch w = U_f^dag B K psi_mu (B a parity Kraus operator) is taken
/// through the controlled phase with the ancilla |+>, the phase-state
/// contraction on the data and the ancilla-side correction R(-pi k/(s s_a)).
/// The ancilla logical amplitudes reduce to
///   a_b(X) = (2pi)^{-1/2} sum_N w_N g^{(b,k)}_N e^{-i N X},
///   g^{(b,k)}_N = (sqrt2 |t_b|^2)^{-1} sum_{m = b mod 2} |t_m|^2 e^{-i pi m (N + k)/s},
/// with t the ancilla amplitudes and |t_b|^2 the weight of their parity-b part.
inline LogicalChannel teleport_qec(const CodeParams& code, const KrausSet& noise,
                                   const QECConfig& cfg) {
  code.validate();
  const int dim = code.dim;
  const int s = code.s;
  if (noise.size() == 0 || noise.dim() != dim) {
    throw InvalidDimension("noise Kraus truncation does not match the code");
  }
  if (cfg.phase_points < kMinPovmPoints || cfg.phase_points < dim) {
    throw InvalidDimension("phase grid too coarse for the code truncation");
  }
  const CodeParams anc = cfg.ancilla.value_or(code);
  anc.validate();
  const LogicalBasis basis = build_codewords(code);
  const auto [zero, one] = basis.frame();
  const int sigma = vortex_sign(basis);
  const PhaseGrid grid(cfg.phase_points);
  const int P = grid.size();

  // Ancilla parity weights of |t_m|^2.
  const CVector t = code_amplitudes(anc.amplitude, (anc.dim - 1) / anc.s + 1);
  std::array<double, 2> tb{0.0, 0.0};
  for (Eigen::Index m = 0; m < t.size(); ++m) tb[m % 2] += std::norm(t(m));
  if (tb[0] <= 0.0 || tb[1] <= 0.0) {
    throw DecoderConstructionError("ancilla code lacks a logical parity component");
  }
  // g^{(b,k)}_N depends on N + k modulo 2s.
  const int mod2s = 2 * s;
  std::vector<std::array<cplx, 2>> g_res(mod2s);
  for (int r = 0; r < mod2s; ++r) {
    for (int b = 0; b < 2; ++b) {
      cplx acc{};
      for (Eigen::Index m = b; m < t.size(); m += 2) {
        const int e = positive_mod(static_cast<std::int64_t>(m) * r, mod2s);
        acc += std::norm(t(m)) * std::polar(1.0, -kPi * e / s);
      }
      g_res[r][b] = acc / (std::sqrt(2.0) * tb[b]);
    }
  }

  // Phase-state matrix E_{jN} = e^{-i N X_j} / sqrt(2 pi).
  CMatrix E(P, dim);
  for (int j = 0; j < P; ++j) {
    for (int n = 0; n < dim; ++n) {
      const int r = positive_mod(static_cast<std::int64_t>(n) * j, P);
      E(j, n) = std::polar(1.0 / std::sqrt(2.0 * kPi), -2.0 * kPi * r / P);
    }
  }

  // Parity branches: diagonal operators over residues kappa = (-n mod s).
  struct ParityBranch {
    int outcome;
    CVector diag;
  };
  std::vector<ParityBranch> parity;
  if (cfg.parity_mode == ParityMode::IdealProjective || s == 1) {
    for (int k = 0; k < s; ++k) {
      CVector d = CVector::Zero(dim);
      for (int n = 0; n < dim; ++n) {
        if (positive_mod(-n, s) == k) d(n) = 1.0;
      }
      parity.push_back({k, d});
    }
  } else {
    const int pdim = cfg.parity_dim > 0 ? cfg.parity_dim : parity_probe_dim(cfg.parity_alpha);
    if (pdim > kMaxModeDim) throw ResourceGuard("parity probe truncation too large");
    for (const auto& pk : parity_measurement_kraus(s, cfg.parity_alpha, pdim, cfg.phase_points)) {
      CVector d(dim);
      for (int n = 0; n < dim; ++n) d(n) = pk.residue_amp(positive_mod(-n, s));
      parity.push_back({pk.outcome, d});
    }
  }

  const CVector uf_dag = interface_diagonal(s, code.f, dim).conjugate();
  std::vector<DecisionRegions> regions;
  std::vector<detail::RegionWeights> assign;
  for (int k = 0; k < s; ++k) {
    regions.push_back(decision_regions(code, cfg, k, sigma));
    assign.push_back(detail::assign_regions(regions.back(), grid));
  }
  const int nc = static_cast<int>(regions[0].candidates.size());
  std::vector<std::vector<Eigen::Matrix4cd>> gram(
      s, std::vector<Eigen::Matrix4cd>(nc, Eigen::Matrix4cd::Zero()));

  LogicalChannel lc;
  for (const auto& K : noise.operators) {
    const CVector k0 = K.mat * zero.amps;
    const CVector k1 = K.mat * one.amps;
    for (const auto& pb : parity) {
      CMatrix w(dim, 2);
      w.col(0) = uf_dag.cwiseProduct(pb.diag.cwiseProduct(k0));
      w.col(1) = uf_dag.cwiseProduct(pb.diag.cwiseProduct(k1));
      const double n0 = w.col(0).squaredNorm();
      const double n1 = w.col(1).squaredNorm();
      lc.input_weight[0] += n0;
      lc.input_weight[1] += n1;
      if (n0 + n1 < 1e-20) continue;
      const int k = pb.outcome;
      CMatrix wg(dim, 4);  // column mu * 2 + b
      for (int n = 0; n < dim; ++n) {
        const auto& g = g_res[positive_mod(n + k, mod2s)];
        for (int mu = 0; mu < 2; ++mu) {
          for (int b = 0; b < 2; ++b) wg(n, mu * 2 + b) = w(n, mu) * g[b];
        }
      }
      const CMatrix amp = E * wg;  // P x 4
      auto& gk = gram[k];
      const auto& as = assign[k];
      for (int j = 0; j < P; ++j) {
        const Eigen::Vector4cd v = amp.row(j).transpose();
        const Eigen::Matrix4cd outer = v * v.adjoint();
        for (int h = 0; h < 2; ++h) {
          const double wt = as.weight[j][h];
          if (wt == 0.0) continue;
          gk[as.index[j][h]] += (wt * grid.spacing()) * outer;
        }
      }
    }
  }

  for (int k = 0; k < s; ++k) {
    for (int c = 0; c < nc; ++c) {
      const auto& cand = regions[k].candidates[c];
      const Eigen::Matrix2cd U = detail::recovery_unitary(cand.i, cand.m);
      const Eigen::Matrix4cd& G = gram[k][c];
      SyndromeOutcome so{k, cand.i, cand.m, 0.0, {}};
      for (int mu = 0; mu < 2; ++mu) {
        so.per_input[mu] = (G(mu * 2, mu * 2) + G(mu * 2 + 1, mu * 2 + 1)).real();
        for (int nu = 0; nu < 2; ++nu) {
          const Eigen::Matrix2cd block = G.block<2, 2>(mu * 2, nu * 2);
          const Eigen::Matrix2cd out = U * block * U.adjoint();
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) lc.process(a * 2 + b, mu * 2 + nu) += out(a, b);
          }
        }
      }
      so.probability = 0.5 * (so.per_input[0] + so.per_input[1]);
      lc.syndromes.push_back(so);
    }
  }
  for (int mu = 0; mu < 2; ++mu) {
    const double captured = (lc.process(0, mu * 3) + lc.process(3, mu * 3)).real();
    lc.leakage_per_input[mu] = std::max(0.0, lc.input_weight[mu] - captured);
  }
  lc.leakage = 0.5 * (lc.leakage_per_input[0] + lc.leakage_per_input[1]);
  if (lc.leakage > 0.5) {
    lc.warnings.push_back("leakage above one half: decoder convention mismatch suspected");
  }
  const double min_eig = logical_choi_min_eigenvalue(lc);
  if (min_eig < -1e-8) {
    throw NumericalFailure("logical block is not completely positive (eigenvalue " +
                           format_sci(min_eig) + ")");
  }
  return lc;
}

}  // namespace npcodes
