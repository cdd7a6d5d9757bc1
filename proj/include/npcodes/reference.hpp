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

// Brute-force reference computations used to cross-check the fast paths.

#include <functional>

#include "npcodes/qec.hpp"

namespace npcodes::reference {

/// Dense Lindblad right-hand side gamma D[a] rho + kappa D[n] rho with unit time.
inline CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& a, const CMatrix& n,
                            double gamma, double kappa) {
  const CMatrix ad = a.adjoint();
  const CMatrix ada = ad * a;
  const CMatrix n2 = n * n;
  return gamma * (a * rho * ad - 0.5 * (ada * rho + rho * ada)) +
         kappa * (n * rho * n - 0.5 * (n2 * rho + rho * n2));
}

/// Classical fourth-order Runge-Kutta over unit time with the given step.
inline CMatrix lindblad_rk4(const CMatrix& rho0, NoiseParams p, double step = 1e-4) {
  const int dim = static_cast<int>(rho0.rows());
  const LadderOperators ops = ladder_operators(dim);
  const int steps = static_cast<int>(std::ceil(1.0 / step));
  const double h = 1.0 / steps;
  CMatrix rho = rho0;
  for (int k = 0; k < steps; ++k) {
    const CMatrix k1 = lindblad_rhs(rho, ops.a.mat, ops.n.mat, p.gamma_t, p.kappa_t);
    const CMatrix k2 = lindblad_rhs(rho + 0.5 * h * k1, ops.a.mat, ops.n.mat, p.gamma_t, p.kappa_t);
    const CMatrix k3 = lindblad_rhs(rho + 0.5 * h * k2, ops.a.mat, ops.n.mat, p.gamma_t, p.kappa_t);
    const CMatrix k4 = lindblad_rhs(rho + h * k3, ops.a.mat, ops.n.mat, p.gamma_t, p.kappa_t);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Dense density-matrix simulation of the ideal-parity QEC cycle with an
/// explicit ancilla mode. Intended for truncations of a dozen levels.
inline LogicalChannel teleport_dense(const CodeParams& code,
                                     const std::function<CMatrix(const CMatrix&)>& noise,
                                     const QECConfig& cfg) {
  const CodeParams anc = cfg.ancilla.value_or(code);
  const int dd = code.dim;
  const int da = anc.dim;
  const int s = code.s;
  const LogicalBasis data = build_codewords(code);
  const LogicalBasis ancb = build_codewords(anc);
  const auto [z, o] = data.frame();
  const auto [az, ao] = ancb.frame();
  const CVector plus = (az.amps + ao.amps) / std::sqrt(2.0);
  const CMatrix uf = interface_gate(s, code.f, dd).mat;
  const CMatrix cz = controlled_phase(s, anc.s, {dd, da}).mat;
  const auto proj = modular_parity_projectors(s, dd);
  const PhaseGrid grid(cfg.phase_points);
  const int sigma = vortex_sign(data);

  LogicalChannel lc;
  const CVector* in[2] = {&z.amps, &o.amps};
  const double h = 1.0 / std::sqrt(2.0);
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      const CMatrix rho = noise(*in[mu] * in[nu]->adjoint());
      if (mu == nu) lc.input_weight[mu] = rho.trace().real();
      Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
      for (int k = 0; k < s; ++k) {
        const CMatrix r = uf.adjoint() * proj[k].mat * rho * proj[k].mat * uf;
        CMatrix joint(dd * da, dd * da);
        for (int a = 0; a < dd; ++a) {
          for (int b = 0; b < dd; ++b) {
            joint.block(a * da, b * da, da, da) = r(a, b) * plus * plus.adjoint();
          }
        }
        joint = cz * joint * cz.adjoint();
        const CMatrix corr = rotation(-kPi * k / (s * anc.s), da).mat;
        const DecisionRegions regions = decision_regions(code, cfg, k, sigma);
        for (int j = 0; j < grid.size(); ++j) {
          const double x = grid.point(j);
          CVector ex(dd);
          for (int n = 0; n < dd; ++n) ex(n) = std::polar(1.0 / std::sqrt(2.0 * kPi), n * x);
          CMatrix a = CMatrix::Zero(da, da);
          for (int p = 0; p < dd; ++p) {
            for (int q = 0; q < dd; ++q) {
              a += std::conj(ex(p)) * ex(q) * joint.block(p * da, q * da, da, da);
            }
          }
          a = corr * a * corr.adjoint();
          Eigen::Matrix2cd blk;
          const CVector* fr[2] = {&az.amps, &ao.amps};
          for (int p = 0; p < 2; ++p) {
            for (int q = 0; q < 2; ++q) blk(p, q) = fr[p]->dot(a * *fr[q]);
          }
          // Nearest candidate, sharing grid points that sit on a boundary.
          std::vector<std::pair<double, int>> dist;
          for (int c = 0; c < static_cast<int>(regions.candidates.size()); ++c) {
            dist.push_back({regions.distance(x, regions.candidates[c].angle), c});
          }
          std::sort(dist.begin(), dist.end());
          std::vector<int> chosen{dist[0].second};
          if (dist.size() > 1 && dist[1].first - dist[0].first < 1e-12) {
            chosen.push_back(dist[1].second);
          }
          for (int c : chosen) {
            const auto& cand = regions.candidates[c];
            Eigen::Matrix2cd u;
            u << h, h, h, -h;
            if (cand.i == 1) u = u * (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
            if (cand.m % 2 != 0) u = u * (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
            acc += (grid.spacing() / chosen.size()) * u * blk * u.adjoint();
          }
        }
      }
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) lc.process(a * 2 + b, mu * 2 + nu) = acc(a, b);
      }
    }
  }
  return lc;
}

}  // namespace npcodes::reference
