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


#include <catch_amalgamated.hpp>

#include "npcodes/qec.hpp"
#include "npcodes/reference.hpp"
#include "support.hpp"

#include <map>
#include <set>

using namespace npcodes;
using npcodes::testing::max_abs;
using Catch::Matchers::WithinAbs;

namespace {

CodeParams gaussian_code(int s, Fraction f, double alpha2, double r = 0.0) {
  return make_code(s, f, GaussianAmplitude{std::sqrt(alpha2), r});
}

KrausSet single_kraus(const CMatrix& k) {
  KrausSet ks;
  ks.operators.emplace_back(k);
  ks.photons_lost.push_back(0);
  ks.weights.push_back(k.squaredNorm());
  return ks;
}

/// D(n_e) rescaled so the average logical input keeps unit weight.
KrausSet injected(const CodeParams& c, NPVector ne) {
  const auto b = build_codewords(c);
  const auto [z, o] = b.frame();
  const CMatrix d = np_displace(ne, c.dim).mat;
  const double w = 0.5 * ((d * z.amps).squaredNorm() + (d * o.amps).squaredNorm());
  return single_kraus(d / std::sqrt(w));
}

std::pair<int, int> dominant_km(const LogicalChannel& lc, int s) {
  std::map<std::pair<int, int>, double> marg;
  for (const auto& o : lc.syndromes) marg[{o.k, o.m}] += o.probability;
  auto best = marg.begin();
  for (auto it = marg.begin(); it != marg.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  (void)s;
  return best->first;
}

}  // namespace

TEST_CASE("modular parity projectors", "[qec]") {
  REQUIRE(max_abs(modular_parity_projectors(1, 5)[0].mat - CMatrix::Identity(5, 5)) == 0.0);
  const auto p = modular_parity_projectors(2, 6);
  for (int n = 0; n < 6; ++n) {
    REQUIRE(p[0].mat(n, n) == cplx(n % 2 == 0 ? 1.0 : 0.0));
    REQUIRE(p[1].mat(n, n) == cplx(n % 2 == 1 ? 1.0 : 0.0));
  }
  for (int s : {2, 3, 4}) {
    const auto ps = modular_parity_projectors(s, 13);
    CMatrix sum = CMatrix::Zero(13, 13);
    for (const auto& q : ps) sum += q.mat;
    REQUIRE(max_abs(sum - CMatrix::Identity(13, 13)) == 0.0);
    // k = 1 covers n s - 1.
    REQUIRE(ps[1].mat(s - 1, s - 1) == cplx(1.0));
  }
}

TEST_CASE("controlled phase gate", "[qec]") {
  const int s1 = 2, s2 = 3, d1 = 9, d2 = 10;
  const CMatrix cz = controlled_phase(s1, s2, {d1, d2}).mat;
  for (int m = 0; s1 * m < d1; ++m) {
    for (int n = 0; s2 * n < d2; ++n) {
      const int idx = s1 * m * d2 + s2 * n;
      REQUIRE(std::abs(cz(idx, idx) - ((m * n) % 2 == 0 ? 1.0 : -1.0)) < 1e-14);
    }
  }
  REQUIRE(max_abs(cz.adjoint() * cz - CMatrix::Identity(d1 * d2, d1 * d2)) < 1e-13);
  const CMatrix c11 = controlled_phase(1, 1, {4, 4}).mat;
  for (int b = 0; b < 4; ++b) REQUIRE(c11(b, b) == cplx(1.0));
  REQUIRE_THROWS_AS(controlled_phase(1, 1, {100, 10}), ResourceGuard);
}

TEST_CASE("decision region candidates", "[qec]") {
  const auto rnp = make_code(4, Fraction(0, 1), BinomialAmplitude{3});
  const auto r = decision_regions(rnp, {}, 0);
  REQUIRE(r.candidates.size() == 2);
  REQUIRE_THAT(r.candidates[0].angle, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(r.candidates[1].angle, WithinAbs(kPi / 4, 1e-15));
  for (const auto& c : r.candidates) REQUIRE(c.m == 0);

  QECConfig onp_cfg;
  onp_cfg.G = 0;
  onp_cfg.L = 3;
  const auto onp = gaussian_code(1, Fraction(1, 4), 4.0);
  const auto ro = decision_regions(onp, onp_cfg);
  REQUIRE(ro.candidates.size() == 8);
  std::set<int> ms;
  for (std::size_t c = 0; c < ro.candidates.size(); ++c) {
    ms.insert(ro.candidates[c].m);
    REQUIRE_THAT(ro.candidates[c].angle, WithinAbs(c * kPi / 4, 1e-12));
  }
  REQUIRE(ms == std::set<int>{0, 1, 2, 3});

  const auto dnp = gaussian_code(2, Fraction(1, 2), 4.0);
  for (int k = 0; k < 2; ++k) {
    const auto rd = decision_regions(dnp, onp_cfg, k);
    REQUIRE(rd.candidates.size() == 4);
    for (std::size_t c = 1; c < rd.candidates.size(); ++c) {
      REQUIRE_THAT(rd.candidates[c].angle - rd.candidates[c - 1].angle, WithinAbs(kPi / 4, 1e-12));
    }
    std::set<int> mm;
    for (const auto& c : rd.candidates) mm.insert(c.m);
    REQUIRE(mm == std::set<int>{0, 1});
  }

  QECConfig bad;
  bad.G = 1;
  bad.L = 1;
  REQUIRE_THROWS_AS(decision_regions(dnp, bad), WindowError);
}

TEST_CASE("decoding ties prefer small shifts", "[qec]") {
  const auto onp = gaussian_code(1, Fraction(1, 4), 4.0);
  const auto r = decision_regions(onp, {});
  // Between the m = 0 candidate at 0 and its neighbour at 2 pi - pi/4.
  const auto& c = r.candidates[r.decode(2.0 * kPi - kPi / 8)];
  REQUIRE(c.m == 0);
  REQUIRE(c.i == 0);
}

TEST_CASE("correctable sets", "[qec]") {
  const auto dnp = gaussian_code(2, Fraction(1, 2), 4.0);
  auto cs = correctable_set(dnp, 0, 3);
  REQUIRE(cs.shifts.size() == 4);
  REQUIRE(cs.shifts.front().l == 0);
  REQUIRE(cs.shifts.back().l == 3);
  REQUIRE_THAT(cs.shifts[0].phi_max, WithinAbs(kPi / 8, 1e-15));
  REQUIRE_THAT(cs.rotation_only_max, WithinAbs(kPi / 4, 1e-15));
  cs = correctable_set(dnp, 3, 0);
  REQUIRE(cs.shifts.front().l == -3);
  REQUIRE(cs.shifts.back().l == 0);
  REQUIRE_THROWS_AS(correctable_set(dnp, 1, 1), WindowError);
}

TEST_CASE("channel fidelity of reference channels", "[qec]") {
  REQUIRE_THAT(channel_fidelity(logical_channel_from_kraus({Eigen::Matrix2cd::Identity()})),
               WithinAbs(1.0, 1e-15));
  std::vector<Eigen::Matrix2cd> dep;
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  for (const auto& p : {Eigen::Matrix2cd(Eigen::Matrix2cd::Identity()), x, y, z}) dep.push_back(0.5 * p);
  REQUIRE_THAT(channel_fidelity(logical_channel_from_kraus(dep)), WithinAbs(0.25, 1e-15));

  const double g = 0.0049875;
  Eigen::Matrix2cd a0, a1;
  a0 << 1, 0, 0, std::sqrt(1 - g);
  a1 << 0, std::sqrt(g), 0, 0;
  const double f = channel_fidelity(logical_channel_from_kraus({a0, a1}));
  REQUIRE_THAT(f, WithinAbs(0.25 * (1 + (1 - g) + 2 * std::sqrt(1 - g)), 1e-15));
  REQUIRE_THAT(f, WithinAbs(0.99750469, 1e-8));
}

TEST_CASE("parity readout with a coherent probe", "[qec]") {
  const auto dnp = gaussian_code(2, Fraction(1, 2), 4.0);
  const auto four = make_code(4, Fraction(0, 1), BinomialAmplitude{2});
  for (const auto& code : {dnp, four}) {
    const RMatrix c2 = parity_circuit_validation(code, 2.0, {8, parity_probe_dim(2.0)});
    const RMatrix c4 = parity_circuit_validation(code, 4.0, {8, parity_probe_dim(4.0)});
    const double off2 = c2.sum() - c2.trace();
    const double off4 = c4.sum() - c4.trace();
    REQUIRE(off4 < off2);
    Eigen::Index arg;
    c2.row(0).maxCoeff(&arg);
    REQUIRE(arg == 0);
    for (int k = 0; k < code.s; ++k) REQUIRE_THAT(c4.row(k).sum(), WithinAbs(1.0, 1e-9));
  }
  const auto onp = gaussian_code(1, Fraction(1, 4), 4.0);
  REQUIRE(parity_circuit_validation(onp, 2.0, {8, 20}) == RMatrix::Ones(1, 1));
  REQUIRE_THROWS_AS(parity_circuit_validation(dnp, 4.0, {8, 80}), ResourceGuard);
}

TEST_CASE("parity Kraus operators reproduce the circuit confusion matrix", "[qec]") {
  const int s = 4;
  const int pdim = parity_probe_dim(2.0);
  const auto ks = parity_measurement_kraus(s, 2.0, pdim, 1024);
  RMatrix conf = RMatrix::Zero(s, s);
  for (const auto& k : ks) {
    for (int kappa = 0; kappa < s; ++kappa) conf(kappa, k.outcome) += std::norm(k.residue_amp(kappa));
  }
  const auto code = make_code(4, Fraction(0, 1), BinomialAmplitude{2});
  const RMatrix lit = parity_circuit_validation(code, 2.0, {8, pdim}, 1024);
  REQUIRE((conf - lit).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pure-branch engine equals dense density evolution", "[qec]") {
  struct Case {
    CodeParams code;
    NoiseParams noise;
  };
  const std::vector<Case> cases{
      {make_code(2, Fraction(1, 2), BinomialAmplitude{2}, 10), {0.1, 0.02}},
      {make_code(1, Fraction(1, 2), BinomialAmplitude{3}, 10), {0.15, 0.01}},
      {make_code(3, Fraction(1, 3), BinomialAmplitude{1}, 9), {0.05, 0.03}},
  };
  for (const auto& c : cases) {
    QECConfig cfg;
    cfg.phase_points = 256;
    const auto ch = lindblad_channel(c.noise, c.code.dim);
    const auto fast = teleport_qec(c.code, kraus_extract(ch), cfg);
    const auto slow = reference::teleport_dense(
        c.code, [&](const CMatrix& r) { return ch.apply(r); }, cfg);
    REQUIRE((fast.process - slow.process).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("ancilla code choice does not change the ideal cycle", "[qec]") {
  const auto code = make_code(2, Fraction(1, 2), BinomialAmplitude{2}, 10);
  QECConfig a, b;
  a.phase_points = b.phase_points = 256;
  b.ancilla = make_code(3, Fraction(1, 3), BinomialAmplitude{2}, 14);
  const auto ks = noise_kraus({0.1, 0.02}, code.dim);
  const auto same = teleport_qec(code, ks, a);
  const auto other = teleport_qec(code, ks, b);
  REQUIRE((same.process - other.process).cwiseAbs().maxCoeff() < 1e-12);
  const auto slow = reference::teleport_dense(
      code, [&](const CMatrix& r) { return ks.apply(r); }, b);
  REQUIRE((other.process - slow.process).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("noiseless large diamond code", "[qec]") {
  const auto c = gaussian_code(2, Fraction(1, 2), 9.0);
  const auto lc = teleport_qec(c, noise_kraus({0.0, 0.0}, c.dim), {});
  REQUIRE(channel_fidelity(lc) > 0.999);
  REQUIRE(lc.leakage < 1e-8);
}

TEST_CASE("single shift decodes through parity and vortex", "[qec]") {
  const auto c = gaussian_code(2, Fraction(1, 2), 9.0);
  QECConfig cfg;
  cfg.G = 0;
  cfg.L = 3;
  const auto lc = teleport_qec(c, injected(c, {1, 0.0}), cfg);
  const auto* d = lc.dominant();
  REQUIRE(d->k == 1);
  REQUIRE(d->m == 0);
  REQUIRE(d->shift(c.s) == 1);
  REQUIRE(channel_fidelity(lc) > 0.99);

  QECConfig flipped = cfg;
  flipped.decoder_sign_flip = true;
  const auto bad = teleport_qec(c, injected(c, {1, 0.0}), flipped);
  REQUIRE(channel_fidelity(bad) < 0.9);
}

TEST_CASE("small rotations leave the decoded labels unchanged", "[qec]") {
  for (const auto& c : {gaussian_code(2, Fraction(1, 2), 9.0), gaussian_code(1, Fraction(1, 4), 36.0),
                        gaussian_code(4, Fraction(0, 1), 4.0)}) {
    const double bound = kPi / (2.0 * c.d_N());
    const auto base = teleport_qec(c, injected(c, {0, 0.0}), {});
    const auto base_km = dominant_km(base, c.s);
    for (double phi : {-0.5 * bound, 0.5 * bound}) {
      const auto lc = teleport_qec(c, injected(c, {0, phi}), {});
      REQUIRE(dominant_km(lc, c.s) == base_km);
      // The teleported outcome i stays an unbiased coin for each input.
      for (int i = 0; i < 2; ++i) {
        double pb = 0.0, pr = 0.0;
        for (const auto& o : base.syndromes) if (o.i == i) pb += o.per_input[0];
        for (const auto& o : lc.syndromes) if (o.i == i) pr += o.per_input[0];
        REQUIRE_THAT(pr, WithinAbs(pb, 1e-2));
      }
    }
  }
}

TEST_CASE("syndrome round trip over the correctable window", "[qec]") {
  const auto c = gaussian_code(2, Fraction(1, 2), 9.0);
  QECConfig cfg;
  cfg.G = 0;
  cfg.L = 3;
  const double step = kPi / (16.0 * c.d_N());
  for (int l = 0; l <= 3; ++l) {
    for (int j = -2; j <= 2; ++j) {
      const auto lc = teleport_qec(c, injected(c, {l, j * step}), cfg);
      const auto [k, m] = dominant_km(lc, c.s);
      REQUIRE(k == l % c.s);
      REQUIRE(m == l / c.s);
      REQUIRE(channel_fidelity(lc) > 0.99);
    }
  }
}

TEST_CASE("probability closure and monotonicity under Lindblad noise", "[qec]") {
  const auto c = gaussian_code(2, Fraction(1, 2), 3.0);
  double prev = 2.0;
  for (double gt : {0.0, 0.01, 0.03, 0.06}) {
    const auto lc = teleport_qec(c, noise_kraus({gt, 0.002}, c.dim), {});
    for (int mu = 0; mu < 2; ++mu) {
      double total = lc.leakage_per_input[mu];
      for (const auto& o : lc.syndromes) total += o.per_input[mu];
      REQUIRE_THAT(total, WithinAbs(1.0, 1e-8));
    }
    const double tr = 0.5 * (lc.process(0, 0) + lc.process(3, 0) + lc.process(0, 3) + lc.process(3, 3)).real();
    REQUIRE_THAT(tr + lc.leakage, WithinAbs(1.0, 1e-8));
    REQUIRE(logical_choi_min_eigenvalue(lc) > -1e-8);
    const double f = channel_fidelity(lc);
    REQUIRE(f <= prev + 1e-6);
    prev = f;
  }
}

TEST_CASE("phase grid convergence on the diamond example", "[qec]") {
  const double r = -0.1;
  const double a2 = 9.0 / 2.0 - std::sinh(0.1) * std::sinh(0.1);
  const auto c = gaussian_code(2, Fraction(1, 2), a2, r);
  REQUIRE_THAT(code_metrics(c).nbar, WithinAbs(9.0, 1e-9));
  const auto ks = noise_kraus({0.1, 0.01}, c.dim);
  QECConfig a, b;
  a.phase_points = 4096;
  b.phase_points = 8192;
  const double fa = channel_fidelity(teleport_qec(c, ks, a));
  const double fb = channel_fidelity(teleport_qec(c, ks, b));
  REQUIRE(std::abs(fa - fb) < 1e-6);
}

TEST_CASE("ideal and circuit parity agree", "[qec]") {
  const auto c = make_code(2, Fraction(1, 2), BinomialAmplitude{2}, 12);
  const auto ks = noise_kraus({0.1, 0.01}, c.dim);
  QECConfig ideal, circ;
  circ.parity_mode = ParityMode::CircuitSim;
  circ.parity_alpha = 4.0;
  const auto li = teleport_qec(c, ks, ideal);
  const auto lcirc = teleport_qec(c, ks, circ);
  std::vector<double> pi(2, 0.0), pc(2, 0.0);
  for (const auto& o : li.syndromes) pi[o.k] += o.probability;
  for (const auto& o : lcirc.syndromes) pc[o.k] += o.probability;
  const double agree = std::min(pi[0], pc[0]) + std::min(pi[1], pc[1]);
  REQUIRE(agree > 0.99);

  const auto kraus = parity_measurement_kraus(2, 4.0, parity_probe_dim(4.0), 4096);
  for (int kappa = 0; kappa < 2; ++kappa) {
    double right = 0.0;
    for (const auto& k : kraus) {
      if (k.outcome == kappa) right += std::norm(k.residue_amp(kappa));
    }
    REQUIRE(right > 0.99);
  }
}
