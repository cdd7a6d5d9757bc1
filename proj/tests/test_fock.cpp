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

#include <random>

#include "npcodes/fock.hpp"
#include "support.hpp"

using namespace npcodes;
using npcodes::testing::max_abs;
using Catch::Matchers::WithinAbs;

TEST_CASE("ladder operators act on number states", "[fock]") {
  const auto ops = ladder_operators(8);
  const CVector out = ops.a.mat * FockState::basis(8, 1).amps;
  REQUIRE(max_abs(out - FockState::basis(8, 0).amps) == 0.0);
  const CVector shifted = ops.sigma(2).mat * FockState::basis(8, 5).amps;
  REQUIRE(max_abs(shifted - FockState::basis(8, 3).amps) == 0.0);
}

TEST_CASE("annihilation factors into sqrt(n+1) times the unit shift", "[fock]") {
  const int dim = 30;
  const auto ops = ladder_operators(dim);
  CMatrix root = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) root(n, n) = std::sqrt(n + 1.0);
  REQUIRE(max_abs(ops.a.mat - root * ops.sigma(1).mat) < 1e-14);
}

TEST_CASE("ladder construction rejects bad dimensions", "[fock]") {
  REQUIRE_THROWS_AS(ladder_operators(1), InvalidDimension);
  REQUIRE_THROWS_AS(ladder_operators(4).sigma(4), InvalidDimension);
  REQUIRE_THROWS_AS(np_displace({-5, 0.0}, 5), InvalidDimension);
}

TEST_CASE("gaussian unitary", "[fock]") {
  REQUIRE(max_abs(gaussian_unitary(0.0, 0.0, 12).mat -
                  CMatrix::Identity(12, 12)) < 1e-14);

  const CVector col = gaussian_unitary(2.0, 0.0, 40).mat.col(0);
  REQUIRE(max_abs(col - npcodes::testing::coherent_amplitudes(2.0, 40)) < 1e-9);

  const CVector sq = gaussian_unitary(0.0, 0.5, 40).mat.col(0);
  for (int n = 1; n < 40; n += 2) REQUIRE(std::abs(sq(n)) < 1e-12);
  // Squeezed vacuum <2|S|0> = -e^{i arg r} tanh|r| / (sqrt 2 cosh^{1/2}|r|).
  const double expected = -std::tanh(0.5) / std::sqrt(2.0 * std::cosh(0.5));
  REQUIRE_THAT(sq(2).real(), WithinAbs(expected, 1e-12));

  REQUIRE_THROWS_AS(gaussian_unitary(4.0, 0.0, 12), TruncationInsufficient);
  try {
    gaussian_unitary(4.0, 0.0, 12);
  } catch (const TruncationInsufficient& e) {
    REQUIRE(e.tail_mass() > 1e-10);
  }

  const CMatrix u = gaussian_unitary(cplx(0.7, -0.4), cplx(0.2, 0.1), 60).mat;
  const CMatrix low = u.leftCols(10).adjoint() * u.leftCols(10);
  REQUIRE(max_abs(low - CMatrix::Identity(10, 10)) < 1e-10);
}

TEST_CASE("np displacement special cases", "[fock]") {
  const int dim = 16;
  REQUIRE(max_abs(np_displace({0, 0.7}, dim).mat - rotation(0.7, dim).mat) < 1e-14);
  REQUIRE(max_abs(np_displace({3, 0.0}, dim).mat - fock_shift(3, dim).mat) == 0.0);

  const CMatrix x = np_displace({1, 0.0}, dim).mat;
  const CMatrix z = np_displace({0, kPi}, dim).mat;
  std::mt19937_64 rng(7);
  const CVector v = npcodes::testing::random_vector(dim, 0, dim - 3, rng);
  REQUIRE((x * z * v + z * x * v).norm() < 1e-12);
}

TEST_CASE("np displacements obey the cross-product commutation phase", "[fock]") {
  const int dim = 40;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> shift(-4, 4);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const NPVector a{shift(rng), phase(rng)};
    const NPVector b{shift(rng), phase(rng)};
    const int span = std::abs(a.l) + std::abs(b.l);
    const CVector v = npcodes::testing::random_vector(dim, span, dim - 1 - span, rng);
    const CMatrix da = np_displace(a, dim).mat;
    const CMatrix db = np_displace(b, dim).mat;
    const cplx ph = std::polar(1.0, cross(a, b));
    worst = std::max(worst, (da * db * v - ph * (db * da * v)).norm());
  }
  REQUIRE(worst < 1e-12);
}

TEST_CASE("distinct Fock shifts are trace orthogonal", "[fock]") {
  const int dim = 12;
  for (int l = -3; l <= 3; ++l) {
    for (int lp = -3; lp <= 3; ++lp) {
      if (l == lp) continue;
      const cplx t = (np_displace({lp, 0.4}, dim).mat.adjoint() *
                      np_displace({l, -1.1}, dim).mat).trace();
      REQUIRE(t == cplx{});
    }
  }
}

TEST_CASE("np expansion of shift, rotation and annihilation", "[fock]") {
  const int dim = 20;
  const PhaseGrid grid(4096);

  const auto w = np_decompose(fock_shift(1, dim), -3, 3, grid);
  for (int l = -3; l <= 3; ++l) {
    if (l == 1) continue;
    REQUIRE(w.values.row(l + 3).cwiseAbs().maxCoeff() < 1e-13);
  }

  const FockOperator rot = rotation(kPi / 3, dim);
  const auto wr = np_decompose(rot, 0, 0, grid);
  REQUIRE((np_reconstruct(wr, dim) - rot).max_abs() < 1e-6);

  const FockOperator a = ladder_operators(dim).a;
  const auto wa = np_decompose(a, -2, 2, grid);
  double off = 0.0;
  for (int l = -2; l <= 2; ++l) {
    if (l != 1) off = std::max(off, wa.values.row(l + 2).cwiseAbs().maxCoeff());
  }
  REQUIRE(off < 1e-13);
  REQUIRE(wa.values.row(3).cwiseAbs().maxCoeff() > 1.0);
  REQUIRE((np_reconstruct(wa, dim) - a).max_abs() < 1e-6);
}

TEST_CASE("reconstruction improves with grid size and flags narrow windows", "[fock]") {
  const int dim = 20;
  const FockOperator rot = rotation(kPi / 3, dim);
  const double coarse = (np_reconstruct(np_decompose(rot, 0, 0, PhaseGrid(8)), dim) - rot).max_abs();
  const double fine = (np_reconstruct(np_decompose(rot, 0, 0, PhaseGrid(4096)), dim) - rot).max_abs();
  REQUIRE(fine < coarse);
  REQUIRE(fine < 1e-6);

  REQUIRE_THROWS_AS(np_expand(ladder_operators(dim).a, 0, 0, PhaseGrid(256)),
                    ReconstructionError);
}

TEST_CASE("canonical phase distribution", "[fock]") {
  const PhaseGrid grid(512);
  const auto flat = phase_povm_weights(FockState::basis(10, 4), grid);
  for (double d : flat) REQUIRE_THAT(d, WithinAbs(1.0 / (2.0 * kPi), 1e-12));

  const FockState coh(npcodes::testing::coherent_amplitudes(3.0, 40));
  const auto peaked = phase_povm_weights(coh.normalized(), grid);
  const auto top = std::max_element(peaked.begin(), peaked.end()) - peaked.begin();
  REQUIRE(top == 0);

  std::mt19937_64 rng(3);
  const FockState psi(npcodes::testing::random_vector(24, 0, 23, rng));
  const auto dens = phase_povm_weights(psi, grid);
  double total = 0.0;
  for (double d : dens) total += d * grid.spacing();
  REQUIRE_THAT(total, WithinAbs(1.0, 1e-8));

  const auto rotated = phase_povm_weights(FockState(psi.amps * std::polar(1.0, 0.83)), grid);
  for (std::size_t j = 0; j < dens.size(); ++j) {
    REQUIRE_THAT(rotated[j], WithinAbs(dens[j], 1e-14));
  }

  REQUIRE_THROWS_AS(phase_povm_weights(FockState(2.0 * psi.amps), grid),
                    NormalizationError);
}

TEST_CASE("quadrature Wigner function", "[fock]") {
  const std::vector<double> origin{0.0};
  const RMatrix vac = wigner_xp(FockState::basis(6, 0), origin, origin);
  REQUIRE_THAT(vac(0, 0), WithinAbs(1.0 / kPi, 1e-6));
  const RMatrix one = wigner_xp(FockState::basis(6, 1), origin, origin);
  REQUIRE_THAT(one(0, 0), WithinAbs(-1.0 / kPi, 1e-6));

  std::vector<double> axis(121);
  for (int j = 0; j < 121; ++j) axis[j] = -6.0 + 0.1 * j;
  const cplx alpha(1.0, -0.5);
  const FockState coh = FockState(npcodes::testing::coherent_amplitudes(alpha, 30)).normalized();
  const RMatrix w = wigner_xp(coh, axis, axis);
  REQUIRE_THAT(w.sum() * 0.01, WithinAbs(1.0, 1e-3));

  // Coherent states are Gaussians centred on (sqrt2 Re alpha, sqrt2 Im alpha).
  const double x0 = std::sqrt(2.0) * alpha.real();
  const double p0 = std::sqrt(2.0) * alpha.imag();
  double err = 0.0;
  for (int i = 0; i < 121; i += 5) {
    for (int j = 0; j < 121; j += 5) {
      const double dx = axis[i] - x0;
      const double dp = axis[j] - p0;
      err = std::max(err, std::abs(w(i, j) - std::exp(-dx * dx - dp * dp) / kPi));
    }
  }
  REQUIRE(err < 1e-9);
}
