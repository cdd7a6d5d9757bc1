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

// Loss plus dephasing noise: exact channel propagation by coherence order,
// operator-sum extraction and checks on the NP expansions of the error
// operators.

#include <cmath>
#include <string>
#include <vector>

#include "npcodes/fock.hpp"

namespace npcodes {

struct NoiseParams {
  double gamma_t = 0.0;
  double kappa_t = 0.0;

  void validate() const {
    if (!std::isfinite(gamma_t) || !std::isfinite(kappa_t) || gamma_t < 0.0 ||
        kappa_t < 0.0) {
      throw InvalidDimension("noise exposures must be finite and non-negative");
    }
  }

  /// True when either exposure leaves the small-exposure regime.
  bool strong() const { return gamma_t > 0.5 || kappa_t > 0.5; }
};

/// e^{tL} for L rho = gamma D[a] rho + kappa D[n] rho, stored per coherence
/// order d = n - m. Sector d acts on the vector rho_{i + d+, i + d-} with
/// d+ = max(d, 0), d- = max(-d, 0).
class ChannelSectors {
 public:
  ChannelSectors(NoiseParams params, int dim) : params_(params), dim_(dim) {
    params.validate();
    require_dim(dim);
    blocks_.resize(2 * dim - 1);
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
      const int len = dim - std::abs(d);
      const int dp = std::max(d, 0);
      const int dm = std::max(-d, 0);
      CMatrix g = CMatrix::Zero(len, len);
      for (int i = 0; i < len; ++i) {
        const double n = i + dp;
        const double m = i + dm;
        g(i, i) = -0.5 * params.gamma_t * (n + m) - 0.5 * params.kappa_t * d * d;
        if (i + 1 < len) g(i, i + 1) = params.gamma_t * std::sqrt((n + 1.0) * (m + 1.0));
      }
      blocks_[d + dim - 1] = expm(g);
    }
  }

  int dim() const { return dim_; }
  const NoiseParams& params() const { return params_; }
  const CMatrix& sector(int d) const { return blocks_.at(d + dim_ - 1); }

  CMatrix apply(const CMatrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
      throw InvalidDimension("density matrix/channel truncation mismatch");
    }
    CMatrix out = CMatrix::Zero(dim_, dim_);
    for (int d = -(dim_ - 1); d <= dim_ - 1; ++d) {
      const int len = dim_ - std::abs(d);
      const int dp = std::max(d, 0);
      const int dm = std::max(-d, 0);
      CVector v(len);
      for (int i = 0; i < len; ++i) v(i) = rho(i + dp, i + dm);
      const CVector w = sector(d) * v;
      for (int i = 0; i < len; ++i) out(i + dp, i + dm) = w(i);
    }
    return out;
  }

 private:
  NoiseParams params_;
  int dim_;
  std::vector<CMatrix> blocks_;
};

inline ChannelSectors lindblad_channel(NoiseParams params, int dim) {
  return ChannelSectors(params, dim);
}

struct KrausSet {
  std::vector<FockOperator> operators;
  std::vector<int> photons_lost;
  std::vector<double> weights;  // Tr K^dag K

  int dim() const { return operators.empty() ? 0 : operators.front().dim(); }
  std::size_t size() const { return operators.size(); }

  CMatrix apply(const CMatrix& rho) const {
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : operators) out += k.mat * rho * k.mat.adjoint();
    return out;
  }

  /// max |sum K^dag K - I| over levels below dim - margin.
  double completeness_error(int margin = kTailLevels) const {
    const int d = dim();
    CMatrix s = CMatrix::Zero(d, d);
    for (const auto& k : operators) s += k.mat.adjoint() * k.mat;
    const int keep = std::max(0, d - margin);
    return (s - CMatrix::Identity(d, d)).topLeftCorner(keep, keep).cwiseAbs().maxCoeff();
  }
};

/// Operator-sum form from the Choi matrix. The Choi matrix splits into
/// blocks labelled by the number of photons lost j; within a block the
/// eigenvectors give K |i> = sqrt(lambda) v_i |i - j>.
inline KrausSet kraus_extract(const ChannelSectors& channel, double tol = 1e-12) {
  const int dim = channel.dim();
  struct Item {
    double weight;
    int j;
    CMatrix k;
  };
  std::vector<Item> items;
  for (int j = 0; j < dim; ++j) {
    const int len = dim - j;
    CMatrix block(len, len);
    for (int a = 0; a < len; ++a) {
      for (int b = 0; b < len; ++b) {
        const int i = a + j;
        const int ip = b + j;
        const int lo = std::min(i, ip);
        block(a, b) = channel.sector(i - ip)(lo - j, lo);
      }
    }
    const CMatrix herm = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    for (int e = 0; e < len; ++e) {
      const double lam = es.eigenvalues()(e);
      if (lam < -1e-8) {
        throw NotCompletelyPositive("Choi eigenvalue " + format_sci(lam) +
                                    " in the " + std::to_string(j) +
                                    "-photon-loss block");
      }
      if (lam <= tol) continue;
      CMatrix k = CMatrix::Zero(dim, dim);
      const CVector v = es.eigenvectors().col(e);
      for (int a = 0; a < len; ++a) k(a, a + j) = std::sqrt(lam) * v(a);
      items.push_back({lam, j, std::move(k)});
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.weight > y.weight; });
  KrausSet out;
  for (auto& it : items) {
    out.operators.emplace_back(std::move(it.k));
    out.photons_lost.push_back(it.j);
    out.weights.push_back(it.weight);
  }
  return out;
}

inline KrausSet noise_kraus(NoiseParams params, int dim, double tol = 1e-12) {
  return kraus_extract(lindblad_channel(params, dim), tol);
}

/// Coefficient c(phi) of the single-shift expansion of the first-order
/// pure-loss Kraus operator.
inline cplx loss_expansion_coefficient(double gamma_t, double phi) {
  const cplx base(0.5 * gamma_t, phi);
  return std::sqrt(gamma_t) * std::polar(1.0, 0.5 * phi) /
         (4.0 * std::sqrt(kPi) * std::pow(base, 1.5));
}

/// Max-norm distance between sqrt(gamma t) a e^{-gamma t n / 2} and the
/// quadrature sum_phi c(phi) D(1, phi) dphi over phi in [-pi, pi), on Fock
/// levels below dim / 2.
inline double loss_expansion_residual(double gamma_t, int dim, const PhaseGrid& grid) {
  if (!(gamma_t > 0.0 && gamma_t < 0.5)) {
    throw InvalidDimension("loss exposure must lie in (0, 0.5)");
  }
  require_dim(dim);
  if (grid.spacing() > 0.25 * gamma_t) {
    const int hint = static_cast<int>(std::ceil(8.0 * kPi / gamma_t));
    throw QuadratureUnresolved(
        "phase grid does not resolve the expansion peak of width " +
            format_sci(0.5 * gamma_t),
        hint);
  }
  const LadderOperators ops = ladder_operators(dim);
  CMatrix lhs = std::sqrt(gamma_t) * ops.a.mat;
  for (int n = 0; n < dim; ++n) lhs.col(n) *= std::exp(-0.5 * gamma_t * n);
  CMatrix rhs = CMatrix::Zero(dim, dim);
  for (int j = 0; j < grid.size(); ++j) {
    double phi = grid.point(j);
    if (phi >= kPi) phi -= 2.0 * kPi;
    rhs += loss_expansion_coefficient(gamma_t, phi) * grid.spacing() *
           np_displace({1, phi}, dim).mat;
  }
  const int keep = dim / 2;
  return (lhs - rhs).topLeftCorner(keep, keep).cwiseAbs().maxCoeff();
}

/// Per-level |sqrt(kt) n - (1/2i)[D(0, sqrt kt) - D(0, -sqrt kt)]_nn|.
inline std::vector<double> dephasing_expansion_residuals(double kappa_t, int dim) {
  if (!(kappa_t > 0.0)) throw InvalidDimension("dephasing exposure must be positive");
  const double root = std::sqrt(kappa_t);
  const CMatrix sine = (np_displace({0, root}, dim).mat - np_displace({0, -root}, dim).mat) /
                       cplx(0.0, 2.0);
  std::vector<double> out(dim);
  for (int n = 0; n < dim; ++n) out[n] = std::abs(root * n - sine(n, n));
  return out;
}

inline double dephasing_expansion_residual(double kappa_t, int dim) {
  const auto r = dephasing_expansion_residuals(kappa_t, dim);
  return *std::max_element(r.begin(), r.end());
}

}  // namespace npcodes
