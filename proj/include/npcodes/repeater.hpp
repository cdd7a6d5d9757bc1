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

// Repeater chain benchmark: per-hop rates, Pauli-twirled composition,
// key fraction and a seeded simplex search over code parameters.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "npcodes/analytics.hpp"
#include "npcodes/parallel.hpp"
#include "npcodes/qec.hpp"

namespace npcodes {

struct RepeaterConfig {
  double spacing_km = 1.0;
  double attenuation_km = 20.0;
  double coupling_loss = 0.01;
  double dephasing_ratio = 0.1;
  double cycle_time_us = 1.0;
  double total_km = 0.0;

  double L_tilde() const { return spacing_km / attenuation_km; }
  int hops() const { return static_cast<int>(std::lround(total_km / spacing_km)); }

  void validate() const {
    if (!(spacing_km > 0.0) || !(attenuation_km > 0.0) || !(cycle_time_us > 0.0) ||
        !(coupling_loss >= 0.0 && coupling_loss < 1.0) ||
        !(dephasing_ratio >= 0.0 && dephasing_ratio < 1.0) || !(total_km >= 0.0) ||
        !std::isfinite(total_km)) {
      throw InvalidDimension("invalid repeater configuration");
    }
  }
};

struct EffectiveRates {
  double Gamma = 0.0;
  double Gamma_phi = 0.0;
  NoiseParams noise;
};

inline EffectiveRates effective_rates(const RepeaterConfig& cfg) {
  cfg.validate();
  EffectiveRates r;
  r.Gamma = 1.0 - std::exp(-cfg.L_tilde()) + cfg.coupling_loss;
  if (!(r.Gamma < 1.0)) {
    throw SpacingTooLarge("per-hop loss probability " + format_sci(r.Gamma) + " is not below 1");
  }
  r.Gamma_phi = cfg.dephasing_ratio * r.Gamma;
  r.noise = {-std::log1p(-r.Gamma), r.Gamma_phi};
  return r;
}

struct PauliProbs {
  double I = 1.0;
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;

  double bit_error() const { return X + Y; }
  double phase_error() const { return Z + Y; }
};

namespace detail {

inline const std::array<Eigen::Matrix2cd, 4>& paulis() {
  static const std::array<Eigen::Matrix2cd, 4> p = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

}  // namespace detail

/// Diagonal of the chi matrix. Missing trace (leakage) is booked as Y.
inline PauliProbs pauli_twirl(const Eigen::Matrix4cd& process) {
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) {
    const auto& P = detail::paulis()[k];
    cplx acc{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            acc += std::conj(P(a, b)) * P(c, d) * process(a * 2 + c, b * 2 + d);
    p[k] = std::max(0.25 * acc.real(), 0.0);
  }
  const double deficit = 1.0 - (p[0] + p[1] + p[2] + p[3]);
  return {p[0], p[1], p[2] + std::max(deficit, 0.0), p[3]};
}

inline PauliProbs pauli_twirl(const LogicalChannel& lc) { return pauli_twirl(lc.process); }

inline Eigen::Matrix4cd pauli_process(const PauliProbs& p) {
  const std::array<double, 4> w{p.I, p.X, p.Y, p.Z};
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) {
    const auto& P = detail::paulis()[k];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            out(a * 2 + c, b * 2 + d) += w[k] * P(a, b) * std::conj(P(c, d));
  }
  return out;
}

/// Pauli channels compose through the Klein group up to phases.
inline PauliProbs compose(const PauliProbs& a, const PauliProbs& b) {
  const std::array<double, 4> x{a.I, a.X, a.Y, a.Z};
  const std::array<double, 4> y{b.I, b.X, b.Y, b.Z};
  std::array<double, 4> z{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z[i ^ j] += x[i] * y[j];
  return {z[0], z[1], z[2], z[3]};
}

inline PauliProbs compose_hops(PauliProbs p, int hops) {
  if (hops < 0) throw InvalidDimension("negative hop count");
  PauliProbs acc;
  while (hops > 0) {
    if (hops & 1) acc = compose(acc, p);
    p = compose(p, p);
    hops >>= 1;
  }
  return acc;
}

inline double binary_entropy(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  return -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
}

/// Asymptotic BB84 key fraction before clamping at zero.
inline double raw_key_fraction(const PauliProbs& p) {
  return 1.0 - binary_entropy(p.phase_error()) - binary_entropy(p.bit_error());
}

inline double key_fraction(const PauliProbs& p) { return std::max(0.0, raw_key_fraction(p)); }

/// Thread-safe store of noise Kraus sets keyed by exposures and truncation.
/// Kraus sets keyed by (gamma t, kappa t, dim) under a byte budget; oldest entries are evicted first.
class KrausCache {
 public:
  explicit KrausCache(std::size_t max_bytes = std::size_t{512} << 20) : max_bytes_(max_bytes) {}

  std::shared_ptr<const KrausSet> get(const NoiseParams& p, int dim) {
    const auto key = std::make_tuple(p.gamma_t, p.kappa_t, dim);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = store_.find(key);
      if (it != store_.end()) return it->second;
    }
    auto ks = std::make_shared<const KrausSet>(noise_kraus(p, dim));
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = store_.emplace(key, ks);
    if (!inserted) return it->second;
    order_.push_back(key);
    bytes_ += footprint(*ks);
    while (order_.size() > 1 && bytes_ > max_bytes_) {
      auto old = store_.find(order_.front());
      bytes_ -= footprint(*old->second);
      store_.erase(old);
      order_.pop_front();
    }
    return ks;
  }

  std::size_t size() {
    std::lock_guard<std::mutex> lock(mu_);
    return store_.size();
  }

 private:
  using Key = std::tuple<double, double, int>;

  static std::size_t footprint(const KrausSet& ks) {
    std::size_t n = 0;
    for (const auto& op : ks.operators) n += static_cast<std::size_t>(op.mat.size()) * sizeof(cplx);
    return n;
  }

  std::size_t max_bytes_;
  std::size_t bytes_ = 0;
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const KrausSet>> store_;
  std::deque<Key> order_;
};

struct HopResult {
  EffectiveRates rates;
  LogicalChannel channel;
  double fidelity = 0.0;
  PauliProbs pauli;
};

inline HopResult evaluate_channel(const CodeParams& code, const NoiseParams& noise,
                                  const QECConfig& qec, KrausCache* cache = nullptr) {
  HopResult h;
  h.rates.noise = noise;
  h.rates.Gamma = -std::expm1(-noise.gamma_t);
  h.rates.Gamma_phi = noise.kappa_t;
  const auto ks = cache ? cache->get(noise, code.dim)
                        : std::make_shared<const KrausSet>(noise_kraus(noise, code.dim));
  h.channel = teleport_qec(code, *ks, qec);
  h.fidelity = channel_fidelity(h.channel);
  h.pauli = pauli_twirl(h.channel);
  return h;
}

inline HopResult evaluate_hop(const CodeParams& code, const RepeaterConfig& cfg,
                              const QECConfig& qec, KrausCache* cache = nullptr) {
  const auto rates = effective_rates(cfg);
  HopResult h = evaluate_channel(code, rates.noise, qec, cache);
  h.rates = rates;
  return h;
}

inline double accumulation_rate(const CodeParams& code, const RepeaterConfig& cfg,
                                const QECConfig& qec) {
  return (1.0 - evaluate_hop(code, cfg, qec).fidelity) / cfg.L_tilde();
}

inline double skrpm(const CodeParams& code, const RepeaterConfig& cfg, const QECConfig& qec) {
  if (cfg.hops() == 0) return 1.0;
  return key_fraction(compose_hops(evaluate_hop(code, cfg, qec).pauli, cfg.hops()));
}

struct SweepRecord {
  std::string code_type;
  int s = 1, p = 0, q = 1;
  double alpha = 0.0, r = 0.0;
  int K = 0;
  double nbar = 0.0;
  double L_tilde = 0.0, spacing_km = 0.0, distance_km = 0.0;
  double Gamma = 0.0, Gamma_phi = 0.0;
  double fidelity = 0.0, leakage = 0.0, tau = 0.0, skrpm = 0.0;
  double objective = 0.0;
};

inline SweepRecord describe_code(const CodeParams& code) {
  SweepRecord rec;
  rec.code_type = code_type(code);
  rec.s = code.s;
  rec.p = code.f.p;
  rec.q = code.f.q;
  if (const auto* g = std::get_if<GaussianAmplitude>(&code.amplitude)) {
    rec.alpha = g->alpha.real();
    rec.r = g->r.real();
  } else {
    rec.K = std::get<BinomialAmplitude>(code.amplitude).K;
  }
  rec.nbar = code_metrics(code).nbar;
  return rec;
}

/// Fills the repeater columns for one code, spacing and total distance.
inline SweepRecord repeater_record(const CodeParams& code, const RepeaterConfig& cfg,
                                   const HopResult& hop) {
  SweepRecord rec = describe_code(code);
  rec.L_tilde = cfg.L_tilde();
  rec.spacing_km = cfg.spacing_km;
  rec.distance_km = cfg.total_km;
  rec.Gamma = hop.rates.Gamma;
  rec.Gamma_phi = hop.rates.Gamma_phi;
  rec.fidelity = hop.fidelity;
  rec.leakage = hop.channel.leakage;
  rec.tau = (1.0 - hop.fidelity) / rec.L_tilde;
  const PauliProbs total = compose_hops(hop.pauli, cfg.hops());
  rec.skrpm = cfg.hops() == 0 ? 1.0 : key_fraction(total);
  rec.objective = cfg.hops() == 0 ? 1.0 : raw_key_fraction(total);
  return rec;
}

struct SimplexOptions {
  int budget = 30;    // evaluations per discrete choice, shared by the restarts
  int restarts = 3;
  std::uint64_t seed = 1;
  double size_tol = 1e-3;
};

/// Seeded Nelder-Mead minimization inside a box; returns every trial point.
/// Coordinates map through x = lo + (hi - lo)(1 + sin u)/2 to stay in bounds.
template <class F>
std::vector<std::pair<std::vector<double>, double>> simplex_search(
    F&& f, const std::vector<double>& lo, const std::vector<double>& hi,
    const SimplexOptions& opt, std::uint64_t stream) {
  const std::size_t n = lo.size();
  std::vector<std::pair<std::vector<double>, double>> trials;
  auto to_box = [&](const gsl_vector* u) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = lo[i] + (hi[i] - lo[i]) * 0.5 * (1.0 + std::sin(gsl_vector_get(u, i)));
    }
    return x;
  };
  if (n == 0) {
    trials.emplace_back(std::vector<double>{}, f(std::vector<double>{}));
    return trials;
  }
  struct Ctx {
    decltype(to_box)* map;
    std::remove_reference_t<F>* fn;
    decltype(trials)* log;
    int left;
  };
  auto cb = [](const gsl_vector* u, void* raw) -> double {
    auto* c = static_cast<Ctx*>(raw);
    if (c->left <= 0) return GSL_POSINF;
    --c->left;
    auto x = (*c->map)(u);
    const double v = (*c->fn)(x);
    c->log->emplace_back(std::move(x), v);
    return std::isfinite(v) ? v : 1e300;
  };
  std::seed_seq seq{opt.seed, stream};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int per_restart = std::max(opt.budget / std::max(opt.restarts, 1), static_cast<int>(n) + 2);
  gsl_set_error_handler_off();
  for (int rs = 0; rs < opt.restarts; ++rs) {
    Ctx ctx{&to_box, &f, &trials, per_restart};
    gsl_multimin_function fn{+cb, n, &ctx};
    gsl_vector* u = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
      gsl_vector_set(u, i, std::asin(unit(rng)));
      gsl_vector_set(step, i, 0.4);
    }
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    if (gsl_multimin_fminimizer_set(m, &fn, u, step) == GSL_SUCCESS) {
      while (ctx.left > 0) {
        if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), opt.size_tol) == GSL_SUCCESS) break;
      }
    }
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(step);
    gsl_vector_free(u);
  }
  return trials;
}

enum class Objective { Infidelity, Tau, Skrpm };

/// One discrete corner of the search; binomial_K > 0 selects a binomial code.
struct DiscreteChoice {
  int s = 1;
  Fraction f{};
  double L_tilde = 0.05;
  int binomial_K = 0;
};

struct SearchSpace {
  std::vector<DiscreteChoice> choices;
  double alpha_min = 1.0, alpha_max = 4.0;
  double r_min = -0.8, r_max = 0.8;
  // When set, alpha follows from the target mean excitation and r alone is searched.
  std::optional<double> target_nbar;
  NoiseParams noise;  // used by the infidelity objective
  SimplexOptions simplex;
};

struct OptimizationResult {
  SweepRecord best;
  std::vector<SweepRecord> log;
  std::vector<std::string> failures;
};

namespace detail {

inline double score(Objective obj, const SweepRecord& r) {
  switch (obj) {
    case Objective::Infidelity: return 1.0 - r.fidelity;
    case Objective::Tau: return r.tau;
    case Objective::Skrpm: return -r.objective;
  }
  return 0.0;
}

inline std::optional<GaussianAmplitude> gaussian_point(const SearchSpace& sp, int s,
                                                       const std::vector<double>& x) {
  if (sp.target_nbar) {
    const double sh = std::sinh(x[0]);
    const double a2 = *sp.target_nbar / s - sh * sh;
    if (!(a2 > 0.0)) return std::nullopt;
    return GaussianAmplitude{std::sqrt(a2), x[0]};
  }
  return GaussianAmplitude{x[0], x[1]};
}

}  // namespace detail

/// Exhaustive over the discrete choices, seeded simplex descent over (alpha, r)
/// or r alone inside each. The best record minimizes the objective.
inline OptimizationResult optimize_code(Objective obj, const SearchSpace& sp,
                                        const RepeaterConfig& base, const QECConfig& qec,
                                        int jobs = 1, KrausCache* cache = nullptr) {
  if (sp.choices.empty()) throw OptimizationFailed("empty search space");
  KrausCache local;
  KrausCache* kc = cache ? cache : &local;
  struct Part {
    std::vector<SweepRecord> log;
    std::vector<std::string> failures;
  };
  auto run = [&](std::size_t idx) {
    const DiscreteChoice& ch = sp.choices[idx];
    RepeaterConfig cfg = base;
    cfg.spacing_km = ch.L_tilde * base.attenuation_km;
    Part part;
    auto eval = [&](const std::vector<double>& x) -> double {
      try {
        AmplitudeSpec amp;
        if (ch.binomial_K > 0) {
          amp = BinomialAmplitude{ch.binomial_K};
        } else {
          const auto g = detail::gaussian_point(sp, ch.s, x);
          if (!g) return GSL_POSINF;
          amp = *g;
        }
        const CodeParams code = make_code(ch.s, ch.f, amp);
        SweepRecord rec;
        if (obj == Objective::Infidelity) {
          const HopResult h = evaluate_channel(code, sp.noise, qec, kc);
          rec = describe_code(code);
          rec.Gamma = h.rates.Gamma;
          rec.Gamma_phi = h.rates.Gamma_phi;
          rec.fidelity = h.fidelity;
          rec.leakage = h.channel.leakage;
        } else {
          rec = repeater_record(code, cfg, evaluate_hop(code, cfg, qec, kc));
        }
        const double v = detail::score(obj, rec);
        part.log.push_back(rec);
        return v;
      } catch (const Error& e) {
        part.failures.push_back(e.what());
        return GSL_POSINF;
      }
    };
    std::vector<double> lo, hi;
    if (ch.binomial_K == 0) {
      if (sp.target_nbar) {
        const double rmax = 0.95 * std::asinh(std::sqrt(*sp.target_nbar / ch.s));
        lo = {std::max(sp.r_min, -rmax)};
        hi = {std::min(sp.r_max, rmax)};
      } else {
        lo = {sp.alpha_min, sp.r_min};
        hi = {sp.alpha_max, sp.r_max};
      }
    }
    simplex_search(eval, lo, hi, sp.simplex, idx);
    return part;
  };
  const auto parts = parallel_map(sp.choices.size(), jobs, run);
  OptimizationResult res;
  for (const auto& p : parts) {
    res.log.insert(res.log.end(), p.log.begin(), p.log.end());
    res.failures.insert(res.failures.end(), p.failures.begin(), p.failures.end());
  }
  if (res.log.empty()) {
    std::string msg = "every evaluation failed";
    if (!res.failures.empty()) msg += ": " + res.failures.front();
    throw OptimizationFailed(msg);
  }
  const SweepRecord* best = &res.log.front();
  for (const auto& r : res.log) {
    if (detail::score(obj, r) < detail::score(obj, *best)) best = &r;
  }
  res.best = *best;
  return res;
}

}  // namespace npcodes
