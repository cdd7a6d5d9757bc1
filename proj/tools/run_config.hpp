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

// JSON run configuration for the command-line driver.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "npcodes/npcodes.hpp"

namespace npcodes::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CodeSpec {
  std::string type;
  int s = 1;
  int p = 0;
  int q = 1;
  double alpha = 0.0;
  double r = 0.0;
  int K = 0;

  bool binomial() const { return type == "binomial"; }
};

struct OptimizeBlock {
  std::string objective = "skrpm";
  std::vector<double> L_tilde{0.05};
  double alpha_min = 1.0, alpha_max = 3.0;
  double r_min = -0.5, r_max = 0.5;
  std::vector<int> K;
  int budget = 12;
};

struct RepeaterBlock {
  double spacing_km = 1.0;
  double attenuation_km = 20.0;
  double eps = 0.01;
  double h = 0.1;
  double t0_us = 1.0;
  std::vector<double> distances_km{0.0};
  std::optional<OptimizeBlock> optimize;
};

struct SweepBlock {
  std::vector<double> nbar;
  std::vector<double> alpha;
  bool optimize_r = false;
  double r_min = -0.8, r_max = 0.8;
  int budget = 9;
};

struct LatticeBlock {
  double nu_x = 0.0, nu_z = 0.0;
  int n_max = 40;
};

struct WignerBlock {
  std::string state = "plus";
  double x_min = -6.0, x_max = 6.0, p_min = -6.0, p_max = 6.0;
  int nx = 61, np = 61;
};

struct RunConfig {
  json normalized;
  std::vector<CodeSpec> codes;
  int dim = 0;  // 0: automatic
  double tail_tol = kTailTolerance;
  std::vector<double> gamma_t{0.0}, kappa_t{0.0};
  QECConfig qec;
  std::optional<CodeSpec> ancilla;
  SweepBlock sweep;
  RepeaterBlock repeater;
  LatticeBlock lattice;
  WignerBlock wigner;
  std::uint64_t seed = 1;
};

namespace detail {

inline void check_keys(const json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
  }
}

template <class T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + where + "." + key + "'");
  }
}

/// Accepts a number or a list of numbers.
inline std::vector<double> number_list(const json& j, const char* key, std::vector<double> fallback,
                                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return get<std::vector<double>>(j, key, fallback, where);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

inline CodeSpec parse_code(const json& j, const std::string& where) {
  check_keys(j, where, {"type", "s", "p", "q", "alpha", "r", "K"});
  CodeSpec c;
  c.type = get<std::string>(j, "type", "", where);
  c.s = get<int>(j, "s", 1, where);
  c.p = get<int>(j, "p", 0, where);
  c.q = get<int>(j, "q", 1, where);
  c.alpha = get<double>(j, "alpha", 0.0, where);
  c.r = get<double>(j, "r", 0.0, where);
  c.K = get<int>(j, "K", 0, where);
  require(c.type == "binomial" || c.type == "rnp" || c.type == "onp" || c.type == "dnp" ||
              c.type == "np",
          where + ".type must be one of binomial, rnp, onp, dnp, np");
  require(c.s >= 1, where + ".s must be positive");
  require(c.q >= 1, where + ".q must be positive");
  if (c.binomial()) require(c.p == 0, where + ": binomial codes have p = 0");
  require(std::isfinite(c.alpha) && std::isfinite(c.r), where + ": alpha and r must be finite");
  return c;
}

inline void check_range(double lo, double hi, const std::string& what) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, what + " must be an ordered range");
}

}  // namespace detail

/// Amplitude for a code spec, optionally overriding alpha or solving it from nbar.
inline AmplitudeSpec amplitude_for(const CodeSpec& c, std::optional<double> alpha = {},
                                   std::optional<double> nbar = {}) {
  if (c.binomial()) {
    if (nbar) {
      const double k = 2.0 * *nbar / c.s;
      if (std::abs(k - std::round(k)) > 1e-9 || k < 1.0) {
        throw ConfigError("binomial code with s=" + std::to_string(c.s) +
                          " has no integer K for nbar=" + csv_number(*nbar));
      }
      return BinomialAmplitude{static_cast<int>(std::lround(k))};
    }
    return BinomialAmplitude{c.K};
  }
  if (nbar) {
    const double sh = std::sinh(c.r);
    const double a2 = *nbar / c.s - sh * sh;
    if (!(a2 > 0.0)) throw ConfigError("nbar too small for the requested squeezing");
    return GaussianAmplitude{std::sqrt(a2), c.r};
  }
  return GaussianAmplitude{alpha.value_or(c.alpha), c.r};
}

/// Builds the code and checks that its structure matches the declared type.
inline CodeParams build_code(const CodeSpec& c, const AmplitudeSpec& amp, int dim,
                             double tail_tol) {
  CodeParams code{c.s, Fraction(c.p, c.q), amp, dim};
  if (code.dim <= 0) code.dim = auto_dim(c.s, amp, tail_tol);
  code.validate();
  const std::string got = code_type(code);
  if (got != c.type) throw ConfigError("code declared as " + c.type + " has the structure of " + got);
  return code;
}

inline RunConfig parse_config(const json& root) {
  using namespace detail;
  check_keys(root, "config", {"code", "truncation", "noise", "qec", "sweep", "repeater",
                              "lattice", "wigner", "seed"});
  RunConfig cfg;
  require(root.contains("code"), "config.code is required");
  const json& code = root.at("code");
  if (code.is_array()) {
    for (std::size_t i = 0; i < code.size(); ++i) {
      cfg.codes.push_back(parse_code(code[i], "code[" + std::to_string(i) + "]"));
    }
  } else {
    cfg.codes.push_back(parse_code(code, "code"));
  }
  require(!cfg.codes.empty(), "config.code is empty");
  cfg.seed = get<std::uint64_t>(root, "seed", 1, "config");

  if (root.contains("truncation")) {
    const json& t = root.at("truncation");
    check_keys(t, "truncation", {"dim", "tail_tol"});
    if (t.contains("dim") && !(t.at("dim").is_string() && t.at("dim") == "auto")) {
      cfg.dim = get<int>(t, "dim", 0, "truncation");
      require(cfg.dim >= 2, "truncation.dim must be at least 2 or \"auto\"");
    }
    cfg.tail_tol = get<double>(t, "tail_tol", kTailTolerance, "truncation");
    require(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0, "truncation.tail_tol must lie in (0, 1)");
  }
  if (root.contains("noise")) {
    const json& n = root.at("noise");
    check_keys(n, "noise", {"gamma_t", "kappa_t"});
    cfg.gamma_t = number_list(n, "gamma_t", {0.0}, "noise");
    cfg.kappa_t = number_list(n, "kappa_t", {0.0}, "noise");
    for (double v : cfg.gamma_t) require(v >= 0.0 && std::isfinite(v), "noise.gamma_t must be >= 0");
    for (double v : cfg.kappa_t) require(v >= 0.0 && std::isfinite(v), "noise.kappa_t must be >= 0");
  }
  if (root.contains("qec")) {
    const json& q = root.at("qec");
    check_keys(q, "qec", {"G", "L", "phase_points", "parity_mode", "parity_alpha", "ancilla"});
    cfg.qec.G = get<int>(q, "G", 0, "qec");
    cfg.qec.L = get<int>(q, "L", -1, "qec");
    cfg.qec.phase_points = get<int>(q, "phase_points", 4096, "qec");
    require(cfg.qec.phase_points >= kMinPovmPoints, "qec.phase_points must be at least 256");
    const auto mode = get<std::string>(q, "parity_mode", "ideal", "qec");
    require(mode == "ideal" || mode == "circuit", "qec.parity_mode must be ideal or circuit");
    cfg.qec.parity_mode = mode == "ideal" ? ParityMode::IdealProjective : ParityMode::CircuitSim;
    cfg.qec.parity_alpha = get<double>(q, "parity_alpha", 4.0, "qec");
    if (q.contains("ancilla")) cfg.ancilla = parse_code(q.at("ancilla"), "qec.ancilla");
  }
  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    check_keys(s, "sweep", {"nbar", "alpha", "optimize_r", "r_range", "budget"});
    cfg.sweep.nbar = number_list(s, "nbar", {}, "sweep");
    cfg.sweep.alpha = number_list(s, "alpha", {}, "sweep");
    require(cfg.sweep.nbar.empty() || cfg.sweep.alpha.empty(),
            "sweep takes either nbar or alpha, not both");
    for (double v : cfg.sweep.nbar) require(v > 0.0, "sweep.nbar entries must be positive");
    cfg.sweep.optimize_r = get<bool>(s, "optimize_r", false, "sweep");
    const auto rr = get<std::vector<double>>(s, "r_range", {-0.8, 0.8}, "sweep");
    require(rr.size() == 2, "sweep.r_range needs two entries");
    check_range(rr[0], rr[1], "sweep.r_range");
    cfg.sweep.r_min = rr[0];
    cfg.sweep.r_max = rr[1];
    cfg.sweep.budget = get<int>(s, "budget", 9, "sweep");
    require(cfg.sweep.budget >= 1, "sweep.budget must be positive");
    require(!cfg.sweep.optimize_r || !cfg.sweep.nbar.empty(), "sweep.optimize_r needs an nbar list");
  }
  if (root.contains("repeater")) {
    const json& r = root.at("repeater");
    check_keys(r, "repeater", {"spacing_km", "attenuation_km", "eps", "h", "t0_us",
                               "distances_km", "optimize"});
    auto& rb = cfg.repeater;
    rb.spacing_km = get<double>(r, "spacing_km", 1.0, "repeater");
    rb.attenuation_km = get<double>(r, "attenuation_km", 20.0, "repeater");
    rb.eps = get<double>(r, "eps", 0.01, "repeater");
    rb.h = get<double>(r, "h", 0.1, "repeater");
    rb.t0_us = get<double>(r, "t0_us", 1.0, "repeater");
    rb.distances_km = number_list(r, "distances_km", {0.0}, "repeater");
    RepeaterConfig probe{rb.spacing_km, rb.attenuation_km, rb.eps, rb.h, rb.t0_us, 0.0};
    try {
      probe.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    for (double d : rb.distances_km) require(d >= 0.0 && std::isfinite(d), "repeater.distances_km must be >= 0");
    if (r.contains("optimize")) {
      const json& o = r.at("optimize");
      check_keys(o, "repeater.optimize", {"objective", "L_tilde", "alpha_range", "r_range", "K", "budget"});
      OptimizeBlock ob;
      ob.objective = get<std::string>(o, "objective", "skrpm", "repeater.optimize");
      require(ob.objective == "skrpm" || ob.objective == "tau",
              "repeater.optimize.objective must be skrpm or tau");
      ob.L_tilde = number_list(o, "L_tilde", {0.05}, "repeater.optimize");
      for (double v : ob.L_tilde) require(v > 0.0, "repeater.optimize.L_tilde entries must be positive");
      const auto ar = get<std::vector<double>>(o, "alpha_range", {1.0, 3.0}, "repeater.optimize");
      const auto rr = get<std::vector<double>>(o, "r_range", {-0.5, 0.5}, "repeater.optimize");
      require(ar.size() == 2 && rr.size() == 2, "optimize ranges need two entries");
      check_range(ar[0], ar[1], "repeater.optimize.alpha_range");
      check_range(rr[0], rr[1], "repeater.optimize.r_range");
      ob.alpha_min = ar[0];
      ob.alpha_max = ar[1];
      ob.r_min = rr[0];
      ob.r_max = rr[1];
      ob.K = get<std::vector<int>>(o, "K", {}, "repeater.optimize");
      ob.budget = get<int>(o, "budget", 12, "repeater.optimize");
      require(ob.budget >= 1, "repeater.optimize.budget must be positive");
      rb.optimize = ob;
    }
  }
  if (root.contains("lattice")) {
    const json& l = root.at("lattice");
    check_keys(l, "lattice", {"nu_x", "nu_z", "n_max"});
    cfg.lattice.nu_x = get<double>(l, "nu_x", 0.0, "lattice");
    cfg.lattice.nu_z = get<double>(l, "nu_z", 0.0, "lattice");
    cfg.lattice.n_max = get<int>(l, "n_max", 40, "lattice");
    require(cfg.lattice.n_max >= 0, "lattice.n_max must be >= 0");
  }
  if (root.contains("wigner")) {
    const json& w = root.at("wigner");
    check_keys(w, "wigner", {"state", "x_range", "p_range", "nx", "np"});
    auto& wb = cfg.wigner;
    wb.state = get<std::string>(w, "state", "plus", "wigner");
    require(wb.state == "plus" || wb.state == "minus" || wb.state == "zero" || wb.state == "one",
            "wigner.state must be plus, minus, zero or one");
    const auto xr = get<std::vector<double>>(w, "x_range", {-6.0, 6.0}, "wigner");
    const auto pr = get<std::vector<double>>(w, "p_range", {-6.0, 6.0}, "wigner");
    require(xr.size() == 2 && pr.size() == 2, "wigner ranges need two entries");
    check_range(xr[0], xr[1], "wigner.x_range");
    check_range(pr[0], pr[1], "wigner.p_range");
    wb.x_min = xr[0];
    wb.x_max = xr[1];
    wb.p_min = pr[0];
    wb.p_max = pr[1];
    wb.nx = get<int>(w, "nx", 61, "wigner");
    wb.np = get<int>(w, "np", 61, "wigner");
    require(wb.nx >= 1 && wb.np >= 1, "wigner grid sizes must be positive");
  }

  // Structural checks on every declared code before any heavy work.
  for (const auto& c : cfg.codes) {
    try {
      CodeParams probe{c.s, Fraction(c.p, c.q), BinomialAmplitude{1}, 2};
      if (code_type(probe) != c.type && !(c.type == "rnp" && probe.f.is_zero())) {
        throw ConfigError("code declared as " + c.type + " has the structure of " +
                          code_type(probe));
      }
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (c.binomial()) {
      require(c.K >= 1 || !cfg.sweep.nbar.empty() || cfg.repeater.optimize,
              "binomial code needs K >= 1");
      require(cfg.sweep.alpha.empty(), "alpha sweeps do not apply to binomial codes");
    } else {
      require(c.alpha > 0.0 || !cfg.sweep.nbar.empty() || !cfg.sweep.alpha.empty() ||
                  cfg.repeater.optimize,
              "Gaussian code needs alpha > 0");
    }
  }
  cfg.normalized = root;
  cfg.normalized["seed"] = cfg.seed;
  return cfg;
}

}  // namespace npcodes::cli
