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

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NPCODES_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("npcodes_cli_" + std::to_string(getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
  return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> out;
  bool header = false;
  for (const auto& l : lines_of(csv)) {
    if (l.rfind("#", 0) == 0) continue;
    if (!header) {
      header = true;
      continue;
    }
    out.push_back(l);
  }
  return out;
}

std::string prefixed(const std::string& csv, const std::string& prefix) {
  for (const auto& l : lines_of(csv)) {
    if (l.rfind(prefix, 0) == 0) return l.substr(prefix.size());
  }
  return {};
}

const char* kDiamond =
    R"({"code": {"type": "dnp", "s": 2, "p": 1, "q": 2, "alpha": 1.7320508075688772, "r": 0.0}})";

}  // namespace

TEST_CASE("codes report", "[cli]") {
  TempDir tmp;
  const auto r = run("codes --config " + tmp.file("d.json", kDiamond));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  REQUIRE(j[0]["d_N"] == 4);
  REQUIRE_THAT(j[0]["d_phi"].get<double>(), WithinAbs(M_PI / 2, 1e-15));
  REQUIRE_THAT(j[0]["nbar"].get<double>(), WithinAbs(6.0, 1e-6));
  REQUIRE(j[0]["syndrome"] == "(k, phi_bar)");

  const auto rect = run("codes --config " +
                        tmp.file("r.json", R"({"code": {"type": "binomial", "s": 4, "K": 3}})"));
  REQUIRE(rect.code == 0);
  REQUIRE(nlohmann::json::parse(rect.out)[0]["syndrome"] == "(k, phi_e)");
}

TEST_CASE("configuration errors exit with code 2", "[cli]") {
  TempDir tmp;
  const auto out = tmp.file("never.csv");
  REQUIRE(run("fidelity --config " + tmp.file("bad.json", "{\"code\": ") + " --out " + out).code == 2);
  REQUIRE(!fs::exists(out));
  REQUIRE(run("codes --config " +
              tmp.file("unk.json", R"({"code": {"type": "dnp", "s": 2, "p": 1, "q": 2, "alpha": 1}, "extra": 1})"))
              .code == 2);
  REQUIRE(run("codes --config " +
              tmp.file("typ.json", R"({"code": {"type": "dnp", "s": 1, "p": 1, "q": 4, "alpha": 2}})"))
              .code == 2);
  REQUIRE(run("codes --config " + tmp.file("missing.json", R"({"noise": {"gamma_t": 0.1}})")).code == 2);
  REQUIRE(run("codes --config " + tmp.file("nokey.json", "{}") + " --jobs 0").code == 2);
  REQUIRE(run("codes --config /nonexistent/x.json").code == 2);
}

TEST_CASE("fidelity rows, determinism and config round trip", "[cli]") {
  TempDir tmp;
  const auto cfg = tmp.file("f.json", R"({
    "code": [{"type": "dnp", "s": 2, "p": 1, "q": 2}, {"type": "binomial", "s": 4}],
    "sweep": {"nbar": [4, 5, 6]},
    "noise": {"gamma_t": [0.0, 0.005], "kappa_t": 0.001}})");
  const auto a = tmp.file("a.csv"), b = tmp.file("b.csv");
  REQUIRE(run("fidelity --config " + cfg + " --out " + a + " --seed 5").code == 0);
  REQUIRE(run("fidelity --config " + cfg + " --out " + b + " --seed 5 --jobs 3").code == 0);
  const std::string first = slurp(a);
  REQUIRE(first == slurp(b));

  const auto rows = data_rows(first);
  REQUIRE(rows.size() == 10);  // binomial has no integer K at nbar 5
  REQUIRE(first.find("# skipped") != std::string::npos);
  for (const auto& row : rows) {
    const auto cells = split(row);
    REQUIRE(cells.size() == 13);
    REQUIRE(cells.back() == "5");
    REQUIRE_THAT(std::stod(cells[9]) + std::stod(cells[10]), WithinAbs(1.0, 1e-15));
  }

  // The embedded config reproduces the rows and hashes to the recorded value.
  const std::string embedded = prefixed(first, "# config=");
  const auto again = tmp.file("again.json", embedded);
  const auto c = tmp.file("c.csv");
  REQUIRE(run("fidelity --config " + again + " --out " + c).code == 0);
  REQUIRE(data_rows(slurp(c)) == rows);
  const auto hash_in = tmp.file("hash_in.txt", embedded);
  FILE* p = popen(("sha256sum " + hash_in).c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[128] = {};
  REQUIRE(fgets(buf, sizeof buf, p) != nullptr);
  pclose(p);
  REQUIRE(std::string(buf).substr(0, 64) == prefixed(first, "# config_hash="));
}

TEST_CASE("noiseless fidelity of a large code", "[cli]") {
  TempDir tmp;
  const auto r = run("fidelity --config " +
                     tmp.file("n.json", R"({"code": {"type": "dnp", "s": 2, "p": 1, "q": 2, "alpha": 3}})"));
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  REQUIRE(std::stod(split(rows[0])[10]) < 1e-3);
}

TEST_CASE("numerical failure flushes a sentinel row", "[cli]") {
  TempDir tmp;
  const auto cfg = tmp.file("t.json", R"({
    "code": [{"type": "binomial", "s": 2, "K": 2}, {"type": "dnp", "s": 2, "p": 1, "q": 2, "alpha": 3}],
    "truncation": {"dim": 12}})");
  const auto out = tmp.file("t.csv");
  REQUIRE(run("fidelity --config " + cfg + " --out " + out).code == 3);
  const auto rows = data_rows(slurp(out));
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].rfind("binomial,", 0) == 0);
  REQUIRE(rows[1].rfind("FAILURE,", 0) == 0);
}

TEST_CASE("repeater rows", "[cli]") {
  TempDir tmp;
  const auto r = run("repeater --config " + tmp.file("r.json", R"({
    "code": {"type": "binomial", "s": 4, "K": 2},
    "repeater": {"spacing_km": 2.0, "eps": 0.01, "h": 0.1, "distances_km": [0, 10, 100]}})"));
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 3);
  double prev = 2.0;
  for (const auto& row : rows) {
    const auto cells = split(row);
    REQUIRE_THAT(std::stod(cells[10]), WithinAbs(1.0 - std::exp(-2.0 / 20.0) + 0.01, 1e-12));
    REQUIRE_THAT(std::stod(cells[11]), WithinAbs(0.1 * std::stod(cells[10]), 1e-15));
    const double key = std::stod(cells[14]);
    REQUIRE(key <= prev);
    prev = key;
  }
  REQUIRE(std::stod(split(rows[0])[14]) == 1.0);
}

TEST_CASE("lattice and wigner output", "[cli]") {
  TempDir tmp;
  const auto lat = run("lattice --config " + tmp.file("l.json", R"({
    "code": {"type": "onp", "s": 1, "p": 1, "q": 2, "alpha": 2}, "lattice": {"n_max": 3}})"));
  REQUIRE(lat.code == 0);
  REQUIRE(data_rows(lat.out).size() == 8);
  const auto w = run("wigner --config " + tmp.file("w.json", R"({
    "code": {"type": "binomial", "s": 2, "K": 2}, "wigner": {"state": "zero", "nx": 3, "np": 4}})"));
  REQUIRE(w.code == 0);
  REQUIRE(data_rows(w.out).size() == 12);
}

TEST_CASE("validation suite and fault injection", "[cli]") {
  const auto ok = run("validate --level quick");
  REQUIRE(ok.code == 0);
  REQUIRE(ok.out.find("FAIL") == std::string::npos);
  const auto bad = run("validate --level quick --inject-fault decoder-sign-flip");
  REQUIRE(bad.code == 1);
  REQUIRE(bad.out.find("FAIL round-trip-decoding") != std::string::npos);
  REQUIRE(run("validate --level nonsense").code == 2);
}
