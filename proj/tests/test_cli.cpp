#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fglab/json_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace fglab;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FGLAB_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), (int)buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_tmp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/fglab_test_" + name;
  std::ofstream f(path, std::ios::binary);
  f << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("module JSON round trip") {
  auto R = RingConfig::make(3, 1, 8);
  auto M = make_Na(R->from_int(5));
  auto j = module_to_json(M);
  auto M2 = module_from_json(j);
  CHECK(M2.rank == 2);
  CHECK(M2.F == M.F);
  CHECK(M2.V == M.V);
  CHECK(module_to_json(M2) == j);
  // exterior output reloads at its reduced precision and still validates
  auto E = exterior_power(M, 2);
  auto E2 = module_from_json(module_to_json(E));
  CHECK(E2.ring->N == 7);
  CHECK(validate(E2).pass());
}

TEST_CASE("fgl JSON round trip") {
  auto R = RingConfig::make(2, 1, 1);
  auto F = gm_law(R, 6);
  auto F2 = fgl_from_json(fgl_to_json(F));
  CHECK(F2 == F);
  CHECK(fgl_to_json(F2) == fgl_to_json(F));
}

TEST_CASE("p-series table JSON shape") {
  auto table = pseries_table_to_json(p_series_mod_Ir(2, 1, 1, 8));
  // [[exponent, {"monomial": coeff, ...}], ...], sparse and sorted
  REQUIRE(!table.empty());
  CHECK(table[0] == json::parse(R"([2, {"v1": 1}])"));
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i][0] > table[i - 1][0]);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS_AS((void)module_from_json(json::parse("{\"rank\": 1}")), MalformedInput);
  CHECK_THROWS_AS((void)module_from_json(json::parse(R"({"ring":{"p":4,"d":1,"N":4},"rank":1,"F":[],"V":[]})")),
                  MalformedInput);
  CHECK_THROWS_AS((void)fgl_from_json(json::parse(R"({"p":2,"d":1,"D":4})")), MalformedInput);
}

TEST_CASE("cli validate exit codes") {
  auto R = RingConfig::make(2, 1, 8);
  auto good = write_tmp("na1.json", dump_canonical(module_to_json(make_Na(R->one()))));
  CHECK(run_cli("validate " + good).code == 0);

  DieudonneModule bad;
  bad.ring = R;
  bad.rank = 1;
  bad.F = WMatrix(R, 1, 1);
  bad.V = WMatrix(R, 1, 1);
  bad.F.at(0, 0) = R->one();
  bad.V.at(0, 0) = R->one();
  auto badf = write_tmp("bad.json", dump_canonical(module_to_json(bad)));
  CHECK(run_cli("validate " + badf).code == 1);

  auto trunc = write_tmp("trunc.json", "{\"ring\": {\"p\": 2,");
  CHECK(run_cli("validate " + trunc).code == 2);
}

TEST_CASE("cli exterior and detect-gm-module") {
  auto R = RingConfig::make(3, 1, 8);
  // a = -1: the exterior square is multiplicative
  auto neg = write_tmp("na_neg.json", dump_canonical(module_to_json(make_Na(-R->one()))));
  auto r1 = run_cli("exterior --m 2 " + neg + " --out /tmp/fglab_test_ext.json");
  CHECK(r1.code == 0);
  auto r2 = run_cli("detect-gm-module /tmp/fglab_test_ext.json");
  CHECK(r2.code == 0);
  CHECK(r2.out.find("\"ISO\"") != std::string::npos);
  // whole-module detection agrees
  CHECK(run_cli("detect-gm-module " + neg).code == 0);
  // a = 1 at p = 3 is not multiplicative
  auto pos = write_tmp("na_pos.json", dump_canonical(module_to_json(make_Na(R->one()))));
  auto r3 = run_cli("detect-gm-module " + pos);
  CHECK(r3.code == 1);
  CHECK(r3.out.find("NOT-ISO") != std::string::npos);
  // exterior at m = 1 is byte-identical
  auto r4 = run_cli("exterior --m 1 " + pos + " --out /tmp/fglab_test_id.json");
  CHECK(r4.code == 0);
  CHECK(slurp("/tmp/fglab_test_id.json") == slurp(pos));
}

TEST_CASE("cli fgl subcommands") {
  auto R = RingConfig::make(2, 1, 1);
  auto gm = write_tmp("gm.json", dump_canonical(fgl_to_json(gm_law(R, 6))));
  auto ga = write_tmp("ga.json", dump_canonical(fgl_to_json(ga_law(R, 12))));

  auto ps = run_cli("fgl pseries " + gm);
  CHECK(ps.code == 0);
  CHECK(json::parse(ps.out)["pseries"] == json::parse("[[2,1]]"));

  auto ht = run_cli("fgl height " + gm);
  CHECK(ht.code == 0);
  CHECK(json::parse(ht.out)["height"] == 1);

  auto ws = run_cli("fgl westerland " + gm + " --degree 6");
  CHECK(ws.code == 0);
  auto sols = json::parse(ws.out)["solutions"];
  CHECK(sols.size() == 8);
  bool has_x = false, has_x2 = false;
  for (const auto& s : sols) {
    if (s["f"] == json::parse("[[1,1]]")) has_x = true;
    if (s["f"] == json::parse("[[2,1]]")) has_x2 = true;
  }
  CHECK(has_x);
  CHECK(has_x2);

  auto dt = run_cli("fgl detect " + gm);
  CHECK(dt.code == 0);
  CHECK(json::parse(dt.out)["verdict"] == "ISO-TO-DEGREE-6");
  CHECK(json::parse(dt.out)["witness"]["frobenius_twists"] == 0);

  auto dga = run_cli("fgl detect " + ga + " --degree 12");
  CHECK(dga.code == 1);
  CHECK(json::parse(dga.out)["verdict"] == "NO-NONZERO-HOM-TO-DEGREE-12");

  auto h2 = write_tmp("honda2.json", dump_canonical(fgl_to_json(honda_law(3, 2, 27))));
  auto dh = run_cli("fgl detect " + h2 + " --degree 27");
  CHECK(dh.code == 1);
  CHECK(json::parse(dh.out)["verdict"] == "NO-NONZERO-HOM-TO-DEGREE-27");
}

TEST_CASE("cli hopf subcommands and determinism") {
  auto r = run_cli("hopf verify-xpzero --p 2 --h 1 --n 3");
  CHECK(r.code == 0);
  auto cert = json::parse(r.out);
  CHECK(cert["verdict"] == "VERIFIED");
  CHECK(cert["params"]["p"] == 2);
  auto r2 = run_cli("hopf verify-xpzero --p 2 --h 1 --n 3");
  CHECK(r2.out == r.out);  // byte-identical

  CHECK(run_cli("hopf verify-xpzero --p 2 --h 1 --n 2").code == 2);

  auto f0 = run_cli("hopf f0 --p 2 --h 1 --m 5");
  CHECK(f0.code == 0);
  CHECK(json::parse(f0.out)["all_nonzero"] == true);
}

TEST_CASE("cli table format renders the same payload") {
  auto R = RingConfig::make(2, 1, 1);
  auto gm = write_tmp("gm2.json", dump_canonical(fgl_to_json(gm_law(R, 4))));
  auto r = run_cli("--format table fgl height " + gm);
  CHECK(r.code == 0);
  CHECK(r.out.find("height = 1") != std::string::npos);
}

TEST_CASE("cli config file supplies defaults") {
  auto R = RingConfig::make(2, 1, 1);
  auto gm = write_tmp("gm3.json", dump_canonical(fgl_to_json(gm_law(R, 8))));
  auto cfg = write_tmp("cfg.toml", "format = \"table\"\n");
  auto r = run_cli("--config " + cfg + " fgl height " + gm);
  CHECK(r.code == 0);
  CHECK(r.out.find("height = 1") != std::string::npos);
}
