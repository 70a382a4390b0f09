// Acceptance suite: one line per criterion, each run at its stated tolerance
// and time budget.  Exits nonzero if any criterion fails.

#include "fglab/hopfring.hpp"
#include "fglab/json_io.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

using namespace fglab;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int idx, const char* name, bool ok, double secs, double budget) {
  bool pass = ok && secs < budget;
  if (!pass) ++failures;
  std::printf("[%2d] %-34s %s  (%.3f s, budget %.0f s)%s\n", idx, name, pass ? "PASS" : "FAIL",
              secs, budget, (ok && secs >= budget) ? " [over budget]" : "");
}

Witt random_unit(const Ring& R, std::mt19937_64& rng) {
  u64 u;
  do {
    u = rng() % R->pN;
  } while (u % R->p == 0);
  return R->from_int((long long)u);
}

// criterion 1: exterior square of N_a reproduces Fu = -a^{-1}u, Vu = -apu
void c1() {
  Timer tm;
  bool ok = true;
  std::mt19937_64 rng(1001);
  for (u32 p : {2u, 3u, 5u}) {
    auto R = RingConfig::make(p, 1, 8);
    for (int it = 0; it < 20; ++it) {
      Witt a = random_unit(R, rng);
      auto E = exterior_power(make_Na(a), 2);
      ok &= (E.rank == 1);
      ok &= (E.F.at(0, 0) == (-a.inv()).truncated(7));       // exact mod p^7
      ok &= (E.V.at(0, 0) == (-(a * R->from_int(p))).truncated(7));
      ok &= (E.F.min_eff() == 7);
    }
  }
  report(1, "exterior-square reproduction", ok, tm.secs(), 1.0);
}

// criterion 2: multiplicativity of the exterior square iff a = -1 mod p^7
void c2() {
  Timer tm;
  bool ok = true;
  std::mt19937_64 rng(1001);  // the same sample as criterion 1
  for (u32 p : {2u, 3u, 5u}) {
    auto R = RingConfig::make(p, 1, 8);
    for (int it = 0; it < 20; ++it) {
      Witt a = random_unit(R, rng);
      bool want = (a.truncated(7) == (-R->one()).truncated(7));
      ok &= (is_multiplicative(exterior_power(make_Na(a), 2)).multiplicative == want);
    }
    // pin the boundary case explicitly
    ok &= is_multiplicative(exterior_power(make_Na(-R->one()), 2)).multiplicative;
  }
  report(2, "multiplicative-module detection", ok, tm.secs(), 1.0);
}

// criterion 3: 200 random valid modules of rank <= 4; every exterior power
// validates (dim_k(M/VM) of Lambda^m is C(h-1, m-1))
void c3() {
  Timer tm;
  bool ok = true;
  std::mt19937_64 rng(1003);
  for (int it = 0; it < 200; ++it) {
    u32 p = (it % 3 == 0) ? 2 : (it % 3 == 1) ? 3 : 5;
    auto R = RingConfig::make(p, 1, 8);
    u32 h = 1 + (u32)(it % 4);
    auto M = random_valid_module(R, h, rng);
    ok &= validate(M).pass();
    for (u32 m = 1; m <= h; ++m) {
      u32 expect = 1;
      for (u32 t = 1; t < m; ++t) expect = expect * (h - t) / t;
      ok &= validate(exterior_power(M, m), expect).pass();
    }
  }
  report(3, "dieudonne property suite (200)", ok, tm.secs(), 10.0);
}

// criterion 4: Honda p-series is exactly x^(p^n)
void c4() {
  Timer tm;
  bool ok = true;
  struct Case {
    u32 p, n, D;
  };
  for (auto [p, n, D] : {Case{2, 1, 8}, Case{2, 2, 16}, Case{3, 1, 27}, Case{3, 2, 81}}) {
    auto F = honda_law(p, n, D);
    Series ps = p_series(F);
    u64 pn = 1;
    for (u32 i = 0; i < n; ++i) pn *= p;
    for (u32 e = 0; e <= D; ++e) ok &= (ps.coeff(e) == (e == pn ? 1u : 0u));
    auto ht = height(F);
    ok &= (ht.exact.has_value() && *ht.exact == n);
  }
  report(4, "honda p-series = x^(p^n)", ok, tm.secs(), 30.0);
}

// criterion 5: solver output matches the exhaustive search over F_2^D
void c5() {
  Timer tm;
  bool ok = true;
  auto R = RingConfig::make(2, 1, 1);
  for (u32 D = 2; D <= 6; ++D) {
    auto gm = gm_law(R, D);
    std::set<std::vector<u32>> got;
    for (const auto& s : westerland_solve(gm, D)) {
      std::vector<u32> v(D + 1, 0);
      for (u32 e = 1; e <= D; ++e) v[e] = s.f.coeff(e);
      got.insert(v);
    }
    std::set<std::vector<u32>> want;
    for (u32 mask = 0; mask < (1u << D); ++mask) {
      Series f(R, D);
      std::vector<u32> v(D + 1, 0);
      for (u32 e = 1; e <= D; ++e) {
        v[e] = (mask >> (e - 1)) & 1;
        f.set_coeff(e, v[e]);
      }
      if (westerland_holds(gm, f)) want.insert(v);
    }
    ok &= (got == want);
  }
  report(5, "westerland oracle equivalence", ok, tm.secs(), 10.0);
}

// criterion 6: negative and positive detection with witnesses
void c6() {
  Timer tm;
  bool ok = true;
  for (u32 p : {2u, 3u}) {
    auto R = RingConfig::make(p, 1, 1);
    auto res = detect_gm(ga_law(R, 20), 20);
    ok &= (!res.iso && res.verdict == "NO-NONZERO-HOM-TO-DEGREE-20");
  }
  {
    auto res = detect_gm(honda_law(3, 2, 30), 30);
    ok &= (!res.iso && res.verdict == "NO-NONZERO-HOM-TO-DEGREE-30");
  }
  {
    auto R = RingConfig::make(2, 1, 1);
    auto res = detect_gm(gm_law(R, 8), 8);
    ok &= (res.iso && res.witness && res.witness->g.coeff(1) != 0);
  }
  std::mt19937_64 rng(1006);
  for (int it = 0; it < 5; ++it) {
    u32 p = (it % 2) ? 3 : 5;
    auto R = RingConfig::make(p, 1, 1);
    u32 u = 1 + (u32)(rng() % (p - 1));
    auto G = conjugate_law(gm_law(R, 9), u);
    auto res = detect_gm(G, 9);
    ok &= (res.iso && res.witness && res.witness->g.coeff(1) != 0);
  }
  report(6, "gm detection verdicts", ok, tm.secs(), 30.0);
}

// criterion 7: BP<h> p-series mod I_r has lowest term exactly v_r x^(p^r)
void c7() {
  Timer tm;
  bool ok = true;
  struct Case {
    u32 p, h, D;
  };
  for (auto [p, h, D] : {Case{2, 1, 8}, Case{2, 2, 16}, Case{3, 1, 27}}) {
    // p-integrality is asserted inside the construction; a violation throws
    for (u32 r = 1; r <= h; ++r) {
      auto ps = p_series_mod_Ir(p, h, r, D);
      u64 pr = 1;
      for (u32 i = 0; i < r; ++i) pr *= p;
      for (u32 e = 1; e < pr; ++e) ok &= ps[e].is_zero();
      ok &= (ps[(u32)pr] == GradedPoly::gen(p, h, r));
    }
  }
  report(7, "BP<h> p-series mod I_r", ok, tm.secs(), 60.0);
}

// criterion 8: nilpotence certificates verify with every step checked and a
// byte-identical replay
void c8() {
  Timer tm;
  bool ok = true;
  struct Case {
    u32 p, h, n;
  };
  for (auto [p, h, n] : {Case{2, 0, 2}, Case{2, 1, 3}, Case{3, 1, 3}}) {
    auto cert = verify_xpzero(p, h, n);
    ok &= (cert.verdict == "VERIFIED");
    for (const auto& s : cert.steps) ok &= (s.status == "ok");
    auto replay = verify_xpzero(p, h, n);
    ok &= (cert.to_json().dump() == replay.to_json().dump());
  }
  report(8, "nilpotence certificate u^p = 0", ok, tm.secs(), 300.0);
}

// criterion 9: f0 non-nilpotence against the repeated-multiplication oracle
void c9() {
  Timer tm;
  bool ok = true;
  struct Case {
    u32 p, h;
  };
  for (auto [p, h] : {Case{2, 1}, Case{2, 2}, Case{3, 1}, Case{3, 2}}) {
    auto rep = f0_nonnilpotence(p, h, 5);
    ok &= rep.all_nonzero;
    for (const auto& row : rep.rows) ok &= (row.nonzero && row.matches_oracle);
  }
  report(9, "f0 non-nilpotence", ok, tm.secs(), 1.0);
}

// criterion 10: nu-table
void c10() {
  Timer tm;
  bool ok = true;
  for (u32 p : {2u, 3u, 5u, 7u}) {
    for (u32 m = 0; m <= 6; ++m) {
      u64 direct = 0, pw = 1;
      for (u32 i = 0; i <= m; ++i) {
        direct += pw;
        pw *= p;
      }
      ok &= (nu(p, m) == direct);
      if (m >= 1) ok &= (nu(p, m) == p * nu(p, m - 1) + 1);
    }
  }
  ok &= (nu(2, 1) == 3);  // 2 nu(1) = 6, the bottom cell degree
  report(10, "nu-table", ok, tm.secs(), 1.0);
}

}  // namespace

int main() {
  c1();
  c2();
  c3();
  c4();
  c5();
  c6();
  c7();
  c8();
  c9();
  c10();
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria PASS\n");
  return 0;
}
