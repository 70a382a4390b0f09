#include "fglab/bp.hpp"

#include <mutex>
#include <stdexcept>

namespace fglab {

namespace {
using u128 = unsigned __int128;
}

u64 nu(u32 p, u32 m) {
  u128 pw = 1;
  for (u32 i = 0; i <= m; ++i) {
    pw *= p;
    if (pw > ((u128)1 << 62)) throw std::overflow_error("nu: p^(m+1) overflows");
  }
  return (u64)((pw - 1) / (p - 1));
}

GradedPoly GradedPoly::one(u32 p, u32 h) {
  GradedPoly g(p, h);
  g.terms_[std::vector<u16>(h, 0)] = 1;
  return g;
}

GradedPoly GradedPoly::gen(u32 p, u32 h, u32 i) {
  if (i < 1 || i > h) throw std::invalid_argument("GradedPoly::gen: index out of range");
  GradedPoly g(p, h);
  std::vector<u16> e(h, 0);
  e[i - 1] = 1;
  g.terms_[e] = 1;
  return g;
}

void GradedPoly::add_term(const std::vector<u16>& exps, u32 coeff) {
  if (exps.size() != h_) throw std::invalid_argument("GradedPoly: exponent vector length");
  u32 c = (terms_.count(exps) ? terms_[exps] : 0);
  c = (c + coeff) % p_;
  if (c)
    terms_[exps] = c;
  else
    terms_.erase(exps);
}

GradedPoly GradedPoly::operator+(const GradedPoly& o) const {
  GradedPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

GradedPoly GradedPoly::operator*(const GradedPoly& o) const {
  GradedPoly r(p_, h_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<u16> e(h_);
      for (u32 i = 0; i < h_; ++i) e[i] = (u16)(e1[i] + e2[i]);
      r.add_term(e, (u32)((u64)c1 * c2 % p_));
    }
  return r;
}

GradedPoly GradedPoly::scaled(u32 c) const {
  GradedPoly r(p_, h_);
  c %= p_;
  if (!c) return r;
  for (const auto& [e, c0] : terms_) r.add_term(e, (u32)((u64)c0 * c % p_));
  return r;
}

GradedPoly GradedPoly::mod_Ir(u32 r) const {
  GradedPoly out(p_, h_);
  for (const auto& [e, c] : terms_) {
    bool killed = false;
    for (u32 i = 0; i + 1 < r && i < h_; ++i)
      if (e[i]) killed = true;
    if (!killed) out.add_term(e, c);
  }
  return out;
}

u64 GradedPoly::weight(u32 p, const std::vector<u16>& exps) {
  u64 w = 0, pw = 1;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    pw *= p;
    w += (u64)exps[i] * 2 * (pw - 1);
  }
  return w;
}

long long GradedPoly::degree() const {
  if (terms_.empty()) return -1;
  long long deg = -2;
  for (const auto& [e, c] : terms_) {
    long long w = (long long)weight(p_, e);
    if (deg == -2)
      deg = w;
    else if (deg != w)
      throw std::logic_error("GradedPoly: inhomogeneous degree query");
  }
  return deg;
}

std::string GradedPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    std::string mono;
    for (u32 i = 0; i < h_; ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += "v" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) mono = "1";
    if (c != 1 || mono == "1") {
      out += std::to_string(c);
      if (mono != "1") out += "*" + mono;
    } else {
      out += mono;
    }
  }
  return out;
}

GradedPoly BpFgl::coeff(u32 i, u32 j) const {
  auto it = coeffs.find({i, j});
  if (it != coeffs.end()) return it->second;
  return GradedPoly(p, h);
}

namespace {

// polynomial in v_1..v_h over exact rationals
using QPoly = std::map<std::vector<u16>, Rational>;

void qp_add_to(QPoly& a, const QPoly& b, const Rational& scale) {
  for (const auto& [e, c] : b) {
    Rational nc = c * scale;
    auto it = a.find(e);
    if (it == a.end()) {
      if (!nc.is_zero()) a[e] = nc;
    } else {
      it->second = it->second + nc;
      if (it->second.is_zero()) a.erase(it);
    }
  }
}

QPoly qp_mul(const QPoly& a, const QPoly& b, u32 h) {
  QPoly r;
  for (const auto& [e1, c1] : a)
    for (const auto& [e2, c2] : b) {
      std::vector<u16> e(h);
      for (u32 i = 0; i < h; ++i) e[i] = (u16)(e1[i] + e2[i]);
      Rational pr = c1 * c2;
      auto it = r.find(e);
      if (it == r.end()) {
        if (!pr.is_zero()) r[e] = pr;
      } else {
        it->second = it->second + pr;
        if (it->second.is_zero()) r.erase(it);
      }
    }
  return r;
}

// bivariate series with QPoly coefficients, truncated at total degree D
using BiQ = std::map<std::pair<u32, u32>, QPoly>;

BiQ biq_mul(const BiQ& a, const BiQ& b, u32 h, u32 D) {
  BiQ r;
  for (const auto& [ij1, c1] : a)
    for (const auto& [ij2, c2] : b) {
      u32 i = ij1.first + ij2.first, j = ij1.second + ij2.second;
      if (i + j > D) continue;
      QPoly pr = qp_mul(c1, c2, h);
      auto& slot = r[{i, j}];
      qp_add_to(slot, pr, Rational(1));
      if (slot.empty()) r.erase({i, j});
    }
  return r;
}

struct BpKey {
  u32 p, h, D;
  bool operator<(const BpKey& o) const {
    if (p != o.p) return p < o.p;
    if (h != o.h) return h < o.h;
    return D < o.D;
  }
};

}  // namespace

const BpFgl& bp_fgl_mod_p(u32 p, u32 h, u32 D) {
  static std::mutex mtx;
  static std::map<BpKey, BpFgl> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({p, h, D});
  if (it != cache.end()) return it->second;
  if (!is_prime_u32(p)) throw std::invalid_argument("bp_fgl_mod_p: p not prime");
  if (D < 2) throw std::invalid_argument("bp_fgl_mod_p: D must be >= 2");

  // Hazewinkel logarithm l(x) = sum l_k x^(p^k), l_0 = 1,
  // p l_k = sum_{0 <= i < k} l_i v_{k-i}^(p^i), with v_j = 0 for j > h
  u32 K = 0;
  {
    u64 e = 1;
    while (e * p <= D) {
      e *= p;
      ++K;
    }
  }
  std::vector<QPoly> ell(K + 1);
  ell[0][std::vector<u16>(h, 0)] = Rational(1);
  for (u32 k = 1; k <= K; ++k) {
    QPoly acc;
    u64 pi = 1;  // p^i
    for (u32 i = 0; i < k; ++i) {
      u32 gen = k - i;
      if (gen <= h) {
        // v_gen^(p^i) as a QPoly
        std::vector<u16> e(h, 0);
        if (pi > 60000) throw std::overflow_error("bp_fgl_mod_p: exponent too large");
        e[gen - 1] = (u16)pi;
        QPoly vpow;
        vpow[e] = Rational(1);
        qp_add_to(acc, qp_mul(ell[i], vpow, h), Rational(1));
      }
      pi *= p;
    }
    // divide by p
    for (auto& [e, c] : acc) c = c / Rational((long long)p);
    ell[k] = std::move(acc);
    // homogeneity: |l_k| = 2(p^k - 1)
    u64 want = 0;
    {
      u64 pk = 1;
      for (u32 i = 0; i < k; ++i) pk *= p;
      want = 2 * (pk - 1);
    }
    for (const auto& [e, c] : ell[k])
      if (GradedPoly::weight(p, e) != want)
        throw std::logic_error("bp_fgl_mod_p: logarithm coefficient not homogeneous");
  }

  // exp = compositional inverse of log, univariate to degree D:
  // S^k maintained incrementally, e_m = -[sum_{k<m} e_k S^k]_m
  std::vector<std::vector<QPoly>> Spow(D + 1, std::vector<QPoly>(D + 1));  // Spow[k][deg]
  // S itself
  std::vector<QPoly> S(D + 1);
  {
    u64 e = 1;
    for (u32 k = 0; k <= K; ++k) {
      if (e <= D) S[(u32)e] = ell[k];
      e *= p;
    }
  }
  Spow[0][0][std::vector<u16>(h, 0)] = Rational(1);
  for (u32 k = 1; k <= D; ++k) {
    for (u32 d1 = 0; d1 <= D; ++d1) {
      if (Spow[k - 1][d1].empty()) continue;
      for (u32 d2 = 1; d1 + d2 <= D; ++d2) {
        if (S[d2].empty()) continue;
        qp_add_to(Spow[k][d1 + d2], qp_mul(Spow[k - 1][d1], S[d2], h), Rational(1));
      }
    }
  }
  std::vector<QPoly> ecoef(D + 1);
  ecoef[1][std::vector<u16>(h, 0)] = Rational(1);
  for (u32 m = 2; m <= D; ++m) {
    QPoly acc;
    for (u32 k = 1; k < m; ++k) qp_add_to(acc, qp_mul(ecoef[k], Spow[k][m], h), Rational(1));
    for (auto& [e, c] : acc) c = -c;
    ecoef[m] = std::move(acc);
  }
  // log/exp roundtrip audit: exp(log(x)) = x
  {
    std::vector<QPoly> comp(D + 1);
    for (u32 k = 1; k <= D; ++k) {
      if (ecoef[k].empty()) continue;
      for (u32 d = 0; d <= D; ++d)
        if (!Spow[k][d].empty()) qp_add_to(comp[d], qp_mul(ecoef[k], Spow[k][d], h), Rational(1));
    }
    for (u32 d = 1; d <= D; ++d) {
      bool want_x = (d == 1);
      if (want_x) {
        if (comp[d].size() != 1 || comp[d].begin()->second != Rational(1))
          throw std::logic_error("bp_fgl_mod_p: exp(log(x)) != x");
      } else if (!comp[d].empty()) {
        throw std::logic_error("bp_fgl_mod_p: exp(log(x)) != x at degree " + std::to_string(d));
      }
    }
  }

  // F(x, y) = exp(log x + log y), truncated at total degree D
  BiQ B;
  {
    u64 e = 1;
    for (u32 k = 0; k <= K; ++k) {
      if (e <= D) {
        B[{(u32)e, 0}] = ell[k];
        B[{0, (u32)e}] = ell[k];
      }
      e *= p;
    }
  }
  BpFgl out;
  out.p = p;
  out.h = h;
  out.D = D;
  BiQ acc;  // F over Q
  BiQ pw;   // B^k
  pw[{0, 0}][std::vector<u16>(h, 0)] = Rational(1);
  for (u32 k = 1; k <= D; ++k) {
    pw = biq_mul(pw, B, h, D);
    if (ecoef[k].empty()) continue;
    for (const auto& [ij, c] : pw) {
      auto& slot = acc[ij];
      qp_add_to(slot, qp_mul(ecoef[k], c, h), Rational(1));
      if (slot.empty()) acc.erase(ij);
    }
  }
  for (const auto& [ij, c] : acc) {
    GradedPoly g(p, h);
    u64 want = 2 * ((u64)ij.first + ij.second - 1);
    for (const auto& [e, r] : c) {
      if (!r.p_integral(p))
        throw std::logic_error("bp_fgl_mod_p: non-p-integral coefficient at (" +
                               std::to_string(ij.first) + "," + std::to_string(ij.second) + ")");
      if (GradedPoly::weight(p, e) != want)
        throw std::logic_error("bp_fgl_mod_p: coefficient breaks the grading");
      u32 m = r.mod_p(p);
      if (m) g.add_term(e, m);
    }
    if (!g.is_zero()) out.coeffs[{ij.first, ij.second}] = g;
  }
  return cache.emplace(BpKey{p, h, D}, std::move(out)).first->second;
}

std::vector<GradedPoly> bp_p_series(u32 p, u32 h, u32 D) {
  const BpFgl& F = bp_fgl_mod_p(p, h, D);
  // [k](x) by repeated substitution into the first slot
  std::vector<GradedPoly> x(D + 1, GradedPoly(p, h));
  x[1] = GradedPoly::one(p, h);
  std::vector<GradedPoly> acc = x;
  for (u32 step = 1; step < p; ++step) {
    // acc <- F(acc, x): powers of acc, x^j shifts
    std::vector<std::vector<GradedPoly>>
        apow(D + 1, std::vector<GradedPoly>(D + 1, GradedPoly(p, h)));
    apow[0][0] = GradedPoly::one(p, h);
    for (u32 k = 1; k <= D; ++k)
      for (u32 d1 = 0; d1 <= D; ++d1) {
        if (apow[k - 1][d1].is_zero()) continue;
        for (u32 d2 = 1; d1 + d2 <= D; ++d2) {
          if (acc[d2].is_zero()) continue;
          apow[k][d1 + d2] = apow[k][d1 + d2] + apow[k - 1][d1] * acc[d2];
        }
      }
    std::vector<GradedPoly> next(D + 1, GradedPoly(p, h));
    for (const auto& [ij, c] : F.coeffs) {
      u32 i = ij.first, j = ij.second;
      if (j > D) continue;
      for (u32 d = 0; d + j <= D; ++d) {
        if (apow[i][d].is_zero()) continue;
        next[d + j] = next[d + j] + apow[i][d] * c;
      }
    }
    acc = std::move(next);
  }
  // grading audit: coefficient of x^e has degree 2(e-1)
  for (u32 e = 1; e <= D; ++e) {
    if (acc[e].is_zero()) continue;
    if (acc[e].degree() != (long long)(2 * (e - 1)))
      throw std::logic_error("bp_p_series: coefficient grading mismatch at x^" + std::to_string(e));
  }
  return acc;
}

std::vector<GradedPoly> p_series_mod_Ir(u32 p, u32 h, u32 r, u32 D) {
  if (r > h) throw std::invalid_argument("p_series_mod_Ir: need 0 <= r <= h");
  auto ps = bp_p_series(p, h, D);
  for (auto& c : ps) c = c.mod_Ir(r);
  return ps;
}

} // namespace fglab
