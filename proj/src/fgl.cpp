#include "fglab/fgl.hpp"

#include <algorithm>
#include <stdexcept>

namespace fglab {

namespace {

using u128 = unsigned __int128;

// dense bivariate polynomial over F_q, truncated at total degree D
struct BiPoly {
  Ring R;
  u32 D = 0;
  std::vector<u32> a;  // (D+1)*(D+1), entry (i,j) at i*(D+1)+j, i+j <= D used

  BiPoly() = default;
  BiPoly(Ring r, u32 d) : R(std::move(r)), D(d), a((std::size_t)(d + 1) * (d + 1), 0) {}
  u32 at(u32 i, u32 j) const { return a[(std::size_t)i * (D + 1) + j]; }
  void set(u32 i, u32 j, u32 v) { a[(std::size_t)i * (D + 1) + j] = v; }
};

BiPoly bi_mul(const BiPoly& x, const BiPoly& y) {
  BiPoly r(x.R, x.D);
  const u32 D = x.D;
  for (u32 i1 = 0; i1 <= D; ++i1)
    for (u32 j1 = 0; i1 + j1 <= D; ++j1) {
      u32 v1 = x.at(i1, j1);
      if (!v1) continue;
      for (u32 i2 = 0; i1 + i2 <= D; ++i2)
        for (u32 j2 = 0; i1 + j1 + i2 + j2 <= D; ++j2) {
          u32 v2 = y.at(i2, j2);
          if (!v2) continue;
          u32 i = i1 + i2, j = j1 + j2;
          r.set(i, j, x.R->fq_add(r.at(i, j), x.R->fq_mul(v1, v2)));
        }
    }
  return r;
}

// trivariate, for the associativity check
struct TriPoly {
  Ring R;
  u32 D = 0;
  std::vector<u32> a;
  TriPoly() = default;
  TriPoly(Ring r, u32 d)
      : R(std::move(r)), D(d), a((std::size_t)(d + 1) * (d + 1) * (d + 1), 0) {}
  u32 at(u32 i, u32 j, u32 k) const { return a[((std::size_t)i * (D + 1) + j) * (D + 1) + k]; }
  void set(u32 i, u32 j, u32 k, u32 v) { a[((std::size_t)i * (D + 1) + j) * (D + 1) + k] = v; }
};

TriPoly tri_mul(const TriPoly& x, const TriPoly& y) {
  TriPoly r(x.R, x.D);
  const u32 D = x.D;
  for (u32 i1 = 0; i1 <= D; ++i1)
    for (u32 j1 = 0; i1 + j1 <= D; ++j1)
      for (u32 k1 = 0; i1 + j1 + k1 <= D; ++k1) {
        u32 v1 = x.at(i1, j1, k1);
        if (!v1) continue;
        for (u32 i2 = 0; i1 + j1 + k1 + i2 <= D; ++i2)
          for (u32 j2 = 0; i1 + j1 + k1 + i2 + j2 <= D; ++j2)
            for (u32 k2 = 0; i1 + j1 + k1 + i2 + j2 + k2 <= D; ++k2) {
              u32 v2 = y.at(i2, j2, k2);
              if (!v2) continue;
              r.set(i1 + i2, j1 + j2, k1 + k2,
                    x.R->fq_add(r.at(i1 + i2, j1 + j2, k1 + k2), x.R->fq_mul(v1, v2)));
            }
      }
  return r;
}

// F applied to two trivariate arguments with zero constant term
TriPoly tri_eval(const Fgl& F, const TriPoly& A, const TriPoly& B) {
  const u32 D = A.D;
  const Ring& R = A.R;
  std::vector<TriPoly> PA(D + 1), PB(D + 1);
  PA[0] = TriPoly(R, D);
  PA[0].set(0, 0, 0, 1);
  PB[0] = PA[0];
  for (u32 i = 1; i <= D; ++i) {
    PA[i] = tri_mul(PA[i - 1], A);
    PB[i] = tri_mul(PB[i - 1], B);
  }
  TriPoly out(R, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) {
      u32 c = F.coeff(i, j);
      if (!c) continue;
      TriPoly term = tri_mul(PA[i], PB[j]);
      for (std::size_t t = 0; t < out.a.size(); ++t)
        out.a[t] = R->fq_add(out.a[t], R->fq_mul(c, term.a[t]));
    }
  return out;
}

}  // namespace

Series::Series(Ring ring, u32 D) : ring_(std::move(ring)), D_(D), c_(D + 1, 0) {}

void Series::set_coeff(u32 i, u32 v) {
  if (i > D_) throw std::out_of_range("Series: exponent beyond truncation");
  c_[i] = v;
}

bool Series::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u32 v) { return v == 0; });
}

u32 Series::order() const {
  for (u32 i = 0; i <= D_; ++i)
    if (c_[i]) return i;
  return D_ + 1;
}

Series Series::operator+(const Series& o) const {
  Series r(ring_, D_);
  for (u32 i = 0; i <= D_; ++i) r.c_[i] = ring_->fq_add(c_[i], o.coeff(i));
  return r;
}

Series Series::operator-(const Series& o) const {
  Series r(ring_, D_);
  for (u32 i = 0; i <= D_; ++i) r.c_[i] = ring_->fq_sub(c_[i], o.coeff(i));
  return r;
}

Series Series::operator*(const Series& o) const {
  Series r(ring_, D_);
  for (u32 i = 0; i <= D_; ++i) {
    if (!c_[i]) continue;
    for (u32 j = 0; i + j <= D_; ++j) {
      if (!o.coeff(j)) continue;
      r.c_[i + j] = ring_->fq_add(r.c_[i + j], ring_->fq_mul(c_[i], o.coeff(j)));
    }
  }
  return r;
}

Fgl::Fgl(Ring ring, u32 D) : ring_(std::move(ring)), D_(D) {
  if (D < 2) throw std::invalid_argument("Fgl: degree bound must be >= 2");
  c_.assign((std::size_t)(D + 1) * (D + 1), 0);
}

u32 Fgl::coeff(u32 i, u32 j) const {
  if (i > D_ || j > D_ || i + j > D_) return 0;
  return c_[idx(i, j)];
}

void Fgl::set_coeff(u32 i, u32 j, u32 v) {
  if (i + j > D_) throw std::out_of_range("Fgl: coefficient beyond truncation");
  c_[idx(i, j)] = v;
}

Series Fgl::eval(const Series& A, const Series& B) const {
  const u32 D = D_;
  if (A.coeff(0) || B.coeff(0)) throw std::invalid_argument("Fgl::eval: arguments need zero constant term");
  std::vector<Series> PA(D + 1, Series(ring_, D)), PB(D + 1, Series(ring_, D));
  PA[0].set_coeff(0, 1);
  PB[0].set_coeff(0, 1);
  for (u32 i = 1; i <= D; ++i) {
    PA[i] = PA[i - 1] * A;
    PB[i] = PB[i - 1] * B;
  }
  Series out(ring_, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) {
      u32 c = coeff(i, j);
      if (!c) continue;
      Series t = PA[i] * PB[j];
      for (u32 e = 0; e <= D; ++e)
        out.set_coeff(e, ring_->fq_add(out.coeff(e), ring_->fq_mul(c, t.coeff(e))));
    }
  return out;
}

FglCheck validate_fgl(const Fgl& F, u32 assoc_degree) {
  FglCheck chk;
  const Ring& R = F.ring();
  chk.unital = F.coeff(0, 0) == 0 && F.coeff(1, 0) == 1 && F.coeff(0, 1) == 1;
  for (u32 j = 2; j <= F.degree_bound(); ++j)
    if (F.coeff(0, j) || F.coeff(j, 0)) chk.unital = false;
  chk.commutative = true;
  for (u32 i = 0; i <= F.degree_bound(); ++i)
    for (u32 j = i; i + j <= F.degree_bound(); ++j)
      if (F.coeff(i, j) != F.coeff(j, i)) chk.commutative = false;
  const u32 A = std::min(assoc_degree, F.degree_bound());
  chk.assoc_degree = A;
  TriPoly x(R, A), y(R, A), z(R, A);
  x.set(1, 0, 0, 1);
  y.set(0, 1, 0, 1);
  z.set(0, 0, 1, 1);
  TriPoly fxy = tri_eval(F, x, y);
  TriPoly fyz = tri_eval(F, y, z);
  TriPoly lhs = tri_eval(F, fxy, z);
  TriPoly rhs = tri_eval(F, x, fyz);
  chk.associative = (lhs.a == rhs.a);
  return chk;
}

Fgl gm_law(const Ring& ring, u32 D) {
  Fgl F(ring, D);
  F.set_coeff(1, 0, 1);
  F.set_coeff(0, 1, 1);
  F.set_coeff(1, 1, 1);
  return F;
}

Fgl ga_law(const Ring& ring, u32 D) {
  Fgl F(ring, D);
  F.set_coeff(1, 0, 1);
  F.set_coeff(0, 1, 1);
  return F;
}

Fgl honda_law(u32 p, u32 n, u32 D) {
  if (n < 1) throw std::invalid_argument("honda_law: height must be >= 1");
  auto R = RingConfig::make(p, 1, 1);
  u64 pn = 1;
  for (u32 i = 0; i < n; ++i) {
    pn *= p;
    if (pn > 1000000) throw std::invalid_argument("honda_law: p^n too large");
  }
  if (D < pn) throw std::invalid_argument("honda_law: D must be >= p^n to witness the height");

  // l(x) = sum_i x^(p^(n i)) / p^i; the law satisfies, degree by degree,
  //   F_d = [l(x)+l(y)]_d - sum_{i>=1} [F^(p^(n i))]_d / p^i,
  // where [.]_d depends only on lower-degree parts of F.  All arithmetic is
  // done in Z/p^G with a per-degree count of trustworthy base-p digits; every
  // division is over a common denominator and checked exact.
  u32 G = 1;
  {
    u128 acc = p;
    while (acc * p < ((u128)1 << 62)) {
      acc *= p;
      ++G;
    }
  }
  u64 pG = 1;
  for (u32 i = 0; i < G; ++i) pG *= p;

  u32 T = 0;  // log terms with exponent p^(n i) <= D (i = 0..T-1)
  {
    u128 e = 1;
    while (e <= D) {
      ++T;
      e *= pn;
    }
  }

  const u32 W = D + 1;
  auto cat = [W](const std::vector<u64>& v, u32 i, u32 j) -> u64 { return v[(std::size_t)i * W + j]; };
  auto mul = [&](const std::vector<u64>& x, const std::vector<u64>& y, u32 cap) {
    std::vector<u64> r((std::size_t)W * W, 0);
    for (u32 i1 = 0; i1 <= cap; ++i1)
      for (u32 j1 = 0; i1 + j1 <= cap; ++j1) {
        u64 v1 = cat(x, i1, j1);
        if (!v1) continue;
        for (u32 i2 = 0; i1 + i2 <= cap; ++i2)
          for (u32 j2 = 0; i1 + j1 + i2 + j2 <= cap; ++j2) {
            u64 v2 = cat(y, i2, j2);
            if (!v2) continue;
            u64& slot = r[(std::size_t)(i1 + i2) * W + (j1 + j2)];
            slot = (u64)(((u128)slot + (u128)v1 * v2) % pG);
          }
      }
    return r;
  };

  std::vector<u64> F((std::size_t)W * W, 0);
  F[(std::size_t)1 * W] = 1;  // x
  F[1] = 1;                   // y
  std::vector<u32> valid(D + 1, G);  // trustworthy digits of the degree-d slice
  std::vector<u32> prefmin(D + 1, G);

  for (u32 d = 2; d <= D; ++d) {
    // powers F^(p^(n i)) truncated at total degree d, recomputed from the
    // finalized lower part of F
    u32 K = 0;
    {
      u128 e = pn;
      while (e <= d) {
        ++K;
        e *= pn;
      }
    }
    u32 vin = G;
    std::vector<std::vector<u64>> slices;  // F^(p^(n i)) truncated at degree d, i=1..K
    std::vector<u64> pw = F;
    u64 e = 1;
    for (u32 i = 1; i <= K; ++i) {
      // raise previous power to the p^n-th power, truncated at degree d
      std::vector<u64> acc((std::size_t)W * W, 0);
      acc[0] = 1;
      u64 ee = pn;
      std::vector<u64> base = pw;
      while (ee) {
        if (ee & 1) acc = mul(acc, base, d);
        base = mul(base, base, d);
        ee >>= 1;
      }
      pw = std::move(acc);
      slices.push_back(pw);
      e *= pn;
      // inputs used: degrees <= d - p^(n i) + 1
      u32 dep = (u32)(d >= e ? d - e + 1 : 0);
      if (dep >= 1) vin = std::min(vin, prefmin[std::min(dep, D)]);
    }
    if (vin <= K) throw std::domain_error("honda_law: fixed-point precision exhausted");
    u64 scale = 1;  // common denominator p^K
    for (u32 i = 0; i < K; ++i) scale *= p;
    // per-cell numerator: N(i,j) = p^K [l(x)+l(y)]_(i,j) - sum_t p^(K-t) [F^(p^(n t))]_(i,j)
    for (u32 i = 0; i <= d; ++i) {
      u32 j = d - i;
      u64 N = 0;
      if (j == 0 || i == 0) {
        u128 edeg = 1;
        u64 div = scale;
        for (u32 k = 0; k < T; ++k) {
          if (edeg == d) N = div % pG;
          edeg *= pn;
          div /= p;
        }
      }
      u64 div = scale / p;
      for (u32 t = 1; t <= K; ++t) {
        u64 a = cat(slices[t - 1], i, j);
        u64 sub = (u64)((u128)a * (div % pG) % pG);
        N = (N + pG - sub) % pG;
        div /= p;
      }
      u32 vd = vin - K;
      u64 pv = 1;
      for (u32 t = 0; t < std::min(vd + K, G); ++t) pv *= p;
      if ((N % pv) % scale != 0)
        throw std::logic_error("honda_law: non-integral coefficient at degree " + std::to_string(d));
      F[(std::size_t)i * W + j] = (N % pv) / scale;
    }
    valid[d] = vin - K;
    prefmin[d] = std::min(prefmin[d - 1], valid[d]);
    if (valid[d] < 1) throw std::domain_error("honda_law: precision exhausted at degree " + std::to_string(d));
  }

  Fgl out(R, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) out.set_coeff(i, j, (u32)(cat(F, i, j) % p));
  return out;
}

Fgl conjugate_law(const Fgl& F, u32 unit) {
  const Ring& R = F.ring();
  if (unit == 0) throw std::invalid_argument("conjugate_law: unit must be nonzero");
  Fgl out(R, F.degree_bound());
  for (u32 i = 0; i <= F.degree_bound(); ++i)
    for (u32 j = 0; i + j <= F.degree_bound(); ++j) {
      u32 c = F.coeff(i, j);
      if (!c) continue;
      // u^{-1} F(ux, uy): scale by u^(i+j-1)
      u32 s = R->fq_mul(c, R->fq_pow(unit, i + j - 1));
      out.set_coeff(i, j, s);
    }
  return out;
}

Series p_series(const Fgl& F) {
  const Ring& R = F.ring();
  Series x(R, F.degree_bound());
  x.set_coeff(1, 1);
  Series acc = x;
  for (u32 k = 1; k < R->p; ++k) acc = F.eval(acc, x);
  return acc;
}

HeightResult height(const Fgl& F) {
  const Ring& R = F.ring();
  Series ps = p_series(F);
  HeightResult hr;
  if (ps.is_zero()) {
    u32 n = 0;
    u64 e = 1;
    while (e <= F.degree_bound()) {
      e *= R->p;
      ++n;
    }
    hr.lower_bound = n;
    return hr;
  }
  u32 ord = ps.order();
  u32 n = 0;
  u64 e = 1;
  while (e < ord) {
    e *= R->p;
    ++n;
  }
  if (e != ord)
    throw std::domain_error("height: lowest p-series term at non-p-power exponent " + std::to_string(ord));
  hr.exact = n;
  hr.lower_bound = n;
  return hr;
}

namespace {

struct WSolverState {
  const Ring& R;
  u32 D;
  std::vector<BiPoly> S;  // S[k] = (x1 +_G x2)^k
  std::vector<WSolution>* out;
  std::vector<u32> freq;  // free degrees encountered (p-powers)
};

void wsolve_rec(WSolverState& st, std::vector<u32>& c, std::vector<u32>& acc, u32 t,
                std::vector<u32>& frees) {
  const u32 D = st.D;
  const Ring& R = st.R;
  if (t > D) {
    WSolution sol;
    sol.f = Series(st.S[1].R, D);
    for (u32 i = 1; i <= D; ++i) sol.f.set_coeff(i, c[i]);
    sol.free_degrees = frees;
    st.out->push_back(std::move(sol));
    return;
  }
  // constraints at total degree t: for i+j = t, i,j >= 1:
  //   S[t](i,j) * c_t = c_i c_j - acc(i,j)
  bool forced = false;
  u32 forced_val = 0;
  bool dead = false;
  for (u32 i = 1; i < t && !dead; ++i) {
    u32 j = t - i;
    u32 lhs_coef = st.S[t].at(i, j);
    u32 rhs = R->fq_sub(R->fq_mul(c[i], c[j]), acc[(std::size_t)i * (D + 1) + j]);
    if (lhs_coef == 0) {
      if (rhs != 0) dead = true;
    } else {
      u32 val = R->fq_mul(rhs, R->fq_inv(lhs_coef));
      if (!forced) {
        forced = true;
        forced_val = val;
      } else if (val != forced_val) {
        dead = true;
      }
    }
  }
  if (dead) return;
  auto descend = [&](u32 val) {
    c[t] = val;
    std::vector<u32> acc2 = acc;
    if (val) {
      for (u32 i = 0; i <= D; ++i)
        for (u32 j = 0; i + j <= D; ++j) {
          u32 s = st.S[t].at(i, j);
          if (s) {
            auto& slot = acc2[(std::size_t)i * (D + 1) + j];
            slot = R->fq_add(slot, R->fq_mul(val, s));
          }
        }
    }
    wsolve_rec(st, c, acc2, t + 1, frees);
    c[t] = 0;
  };
  if (forced) {
    descend(forced_val);
  } else {
    frees.push_back(t);
    for (u32 val = 0; val < R->q; ++val) descend(val);
    frees.pop_back();
  }
}

}  // namespace

std::vector<WSolution> westerland_solve(const Fgl& G, u32 D) {
  const Ring& R = G.ring();
  if (D < 2) throw std::invalid_argument("westerland_solve: D must be >= 2");
  if (D > G.degree_bound())
    throw std::invalid_argument("westerland_solve: D exceeds the law's truncation degree");
  WSolverState st{R, D, {}, nullptr, {}};
  st.S.assign(D + 1, BiPoly(R, D));
  st.S[0].set(0, 0, 1);
  BiPoly sum(R, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) sum.set(i, j, G.coeff(i, j));
  for (u32 k = 1; k <= D; ++k) st.S[k] = bi_mul(st.S[k - 1], sum);
  std::vector<WSolution> out;
  st.out = &out;
  std::vector<u32> c(D + 1, 0), acc((std::size_t)(D + 1) * (D + 1), 0), frees;
  wsolve_rec(st, c, acc, 1, frees);
  return out;
}

bool westerland_holds(const Fgl& G, const Series& f) {
  const Ring& R = G.ring();
  const u32 D = f.degree_bound();
  BiPoly sum(R, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) sum.set(i, j, G.coeff(i, j));
  // lhs = 1 + f(x1 +_G x2)
  BiPoly lhs(R, D), pw(R, D);
  pw.set(0, 0, 1);
  lhs.set(0, 0, 1);
  for (u32 k = 1; k <= D; ++k) {
    pw = bi_mul(pw, sum);
    u32 ck = f.coeff(k);
    if (!ck) continue;
    for (std::size_t t = 0; t < lhs.a.size(); ++t)
      lhs.a[t] = R->fq_add(lhs.a[t], R->fq_mul(ck, pw.a[t]));
  }
  // rhs = (1 + f(x1)) (1 + f(x2))
  BiPoly r1(R, D), r2(R, D);
  r1.set(0, 0, 1);
  r2.set(0, 0, 1);
  for (u32 k = 1; k <= D; ++k) {
    r1.set(k, 0, f.coeff(k));
    r2.set(0, k, f.coeff(k));
  }
  BiPoly rhs = bi_mul(r1, r2);
  return lhs.a == rhs.a;
}

FrobFactor frobenius_factor(const Series& f) {
  if (f.is_zero()) throw std::invalid_argument("frobenius_factor: zero series");
  const Ring& R = f.ring();
  u32 n = 0;
  for (;;) {
    u64 pe = 1;
    for (u32 i = 0; i <= n; ++i) pe *= R->p;
    bool all = true;
    for (u32 e = 1; e <= f.degree_bound(); ++e)
      if (f.coeff(e) && e % pe != 0) all = false;
    if (!all || pe > f.degree_bound()) break;
    ++n;
  }
  u64 pn = 1;
  for (u32 i = 0; i < n; ++i) pn *= R->p;
  FrobFactor ff;
  ff.n = n;
  ff.g = Series(R, f.degree_bound());
  for (u32 e = 1; (u64)e * pn <= f.degree_bound(); ++e) {
    // untwist coefficients through phi^{-n}; exact over F_{p^d}
    ff.g.set_coeff(e, R->fq_frob(f.coeff(e * (u32)pn), -(int)n));
  }
  return ff;
}

Series frobenius_reassemble(const FrobFactor& ff, u32 D) {
  const Ring& R = ff.g.ring();
  u64 pn = 1;
  for (u32 i = 0; i < ff.n; ++i) pn *= R->p;
  Series f(R, D);
  for (u32 e = 1; (u64)e * pn <= D; ++e) {
    u32 c = ff.g.coeff(e);
    if (c) f.set_coeff(e * (u32)pn, R->fq_frob(c, (int)ff.n));
  }
  return f;
}

namespace {

// The witness g from f = g(x^(p^n)) certifies an isomorphism to degree D only
// if it extends to a unit-linear degree-D solution for the p^n-twisted law.
// Truncated artifacts (pure Frobenius tails x^(p^K), Artin-Hasse exponential
// stubs) never extend: their contradiction sits right past the horizon.
bool witness_is_iso(const Fgl& G, u32 D, const FrobFactor& ff) {
  if (ff.g.coeff(1) == 0) return false;
  if (ff.n == 0) return true;  // f itself satisfies the equation to degree D
  const Ring& R = G.ring();
  u64 pn = 1;
  for (u32 i = 0; i < ff.n; ++i) pn *= R->p;
  if (pn > D) return false;
  u32 Dp = (u32)(D / pn);  // degrees of g pinned down by f
  Fgl tw(R, D);
  for (u32 i = 0; i <= D; ++i)
    for (u32 j = 0; i + j <= D; ++j) tw.set_coeff(i, j, R->fq_frob(G.coeff(i, j), (int)ff.n));
  auto ext = westerland_solve(tw, D);
  for (const auto& s : ext) {
    if (s.f.coeff(1) == 0) continue;
    bool agrees = true;
    for (u32 e = 1; e <= Dp; ++e)
      if (s.f.coeff(e) != ff.g.coeff(e)) agrees = false;
    if (agrees) return true;
  }
  return false;
}

}  // namespace

DetectResult detect_gm(const Fgl& G, u32 D) {
  DetectResult res;
  auto sols = westerland_solve(G, D);
  std::optional<FrobFactor> best;
  for (const auto& s : sols) {
    if (s.f.is_zero()) continue;
    FrobFactor ff = frobenius_factor(s.f);
    if (ff.n > 0 && best && best->n == 0) continue;  // cheap cut: n = 0 already found
    if (!witness_is_iso(G, D, ff)) continue;
    if (!best) {
      best = ff;
      continue;
    }
    if (ff.n < best->n) {
      best = ff;
    } else if (ff.n == best->n) {
      for (u32 e = 1; e <= D; ++e) {
        if (ff.g.coeff(e) != best->g.coeff(e)) {
          if (ff.g.coeff(e) < best->g.coeff(e)) best = ff;
          break;
        }
      }
    }
  }
  if (best) {
    res.iso = true;
    res.verdict = "ISO-TO-DEGREE-" + std::to_string(D);
    res.witness = best;
  } else {
    res.verdict = "NO-NONZERO-HOM-TO-DEGREE-" + std::to_string(D);
  }
  return res;
}

} // namespace fglab
