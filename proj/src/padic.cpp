#include "fglab/padic.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace fglab {

namespace {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// dense F_p[x] helpers used only during ring construction
using PolyP = std::vector<u32>;

PolyP polyp_mulmod(const PolyP& a, const PolyP& b, const PolyP& f, u32 p) {
  const std::size_t d = f.size() - 1;
  std::vector<u64> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + (u64)a[i] * b[j]) % p;
  for (std::size_t k = prod.size(); k-- > d;) {
    u64 c = prod[k] % p;
    if (!c) continue;
    prod[k] = 0;
    for (std::size_t i = 0; i < d; ++i)
      prod[k - d + i] = (prod[k - d + i] + c * (u64)(p - f[i] % p)) % p;
  }
  PolyP r(d, 0);
  for (std::size_t i = 0; i < d && i < prod.size(); ++i) r[i] = (u32)(prod[i] % p);
  return r;
}

PolyP polyp_powmod(PolyP a, u64 e, const PolyP& f, u32 p) {
  PolyP r(f.size() - 1, 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = polyp_mulmod(r, a, f, p);
    a = polyp_mulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

PolyP polyp_gcd(PolyP a, PolyP b, u32 p) {
  auto deg = [](const PolyP& x) {
    int d = -1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) d = (int)i;
    return d;
  };
  auto inv_mod_p = [p](u32 a) { return (u32)powmod(a, p - 2, p); };
  while (deg(b) >= 0) {
    int da = deg(a), db = deg(b);
    if (da < db) {
      std::swap(a, b);
      continue;
    }
    u32 c = (u32)((u64)a[da] * inv_mod_p(b[db]) % p);
    for (int i = 0; i <= db; ++i) a[da - db + i] = (u32)((a[da - db + i] + (u64)(p - 1) * c % p * b[i]) % p);
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (deg(a) < deg(b)) std::swap(a, b);
  }
  return a;
}

bool irreducible(const PolyP& body, u32 d, u32 p) {
  // Rabin: x^(p^d) = x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for prime r | d
  PolyP f = body;
  f.push_back(1);
  PolyP x(d, 0);
  if (d == 1) {
    return true;  // any monic linear poly
  }
  x[1] = 1;
  u64 pd = 1;
  for (u32 i = 0; i < d; ++i) pd *= p;
  PolyP xq = polyp_powmod(x, pd, f, p);
  if (xq != x) return false;
  for (u32 r = 2; r <= d; ++r) {
    if (d % r) continue;
    bool rprime = true;
    for (u32 s = 2; s * s <= r; ++s)
      if (r % s == 0) rprime = false;
    if (!rprime) continue;
    u64 e = 1;
    for (u32 i = 0; i < d / r; ++i) e *= p;
    PolyP y = polyp_powmod(x, e, f, p);
    // y - x
    PolyP diff(d, 0);
    for (u32 i = 0; i < d; ++i) diff[i] = (u32)((y[i] + (u64)(p - 1) * x[i]) % p);
    PolyP g = polyp_gcd(f, diff, p);
    int dg = -1;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i]) dg = (int)i;
    if (dg > 0) return false;
  }
  return true;
}

// degree < d polynomials over Z/p^N, reduced by a monic modulus
struct WPolyCtx {
  u32 d;
  u64 pN;
  const std::vector<u64>* mod;  // coefficients of x^0..x^(d-1)
};

std::vector<u64> wpoly_mul(const WPolyCtx& c, const std::vector<u64>& a, const std::vector<u64>& b) {
  std::vector<u64> prod(2 * c.d - 1, 0);
  for (u32 i = 0; i < c.d; ++i) {
    if (!a[i]) continue;
    for (u32 j = 0; j < c.d; ++j) {
      if (!b[j]) continue;
      prod[i + j] = (u64)(((u128)prod[i + j] + (u128)a[i] * b[j]) % c.pN);
    }
  }
  for (std::size_t k = prod.size(); k-- > c.d;) {
    u64 t = prod[k];
    if (!t) continue;
    prod[k] = 0;
    for (u32 i = 0; i < c.d; ++i) {
      u64 sub = mulmod(t, (*c.mod)[i], c.pN);
      prod[k - c.d + i] = (prod[k - c.d + i] + c.pN - sub) % c.pN;
    }
  }
  prod.resize(c.d);
  return prod;
}

std::vector<u64> wpoly_pow(const WPolyCtx& c, std::vector<u64> a, u64 e) {
  std::vector<u64> r(c.d, 0);
  r[0] = 1 % c.pN;
  while (e) {
    if (e & 1) r = wpoly_mul(c, r, a);
    a = wpoly_mul(c, a, a);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u32(u32 n) {
  if (n < 2) return false;
  for (u32 i = 2; (u64)i * i <= n; ++i)
    if (n % i == 0) return false;
  return true;
}

std::shared_ptr<const RingConfig> RingConfig::make(u32 p, u32 d, u32 N) {
  if (!is_prime_u32(p)) throw std::invalid_argument("make_ring: p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw std::invalid_argument("make_ring: d must be >= 1");
  if (N < 1) throw std::invalid_argument("make_ring: N must be >= 1");

  auto rc = std::shared_ptr<RingConfig>(new RingConfig());
  rc->p = p;
  rc->d = d;
  rc->N = N;

  u128 pn = 1;
  for (u32 i = 0; i < N; ++i) {
    pn *= p;
    if (pn >= ((u128)1 << 62)) throw std::invalid_argument("make_ring: p^N exceeds 2^62");
  }
  rc->pN = (u64)pn;

  u64 q = 1;
  for (u32 i = 0; i < d; ++i) {
    q *= p;
    if (q > (1u << 20)) throw std::invalid_argument("make_ring: residue field larger than 2^20");
  }
  rc->q = (u32)q;

  // lexicographically least monic irreducible: smallest sum c_i p^i
  rc->f_mod_p.assign(d + 1, 0);
  rc->f_mod_p[d] = 1;
  {
    bool found = false;
    for (u32 body = 0; body < rc->q && !found; ++body) {
      PolyP cand(d, 0);
      u32 b = body;
      for (u32 i = 0; i < d; ++i) {
        cand[i] = b % p;
        b /= p;
      }
      if (d >= 1 && irreducible(cand, d, p)) {
        for (u32 i = 0; i < d; ++i) rc->f_mod_p[i] = cand[i];
        found = true;
      }
    }
    if (!found) throw std::logic_error("make_ring: no irreducible polynomial found");
  }

  // residue field exp/log tables from a multiplicative generator
  {
    const u32 qm1 = rc->q - 1;
    PolyP f(rc->f_mod_p.begin(), rc->f_mod_p.end());
    auto pack = [&](const PolyP& a) {
      u32 v = 0;
      for (u32 i = d; i-- > 0;) v = v * p + (i < a.size() ? a[i] : 0);
      return v;
    };
    rc->exp_table_.assign(qm1 ? qm1 : 1, 1);
    rc->log_table_.assign(rc->q, 0);
    bool ok = false;
    for (u32 g = 1; g < rc->q && !ok; ++g) {
      PolyP ge(d, 0);
      u32 t = g;
      for (u32 i = 0; i < d; ++i) {
        ge[i] = t % p;
        t /= p;
      }
      PolyP acc(d, 0);
      acc[0] = 1;
      std::vector<u32> expt(qm1 ? qm1 : 1, 0);
      std::vector<u32> logt(rc->q, 0);
      u32 k = 0;
      bool generator = true;
      for (k = 0; k < qm1; ++k) {
        u32 v = pack(acc);
        if (v == 1 && k > 0) {
          generator = false;
          break;
        }
        expt[k] = v;
        logt[v] = k;
        acc = polyp_mulmod(acc, ge, f, p);
      }
      if (generator && qm1 > 0 && pack(acc) != 1) generator = false;
      if (generator || qm1 == 0) {
        rc->exp_table_ = std::move(expt);
        rc->log_table_ = std::move(logt);
        ok = true;
      }
    }
    if (!ok) throw std::logic_error("make_ring: no field generator found");
  }

  // Witt modulus: minimal polynomial of the Teichmueller lift
  rc->modulus.assign(d, 0);
  if (d == 1) {
    rc->modulus[0] = 0;  // F = x, generator unused
    rc->frob_cols_.assign(1, std::vector<u64>{1 % rc->pN});
  } else {
    std::vector<u64> triv(d, 0);
    for (u32 i = 0; i < d; ++i) triv[i] = rc->f_mod_p[i] % rc->pN;
    WPolyCtx c0{d, rc->pN, &triv};
    // Teichmueller fixed point of x under y -> y^q
    std::vector<u64> om(d, 0);
    om[1] = 1;
    for (u32 it = 0; it < 2 * N + 8; ++it) {
      auto nx = wpoly_pow(c0, om, rc->q);
      if (nx == om) break;
      om = nx;
    }
    if (wpoly_pow(c0, om, rc->q) != om) throw std::logic_error("make_ring: Teichmueller iteration failed");

    // conjugates om^(p^i); F(T) = prod (T - conj_i), coefficients must be scalars
    std::vector<std::vector<u64>> Fc(1, std::vector<u64>(d, 0));
    Fc[0][0] = 1;  // F = 1
    for (u32 i = 0; i < d; ++i) {
      u64 e = 1;
      for (u32 j = 0; j < i; ++j) e *= p;
      auto conj = wpoly_pow(c0, om, e);
      // multiply F by (T - conj)
      std::vector<std::vector<u64>> nf(Fc.size() + 1, std::vector<u64>(d, 0));
      for (std::size_t k = 0; k < Fc.size(); ++k) {
        for (u32 t = 0; t < d; ++t) nf[k + 1][t] = (nf[k + 1][t] + Fc[k][t]) % rc->pN;
        auto prod = wpoly_mul(c0, Fc[k], conj);
        for (u32 t = 0; t < d; ++t) nf[k][t] = (nf[k][t] + rc->pN - prod[t]) % rc->pN;
      }
      Fc = std::move(nf);
    }
    if (Fc.size() != d + 1) throw std::logic_error("make_ring: bad modulus degree");
    for (u32 k = 0; k < d; ++k) {
      for (u32 t = 1; t < d; ++t)
        if (Fc[k][t] != 0) throw std::logic_error("make_ring: modulus coefficient not Galois-fixed");
      rc->modulus[k] = Fc[k][0];
      if (rc->modulus[k] % p != rc->f_mod_p[k]) throw std::logic_error("make_ring: modulus does not lift f");
    }
    for (u32 t = 1; t < d; ++t)
      if (Fc[d][t] != 0 || Fc[d][0] != 1) throw std::logic_error("make_ring: modulus not monic");

    // Frobenius columns: coords of (x^p)^i mod F; check x^(p^d) = x
    WPolyCtx c{d, rc->pN, &rc->modulus};
    std::vector<u64> x(d, 0);
    x[1] = 1;
    auto xp = wpoly_pow(c, x, p);
    rc->frob_cols_.resize(d);
    std::vector<u64> acc(d, 0);
    acc[0] = 1;
    for (u32 i = 0; i < d; ++i) {
      rc->frob_cols_[i] = acc;
      acc = wpoly_mul(c, acc, xp);
    }
    // acc is now (x^p)^d = phi^... sanity: phi(x)^d-th power equals x^(p^d)? check x^q = x instead
    if (wpoly_pow(c, x, rc->q) != x) throw std::logic_error("make_ring: generator is not Teichmueller");
  }
  return rc;
}

u64 RingConfig::pow_p(u32 k) const {
  u64 r = 1;
  for (u32 i = 0; i < k; ++i) r *= p;
  return r;
}

u32 RingConfig::fq_add(u32 a, u32 b) const {
  u32 r = 0, m = 1;
  for (u32 i = 0; i < d; ++i) {
    r += (a % p + b % p) % p * m;
    a /= p;
    b /= p;
    m *= p;
  }
  return r;
}

u32 RingConfig::fq_neg(u32 a) const {
  u32 r = 0, m = 1;
  for (u32 i = 0; i < d; ++i) {
    r += (p - a % p) % p * m;
    a /= p;
    m *= p;
  }
  return r;
}

u32 RingConfig::fq_mul(u32 a, u32 b) const {
  if (a == 0 || b == 0) return 0;
  if (q == 2) return 1;
  u64 s = (u64)log_table_[a] + log_table_[b];
  return exp_table_[s % (q - 1)];
}

u32 RingConfig::fq_inv(u32 a) const {
  if (a == 0) throw std::domain_error("fq_inv: zero");
  if (q == 2) return 1;
  u32 l = log_table_[a];
  return exp_table_[(q - 1 - l) % (q - 1)];
}

u32 RingConfig::fq_pow(u32 a, u64 e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (q == 2) return 1;
  u64 l = (u64)log_table_[a] * (e % (q - 1)) % (q - 1);
  return exp_table_[l];
}

u32 RingConfig::fq_frob(u32 a, int s) const {
  int ss = ((s % (int)d) + (int)d) % (int)d;
  u64 e = 1;
  for (int i = 0; i < ss; ++i) e *= p;
  return fq_pow(a, e);
}

Witt RingConfig::zero() const { return Witt(shared_from_this(), std::vector<u64>(d, 0), N); }

Witt RingConfig::one() const {
  std::vector<u64> c(d, 0);
  c[0] = 1 % pN;
  return Witt(shared_from_this(), std::move(c), N);
}

Witt RingConfig::from_int(long long v) const {
  long long m = (long long)(v % (long long)pN);
  if (m < 0) m += (long long)pN;
  std::vector<u64> c(d, 0);
  c[0] = (u64)m;
  return Witt(shared_from_this(), std::move(c), N);
}

Witt RingConfig::from_coords(std::vector<u64> c) const {
  if (c.size() != d) throw std::invalid_argument("from_coords: wrong length");
  for (auto& x : c) x %= pN;
  return Witt(shared_from_this(), std::move(c), N);
}

Witt RingConfig::lift(const Residue& x) const {
  std::vector<u64> c(d, 0);
  u32 v = x.idx();
  for (u32 i = 0; i < d; ++i) {
    c[i] = v % p;
    v /= p;
  }
  return Witt(shared_from_this(), std::move(c), N);
}

Witt RingConfig::teichmuller(const Residue& x) const {
  Witt t = lift(x);
  for (u32 it = 0; it < 2 * N + 8; ++it) {
    // t -> t^(p^d), a contraction onto the Teichmueller section
    Witt acc = one();
    u64 e = q;
    Witt base = t;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    if (acc == t) return t;
    t = acc;
  }
  throw std::logic_error("teichmuller: iteration did not converge");
}

std::vector<u32> Residue::coords() const {
  const auto& r = *ring_;
  std::vector<u32> c(r.d, 0);
  u32 v = idx_;
  for (u32 i = 0; i < r.d; ++i) {
    c[i] = v % r.p;
    v /= r.p;
  }
  return c;
}

Witt::Witt(Ring ring, std::vector<u64> coords, u32 eff)
    : ring_(std::move(ring)), coords_(std::move(coords)), eff_(eff) {
  if (coords_.size() != ring_->d) throw std::invalid_argument("Witt: wrong coordinate count");
  if (eff_ < 1 || eff_ > ring_->N) throw std::invalid_argument("Witt: bad effective precision");
  canonicalize();
}

void Witt::canonicalize() {
  u64 pe = ring_->pow_p(eff_);
  for (auto& c : coords_) c %= pe;
}

Witt Witt::operator+(const Witt& o) const {
  u32 e = std::min(eff_, o.eff_);
  u64 pe = ring_->pow_p(e);
  std::vector<u64> c(ring_->d);
  for (u32 i = 0; i < ring_->d; ++i) c[i] = (coords_[i] + o.coords_[i]) % pe;
  return Witt(ring_, std::move(c), e);
}

Witt Witt::operator-() const {
  u64 pe = ring_->pow_p(eff_);
  std::vector<u64> c(ring_->d);
  for (u32 i = 0; i < ring_->d; ++i) c[i] = (pe - coords_[i] % pe) % pe;
  return Witt(ring_, std::move(c), eff_);
}

Witt Witt::operator-(const Witt& o) const { return *this + (-o); }

Witt Witt::operator*(const Witt& o) const {
  u32 e = std::min(eff_, o.eff_);
  u64 pe = ring_->pow_p(e);
  const u32 d = ring_->d;
  if (d == 1) {
    return Witt(ring_, {mulmod(coords_[0] % pe, o.coords_[0] % pe, pe)}, e);
  }
  WPolyCtx c{d, pe, &ring_->modulus};
  // modulus coefficients may exceed pe; reduce on the fly
  std::vector<u64> mod(d);
  for (u32 i = 0; i < d; ++i) mod[i] = ring_->modulus[i] % pe;
  c.mod = &mod;
  std::vector<u64> a(coords_), b(o.coords_);
  for (auto& x : a) x %= pe;
  for (auto& x : b) x %= pe;
  return Witt(ring_, wpoly_mul(c, a, b), e);
}

Witt Witt::mul_int(long long k) const {
  u64 pe = ring_->pow_p(eff_);
  long long m = k % (long long)pe;
  if (m < 0) m += (long long)pe;
  std::vector<u64> c(ring_->d);
  for (u32 i = 0; i < ring_->d; ++i) c[i] = mulmod(coords_[i], (u64)m, pe);
  return Witt(ring_, std::move(c), eff_);
}

bool Witt::operator==(const Witt& o) const {
  u32 e = std::min(eff_, o.eff_);
  u64 pe = ring_->pow_p(e);
  for (u32 i = 0; i < ring_->d; ++i)
    if (coords_[i] % pe != o.coords_[i] % pe) return false;
  return true;
}

bool Witt::is_zero() const {
  for (auto c : coords_)
    if (c) return false;
  return true;
}

Residue Witt::reduce() const {
  u32 v = 0;
  for (u32 i = ring_->d; i-- > 0;) v = v * ring_->p + (u32)(coords_[i] % ring_->p);
  return Residue(ring_, v);
}

bool Witt::is_unit() const { return !reduce().is_zero(); }

Witt Witt::inv() const {
  if (!is_unit()) throw std::domain_error("Witt::inv: not a unit");
  Witt t = ring_->lift(reduce().inv()).truncated(eff_);
  Witt two = ring_->from_int(2).truncated(eff_);
  for (u32 it = 0; it < 8 * sizeof(u32); ++it) {
    Witt nt = t * (two - *this * t);
    if (nt == t) break;
    t = nt;
  }
  if (!((*this * t) == ring_->one().truncated(eff_))) throw std::logic_error("Witt::inv: Newton failed");
  return t;
}

Witt Witt::frobenius(int s) const {
  const u32 d = ring_->d;
  int ss = ((s % (int)d) + (int)d) % (int)d;
  Witt r = *this;
  u64 pe = ring_->pow_p(eff_);
  for (int k = 0; k < ss; ++k) {
    std::vector<u64> nc(d, 0);
    for (u32 i = 0; i < d; ++i) {
      if (!r.coords_[i]) continue;
      for (u32 t = 0; t < d; ++t) {
        nc[t] = (nc[t] + (u64)((u128)r.coords_[i] * (ring_->frob_cols_[i][t] % pe) % pe)) % pe;
      }
    }
    r.coords_ = std::move(nc);
  }
  return r;
}

Witt Witt::norm() const {
  Witt acc = ring_->one().truncated(eff_);
  for (u32 i = 0; i < ring_->d; ++i) acc = acc * frobenius((int)i);
  // product of all conjugates is Galois-fixed
  u64 pe = ring_->pow_p(acc.eff_);
  for (u32 t = 1; t < ring_->d; ++t)
    if (acc.coords_[t] % pe != 0) throw std::logic_error("Witt::norm: result not in base ring");
  return acc;
}

bool Witt::divisible_by_p(u32 m) const {
  u64 pm = ring_->pow_p(std::min(m, eff_));
  for (auto c : coords_)
    if (c % pm) return false;
  return true;
}

Witt Witt::div_by_p(u32 m) const {
  if (m == 0) return *this;
  if (eff_ <= m)
    throw std::domain_error("Witt::div_by_p: effective precision exhausted");
  u64 pm = ring_->pow_p(m);
  std::vector<u64> c(ring_->d);
  for (u32 i = 0; i < ring_->d; ++i) {
    if (coords_[i] % pm) throw std::domain_error("Witt::div_by_p: not divisible by p^" + std::to_string(m));
    c[i] = coords_[i] / pm;
  }
  return Witt(ring_, std::move(c), eff_ - m);
}

Witt Witt::truncated(u32 e) const {
  if (e >= eff_) return *this;
  if (e < 1) throw std::invalid_argument("Witt::truncated: precision must stay >= 1");
  return Witt(ring_, coords_, e);
}

} // namespace fglab
