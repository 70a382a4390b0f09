#ifndef FGLAB_PADIC_HPP
#define FGLAB_PADIC_HPP

#include <cstdint>
#include <memory>
#include <vector>

namespace fglab {

using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

class Witt;
class Residue;

// Fixed arithmetic context: the truncated Witt ring W(F_{p^d}) / p^N together
// with its residue field F_{p^d}.
//
// The residue field is presented as F_p[x]/(f) with f the lexicographically
// least monic irreducible of degree d (least value of sum c_i p^i over the
// non-leading coefficients).  The Witt-ring modulus is the canonical Hensel
// lift of f: the minimal polynomial over Z/p^N of the Teichmueller lift of a
// root, so the basis generator t satisfies t^(p^d) = t and the Frobenius is
// exactly t -> t^p.
//
// Residue elements are packed as indices sum c_i p^i < p^d.
class RingConfig : public std::enable_shared_from_this<RingConfig> {
public:
  static std::shared_ptr<const RingConfig> make(u32 p, u32 d, u32 N);

  u32 p, d, N;
  u64 pN;       // p^N
  u32 q;        // p^d
  std::vector<u32> f_mod_p;  // monic degree-d residue polynomial, f[i] = coeff of x^i, f[d] = 1
  std::vector<u64> modulus;  // Witt modulus F: coefficients of x^0..x^(d-1); F = x^d + ...

  // residue field operations on packed indices
  u32 fq_add(u32 a, u32 b) const;
  u32 fq_neg(u32 a) const;
  u32 fq_sub(u32 a, u32 b) const { return fq_add(a, fq_neg(b)); }
  u32 fq_mul(u32 a, u32 b) const;
  u32 fq_inv(u32 a) const;
  u32 fq_pow(u32 a, u64 e) const;
  u32 fq_frob(u32 a, int s = 1) const;  // x -> x^(p^s), s may be negative
  u32 fq_scalar(u32 c) const { return c % p; }  // embed F_p

  u64 pow_p(u32 k) const;  // p^k as u64, k <= N

  // Witt element constructors
  Witt zero() const;
  Witt one() const;
  Witt from_int(long long v) const;             // image of an integer
  Witt from_coords(std::vector<u64> c) const;   // basis coordinates mod p^N
  Witt teichmuller(const Residue& x) const;
  Witt lift(const Residue& x) const;            // trivial digit lift

  bool operator==(const RingConfig& o) const { return p == o.p && d == o.d && N == o.N; }

private:
  RingConfig() = default;
  std::vector<u32> exp_table_, log_table_;  // discrete log wrt a generator, q <= 2^20
  std::vector<std::vector<u64>> frob_cols_; // column i = coords of t^(p*i) mod F
  friend class Witt;
};

using Ring = std::shared_ptr<const RingConfig>;

// Element of F_{p^d}.
class Residue {
public:
  Residue() = default;
  Residue(Ring ring, u32 idx) : ring_(std::move(ring)), idx_(idx) {}

  const Ring& ring() const { return ring_; }
  u32 idx() const { return idx_; }
  bool is_zero() const { return idx_ == 0; }
  std::vector<u32> coords() const;

  Residue operator+(const Residue& o) const { return {ring_, ring_->fq_add(idx_, o.idx_)}; }
  Residue operator-(const Residue& o) const { return {ring_, ring_->fq_sub(idx_, o.idx_)}; }
  Residue operator*(const Residue& o) const { return {ring_, ring_->fq_mul(idx_, o.idx_)}; }
  Residue inv() const { return {ring_, ring_->fq_inv(idx_)}; }
  bool operator==(const Residue& o) const { return idx_ == o.idx_; }
  bool operator!=(const Residue& o) const { return idx_ != o.idx_; }

private:
  Ring ring_;
  u32 idx_ = 0;
};

// Element of W(F_{p^d}) known modulo p^eff, 1 <= eff <= N.  Fresh elements
// have eff = N; dividing by p costs one digit.  Coordinates are kept reduced
// into [0, p^eff).
class Witt {
public:
  Witt() = default;
  Witt(Ring ring, std::vector<u64> coords, u32 eff);

  const Ring& ring() const { return ring_; }
  const std::vector<u64>& coords() const { return coords_; }
  u32 eff() const { return eff_; }

  Witt operator+(const Witt& o) const;
  Witt operator-(const Witt& o) const;
  Witt operator-() const;
  Witt operator*(const Witt& o) const;
  Witt mul_int(long long k) const;

  bool operator==(const Witt& o) const;  // compares mod p^min(eff)
  bool operator!=(const Witt& o) const { return !(*this == o); }
  bool is_zero() const;

  bool is_unit() const;
  Witt inv() const;  // throws std::domain_error on non-units

  Witt frobenius(int s = 1) const;  // phi^s, s may be negative
  Witt norm() const;                // product of the d conjugates
  Residue reduce() const;

  bool divisible_by_p(u32 m = 1) const;
  Witt div_by_p(u32 m = 1) const;  // exact division by p^m; throws if not divisible
                                   // or if precision would drop below 1

  // forget digits: lower effective precision to e
  Witt truncated(u32 e) const;

private:
  Ring ring_;
  std::vector<u64> coords_;
  u32 eff_ = 0;
  void canonicalize();
};

bool is_prime_u32(u32 n);

} // namespace fglab

#endif
