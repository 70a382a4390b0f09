#ifndef FGLAB_BP_HPP
#define FGLAB_BP_HPP

#include "fglab/bigrat.hpp"
#include "fglab/padic.hpp"

#include <map>
#include <string>
#include <vector>

namespace fglab {

// nu(m) = (p^(m+1) - 1)/(p - 1)
u64 nu(u32 p, u32 m);

// Element of F_p[v_1..v_h], graded by |v_i| = 2(p^i - 1).  Sparse canonical
// form: exponent vectors of length h mapped to nonzero coefficients mod p.
class GradedPoly {
public:
  GradedPoly() = default;
  GradedPoly(u32 p, u32 h) : p_(p), h_(h) {}
  static GradedPoly one(u32 p, u32 h);
  static GradedPoly gen(u32 p, u32 h, u32 i);  // v_i, 1 <= i <= h

  u32 p() const { return p_; }
  u32 h() const { return h_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<u16>, u32>& terms() const { return terms_; }

  void add_term(const std::vector<u16>& exps, u32 coeff);

  GradedPoly operator+(const GradedPoly& o) const;
  GradedPoly operator*(const GradedPoly& o) const;
  GradedPoly scaled(u32 c) const;
  bool operator==(const GradedPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const GradedPoly& o) const { return !(*this == o); }
  bool operator<(const GradedPoly& o) const { return terms_ < o.terms_; }

  // kill v_1 .. v_{r-1}; the mod-[I_r] coefficient reduction
  GradedPoly mod_Ir(u32 r) const;

  // topological degree when homogeneous; throws otherwise (zero -> -1)
  long long degree() const;

  static u64 weight(u32 p, const std::vector<u16>& exps);  // 2 sum e_i (p^i - 1)

  std::string to_string() const;  // "1", "v1", "v1^2*v2", monomials joined " + "

private:
  u32 p_ = 0, h_ = 0;
  std::map<std::vector<u16>, u32> terms_;
};

// The BP<h> formal group law mod p to total degree D: coefficient of x^i y^j
// is a GradedPoly over F_p[v_1..v_h].
struct BpFgl {
  u32 p = 0, h = 0, D = 0;
  std::map<std::pair<u32, u32>, GradedPoly> coeffs;  // nonzero entries only
  GradedPoly coeff(u32 i, u32 j) const;
};

// Hazewinkel-logarithm construction over exact rationals; asserts
// p-integrality of every coefficient before reducing mod p.
// Results are memoized per (p, h, D); concurrent readers are safe.
const BpFgl& bp_fgl_mod_p(u32 p, u32 h, u32 D);

// [p]-series of bp_fgl_mod_p: entry e is the coefficient of x^e
std::vector<GradedPoly> bp_p_series(u32 p, u32 h, u32 D);

// the same with v_1..v_{r-1} killed; 0 <= r <= h (r = h+1 is rejected)
std::vector<GradedPoly> p_series_mod_Ir(u32 p, u32 h, u32 r, u32 D);

} // namespace fglab

#endif
