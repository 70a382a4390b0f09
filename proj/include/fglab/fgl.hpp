#ifndef FGLAB_FGL_HPP
#define FGLAB_FGL_HPP

#include "fglab/padic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fglab {

// One-variable polynomial over F_{p^d}, dense to degree D, no constant term
// unless allow_constant is set at construction.
class Series {
public:
  Series() = default;
  Series(Ring ring, u32 D);

  const Ring& ring() const { return ring_; }
  u32 degree_bound() const { return D_; }
  u32 coeff(u32 i) const { return i <= D_ ? c_[i] : 0; }
  void set_coeff(u32 i, u32 v);
  bool is_zero() const;
  u32 order() const;  // lowest nonzero exponent; D+1 when zero

  bool operator==(const Series& o) const { return c_ == o.c_; }
  bool operator!=(const Series& o) const { return !(*this == o); }

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;

private:
  Ring ring_;
  u32 D_ = 0;
  std::vector<u32> c_;  // packed F_q values, index = exponent
};

// Commutative one-dimensional formal group law over F_{p^d}, coefficients
// a_{ij} stored densely for i + j <= D.
class Fgl {
public:
  Fgl() = default;
  Fgl(Ring ring, u32 D);

  const Ring& ring() const { return ring_; }
  u32 degree_bound() const { return D_; }
  u32 coeff(u32 i, u32 j) const;
  void set_coeff(u32 i, u32 j, u32 v);
  bool operator==(const Fgl& o) const { return D_ == o.D_ && c_ == o.c_; }

  // substitute two univariate series with zero constant term
  Series eval(const Series& A, const Series& B) const;

private:
  Ring ring_;
  u32 D_ = 0;
  std::vector<u32> c_;
  std::size_t idx(u32 i, u32 j) const { return (std::size_t)i * (D_ + 1) + j; }
};

struct FglCheck {
  bool unital = false;       // a_10 = a_01 = 1, a_00 = 0
  bool commutative = false;  // a_ij = a_ji
  bool associative = false;  // F(F(x,y),z) = F(x,F(y,z)) mod degree assoc_degree+1
  u32 assoc_degree = 0;
  bool pass() const { return unital && commutative && associative; }
};

// assoc_degree <= D; the trivariate associativity check is cubic in memory,
// keep it moderate
FglCheck validate_fgl(const Fgl& F, u32 assoc_degree);

Fgl gm_law(const Ring& ring, u32 D);
Fgl ga_law(const Ring& ring, u32 D);

// Height-n Honda law over F_p to total degree D, from the functional-equation
// logarithm l(x) = x + l(x^{p^n})/p, F = l^{-1}(l(x)+l(y)) computed in
// fixed-point p-local arithmetic and reduced mod p.
Fgl honda_law(u32 p, u32 n, u32 D);

// coordinate change u^{-1} F(ux, uy) for a unit u
Fgl conjugate_law(const Fgl& F, u32 unit);

Series p_series(const Fgl& F);

struct HeightResult {
  std::optional<u32> exact;
  u32 lower_bound = 0;  // height >= lower_bound when exact is empty
};

HeightResult height(const Fgl& F);

// One solution of 1 + f(x1 +_G x2) = (1+f(x1))(1+f(x2)) to degree D, with the
// degrees at which the coefficient was a free choice (the p-power slots).
struct WSolution {
  Series f;
  std::vector<u32> free_degrees;
};

std::vector<WSolution> westerland_solve(const Fgl& G, u32 D);

// independent check used by tests and detect_gm
bool westerland_holds(const Fgl& G, const Series& f);

struct FrobFactor {
  u32 n = 0;
  Series g;
};

FrobFactor frobenius_factor(const Series& f);
Series frobenius_reassemble(const FrobFactor& ff, u32 D);

struct DetectResult {
  bool iso = false;
  std::string verdict;  // "ISO-TO-DEGREE-D" / "NO-NONZERO-HOM-TO-DEGREE-D"
  std::optional<FrobFactor> witness;
};

DetectResult detect_gm(const Fgl& G, u32 D);

} // namespace fglab

#endif
