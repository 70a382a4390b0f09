#ifndef FGLAB_BIGRAT_HPP
#define FGLAB_BIGRAT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fglab {

// Arbitrary-precision signed integer, sign + base-2^32 magnitude.
// Only what exact rational arithmetic needs; no attempt at asymptotic
// cleverness, operand sizes here stay small.
class BigInt {
public:
  BigInt() = default;
  BigInt(long long v);

  static BigInt from_u64(unsigned long long v);

  bool is_zero() const { return limbs_.empty(); }
  bool is_one() const { return sign_ > 0 && limbs_.size() == 1 && limbs_[0] == 1; }
  bool is_negative() const { return sign_ < 0; }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return sign_ == o.sign_ && limbs_ == o.limbs_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }

  // -1, 0, +1 comparing this vs o
  int cmp(const BigInt& o) const;

  // quotient truncated toward zero, remainder has the sign of *this
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

  // remainder of |this| mod m for small m
  std::uint32_t mod_u32(std::uint32_t m) const;

  static BigInt gcd(BigInt a, BigInt b); // always >= 0

  // exact multiplicity of prime p in *this (0 for zero input by convention)
  unsigned val_p(std::uint32_t p) const;

  std::string to_string() const;

  std::uint64_t to_u64_abs() const; // throws if magnitude exceeds 64 bits

private:
  int sign_ = 0;                      // 0 iff limbs_ empty
  std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros

  void trim();
  static int cmp_abs(const BigInt& a, const BigInt& b);
  static BigInt add_abs(const BigInt& a, const BigInt& b);
  static BigInt sub_abs(const BigInt& a, const BigInt& b); // |a| >= |b|
  void shl_limbs(std::size_t n);
  bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
  void shr1();
  void shl1();
};

// Exact rational, always normalized: gcd(num, den) = 1, den > 0.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(BigInt n, BigInt d);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  // true iff v_p(den) = 0, i.e. the value lies in Z_(p)
  bool p_integral(std::uint32_t p) const { return den_.mod_u32(p) != 0; }

  // value mod p, requires p_integral
  std::uint32_t mod_p(std::uint32_t p) const;

  std::string to_string() const;

private:
  BigInt num_, den_;
  void normalize();
};

} // namespace fglab

#endif
