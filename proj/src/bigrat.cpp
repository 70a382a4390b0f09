#include "fglab/bigrat.hpp"

#include <algorithm>
#include <stdexcept>

namespace fglab {

namespace {
constexpr std::uint64_t BASE = 1ull << 32;
}

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  unsigned long long a = v < 0 ? -(unsigned long long)v : (unsigned long long)v;
  while (a) {
    limbs_.push_back((std::uint32_t)(a & 0xffffffffu));
    a >>= 32;
  }
}

BigInt BigInt::from_u64(unsigned long long v) {
  BigInt r;
  if (v == 0) return r;
  r.sign_ = 1;
  while (v) {
    r.limbs_.push_back((std::uint32_t)(v & 0xffffffffu));
    v >>= 32;
  }
  return r;
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) sign_ = 0;
}

int BigInt::cmp_abs(const BigInt& a, const BigInt& b) {
  if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

int BigInt::cmp(const BigInt& o) const {
  if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
  int c = cmp_abs(*this, o);
  return sign_ >= 0 ? c : -c;
}

BigInt BigInt::add_abs(const BigInt& a, const BigInt& b) {
  BigInt r;
  const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
  r.limbs_.resize(n + 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = carry;
    if (i < a.limbs_.size()) s += a.limbs_[i];
    if (i < b.limbs_.size()) s += b.limbs_[i];
    r.limbs_[i] = (std::uint32_t)(s & 0xffffffffu);
    carry = s >> 32;
  }
  r.limbs_[n] = (std::uint32_t)carry;
  r.sign_ = 1;
  r.trim();
  return r;
}

BigInt BigInt::sub_abs(const BigInt& a, const BigInt& b) {
  BigInt r;
  r.limbs_.resize(a.limbs_.size(), 0);
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    std::int64_t s = (std::int64_t)a.limbs_[i] - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
    if (s < 0) {
      s += (std::int64_t)BASE;
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.limbs_[i] = (std::uint32_t)s;
  }
  r.sign_ = 1;
  r.trim();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  if (sign_ == o.sign_) {
    BigInt r = add_abs(*this, o);
    r.sign_ = sign_;
    return r;
  }
  int c = cmp_abs(*this, o);
  if (c == 0) return BigInt();
  BigInt r = c > 0 ? sub_abs(*this, o) : sub_abs(o, *this);
  r.sign_ = c > 0 ? sign_ : o.sign_;
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (sign_ == 0 || o.sign_ == 0) return BigInt();
  BigInt r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
      std::uint64_t cur = r.limbs_[i + j] + (std::uint64_t)limbs_[i] * o.limbs_[j] + carry;
      r.limbs_[i + j] = (std::uint32_t)(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    std::size_t k = i + o.limbs_.size();
    while (carry) {
      std::uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = (std::uint32_t)(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  r.sign_ = sign_ * o.sign_;
  r.trim();
  return r;
}

void BigInt::shl_limbs(std::size_t n) {
  if (sign_ == 0 || n == 0) return;
  limbs_.insert(limbs_.begin(), n, 0);
}

void BigInt::shr1() {
  std::uint32_t carry = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    std::uint32_t cur = limbs_[i];
    limbs_[i] = (cur >> 1) | (carry << 31);
    carry = cur & 1u;
  }
  trim();
}

void BigInt::shl1() {
  if (sign_ == 0) return;
  std::uint32_t carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint32_t cur = limbs_[i];
    limbs_[i] = (cur << 1) | carry;
    carry = cur >> 31;
  }
  if (carry) limbs_.push_back(carry);
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
  if (cmp_abs(a, b) < 0) {
    q = BigInt();
    r = a;
    return;
  }
  // bit-by-bit long division on magnitudes; slow but simple and exact
  BigInt rem, quo;
  quo.limbs_.assign(a.limbs_.size(), 0);
  for (std::size_t bit = a.limbs_.size() * 32; bit-- > 0;) {
    rem.shl1();
    std::uint32_t abit = (a.limbs_[bit / 32] >> (bit % 32)) & 1u;
    if (abit) {
      if (rem.sign_ == 0) {
        rem.sign_ = 1;
        rem.limbs_.assign(1, 1);
      } else {
        rem.limbs_[0] |= 1u;
      }
    }
    if (cmp_abs(rem, b) >= 0) {
      rem = sub_abs(rem, b);
      quo.limbs_[bit / 32] |= (1u << (bit % 32));
    }
  }
  quo.sign_ = 1;
  quo.trim();
  rem.trim();
  q = quo;
  r = rem;
  q.sign_ = q.limbs_.empty() ? 0 : a.sign_ * b.sign_;
  r.sign_ = r.limbs_.empty() ? 0 : a.sign_;
}

std::uint32_t BigInt::mod_u32(std::uint32_t m) const {
  if (m == 0) throw std::domain_error("BigInt: mod 0");
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    rem = ((rem << 32) | limbs_[i]) % m;
  }
  return (std::uint32_t)rem;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.limbs_.empty() ? 0 : 1;
  b.sign_ = b.limbs_.empty() ? 0 : 1;
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  // binary gcd
  unsigned shift = 0;
  while (a.is_even() && b.is_even()) {
    a.shr1();
    b.shr1();
    ++shift;
  }
  while (a.is_even()) a.shr1();
  while (!b.is_zero()) {
    while (b.is_even()) b.shr1();
    if (cmp_abs(a, b) > 0) std::swap(a, b);
    b = sub_abs(b, a);
    b.sign_ = b.limbs_.empty() ? 0 : 1;
  }
  for (unsigned i = 0; i < shift; ++i) a.shl1();
  return a;
}

unsigned BigInt::val_p(std::uint32_t p) const {
  if (is_zero()) return 0;
  BigInt a = *this, q, r;
  a.sign_ = 1;
  BigInt bp((long long)p);
  unsigned v = 0;
  for (;;) {
    divmod(a, bp, q, r);
    if (!r.is_zero()) break;
    a = q;
    ++v;
  }
  return v;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt a = *this, q, r;
  a.sign_ = 1;
  BigInt ten(10), chunk(1000000000);
  std::string out;
  while (!a.is_zero()) {
    divmod(a, chunk, q, r);
    std::uint32_t part = r.is_zero() ? 0 : r.limbs_[0];
    for (int i = 0; i < 9; ++i) {
      out.push_back(char('0' + part % 10));
      part /= 10;
    }
    a = q;
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  if (sign_ < 0) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t BigInt::to_u64_abs() const {
  if (limbs_.size() > 2) throw std::overflow_error("BigInt: does not fit in 64 bits");
  std::uint64_t v = 0;
  if (limbs_.size() > 1) v = (std::uint64_t)limbs_[1] << 32;
  if (!limbs_.empty()) v |= limbs_[0];
  return v;
}

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  normalize();
}

void Rational::normalize() {
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (!g.is_one()) {
    BigInt q, r;
    BigInt::divmod(num_, g, q, r);
    num_ = q;
    BigInt::divmod(den_, g, q, r);
    den_ = q;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(num_ * o.den_, den_ * o.num_);
}
Rational Rational::operator-() const { return Rational(-num_, den_); }

std::uint32_t Rational::mod_p(std::uint32_t p) const {
  std::uint32_t d = den_.mod_u32(p);
  if (d == 0) throw std::domain_error("Rational: not p-integral at p=" + std::to_string(p));
  std::uint32_t n = num_.mod_u32(p);
  if (num_.is_negative() && n != 0) n = p - n;
  // d^(p-2) mod p
  std::uint64_t inv = 1, base = d, e = p - 2;
  while (e) {
    if (e & 1) inv = inv * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return (std::uint32_t)((std::uint64_t)n * inv % p);
}

std::string Rational::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

} // namespace fglab
