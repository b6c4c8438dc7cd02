#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace lk {

// Arbitrary-precision signed integer, sign + base-2^32 magnitude.
// Only the operations the exact pipelines need.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v) {
    if (v < 0) { neg_ = true; }
    unsigned long long m = neg_ ? -(unsigned long long)v : (unsigned long long)v;
    while (m) { mag_.push_back((uint32_t)(m & 0xffffffffu)); m >>= 32; }
  }

  bool is_zero() const { return mag_.empty(); }
  bool is_negative() const { return neg_; }
  int sign() const { return mag_.empty() ? 0 : (neg_ ? -1 : 1); }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    if (!r.mag_.empty()) r.neg_ = !r.neg_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.neg_ == b.neg_) {
      BigInt r;
      r.neg_ = a.neg_;
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.norm();
      return r;
    }
    int c = cmp_mag(a.mag_, b.mag_);
    if (c == 0) return BigInt();
    BigInt r;
    if (c > 0) { r.mag_ = sub_mag(a.mag_, b.mag_); r.neg_ = a.neg_; }
    else       { r.mag_ = sub_mag(b.mag_, a.mag_); r.neg_ = b.neg_; }
    r.norm();
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (size_t i = 0; i < a.mag_.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.mag_.size(); ++j) {
        uint64_t cur = (uint64_t)a.mag_[i] * b.mag_[j] + r.mag_[i + j] + carry;
        r.mag_[i + j] = (uint32_t)cur;
        carry = cur >> 32;
      }
      size_t k = i + b.mag_.size();
      while (carry) {
        uint64_t cur = r.mag_[k] + carry;
        r.mag_[k] = (uint32_t)cur;
        carry = cur >> 32;
        ++k;
      }
    }
    r.neg_ = a.neg_ != b.neg_;
    r.norm();
    return r;
  }

  BigInt& operator+=(const BigInt& b) { *this = *this + b; return *this; }
  BigInt& operator-=(const BigInt& b) { *this = *this - b; return *this; }
  BigInt& operator*=(const BigInt& b) { *this = *this * b; return *this; }

  // Truncated division (quotient toward zero) with remainder.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    q = BigInt(); r = BigInt();
    if (cmp_mag(a.mag_, b.mag_) < 0) { r = a; return; }
    // bit-at-a-time long division on magnitudes
    std::vector<uint32_t> rem;
    std::vector<uint32_t> quo(a.mag_.size(), 0);
    for (int i = (int)a.mag_.size() * 32 - 1; i >= 0; --i) {
      shl1(rem);
      if ((a.mag_[i / 32] >> (i % 32)) & 1u) {
        if (rem.empty()) rem.push_back(1); else rem[0] |= 1u;
      }
      if (cmp_mag(rem, b.mag_) >= 0) {
        rem = sub_mag(rem, b.mag_);
        quo[i / 32] |= (1u << (i % 32));
      }
    }
    q.mag_ = quo; q.norm();
    r.mag_ = rem; r.norm();
    q.neg_ = !q.is_zero() && (a.neg_ != b.neg_);
    r.neg_ = !r.is_zero() && a.neg_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.neg_ == b.neg_ && a.mag_ == b.mag_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.neg_ != b.neg_) return a.neg_;
    int c = cmp_mag(a.mag_, b.mag_);
    return a.neg_ ? c > 0 : c < 0;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.neg_ = false; b.neg_ = false;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = b;
      b = r;
      a.neg_ = false; b.neg_ = false;
    }
    return a;
  }

  BigInt abs() const { BigInt r = *this; r.neg_ = false; return r; }

  bool fits_ll() const { return mag_.size() <= 2 && !(mag_.size() == 2 && mag_[1] >= 0x80000000u); }
  long long to_ll() const {
    unsigned long long m = 0;
    for (size_t i = mag_.size(); i-- > 0;) m = (m << 32) | mag_[i];
    return neg_ ? -(long long)m : (long long)m;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> m = mag_;
    std::string digits;
    while (!m.empty()) {
      uint64_t rem = 0;
      for (size_t i = m.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | m[i];
        m[i] = (uint32_t)(cur / 10);
        rem = cur % 10;
      }
      digits.push_back((char)('0' + rem));
      while (!m.empty() && m.back() == 0) m.pop_back();
    }
    if (neg_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
  }

 private:
  void norm() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) neg_ = false;
  }
  static void shl1(std::vector<uint32_t>& m) {
    uint32_t carry = 0;
    for (auto& w : m) {
      uint32_t nc = w >> 31;
      w = (w << 1) | carry;
      carry = nc;
    }
    if (carry) m.push_back(carry);
  }
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      uint64_t cur = carry;
      if (i < a.size()) cur += a[i];
      if (i < b.size()) cur += b[i];
      r[i] = (uint32_t)cur;
      carry = cur >> 32;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }
  // requires a >= b
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r = a;
    int64_t borrow = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      int64_t cur = (int64_t)r[i] - borrow - (i < b.size() ? b[i] : 0);
      if (cur < 0) { cur += ((int64_t)1 << 32); borrow = 1; } else borrow = 0;
      r[i] = (uint32_t)cur;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  bool neg_ = false;
  std::vector<uint32_t> mag_;  // little-endian limbs
};

// Exact rational with normalized representation (den > 0, gcd 1).
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { norm(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& b) { *this = *this + b; return *this; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  std::string to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

 private:
  void norm() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_zero() && g != BigInt(1)) { num_ = num_ / g; den_ = den_ / g; }
    if (num_.is_zero()) den_ = BigInt(1);
  }
  BigInt num_, den_;
};

}  // namespace lk
