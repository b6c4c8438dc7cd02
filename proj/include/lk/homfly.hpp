#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lk/bigint.hpp"
#include "lk/morse.hpp"
#include "lk/rulings.hpp"

namespace lk {

// HOMFLY values live in Z[a^{+-1}, d^{+-1}] where d = q^{1/2} - q^{-1/2}.
// Normalization: unknot -> (a - a^{-1})/d; skein relation
//   a P(negated letter) - a^{-1} P(word) = d P(letter deleted)
// for a positive letter of the word.
class LaurentAQ {
 public:
  std::map<std::pair<int, int>, BigInt> terms;  // (a exponent, d exponent) -> coeff

  void add_term(int ae, int de, const BigInt& c) {
    if (c.is_zero()) return;
    auto& v = terms[{ae, de}];
    v += c;
    if (v.is_zero()) terms.erase({ae, de});
  }
  friend LaurentAQ operator+(const LaurentAQ& x, const LaurentAQ& y) {
    LaurentAQ r = x;
    for (auto& [k, c] : y.terms) r.add_term(k.first, k.second, c);
    return r;
  }
  friend LaurentAQ operator-(const LaurentAQ& x, const LaurentAQ& y) {
    LaurentAQ r = x;
    for (auto& [k, c] : y.terms) r.add_term(k.first, k.second, -c);
    return r;
  }
  friend LaurentAQ operator*(const LaurentAQ& x, const LaurentAQ& y) {
    LaurentAQ r;
    for (auto& [kx, cx] : x.terms)
      for (auto& [ky, cy] : y.terms)
        r.add_term(kx.first + ky.first, kx.second + ky.second, cx * cy);
    return r;
  }
  static LaurentAQ mono(int ae, int de, long long c = 1) {
    LaurentAQ r;
    r.add_term(ae, de, BigInt(c));
    return r;
  }
  static LaurentAQ unknot() {  // (a - a^{-1}) / d
    LaurentAQ r;
    r.add_term(1, -1, BigInt(1));
    r.add_term(-1, -1, BigInt(-1));
    return r;
  }
  bool operator==(const LaurentAQ& o) const { return terms == o.terms; }
  bool is_zero() const { return terms.empty(); }
  std::string to_string() const;
};

// Laurent polynomial in q over a (q-1)-power denominator, the value ring of
// the lowest a-coefficient and of ruling sums.
class QRat {
 public:
  std::map<int, BigInt> num;  // q exponent -> coeff
  int denpow = 0;             // divide by (q-1)^denpow

  void normalize();
  friend QRat operator+(const QRat& x, const QRat& y);
  friend QRat operator-(const QRat& x, const QRat& y);
  friend QRat operator*(const QRat& x, const QRat& y);
  bool operator==(const QRat& o) const;
  Rational eval_q(long long q) const;
  std::string to_string() const;
  bool is_zero() const { return num.empty(); }
  static QRat from_q_power(int e, long long c = 1) {
    QRat r;
    if (c) r.num[e] = BigInt(c);
    return r;
  }
};

enum class SignConvention { Intro, Theorem };  // (-aq^{-1/2})^{n-w} vs (aq^{-1/2})^{n-w}

// HOMFLY polynomial of the braid closure, computed in the Hecke algebra with
// the Ocneanu trace.
LaurentAQ homfly(const BraidWord& b);

// Independent cross-check: skein resolution toward descending diagrams on
// the closed diagram itself.
LaurentAQ homfly_skein(const BraidWord& b);

// [(+-aq^{-1/2})^{n-w} P]|_{a=0}: the coefficient of a^{w-n} times
// q^{(w-n)/2}, with the empirically validated Intro sign as the default.
QRat lowest_a_coefficient(const LaurentAQ& P, int n, int w,
                          SignConvention conv = SignConvention::Intro);

// q^{(w-n)/2} sum_R d^{s(R)-n} over the given rulings.
QRat rutherford_sum(const std::vector<Ruling>& rulings, int w, int n);

// number of components of the braid closure
int closure_components(const BraidWord& b);

}  // namespace lk
